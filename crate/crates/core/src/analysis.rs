//! Statistical metrics used to judge a ciphertext: Shannon entropy,
//! adjacent-pixel correlation, histogram chi-square and GLCM texture
//! features.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Neighbor offset used when pairing pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `(i, j)` with `(i, j+1)`
    Horizontal,
    /// `(i, j)` with `(i+1, j)`
    Vertical,
    /// `(i, j)` with `(i+1, j+1)`
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        }
    }
}

/// Every in-bounds `(pixel, neighbor)` pair for one direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPairSample {
    pub direction: Direction,
    pub pairs: Vec<(u8, u8)>,
}

pub fn adjacent_pairs(img: &GrayImage, direction: Direction) -> PixelPairSample {
    let (dr, dc) = direction.offset();
    let mut pairs = Vec::new();
    if img.rows() > dr && img.cols() > dc {
        pairs.reserve((img.rows() - dr) * (img.cols() - dc));
        for r in 0..img.rows() - dr {
            for c in 0..img.cols() - dc {
                pairs.push((img.get(r, c), img.get(r + dr, c + dc)));
            }
        }
    }
    PixelPairSample { direction, pairs }
}

/// A correlation coefficient. `degenerate` marks a zero-variance marginal,
/// in which case `value` is 0 by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: f64,
    pub degenerate: bool,
}

impl Correlation {
    fn degenerate() -> Self {
        Correlation {
            value: 0.0,
            degenerate: true,
        }
    }
}

pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    counts
}

/// Shannon entropy of the gray-level histogram, in bits per pixel.
pub fn entropy(img: &GrayImage) -> Result<f64> {
    if img.is_empty() {
        return Err(Error::dimension("entropy of an empty image"));
    }
    let total = img.len() as f64;
    let h = histogram(img)
        .iter()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let p = n as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    // a single symbol sums to -0.0
    Ok(h.max(0.0))
}

/// Pearson correlation over all adjacent pairs in `direction`.
pub fn adjacent_correlation(img: &GrayImage, direction: Direction) -> Result<Correlation> {
    let sample = adjacent_pairs(img, direction);
    if sample.pairs.len() < 2 {
        return Err(Error::dimension(format!(
            "{}x{} image has fewer than 2 {} pairs",
            img.rows(),
            img.cols(),
            direction.name()
        )));
    }
    Ok(pearson(&sample.pairs))
}

fn pearson(pairs: &[(u8, u8)]) -> Correlation {
    let n = pairs.len() as f64;
    let (sx, sy) = pairs
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x as f64, sy + y as f64));
    let (mx, my) = (sx / n, sy / n);
    let (mut cov, mut vx, mut vy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let dx = x as f64 - mx;
        let dy = y as f64 - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return Correlation::degenerate();
    }
    Correlation {
        value: cov / (vx.sqrt() * vy.sqrt()),
        degenerate: false,
    }
}

/// `Σ (n_v − E)² / E` with `E = pixels / 256`.
pub fn histogram_chi_square(img: &GrayImage) -> Result<f64> {
    if img.is_empty() {
        return Err(Error::dimension("chi-square of an empty image"));
    }
    let expected = img.len() as f64 / 256.0;
    Ok(histogram(img)
        .iter()
        .map(|&n| {
            let d = n as f64 - expected;
            d * d / expected
        })
        .sum())
}

/// Normalized symmetric co-occurrence matrix at offset (0, 1), 256 levels.
#[derive(Clone)]
pub struct Glcm {
    probs: Vec<f64>,
}

impl fmt::Debug for Glcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Glcm").field("levels", &256).finish()
    }
}

impl Glcm {
    pub fn from_image(img: &GrayImage) -> Result<Self> {
        let sample = adjacent_pairs(img, Direction::Horizontal);
        if sample.pairs.is_empty() {
            return Err(Error::dimension(format!(
                "{}x{} image has no horizontal neighbors",
                img.rows(),
                img.cols()
            )));
        }
        let mut counts = vec![0u64; 256 * 256];
        for &(a, b) in &sample.pairs {
            counts[a as usize * 256 + b as usize] += 1;
            counts[b as usize * 256 + a as usize] += 1;
        }
        let total = 2.0 * sample.pairs.len() as f64;
        Ok(Glcm {
            probs: counts.into_iter().map(|c| c as f64 / total).collect(),
        })
    }

    #[inline]
    pub fn prob(&self, i: u8, j: u8) -> f64 {
        self.probs[i as usize * 256 + j as usize]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| ((k / 256) as f64, (k % 256) as f64, p))
    }

    pub fn features(&self) -> GlcmFeatures {
        let (mut contrast, mut energy, mut homogeneity, mut mean) = (0.0, 0.0, 0.0, 0.0);
        for (i, j, p) in self.cells() {
            let d = i - j;
            contrast += d * d * p;
            energy += p * p;
            homogeneity += p / (1.0 + d.abs());
            mean += i * p;
        }
        // the matrix is symmetric, so both marginals share mean and variance
        let (mut var, mut cov) = (0.0, 0.0);
        for (i, j, p) in self.cells() {
            var += (i - mean) * (i - mean) * p;
            cov += (i - mean) * (j - mean) * p;
        }
        let correlation = if var == 0.0 {
            Correlation::degenerate()
        } else {
            Correlation {
                value: cov / var,
                degenerate: false,
            }
        };
        GlcmFeatures {
            contrast,
            energy,
            homogeneity,
            correlation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlcmFeatures {
    pub contrast: f64,
    pub energy: f64,
    pub homogeneity: f64,
    pub correlation: Correlation,
}

pub fn glcm(img: &GrayImage) -> Result<GlcmFeatures> {
    Ok(Glcm::from_image(img)?.features())
}

/// All metrics for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub rows: usize,
    pub cols: usize,
    pub entropy: f64,
    pub corr_h: Correlation,
    pub corr_v: Correlation,
    pub corr_d: Correlation,
    pub glcm: GlcmFeatures,
    pub chi_square: f64,
    pub histogram: [u64; 256],
}

pub fn analyze(img: &GrayImage) -> Result<AnalysisReport> {
    Ok(AnalysisReport {
        rows: img.rows(),
        cols: img.cols(),
        entropy: entropy(img)?,
        corr_h: adjacent_correlation(img, Direction::Horizontal)?,
        corr_v: adjacent_correlation(img, Direction::Vertical)?,
        corr_d: adjacent_correlation(img, Direction::Diagonal)?,
        glcm: glcm(img)?,
        chi_square: histogram_chi_square(img)?,
        histogram: histogram(img),
    })
}

impl AnalysisReport {
    /// `(name, value)` rows shared by both output formats.
    pub fn metrics(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("entropy", self.entropy),
            ("corr_horizontal", self.corr_h.value),
            ("corr_vertical", self.corr_v.value),
            ("corr_diagonal", self.corr_d.value),
            ("glcm_contrast", self.glcm.contrast),
            ("glcm_energy", self.glcm.energy),
            ("glcm_homogeneity", self.glcm.homogeneity),
            ("glcm_correlation", self.glcm.correlation.value),
            ("chi_square", self.chi_square),
        ]
    }

    /// Names of the correlation metrics that hit a zero-variance marginal.
    pub fn zero_variance(&self) -> Vec<&'static str> {
        [
            ("corr_horizontal", self.corr_h),
            ("corr_vertical", self.corr_v),
            ("corr_diagonal", self.corr_d),
            ("glcm_correlation", self.glcm.correlation),
        ]
        .into_iter()
        .filter(|(_, c)| c.degenerate)
        .map(|(name, _)| name)
        .collect()
    }

    fn zero_variance_field(&self) -> String {
        let flagged = self.zero_variance();
        if flagged.is_empty() {
            "none".to_string()
        } else {
            flagged.join(";")
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        for (name, value) in self.metrics() {
            let _ = writeln!(out, "{name},{value}");
        }
        let _ = writeln!(out, "zero_variance,{}", self.zero_variance_field());
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[image]");
        let _ = writeln!(out, "rows = {}", self.rows);
        let _ = writeln!(out, "cols = {}", self.cols);
        let _ = writeln!(out, "pixels = {}", self.rows * self.cols);
        let _ = writeln!(out, "\n[metrics]");
        for (name, value) in self.metrics() {
            let _ = writeln!(out, "{name} = {value}");
        }
        let _ = writeln!(out, "zero_variance = {}", self.zero_variance_field());
        let _ = writeln!(out, "\n[histogram]");
        let counts: Vec<String> = self.histogram.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "counts = {}", counts.join(" "));
        out
    }
}
