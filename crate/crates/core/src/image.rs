//! The grayscale pixel carrier shared by every stage.

use crate::error::{Error, Result};

/// Upper bound on `rows * cols` accepted by the cipher.
pub const MAX_CIPHER_PIXELS: usize = 1 << 24;

/// An 8-bit grayscale image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(pixels.len()) {
            return Err(Error::dimension(format!(
                "{rows}x{cols} image needs {} pixels, got {}",
                rows.saturating_mul(cols),
                pixels.len()
            )));
        }
        Ok(GrayImage { rows, cols, pixels })
    }

    pub fn filled(rows: usize, cols: usize, value: u8) -> Self {
        GrayImage {
            rows,
            cols,
            pixels: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        GrayImage { rows, cols, pixels }
    }

    /// Height (M).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Width (N).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.cols + col] = value;
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Copy of the `rows x cols` window at `(top, left)`.
    pub fn crop(&self, top: usize, left: usize, rows: usize, cols: usize) -> Result<GrayImage> {
        if top + rows > self.rows || left + cols > self.cols {
            return Err(Error::dimension(format!(
                "crop {rows}x{cols} at ({top},{left}) exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(GrayImage::from_fn(rows, cols, |r, c| self.get(top + r, left + c)))
    }

    /// Zero-extends to `rows x cols`, keeping the original at the top-left.
    pub fn pad_to(&self, rows: usize, cols: usize) -> Result<GrayImage> {
        if rows < self.rows || cols < self.cols {
            return Err(Error::dimension(format!(
                "cannot pad {}x{} down to {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        Ok(GrayImage::from_fn(rows, cols, |r, c| {
            if r < self.rows && c < self.cols {
                self.get(r, c)
            } else {
                0
            }
        }))
    }
}

/// Rejects dimensions the cipher cannot split into even quadrants.
pub fn check_cipher_dims(rows: usize, cols: usize) -> Result<()> {
    if rows < 4 || cols < 4 || !rows.is_multiple_of(4) || !cols.is_multiple_of(4) {
        return Err(Error::dimension(format!(
            "{rows}x{cols} is not supported: both dimensions must be multiples of 4 and at least 4"
        )));
    }
    if rows.saturating_mul(cols) > MAX_CIPHER_PIXELS {
        return Err(Error::dimension(format!(
            "{rows}x{cols} exceeds the {MAX_CIPHER_PIXELS}-pixel limit"
        )));
    }
    Ok(())
}

/// Smallest multiple-of-4 size (at least 4) covering `n`.
pub fn padded_len(n: usize) -> usize {
    n.max(4).div_ceil(4) * 4
}
