//! Derivation of every key artifact from a [`KeyMaterial`]: the random
//! extraction arrays, the four extraction keys, the per-pixel operation
//! matrix and the three S-boxes.

use std::fmt::Write as _;

use rand::Rng;

use crate::chaotic_maps::{check_range, iterate_clt, iterate_lshm, CltParams, LshmParams};
use crate::error::{Error, Result};
use crate::image::check_cipher_dims;

/// Version tag written to and required from key files.
pub const KEY_FORMAT_VERSION: u32 = 1;

const KEY_FIELDS: [&str; 13] = [
    "lshm.x0",
    "lshm.y0",
    "lshm.k1",
    "lshm.k2",
    "lshm.alpha",
    "lshm.beta",
    "clt.z0",
    "clt.lambda",
    "clt.alpha",
    "sbox.seed1",
    "sbox.seed2",
    "sbox.seed3",
    "version",
];

const SEED_NAMES: [&str; 3] = ["sbox.seed1", "sbox.seed2", "sbox.seed3"];

/// Steps averaged by the mixing check.
const LYAPUNOV_STEPS: usize = 2000;

/// Smallest LSHM Lyapunov exponent accepted by [`KeyMaterial::is_well_mixed`].
pub const MIN_LSHM_LYAPUNOV: f64 = 1.0;

/// Smallest CLT Lyapunov exponent accepted by [`KeyMaterial::is_well_mixed`].
pub const MIN_CLT_LYAPUNOV: f64 = 0.3;

/// Every secret scalar the cipher derives from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyMaterial {
    lshm: LshmParams,
    clt: CltParams,
    sbox_seeds: [f64; 3],
    version: u32,
}

impl KeyMaterial {
    pub fn new(lshm: LshmParams, clt: CltParams, sbox_seeds: [f64; 3]) -> Result<Self> {
        for (name, &seed) in SEED_NAMES.iter().zip(&sbox_seeds) {
            check_range(name, seed, 0.0, 1.0, false, false)?;
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if sbox_seeds[i] == sbox_seeds[j] {
                    return Err(Error::SeedCollision(sbox_seeds[i]));
                }
            }
        }
        Ok(KeyMaterial {
            lshm,
            clt,
            sbox_seeds,
            version: KEY_FORMAT_VERSION,
        })
    }

    /// The fixed reference key used by the test suite and the `reproduce` command.
    pub fn reference() -> Self {
        KeyMaterial::new(
            LshmParams::new(3.9, 3.6, 2.1, 2.0, 0.3, 0.5).expect("valid reference LSHM"),
            CltParams::new(3.77, 3.1, 0.37).expect("valid reference CLT"),
            [0.123, 0.456, 0.789],
        )
        .expect("valid reference key")
    }

    /// Whether every orbit the key drives is chaotic: the LSHM `x` map and
    /// the CLT map from each of its four seeds must reach the minimum
    /// Lyapunov exponents. The sampling ranges contain periodic windows
    /// where the orbit collapses onto a short cycle; such keys decrypt
    /// correctly but yield highly structured extraction keys or S-boxes.
    pub fn is_well_mixed(&self) -> bool {
        self.lshm.lyapunov_exponent(LYAPUNOV_STEPS) >= MIN_LSHM_LYAPUNOV
            && std::iter::once(self.clt.z0())
                .chain(self.sbox_seeds)
                .all(|z0| match self.clt.with_seed(z0) {
                    Ok(c) => c.lyapunov_exponent(LYAPUNOV_STEPS) >= MIN_CLT_LYAPUNOV,
                    Err(_) => false,
                })
    }

    /// Draws a well-mixed key from the sampling ranges.
    ///
    /// LSHM: `k1, k2 ∈ [3.5, 4)`, `alpha ∈ [2, 4)`, `beta ∈ [1.5, 3.5)`,
    /// `x0 ∈ [0, 1)`, `y0 ∈ [-1, 1)`. CLT and S-box seeds cover their whole
    /// open domains. Draws failing [`KeyMaterial::is_well_mixed`] are
    /// discarded.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let key = KeyMaterial::draw(rng);
            if key.is_well_mixed() {
                return key;
            }
        }
    }

    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // open-interval draws are retried until they land strictly inside
        fn open<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
            loop {
                let v = rng.random_range(lo..hi);
                if v > lo {
                    return v;
                }
            }
        }
        let lshm = LshmParams::new(
            rng.random_range(3.5..4.0),
            rng.random_range(3.5..4.0),
            rng.random_range(2.0..4.0),
            rng.random_range(1.5..3.5),
            rng.random_range(0.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .expect("sampling ranges lie inside the LSHM domain");
        let clt = CltParams::new(open(rng, 3.5, 4.0), open(rng, 2.0, 4.0), open(rng, 0.0, 1.0))
            .expect("sampling ranges lie inside the CLT domain");
        loop {
            let seeds = [open(rng, 0.0, 1.0), open(rng, 0.0, 1.0), open(rng, 0.0, 1.0)];
            if let Ok(key) = KeyMaterial::new(lshm, clt, seeds) {
                return key;
            }
        }
    }

    pub fn lshm(&self) -> &LshmParams {
        &self.lshm
    }

    pub fn clt(&self) -> &CltParams {
        &self.clt
    }

    pub fn sbox_seeds(&self) -> [f64; 3] {
        self.sbox_seeds
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    /// Serializes to the line-oriented `name = value` key file format.
    pub fn to_key_file(&self) -> String {
        let values = self.field_values();
        let mut out = String::new();
        for (name, value) in KEY_FIELDS[..12].iter().zip(values) {
            // `{}` on f64 prints the shortest decimal that parses back exactly
            let _ = writeln!(out, "{name} = {value}");
        }
        let _ = writeln!(out, "version = {}", self.version);
        out
    }

    fn field_values(&self) -> [f64; 12] {
        let l = &self.lshm;
        let c = &self.clt;
        let s = &self.sbox_seeds;
        [
            l.x0(),
            l.y0(),
            l.k1(),
            l.k2(),
            l.alpha(),
            l.beta(),
            c.z0(),
            c.lambda(),
            c.alpha(),
            s[0],
            s[1],
            s[2],
        ]
    }

    /// Parses a key file. Blank lines and `#` comments are skipped; every
    /// field must appear exactly once and unknown names are rejected.
    pub fn from_key_file(text: &str) -> Result<Self> {
        let mut slots: [Option<(f64, usize)>; 13] = [None; 13];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::KeyFile { line: line_no, message };
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `name = value`, got {line:?}")))?;
            let name = name.trim();
            let value = value.trim();
            let slot = KEY_FIELDS
                .iter()
                .position(|&f| f == name)
                .ok_or_else(|| bad(format!("unknown field {name:?}")))?;
            if slots[slot].is_some() {
                return Err(bad(format!("duplicate field {name:?}")));
            }
            let parsed: f64 = value
                .parse()
                .map_err(|_| bad(format!("{name}: {value:?} is not a decimal number")))?;
            if !parsed.is_finite() {
                return Err(bad(format!("{name}: value must be finite")));
            }
            slots[slot] = Some((parsed, line_no));
        }
        let mut v = [0.0f64; 13];
        for (i, slot) in slots.iter().enumerate() {
            match slot {
                Some((value, _)) => v[i] = *value,
                None => {
                    return Err(Error::KeyFile {
                        line: text.lines().count(),
                        message: format!("missing field {:?}", KEY_FIELDS[i]),
                    })
                }
            }
        }
        let (version, version_line) = slots[12].expect("checked above");
        if version != f64::from(KEY_FORMAT_VERSION) {
            return Err(Error::KeyFile {
                line: version_line,
                message: format!("unsupported key format version {version}"),
            });
        }
        let lshm = LshmParams::new(v[2], v[3], v[4], v[5], v[0], v[1])?;
        let clt = CltParams::new(v[7], v[8], v[6])?;
        KeyMaterial::new(lshm, clt, [v[9], v[10], v[11]])
    }
}

/// A permutation of the `L = (M/2 · N/2) · 8` bit positions of one quadrant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionKey(Vec<u32>);

impl ExtractionKey {
    /// Validates that `perm` is a permutation of `0..perm.len()`.
    pub fn from_perm(perm: Vec<u32>) -> Result<Self> {
        if !is_permutation(&perm) {
            return Err(Error::dimension("extraction key is not a permutation"));
        }
        Ok(ExtractionKey(perm))
    }

    pub fn identity(len: usize) -> Self {
        ExtractionKey((0..len as u32).collect())
    }

    pub fn perm(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `inv[perm[i]] = i`.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        ExtractionKey(inv)
    }
}

/// True when `perm` holds each of `0..perm.len()` exactly once.
pub fn is_permutation(perm: &[u32]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        match seen.get_mut(p as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return false,
        }
    }
    true
}

/// Per-pixel operation codes in `{0, 1, 2}`, row-major, each paired with
/// the mask byte XORed onto the substituted value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationMatrix {
    rows: usize,
    cols: usize,
    codes: Vec<u8>,
    masks: Vec<u8>,
}

impl OperationMatrix {
    /// Codes with all-zero masks.
    pub fn new(rows: usize, cols: usize, codes: Vec<u8>) -> Result<Self> {
        let masks = vec![0; codes.len()];
        OperationMatrix::with_masks(rows, cols, codes, masks)
    }

    pub fn with_masks(rows: usize, cols: usize, codes: Vec<u8>, masks: Vec<u8>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(codes.len()) || codes.len() != masks.len() {
            return Err(Error::dimension(format!(
                "operation matrix {rows}x{cols} given {} codes and {} masks",
                codes.len(),
                masks.len()
            )));
        }
        if let Some(&bad) = codes.iter().find(|&&c| c > 2) {
            return Err(Error::InvalidOpCode(bad));
        }
        Ok(OperationMatrix {
            rows,
            cols,
            codes,
            masks,
        })
    }

    pub fn filled(rows: usize, cols: usize, code: u8) -> Result<Self> {
        OperationMatrix::new(rows, cols, vec![code; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn masks(&self) -> &[u8] {
        &self.masks
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.codes[row * self.cols + col]
    }
}

/// A bijective byte substitution table.
#[derive(Clone, PartialEq, Eq)]
pub struct SBox([u8; 256]);

impl std::fmt::Debug for SBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("SBox").field(&&self.0[..8]).finish_non_exhaustive()
    }
}

impl SBox {
    pub fn from_table(table: [u8; 256]) -> Result<Self> {
        let mut seen = [false; 256];
        for &v in &table {
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::dimension(format!("S-box maps two inputs to {v}")));
            }
        }
        Ok(SBox(table))
    }

    pub fn identity() -> Self {
        SBox(std::array::from_fn(|i| i as u8))
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(&self) -> SBox {
        let mut inv = [0u8; 256];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        SBox(inv)
    }
}

/// `round(v · 10^5) mod 256`, rounding half away from zero.
#[inline]
pub fn quantize_extraction(v: f64) -> u8 {
    ((v * 1e5).round() as i64).rem_euclid(256) as u8
}

/// `round(z · 10^3) mod 3`, rounding half away from zero.
#[inline]
pub fn quantize_operation(z: f64) -> u8 {
    ((z * 1e3).round() as i64).rem_euclid(3) as u8
}

/// Stable ascending argsort: ties keep their original order.
pub fn argsort<T: Copy, F: Fn(&T, &T) -> std::cmp::Ordering>(values: &[T], cmp: F) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..values.len() as u32).collect();
    idx.sort_by(|&a, &b| cmp(&values[a as usize], &values[b as usize]));
    idx
}

/// Quantized x- and y-streams of the LSHM, each `(M/2 · N/2) · 8` long.
pub fn build_extraction_arrays(key: &KeyMaterial, rows: usize, cols: usize) -> Result<(Vec<u8>, Vec<u8>)> {
    check_cipher_dims(rows, cols)?;
    let len = (rows / 2) * (cols / 2) * 8;
    let (xs, ys) = iterate_lshm(&key.lshm, len)?;
    let rea1 = xs.values().iter().map(|&v| quantize_extraction(v)).collect();
    let rea2 = ys.values().iter().map(|&v| quantize_extraction(v)).collect();
    Ok((rea1, rea2))
}

/// Sorted-index keys from two extraction arrays, plus their inverses.
///
/// Returns `[key1, key2, key3, key4]` with `key3 = key1⁻¹` and `key4 = key2⁻¹`.
pub fn build_extraction_keys(rea1: &[u8], rea2: &[u8]) -> Result<[ExtractionKey; 4]> {
    if rea1.len() != rea2.len() {
        return Err(Error::dimension(format!(
            "extraction arrays differ in length: {} vs {}",
            rea1.len(),
            rea2.len()
        )));
    }
    let key1 = ExtractionKey(argsort(rea1, |a, b| a.cmp(b)));
    let key2 = ExtractionKey(argsort(rea2, |a, b| a.cmp(b)));
    let key3 = key1.inverse();
    let key4 = key2.inverse();
    Ok([key1, key2, key3, key4])
}

/// Operation codes and mask bytes from one CLT run of `2·M·N` values.
///
/// The first `M·N` values give the codes (`round(z·10³) mod 3`), the next
/// `M·N` the masks (`round(z·10⁵) mod 256`); both are laid out row-major.
pub fn build_operation_matrix(key: &KeyMaterial, rows: usize, cols: usize) -> Result<OperationMatrix> {
    check_cipher_dims(rows, cols)?;
    let pixels = rows * cols;
    let zs = iterate_clt(&key.clt, 2 * pixels)?;
    let (code_src, mask_src) = zs.values().split_at(pixels);
    let codes = code_src.iter().map(|&z| quantize_operation(z)).collect();
    let masks = mask_src.iter().map(|&z| quantize_extraction(z)).collect();
    OperationMatrix::with_masks(rows, cols, codes, masks)
}

/// S-box from the stable argsort of 256 values.
pub fn sbox_from_stream(values: &[f64]) -> Result<SBox> {
    if values.len() != 256 {
        return Err(Error::dimension(format!(
            "S-box stream needs 256 values, got {}",
            values.len()
        )));
    }
    let order = argsort(values, |a, b| a.total_cmp(b));
    SBox::from_table(std::array::from_fn(|i| order[i] as u8))
}

/// Three S-boxes, one per seed, each the argsort of 256 CLT values.
pub fn build_sboxes(key: &KeyMaterial) -> Result<[SBox; 3]> {
    let mut boxes = Vec::with_capacity(3);
    for &seed in &key.sbox_seeds {
        let params = key.clt.with_seed(seed)?;
        boxes.push(sbox_from_stream(iterate_clt(&params, 256)?.values())?);
    }
    Ok(boxes.try_into().expect("three seeds"))
}
