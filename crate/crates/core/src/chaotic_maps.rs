//! Finite-precision iterators for the two chaotic maps that feed the key
//! schedule: the 2D Logistic-Sine Hénon map (LSHM) and the combined
//! logistic-tent (CLT) map.
//!
//! Every value is produced with binary64 arithmetic in a fixed operation
//! order. Cosines are correctly rounded ([`trig::cos`]) and non-integer
//! powers come from the pure-Rust `libm`, so a given parameter set yields
//! the same bits on every platform.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::trig;

/// Iterations discarded before any value is emitted.
pub const TRANSIENT: usize = 1000;

/// Integer exponents up to this bound are evaluated by repeated multiplication.
const MAX_INTEGER_EXPONENT: f64 = 64.0;

/// Checks `lo <(=) value <(=) hi` and reports the offending parameter by name.
pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    lo_inclusive: bool,
    hi_inclusive: bool,
) -> Result<()> {
    let reason = match (lo_inclusive, hi_inclusive) {
        (true, true) => "outside closed interval",
        (true, false) => "outside half-open interval",
        (false, true) => "outside half-open interval",
        (false, false) => "outside open interval",
    };
    let above = if lo_inclusive { value >= lo } else { value > lo };
    let below = if hi_inclusive { value <= hi } else { value < hi };
    if value.is_finite() && above && below {
        Ok(())
    } else {
        Err(Error::ParameterDomain { name, value, reason })
    }
}

fn ln_abs(v: f64) -> f64 {
    v.abs().max(f64::MIN_POSITIVE).ln()
}

/// Mathematical modulus onto `[0, 1)`.
///
/// `rem_euclid` can round a tiny negative remainder up to exactly 1.0; that
/// case wraps to 0.
#[inline]
pub fn wrap_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r < 1.0 {
        r
    } else {
        0.0
    }
}

/// `c^beta`, extended to negative `c` and non-integer `beta` as
/// `sign(c) * |c|^beta`.
///
/// Integer exponents are evaluated as a left-to-right product so the result
/// does not depend on the platform `pow`.
#[inline]
pub fn signed_pow(c: f64, beta: f64) -> f64 {
    if beta.fract() == 0.0 && beta <= MAX_INTEGER_EXPONENT {
        let mut acc = c;
        for _ in 1..beta as u32 {
            acc *= c;
        }
        acc
    } else {
        c.signum() * libm::pow(c.abs(), beta)
    }
}

/// Control parameters and seeds of the LSHM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LshmParams {
    k1: f64,
    k2: f64,
    alpha: f64,
    beta: f64,
    x0: f64,
    y0: f64,
}

impl LshmParams {
    pub const K1_RANGE: (f64, f64) = (0.0, 10.0);
    pub const K2_RANGE: (f64, f64) = (0.0, 10.0);
    pub const ALPHA_RANGE: (f64, f64) = (0.0, 10.0);
    pub const BETA_RANGE: (f64, f64) = (1.0, 10.0);
    pub const Y0_RANGE: (f64, f64) = (-10.0, 10.0);

    /// Validated constructor.
    ///
    /// Domains: `k1, k2 ∈ (0, 10]`, `alpha ∈ [0, 10]`, `beta ∈ [1, 10]`,
    /// `x0 ∈ [0, 1)`, `y0 ∈ [-10, 10]`.
    pub fn new(k1: f64, k2: f64, alpha: f64, beta: f64, x0: f64, y0: f64) -> Result<Self> {
        check_range("lshm.k1", k1, Self::K1_RANGE.0, Self::K1_RANGE.1, false, true)?;
        check_range("lshm.k2", k2, Self::K2_RANGE.0, Self::K2_RANGE.1, false, true)?;
        check_range(
            "lshm.alpha",
            alpha,
            Self::ALPHA_RANGE.0,
            Self::ALPHA_RANGE.1,
            true,
            true,
        )?;
        check_range("lshm.beta", beta, Self::BETA_RANGE.0, Self::BETA_RANGE.1, true, true)?;
        check_range("lshm.x0", x0, 0.0, 1.0, true, false)?;
        check_range("lshm.y0", y0, Self::Y0_RANGE.0, Self::Y0_RANGE.1, true, true)?;
        Ok(LshmParams {
            k1,
            k2,
            alpha,
            beta,
            x0,
            y0,
        })
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }
    pub fn k2(&self) -> f64 {
        self.k2
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn y0(&self) -> f64 {
        self.y0
    }

    /// Lyapunov exponent of the `x` map, averaged over `n` post-transient
    /// steps. Negative values mean the orbit has settled on a cycle.
    pub fn lyapunov_exponent(&self, n: usize) -> f64 {
        let sum: f64 = self
            .orbit()
            .skip(TRANSIENT)
            .take(n)
            .map(|(x, _)| {
                let c = trig::cos(PI * x).abs();
                let slope = self.k1 * self.alpha * self.beta * libm::pow(c, self.beta - 1.0) * PI * (PI * x).sin();
                ln_abs(slope)
            })
            .sum();
        sum / n as f64
    }

    /// Raw orbit starting at `(x0, y0)`, without transient discard.
    pub fn orbit(&self) -> LshmOrbit {
        LshmOrbit {
            params: *self,
            x: self.x0,
            y: self.y0,
        }
    }

    /// One LSHM step from `(x, y)`.
    ///
    /// `x' = k1·(1 + α·cos(π·x)^β) mod 1`, `y' = k2·(cos(y)·(1 − x))`.
    #[inline]
    pub fn step(&self, x: f64, y: f64) -> (f64, f64) {
        let c = trig::cos(PI * x);
        let nx = wrap_unit(self.k1 * (1.0 + self.alpha * signed_pow(c, self.beta)));
        let ny = self.k2 * (trig::cos(y) * (1.0 - x));
        (nx, ny)
    }
}

/// Iterator over successive LSHM states `(x_{n+1}, y_{n+1})`.
#[derive(Debug, Clone)]
pub struct LshmOrbit {
    params: LshmParams,
    x: f64,
    y: f64,
}

impl Iterator for LshmOrbit {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let (x, y) = self.params.step(self.x, self.y);
        self.x = x;
        self.y = y;
        Some((x, y))
    }
}

/// Control parameters and seed of the CLT map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltParams {
    lambda: f64,
    alpha: f64,
    z0: f64,
}

impl CltParams {
    pub const LAMBDA_RANGE: (f64, f64) = (3.5, 4.0);
    pub const ALPHA_RANGE: (f64, f64) = (2.0, 4.0);

    /// Validated constructor: `lambda ∈ (3.5, 4)`, `alpha ∈ (2, 4)`, `z0 ∈ (0, 1)`.
    pub fn new(lambda: f64, alpha: f64, z0: f64) -> Result<Self> {
        check_range(
            "clt.lambda",
            lambda,
            Self::LAMBDA_RANGE.0,
            Self::LAMBDA_RANGE.1,
            false,
            false,
        )?;
        check_range(
            "clt.alpha",
            alpha,
            Self::ALPHA_RANGE.0,
            Self::ALPHA_RANGE.1,
            false,
            false,
        )?;
        check_range("clt.z0", z0, 0.0, 1.0, false, false)?;
        Ok(CltParams { lambda, alpha, z0 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// Same control parameters, different seed.
    pub fn with_seed(&self, z0: f64) -> Result<Self> {
        CltParams::new(self.lambda, self.alpha, z0)
    }

    /// Lyapunov exponent averaged over `n` post-transient steps.
    pub fn lyapunov_exponent(&self, n: usize) -> f64 {
        let sum: f64 = self
            .orbit()
            .skip(TRANSIENT)
            .take(n)
            .map(|z| {
                let tent = if z < 0.5 { self.alpha / 2.0 } else { -self.alpha / 2.0 };
                ln_abs(self.lambda * (1.0 - 2.0 * z) + tent)
            })
            .sum();
        sum / n as f64
    }

    /// Raw orbit starting at `z0`, without transient discard.
    pub fn orbit(&self) -> CltOrbit {
        CltOrbit {
            lambda: self.lambda,
            alpha: self.alpha,
            z: self.z0,
        }
    }
}

/// One CLT step. Unchecked: callers may probe the map outside the key domain.
#[inline]
pub fn clt_step(z: f64, lambda: f64, alpha: f64) -> f64 {
    let logistic = lambda * z * (1.0 - z);
    let tent = if z < 0.5 {
        alpha * z / 2.0
    } else {
        alpha * (1.0 - z) / 2.0
    };
    wrap_unit(logistic + tent)
}

#[derive(Debug, Clone)]
pub struct CltOrbit {
    lambda: f64,
    alpha: f64,
    z: f64,
}

impl Iterator for CltOrbit {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.z = clt_step(self.z, self.lambda, self.alpha);
        Some(self.z)
    }
}

/// A finite run of chaotic values emitted after the transient.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaoticStream(Vec<f64>);

impl ChaoticStream {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Runs the LSHM for `TRANSIENT + n` steps and returns the last `n` x and y values.
pub fn iterate_lshm(params: &LshmParams, n: usize) -> Result<(ChaoticStream, ChaoticStream)> {
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for (x, y) in params.orbit().skip(TRANSIENT).take(n) {
        xs.push(x);
        ys.push(y);
    }
    Ok((ChaoticStream(xs), ChaoticStream(ys)))
}

/// Runs the CLT map for `TRANSIENT + n` steps and returns the last `n` values.
pub fn iterate_clt(params: &CltParams, n: usize) -> Result<ChaoticStream> {
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    Ok(ChaoticStream(params.orbit().skip(TRANSIENT).take(n).collect()))
}
