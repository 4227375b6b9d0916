//! Exact-arithmetic reference for the chaotic recurrences.
//!
//! Every binary64 operand is an exact dyadic rational `m · 2^e`. Products,
//! sums and remainders are formed exactly with big integers, while π and
//! cosines come from series summed in 320-bit fixed point. In
//! [`Mode::Binary64`] each intermediate result is rounded by hand to the
//! nearest binary64 (ties to even), reproducing the recurrence on an ideal
//! correctly rounded machine. In [`Mode::Real`] intermediates keep their
//! full fixed-point precision.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Float, One, Signed, Zero};

const FIX_BITS: u64 = 320;

/// Exact value `m · 2^e`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn from_f64(v: f64) -> Dyadic {
        let (mant, exp, sign) = v.integer_decode();
        let m = BigInt::from(mant) * i64::from(sign);
        Dyadic { m, e: i64::from(exp) }
    }

    fn int(v: i64) -> Dyadic {
        Dyadic {
            m: BigInt::from(v),
            e: 0,
        }
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.e.min(b.e);
        let am = &a.m << ((a.e - e) as usize);
        let bm = &b.m << ((b.e - e) as usize);
        (am, bm, e)
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::align(self, o);
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::align(self, o);
        Dyadic { m: a - b, e }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    pub fn half(&self) -> Dyadic {
        Dyadic {
            m: self.m.clone(),
            e: self.e - 1,
        }
    }

    /// Exact `self mod 1` in `[0, 1)`.
    pub fn frac(&self) -> Dyadic {
        if self.e >= 0 {
            return Dyadic::int(0);
        }
        let one = BigInt::one() << ((-self.e) as usize);
        let mut r = &self.m % &one;
        if r.is_negative() {
            r += one;
        }
        Dyadic { m: r, e: self.e }
    }

    fn less_than_half(&self) -> bool {
        self.sub(&Dyadic {
            m: BigInt::one(),
            e: -1,
        })
        .m
        .is_negative()
    }

    /// Nearest binary64, ties to even.
    pub fn round(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let neg = self.m.sign() == Sign::Minus;
        let mag = self.m.abs();
        let bits = mag.bits() as i64;
        let shift = bits - 53;
        let (mut q, mut e) = if shift > 0 {
            let q = &mag >> (shift as usize);
            let rem = &mag - (&q << (shift as usize));
            let half = BigInt::one() << ((shift - 1) as usize);
            let q = if rem > half || (rem == half && (&q & BigInt::one()).is_one()) {
                q + 1
            } else {
                q
            };
            (q, self.e + shift)
        } else {
            (mag, self.e)
        };
        if q.bits() > 53 {
            q >>= 1;
            e += 1;
        }
        let q: u64 = q.try_into().expect("53-bit significand");
        let v = q as f64 * 2f64.powi(e as i32);
        if neg {
            -v
        } else {
            v
        }
    }
}

fn to_fixed(d: &Dyadic) -> BigInt {
    let s = d.e + FIX_BITS as i64;
    if s >= 0 {
        &d.m << (s as usize)
    } else {
        &d.m >> ((-s) as usize)
    }
}

/// `cos(t)` to about 300 bits for `|t| < 16`, as a dyadic.
pub fn cos(t: &Dyadic) -> Dyadic {
    let x = to_fixed(t);
    let x2 = (&x * &x) >> FIX_BITS;
    let mut term = BigInt::one() << FIX_BITS;
    let mut sum = term.clone();
    let mut k: u64 = 0;
    loop {
        k += 2;
        term = -((&term * &x2) >> FIX_BITS) / BigInt::from(k * (k - 1));
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    Dyadic {
        m: sum,
        e: -(FIX_BITS as i64),
    }
}

/// How intermediate results are finished.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Round every operation to the nearest binary64.
    Binary64,
    /// Keep about 320 fractional bits, i.e. real arithmetic for any
    /// horizon the tests use.
    Real,
}

impl Mode {
    fn fin(self, d: Dyadic) -> Dyadic {
        match self {
            Mode::Binary64 => Dyadic::from_f64(d.round()),
            Mode::Real => Dyadic {
                m: to_fixed(&d),
                e: -(FIX_BITS as i64),
            },
        }
    }

    fn wrap_unit(self, d: &Dyadic) -> Dyadic {
        match self {
            Mode::Binary64 => {
                let w = d.frac().round();
                Dyadic::from_f64(if w < 1.0 { w } else { 0.0 })
            }
            Mode::Real => d.frac(),
        }
    }
}

/// One LSHM step `(x, y) -> (x', y')` for `p = [k1, k2, alpha, beta]` with
/// integer `beta`.
pub fn lshm_step(mode: Mode, p: [f64; 4], x: &Dyadic, y: &Dyadic) -> (Dyadic, Dyadic) {
    let r = |d| mode.fin(d);
    let [k1, k2, alpha, _] = p.map(Dyadic::from_f64);
    let pi = match mode {
        Mode::Binary64 => Dyadic::from_f64(std::f64::consts::PI),
        Mode::Real => pi(),
    };
    let c = r(cos(&r(pi.mul(x))));
    let n = p[3] as u32;
    assert!(f64::from(n) == p[3], "oracle covers integer exponents only");
    let mut pow = c.clone();
    for _ in 1..n {
        pow = r(pow.mul(&c));
    }
    let inner = r(Dyadic::int(1).add(&r(alpha.mul(&pow))));
    let nx = mode.wrap_unit(&r(k1.mul(&inner)));
    let one_minus_x = r(Dyadic::int(1).sub(x));
    let ny = r(k2.mul(&r(r(cos(y)).mul(&one_minus_x))));
    (nx, ny)
}

/// One CLT step.
pub fn clt_step(mode: Mode, z: &Dyadic, lambda: f64, alpha: f64) -> Dyadic {
    let r = |d| mode.fin(d);
    let lambda = Dyadic::from_f64(lambda);
    let alpha = Dyadic::from_f64(alpha);
    let one_minus_z = r(Dyadic::int(1).sub(z));
    let logistic = r(r(lambda.mul(z)).mul(&one_minus_z));
    let tent = if z.less_than_half() {
        r(alpha.mul(z)).half()
    } else {
        r(alpha.mul(&one_minus_z)).half()
    };
    mode.wrap_unit(&r(logistic.add(&tent)))
}

/// π to the fixed-point precision, by Machin's formula.
pub fn pi() -> Dyadic {
    fn arctan_inv(n: i64) -> BigInt {
        let one = BigInt::one() << (FIX_BITS + 16);
        let n2 = BigInt::from(n * n);
        let mut power = &one / BigInt::from(n);
        let mut sum = power.clone();
        let mut k: i64 = 1;
        while !power.is_zero() {
            power = -(power / &n2);
            sum += &power / BigInt::from(2 * k + 1);
            k += 1;
        }
        sum
    }
    let v = (arctan_inv(5) * 16 - arctan_inv(239) * 4) >> 16usize;
    Dyadic {
        m: v,
        e: -(FIX_BITS as i64),
    }
}

/// States `1..=steps` of the LSHM from `(x0, y0)`, rounded for reporting.
pub fn lshm_orbit(mode: Mode, p: [f64; 4], x0: f64, y0: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut x = Dyadic::from_f64(x0);
    let mut y = Dyadic::from_f64(y0);
    (0..steps)
        .map(|_| {
            let (nx, ny) = lshm_step(mode, p, &x, &y);
            x = nx;
            y = ny;
            (x.round(), y.round())
        })
        .collect()
}

/// States `1..=steps` of the CLT map from `z0`, rounded for reporting.
pub fn clt_orbit(mode: Mode, lambda: f64, alpha: f64, z0: f64, steps: usize) -> Vec<f64> {
    let mut z = Dyadic::from_f64(z0);
    (0..steps)
        .map(|_| {
            z = clt_step(mode, &z, lambda, alpha);
            z.round()
        })
        .collect()
}

/// `round(fl(v · 10^5))` half away from zero, reduced into `0..256`.
pub fn quantize_extraction(v: f64) -> u8 {
    scaled_round(v, 100_000)
        .mod_floor(&BigInt::from(256))
        .try_into()
        .unwrap()
}

/// `round(fl(v · 10^3))` half away from zero, reduced into `0..3`.
pub fn quantize_operation(v: f64) -> u8 {
    scaled_round(v, 1_000).mod_floor(&BigInt::from(3)).try_into().unwrap()
}

fn scaled_round(v: f64, scale: i64) -> BigInt {
    let d = Dyadic::from_f64(Dyadic::from_f64(v).mul(&Dyadic::int(scale)).round());
    if d.e >= 0 {
        return &d.m << (d.e as usize);
    }
    let denom = BigInt::one() << ((-d.e) as usize);
    let twice: BigInt = &d.m * 2 + d.m.signum() * &denom;
    // (2m ± denom) / (2·denom), truncated toward zero
    let (q, _) = twice.div_rem(&(denom * 2));
    q
}
