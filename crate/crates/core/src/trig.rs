//! Correctly rounded cosine.
//!
//! Platform and `libm` cosines are only faithful (errors up to one ulp), and
//! a single ulp fed into a chaotic map changes the orbit completely within
//! a few dozen steps. This cosine reduces its argument against a
//! three-word π/2, sums the Taylor series in double-double arithmetic
//! (about 100 bits) and rounds once, so the result is the binary64 nearest
//! to the true cosine unless that lies within about 2^-100 of a rounding
//! boundary.

/// π/2 split into three binary64 words.
const PIO2: [f64; 3] = [
    std::f64::consts::FRAC_PI_2,
    6.123233995736766e-17,
    -1.4973849048591698e-33,
];

/// Largest `|x|` served by the three-word reduction.
const MAX_ARG: f64 = 1024.0;

#[derive(Clone, Copy, Debug)]
struct Dd(f64, f64);

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd(s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd(p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = two_sum(self.1, o.1);
        let s = quick_two_sum(s.0, s.1 + t.0);
        quick_two_sum(s.0, s.1 + t.1)
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.0, o.0);
        quick_two_sum(p.0, p.1 + (self.0 * o.1 + self.1 * o.0))
    }

    #[inline]
    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let p = two_prod(q, d);
        let r = ((self.0 - p.0) - p.1 + self.1) / d;
        quick_two_sum(q, r)
    }
}

/// Sums `first · Σ (-r²)^k / ((start+1)(start+2)…)` until the terms vanish.
fn series(first: Dd, r2: Dd, start: u32) -> Dd {
    let neg_r2 = r2.neg();
    let mut term = first;
    let mut sum = first;
    let mut n = start;
    loop {
        term = term.mul(neg_r2).div_f64(f64::from((n + 1) * (n + 2)));
        n += 2;
        if term.0.abs() < sum.0.abs() * 1e-36 {
            return sum;
        }
        sum = sum.add(term);
    }
}

/// Cosine rounded to nearest. Arguments beyond ±1024 fall back to
/// [`libm::cos`].
pub fn cos(x: f64) -> f64 {
    if !x.is_finite() || x.abs() > MAX_ARG {
        return libm::cos(x);
    }
    let k = (x / PIO2[0]).round();
    let a = two_prod(k, PIO2[0]);
    let b = two_prod(k, PIO2[1]);
    let r = Dd(x, 0.0).add(a.neg()).add(b.neg()).add(Dd(-k * PIO2[2], 0.0));
    let r2 = r.mul(r);
    let v = match (k as i64).rem_euclid(4) {
        0 => series(Dd(1.0, 0.0), r2, 0),
        1 => series(r, r2, 1).neg(),
        2 => series(Dd(1.0, 0.0), r2, 0).neg(),
        _ => series(r, r2, 1),
    };
    v.0 + v.1
}
