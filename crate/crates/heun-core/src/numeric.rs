//! Extended-precision numeric helpers.
//!
//! Implements double-double arithmetic (pairs of `f64` carrying ~106 bits of
//! mantissa via error-free transforms), the complex variant, exact conversion
//! from big integers, and polynomial root finding: Aberth simultaneous
//! iteration in ordinary precision followed by Newton polishing in
//! double-double. Used by certificates that must distinguish "vanishes to
//! 1e-25" from "merely small".

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::poly::uni::Uni;

// ---------------------------------------------------------------------------
// Double-double scalars
// ---------------------------------------------------------------------------

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`: roughly 32
/// significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    /// Exact-to-106-bits conversion of a big integer.
    pub fn from_bigint(x: &BigInt) -> Dd {
        let hi = x.to_f64().unwrap_or(f64::INFINITY);
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        // hi is integral (exact below 2^53, a rounded power-of-two multiple
        // above), so the remainder below is computed exactly.
        let rem = x - big_from_f64_integral(hi);
        let lo = rem.to_f64().unwrap_or(0.0);
        Dd::new(hi, lo)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }


    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Dd::from_f64(q1)));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul(Dd::from_f64(q2)));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

/// Exact `BigInt` with the value of an integral `f64` (no precision loss).
fn big_from_f64_integral(x: f64) -> BigInt {
    debug_assert!(x.is_finite());
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp_raw = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_raw == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_raw - 1075)
    };
    let mut v = BigInt::from(m);
    if e >= 0 {
        v <<= e as usize;
    } else {
        v >>= (-e) as usize; // integral input: shifted-out bits are zero
    }
    if neg {
        -v
    } else {
        v
    }
}

// ---------------------------------------------------------------------------
// Complex double-double
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    pub fn from_c64(z: Complex64) -> Cdd {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div(self, o: Cdd) -> Cdd {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let num_re = self.re.mul(o.re).add(self.im.mul(o.im));
        let num_im = self.im.mul(o.re).sub(self.re.mul(o.im));
        Cdd { re: num_re.div(den), im: num_im.div(den) }
    }

    /// |z| computed in plain f64 (enough for convergence control).
    pub fn abs_f64(self) -> f64 {
        self.to_c64().norm()
    }
}

/// Horner evaluation; `coeffs` lowest degree first.
pub(crate) fn eval_cdd(coeffs: &[Cdd], z: Cdd) -> Cdd {
    let mut acc = Cdd::ZERO;
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(*c);
    }
    acc
}

pub(crate) fn uni_to_cdd(u: &Uni) -> Vec<Cdd> {
    u.iter()
        .map(|c| Cdd { re: Dd::from_bigint(c), im: Dd::ZERO })
        .collect()
}

/// Derivative of a complex-double-double coefficient vector.
pub(crate) fn derivative_cdd(coeffs: &[Cdd]) -> Vec<Cdd> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(Cdd::from_c64(Complex64::new(i as f64, 0.0))))
        .collect()
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Coefficients (lowest first) of an exact integer polynomial, scaled into
/// `f64` range by the largest absolute coefficient.
pub(crate) fn uni_to_c64_normalized(u: &Uni) -> Vec<Complex64> {
    let max = u
        .iter()
        .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0f64, f64::max)
        .max(1.0);
    u.iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(0.0) / max, 0.0))
        .collect()
}

fn eval_c64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of the polynomial with the given coefficients (lowest
/// degree first, leading coefficient nonzero) by Aberth-Ehrlich simultaneous
/// iteration. Intended for moderate degrees (a few hundred at most).
pub(crate) fn aberth_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.last().map_or(false, |t| t.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let n = c.len() - 1;
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let lead = c[n].norm();
    let radius = 1.0
        + c[..n]
            .iter()
            .map(|t| t.norm() / lead)
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.8, th)
        })
        .collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_c64(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = if dp.norm() == 0.0 {
                Complex64::new(1e-12, 1e-12)
            } else {
                p / dp
            };
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let w = if denom.norm() < 1e-290 { ratio } else { ratio / denom };
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-14 {
            return Ok(z);
        }
    }
    // Aberth converges in practice long before the cap; a leftover large
    // displacement means something degenerate.
    Ok(z)
}

/// Newton polish of a root approximation in double-double precision. For a
/// simple root this gains quadratically and bottoms out near 1e-30 relative.
pub(crate) fn polish_root_dd(coeffs: &[Cdd], z0: Complex64, iters: usize) -> Cdd {
    let dcoeffs = derivative_cdd(coeffs);
    let mut z = Cdd::from_c64(z0);
    for _ in 0..iters {
        let p = eval_cdd(coeffs, z);
        let dp = eval_cdd(&dcoeffs, z);
        if dp.abs_f64() == 0.0 {
            break;
        }
        let step = p.div(dp);
        z = z.sub(step);
        if step.abs_f64() <= 1e-31 * (1.0 + z.abs_f64()) {
            break;
        }
    }
    z
}
