//! Exact real-root counting.
//!
//! Two flavours are provided, both built on dyadic rationals (integers scaled
//! by a power of two, so every `f64` input is representable exactly):
//!
//! * eigenvalue counts for symmetric tridiagonal matrices through the sign
//!   variations of the leading-principal-minor sequence — division-free, so
//!   the whole computation stays in dyadic arithmetic and yields certified
//!   brackets and gap lower bounds even when adjacent eigenvalues are closer
//!   than one `f64` ulp;
//! * classical sign-variation chains for integer univariate polynomials,
//!   used to count distinct real roots on a half-line exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::uni::{self, Uni};

// ---------------------------------------------------------------------------
// Dyadic rationals
// ---------------------------------------------------------------------------

/// An exact dyadic rational `num / 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic { num: num.into(), exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        // strip shared powers of two
        while self.exp > 0 && (&self.num & BigInt::one()).is_zero() {
            self.num >>= 1;
            self.exp -= 1;
        }
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { num: n.into(), exp: 0 }
    }

    /// Exact conversion: every finite `f64` is a dyadic rational.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite value {x} is not dyadic")));
        }
        if x == 0.0 {
            return Ok(Self::zero());
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let exp_raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, e2) = if exp_raw == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), exp_raw - 1075)
        };
        let mut num = BigInt::from(mantissa);
        if neg {
            num = -num;
        }
        let d = if e2 >= 0 {
            Dyadic { num: num << (e2 as usize), exp: 0 }
        } else {
            Dyadic::new(num, (-e2) as u32)
        };
        Ok(d)
    }

    /// Nearest-ish `f64`; saturates on over-/underflow. Accuracy is around
    /// one ulp, which is all callers need (reporting, not certification).
    /// Exposes the exact representation `num / 2^exp`.
    pub fn parts(&self) -> (&BigInt, u32) {
        (&self.num, self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let bits = self.num.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&self.num >> (shift as usize)).to_f64().unwrap_or(f64::NAN);
        let pow = (shift - self.exp as i64).clamp(-4000, 4000);
        mul_pow2(top, pow)
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        if self.num.is_zero() {
            0
        } else if self.num.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { num: -self.num.clone(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << ((exp - self.exp) as usize);
        let b = &other.num << ((exp - other.exp) as usize);
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Dyadic {
        Dyadic::new(&self.num * k.into(), self.exp)
    }

    /// Exact halving.
    #[cfg(test)]
    pub fn half(&self) -> Dyadic {
        Dyadic::new(self.num.clone(), self.exp + 1)
    }

    /// Exact midpoint of two dyadics.
    #[cfg(test)]
    pub fn mid(a: &Dyadic, b: &Dyadic) -> Dyadic {
        a.add(b).half()
    }

    /// The square, exactly.
    pub fn square(&self) -> Dyadic {
        self.mul(self)
    }
}

/// `x * 2^e` without the intermediate overflow `powi` would hit for large
/// |e|; walks in safe chunks so gradual underflow to subnormals works.
fn mul_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 900 {
        x *= 2f64.powi(900);
        e -= 900;
    }
    while e < -900 {
        x *= 2f64.powi(-900);
        e += 900;
    }
    x * 2f64.powi(e as i32)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num << ((exp - self.exp) as usize);
        let b = &other.num << ((exp - other.exp) as usize);
        a.cmp(&b)
    }
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal eigenvalue counts
// ---------------------------------------------------------------------------

/// Number of eigenvalues of the symmetric tridiagonal matrix with diagonal
/// `d` and squared off-diagonal `e2` that are strictly below `x`, computed
/// from the sign variations of the leading principal minors of `T - xI`.
///
/// Returns `None` when some principal minor vanishes exactly at `x` (then `x`
/// is an eigenvalue of a leading submatrix); callers retry at a perturbed
/// point. Entirely exact: no divisions occur.
pub(crate) fn count_below(d: &[Dyadic], e2: &[Dyadic], x: &Dyadic) -> Option<usize> {
    let n = d.len();
    debug_assert_eq!(e2.len(), n.saturating_sub(1));
    let mut p_prev = Dyadic::one();
    let mut sign_prev = 1i32;
    let mut changes = 0usize;
    let mut p_cur = d[0].sub(x);
    for i in 1..=n {
        let s = p_cur.signum();
        if s == 0 {
            return None;
        }
        if s != sign_prev {
            changes += 1;
        }
        sign_prev = s;
        if i == n {
            break;
        }
        let next = d[i].sub(x).mul(&p_cur).sub(&e2[i - 1].mul(&p_prev));
        p_prev = p_cur;
        p_cur = next;
    }
    Some(changes)
}

/// Like [`count_below`] but retries at slightly shifted interior points of
/// `(lo, hi)` when the count is undefined at the midpoint. Returns the
/// queried point together with its count.
fn count_near_mid(
    d: &[Dyadic],
    e2: &[Dyadic],
    lo: &Dyadic,
    hi: &Dyadic,
) -> Option<(Dyadic, usize)> {
    // offsets k/16 of the width, starting at the midpoint
    for k in [8i64, 7, 9, 5, 11, 3, 13, 1, 15] {
        let x = lo
            .mul_int(16 - k)
            .add(&hi.mul_int(k))
            .mul(&Dyadic::new(BigInt::one(), 4));
        if let Some(c) = count_below(d, e2, &x) {
            return Some((x, c));
        }
    }
    None
}

/// A certified bracket `lo <= eigenvalue_j < hi` (eigenvalues 0-indexed,
/// ascending): `count_below(lo) <= j` and `count_below(hi) >= j + 1`.
#[derive(Debug, Clone)]
struct Bracket {
    lo: Dyadic,
    hi: Dyadic,
    j: usize,
}

impl Bracket {
    /// One bisection step; `false` when no valid query point was found.
    fn tighten(&mut self, d: &[Dyadic], e2: &[Dyadic]) -> bool {
        match count_near_mid(d, e2, &self.lo, &self.hi) {
            Some((x, c)) => {
                if c <= self.j {
                    self.lo = x;
                } else {
                    self.hi = x;
                }
                true
            }
            None => false,
        }
    }
}

/// Certified positive lower bound for the gap between eigenvalues `k-1` and
/// `k` (0-indexed) of the symmetric tridiagonal matrix `(d, e2)`, searched
/// within the a-priori interval `[lo0, hi0]` that must contain the whole
/// spectrum. Errors if separation cannot be certified within the iteration
/// cap (which, for this matrix family, would mean a genuinely multiple
/// eigenvalue down to astronomically small scales).
pub(crate) fn certified_gap(
    d: &[Dyadic],
    e2: &[Dyadic],
    k: usize,
    lo0: &Dyadic,
    hi0: &Dyadic,
) -> Result<Dyadic> {
    assert!(k >= 1 && k < d.len());
    let mut lower = Bracket { lo: lo0.clone(), hi: hi0.clone(), j: k - 1 };
    let mut upper = Bracket { lo: lo0.clone(), hi: hi0.clone(), j: k };
    const MAX_STEPS: usize = 1600;
    const POLISH: usize = 80;
    let mut separated_at: Option<usize> = None;
    for step in 0..MAX_STEPS {
        let ok1 = lower.tighten(d, e2);
        let ok2 = upper.tighten(d, e2);
        if !ok1 && !ok2 {
            return Err(Error::Numerical(
                "eigenvalue gap certification: no valid query points".into(),
            ));
        }
        if upper.lo > lower.hi {
            let gap = upper.lo.sub(&lower.hi);
            let width1 = lower.hi.sub(&lower.lo);
            let width2 = upper.hi.sub(&upper.lo);
            let done_polishing = separated_at.map_or(false, |s| step - s >= POLISH);
            let tight = width1.mul_int(8) < gap && width2.mul_int(8) < gap;
            if separated_at.is_none() {
                separated_at = Some(step);
            }
            if tight || done_polishing {
                return Ok(gap);
            }
        }
    }
    Err(Error::Numerical(
        "eigenvalue gap certification did not converge within the iteration cap".into(),
    ))
}

// ---------------------------------------------------------------------------
// Sign-variation chains for integer polynomials
// ---------------------------------------------------------------------------

/// Divides out the (positive) integer content, keeping the sign.
fn strip_positive_content(p: &Uni) -> Uni {
    let c = uni::content(p);
    if c.is_zero() || c.is_one() {
        let mut q = p.clone();
        uni::trim(&mut q);
        return q;
    }
    let mut out: Uni = p.iter().map(|t| t / &c).collect();
    uni::trim(&mut out);
    out
}

/// Builds the sign-variation chain of `p`: starts with `p, p'`, continues
/// with negated remainders (computed as pseudo-remainders with positive
/// multipliers, then content-stripped). Works for non-squarefree input, in
/// which case root counts are counts of *distinct* roots.
pub(crate) fn sturm_chain(p: &Uni) -> Vec<Uni> {
    let mut chain: Vec<Uni> = Vec::new();
    let p0 = strip_positive_content(p);
    if uni::is_zero(&p0) {
        return chain;
    }
    chain.push(p0.clone());
    let p1 = strip_positive_content(&uni::derivative(&p0));
    if uni::is_zero(&p1) {
        return chain;
    }
    chain.push(p1);
    loop {
        let a = &chain[chain.len() - 2];
        let b = &chain[chain.len() - 1];
        let da = uni::deg(a).unwrap();
        let db = uni::deg(b).unwrap();
        if db == 0 {
            break;
        }
        let mut r = uni::prem(a, b);
        // prem multiplies by lc(b)^(da-db+1); when that factor is negative
        // the remainder's sign is flipped, undo it so the chain rule
        // "next = -(a mod b) * positive" holds.
        let lb = uni::lc(b);
        if lb.is_negative() && (da - db + 1) % 2 == 1 {
            r = uni::neg(&r);
        }
        if uni::is_zero(&r) {
            break;
        }
        let next = strip_positive_content(&uni::neg(&r));
        chain.push(next);
    }
    chain
}

fn eval_uni_dyadic(p: &Uni, x: &Dyadic) -> Dyadic {
    let mut acc = Dyadic::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x);
        if !c.is_zero() {
            acc = acc.add(&Dyadic::from_int(c.clone()));
        }
    }
    acc
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut prev = 0i32;
    for s in signs {
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Sign variations of the chain evaluated at a dyadic point (zeros skipped).
pub(crate) fn variations_at(chain: &[Uni], x: &Dyadic) -> usize {
    variations(chain.iter().map(|p| eval_uni_dyadic(p, x).signum()))
}

/// Sign variations of the chain at +infinity (signs of leading coefficients).
pub(crate) fn variations_at_pos_inf(chain: &[Uni]) -> usize {
    variations(chain.iter().map(|p| {
        let l = uni::lc(p);
        if l.is_zero() {
            0
        } else if l.is_negative() {
            -1
        } else {
            1
        }
    }))
}

/// Number of distinct real roots of `p` in `(0, +inf)`, exactly.
pub(crate) fn count_positive_roots(p: &Uni) -> usize {
    let mut q = p.clone();
    uni::trim(&mut q);
    if uni::is_zero(&q) {
        return 0;
    }
    // remove roots at the origin
    let first_nonzero = q.iter().position(|c| !c.is_zero()).unwrap();
    let q: Uni = q[first_nonzero..].to_vec();
    if uni::deg(&q) == Some(0) {
        return 0;
    }
    let chain = sturm_chain(&q);
    let at_zero = variations_at(&chain, &Dyadic::zero());
    let at_inf = variations_at_pos_inf(&chain);
    at_zero.saturating_sub(at_inf)
}
