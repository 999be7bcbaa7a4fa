//! The pair of plane factor curves attached to each level `l`.
//!
//! The spectral determinant in the `(λ, v)` plane splits, after the change of
//! variables `λ = r² − μ²`, `v = μ²`, into two degree-`l` factors. Each factor
//! is the characteristic-style determinant of an `l×l` matrix carrying `μ` on
//! its anti-diagonal and small negative integers just right of it. This module
//! builds those determinants exactly, verifies the splitting identity, and
//! studies the resulting curves: their zero-coupling (`μ = 0`) slices, their
//! multiplicities at the two points at infinity, the genus bookkeeping, and a
//! resultant-based certificate that the affine curves are smooth.
//!
//! Everything algebraic is exact over arbitrary-precision integers; only the
//! final stage of the smoothness certificate (screening candidate parameters
//! that survive an exact gcd filter) uses high-precision floating point, with
//! wide safety bands between "certainly a singular point" and "certainly not".

use crate::error::{Error, Result};
use crate::numeric::{
    aberth_roots, eval_cdd, polish_root_dd, uni_to_c64_normalized, uni_to_cdd, Cdd,
};
use crate::poly::uni::{self, Uni};
use crate::poly::{as_univariate, resultant, tridiag_det, BivarPoly, TridiagSpec, Var};
use crate::spectral::spectral_polynomial;
use crate::Sign;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Variable alphabet for this module: coupling `μ` first, then `r`.
fn mr() -> (&'static str, &'static str) {
    ("μ", "r")
}

fn ser_poly<S: Serializer>(p: &BivarPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

// ---------------------------------------------------------------------------
// Curve construction
// ---------------------------------------------------------------------------

/// One of the two factor curves `{det(G_l ± r·Id) = 0}` in the `(μ, r)` plane.
#[derive(Debug, Clone, Serialize)]
pub struct XiCurve {
    pub l: u32,
    pub sign: Sign,
    /// Defining polynomial over `(μ, r)`; total degree `l`, unit coefficient
    /// on `r^l` (namely `(±1)^l`).
    #[serde(serialize_with = "ser_poly")]
    pub poly: BivarPoly,
}

/// The `l×l` matrix `G_l` whose shifted determinants cut out the factor
/// curves: `μ` along the anti-diagonal `(j, l+1−j)`, and `−(l+1−j)` one step
/// to the right of it at `(j, l+2−j)` for `j = 2..l` (1-based), zero elsewhere.
pub fn build_g_matrix(l: u32) -> Result<Vec<Vec<BivarPoly>>> {
    if l == 0 {
        return Err(Error::Domain("matrix order must be at least 1".into()));
    }
    let n = l as usize;
    let mut m = vec![vec![BivarPoly::zero(mr()); n]; n];
    for i in 0..n {
        // anti-diagonal entry (i, n-1-i) = μ
        m[i][n - 1 - i] = BivarPoly::var(mr(), Var::First);
    }
    for i in 1..n {
        // entry (i, n-i) = -(n-i), one step right of the anti-diagonal
        m[i][n - i] = BivarPoly::constant(mr(), -((n - i) as i64));
    }
    Ok(m)
}

/// Interleaved index order `[0, n-1, 1, n-2, ...]` that conjugates
/// `G_l ± r·Id` into tridiagonal form.
fn interleave_order(n: usize) -> Vec<usize> {
    let mut ord = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, n - 1);
    while lo < hi {
        ord.push(lo);
        ord.push(hi);
        lo += 1;
        hi -= 1;
    }
    if lo == hi {
        ord.push(lo);
    }
    ord
}

/// Exact defining polynomial of the factor curve with the given sign.
///
/// The determinant of `G_l ± r·Id` is computed by conjugating with the
/// interleaving permutation (which preserves the determinant and makes the
/// matrix tridiagonal) and running the three-term determinant recurrence.
/// The tridiagonal shape of the conjugated matrix is verified entry by entry.
pub fn xi_polynomial(l: u32, sign: Sign) -> Result<XiCurve> {
    let mut m = build_g_matrix(l)?;
    let n = l as usize;
    let r_term = match sign {
        Sign::Plus => BivarPoly::var(mr(), Var::Second),
        Sign::Minus => BivarPoly::var(mr(), Var::Second).neg(),
    };
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = row[i].add(&r_term);
    }
    let ord = interleave_order(n);
    let perm = |a: usize, b: usize| -> &BivarPoly { &m[ord[a]][ord[b]] };
    for a in 0..n {
        for b in 0..n {
            if a.abs_diff(b) > 1 && !perm(a, b).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "interleaved conjugate of the order-{l} matrix is not tridiagonal at ({a},{b})"
                )));
            }
        }
    }
    let diag: Vec<BivarPoly> = (0..n).map(|a| perm(a, a).clone()).collect();
    let sub: Vec<BivarPoly> = (1..n).map(|a| perm(a, a - 1).clone()).collect();
    let sup: Vec<BivarPoly> = (0..n - 1).map(|a| perm(a, a + 1).clone()).collect();
    let spec = TridiagSpec::new(mr(), diag, sub, sup)?;
    let poly = tridiag_det(&spec);
    if poly.total_degree() != Some(l) {
        return Err(Error::Inconsistent(format!(
            "factor-curve polynomial for l={l} has total degree {:?}, expected {l}",
            poly.total_degree()
        )));
    }
    if poly.coeff((0, l)).abs() != BigInt::one() {
        return Err(Error::Inconsistent(format!(
            "factor-curve polynomial for l={l} is not unit-leading in r"
        )));
    }
    Ok(XiCurve { l, sign, poly })
}

/// `p(μ, r) ↦ p(μ, −r)`: negates coefficients of odd powers of `r`. The two
/// factor curves are images of each other under this reflection.
fn reflect_r(p: &BivarPoly) -> BivarPoly {
    BivarPoly::from_terms(
        p.var_names(),
        p.terms().map(|(&(a, b), c)| {
            let c = if b % 2 == 1 { -c.clone() } else { c.clone() };
            ((a, b), c)
        }),
    )
}

// ---------------------------------------------------------------------------
// Factorization identity
// ---------------------------------------------------------------------------

/// Verifies, as an exact polynomial identity, that the spectral determinant
/// factors through the two sign curves:
/// `P_l(r²−μ², μ²) · (−1)^l  =  det(G_l + r·Id) · det(G_l − r·Id)`.
///
/// Returns `Ok(true)` iff the identity holds; a `false` return is a genuine
/// (test-failing) result, not an error.
pub fn factorization_check(l: u32) -> Result<bool> {
    let curve = spectral_polynomial(l)?;
    // Step 1: v ↦ μ², moving from (λ, v) to (λ, μ).
    let mu_sq = BivarPoly::monomial(("λ", "μ"), (0, 2), 1);
    let p_lm = curve.poly.substitute("v", &mu_sq)?;
    // Step 2: λ ↦ r² − μ², moving from (λ, μ) to (r, μ).
    let r2_minus_m2 = BivarPoly::monomial(("r", "μ"), (2, 0), 1)
        .sub(&BivarPoly::monomial(("r", "μ"), (0, 2), 1));
    let p_rm = p_lm.substitute("λ", &r2_minus_m2)?;
    // Reorder the alphabet to (μ, r) to match the factor curves.
    let lhs = {
        let base = p_rm.swap_vars();
        if l % 2 == 1 {
            base.neg()
        } else {
            base
        }
    };
    let plus = xi_polynomial(l, Sign::Plus)?;
    let minus = xi_polynomial(l, Sign::Minus)?;
    let rhs = plus.poly.mul(&minus.poly);
    Ok(lhs.sub(&rhs).is_zero())
}

// ---------------------------------------------------------------------------
// Zero-coupling slice
// ---------------------------------------------------------------------------

/// Closed form of the `μ = 0` slice of the factor-curve polynomial:
/// for the `+` sign, `r · ∏_{k=1}^{(l−1)/2} (r² − k(l−k))` for odd `l` and
/// `r · (r − l/2) · ∏_{k=1}^{(l−2)/2} (r² − k(l−k))` for even `l`; the `−`
/// sign is the image under `r ↦ −r`.
pub fn mu_zero_closed_form(l: u32, sign: Sign) -> Result<BivarPoly> {
    if l == 0 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let r = BivarPoly::var(mr(), Var::Second);
    let mut p = r.clone();
    if l % 2 == 0 {
        p = p.mul(&r.sub(&BivarPoly::constant(mr(), (l / 2) as i64)));
    }
    let pairs = if l % 2 == 1 { (l - 1) / 2 } else { (l - 2) / 2 };
    for k in 1..=pairs as i64 {
        let c = k * (l as i64 - k);
        p = p.mul(&r.mul(&r).sub(&BivarPoly::constant(mr(), c)));
    }
    Ok(match sign {
        Sign::Plus => p,
        Sign::Minus => reflect_r(&p),
    })
}

/// The terms of a curve's polynomial with no `μ` factor, i.e. its `μ = 0`
/// slice, still expressed over `(μ, r)`.
pub fn mu_zero_slice(curve: &XiCurve) -> BivarPoly {
    BivarPoly::from_terms(
        curve.poly.var_names(),
        curve
            .poly
            .terms()
            .filter(|(&(a, _), _)| a == 0)
            .map(|(&e, c)| (e, c.clone())),
    )
}

/// Checks exactly that, for both signs, the `μ = 0` slice of the computed
/// determinant equals the closed form, and that this slice is squarefree
/// (all its roots are pairwise distinct).
pub fn mu_zero_check(l: u32) -> Result<bool> {
    for sign in [Sign::Plus, Sign::Minus] {
        let curve = xi_polynomial(l, sign)?;
        let slice = mu_zero_slice(&curve);
        let closed = mu_zero_closed_form(l, sign)?;
        if !slice.sub(&closed).is_zero() {
            return Ok(false);
        }
        let u = as_univariate(&slice, Var::Second);
        let g = uni::gcd(&u, &uni::derivative(&u));
        if uni::deg(&g) != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Points at infinity
// ---------------------------------------------------------------------------

/// The two points at infinity of a factor curve, reached in the chart `μ = 1`
/// of the projective closure at `r/μ → ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InfinityPoint {
    #[serde(rename = "p+")]
    PPlus,
    #[serde(rename = "p-")]
    PMinus,
}

impl std::fmt::Display for InfinityPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InfinityPoint::PPlus => "p+",
            InfinityPoint::PMinus => "p-",
        })
    }
}

/// Multiplicity of the projective closure of the factor curve at one of its
/// two points at infinity.
///
/// The defining polynomial is homogenized to degree `l` with a third variable
/// `θ`, restricted to the chart `μ = 1`, and recentred by `r = ±1 + a`; the
/// multiplicity is the total degree of the lowest nonvanishing homogeneous
/// part in `(a, θ)`.
pub fn multiplicity_at_infinity(l: u32, sign: Sign, point: InfinityPoint) -> Result<u32> {
    if l < 2 {
        return Err(Error::Domain(
            "multiplicity at infinity needs level at least 2 (the level-1 curve is a line)".into(),
        ));
    }
    let curve = xi_polynomial(l, sign)?;
    let eps: i64 = match point {
        InfinityPoint::PPlus => 1,
        InfinityPoint::PMinus => -1,
    };
    // Pascal rows up to l for the binomial expansion of (ε + a)^j.
    let mut pascal: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for j in 1..=l as usize {
        let prev = &pascal[j - 1];
        let mut row = vec![BigInt::one()];
        for m in 1..j {
            row.push(&prev[m - 1] + &prev[m]);
        }
        row.push(BigInt::one());
        pascal.push(row);
    }
    let mut expanded: Vec<((u32, u32), BigInt)> = Vec::new();
    for (&(i, j), c) in curve.poly.terms() {
        let theta = l - i - j; // homogenizing exponent
        for m in 0..=j as usize {
            let mut t = c * &pascal[j as usize][m];
            if eps < 0 && (j as usize - m) % 2 == 1 {
                t = -t;
            }
            expanded.push(((m as u32, theta), t));
        }
    }
    let local = BivarPoly::from_terms(("a", "θ"), expanded);
    match local.terms().map(|(&(a, t), _)| a + t).min() {
        Some(mult) => Ok(mult),
        None => Err(Error::Inconsistent(format!(
            "level-{l} factor curve vanished identically in the chart at infinity"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Genus accounting
// ---------------------------------------------------------------------------

/// Genus bookkeeping for the normalized projective closure of a factor curve.
#[derive(Debug, Clone, Serialize)]
pub struct GenusReport {
    pub l: u32,
    /// `((l−2)/2)²` for even `l`, `((l−1)/2)·((l−3)/2)` for odd `l`.
    pub conjectured_genus: u64,
    /// Multiplicities at the two points at infinity, `(at p+, at p−)` for the
    /// `+` curve; equal to the curve's bidegree.
    pub bidegree: (u32, u32),
    /// True only when an affine smoothness certificate has been run and
    /// passed; the bound alone never certifies.
    pub certified: bool,
    pub certificate_notes: String,
}

fn conjectured_genus(l: u32) -> u64 {
    let l = l as i64;
    let g = if l % 2 == 0 {
        let h = (l - 2) / 2;
        h * h
    } else {
        ((l - 1) / 2) * ((l - 3) / 2)
    };
    g.max(0) as u64
}

/// The genus value predicted by the two-case closed formula, together with
/// the bidegree read off from the multiplicities at infinity, and the exact
/// consistency check `(d₁−1)(d₂−1) = genus`. Returned with `certified=false`;
/// see [`genus_certified`] for the certificate-backed variant.
pub fn genus_bound(l: u32) -> Result<GenusReport> {
    if l == 0 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let genus = conjectured_genus(l);
    let bidegree = if l == 1 {
        (0, 1)
    } else {
        (
            multiplicity_at_infinity(l, Sign::Plus, InfinityPoint::PPlus)?,
            multiplicity_at_infinity(l, Sign::Plus, InfinityPoint::PMinus)?,
        )
    };
    let product = (bidegree.0 as i64 - 1) * (bidegree.1 as i64 - 1);
    if product != genus as i64 {
        return Err(Error::Inconsistent(format!(
            "bidegree {bidegree:?} is inconsistent with genus {genus} at level {l}"
        )));
    }
    Ok(GenusReport {
        l,
        conjectured_genus: genus,
        bidegree,
        certified: false,
        certificate_notes: "upper bound only; run the smoothness certificate to certify".into(),
    })
}

/// [`genus_bound`] plus the affine smoothness certificate on the `+` curve
/// (smoothness of either sign curve suffices; the two are isomorphic under
/// `r ↦ −r`). `certified` is true only when the certificate decides `smooth`.
pub fn genus_certified(l: u32) -> Result<GenusReport> {
    let mut report = genus_bound(l)?;
    if l < 2 {
        report.certificate_notes = "level-1 curve is a line; nothing to certify".into();
        report.certified = true;
        return Ok(report);
    }
    let cert = smoothness_certificate(l, Sign::Plus)?;
    match cert.smooth {
        Some(true) => {
            report.certified = true;
            report.certificate_notes = format!(
                "affine smoothness certified; branches at infinity transversal by the \
                 multiplicity computation ({} + {} = {}); genus equals the bound",
                report.bidegree.0, report.bidegree.1, l
            );
        }
        Some(false) => {
            report.certified = false;
            report.certificate_notes =
                format!("affine singular point found; notes: {}", cert.notes.join("; "));
        }
        None => {
            report.certified = false;
            report.certificate_notes = format!(
                "certificate undetermined; notes: {}",
                cert.notes.join("; ")
            );
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Smoothness certificate
// ---------------------------------------------------------------------------

/// Outcome of the resultant-based affine smoothness check for one sign curve.
#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessCertificate {
    pub l: u32,
    pub sign: Sign,
    /// `gcd(Res_r(F, F_r), Res_r(F, F_μ))` over the integers — the exact
    /// filter whose roots are the only parameters where a singular point
    /// could possibly live.
    #[serde(serialize_with = "ser_poly")]
    pub gcd_poly: BivarPoly,
    /// `Some(true)`: no affine singular point (certificate passed).
    /// `Some(false)`: a genuine singular point was found.
    /// `None`: a candidate could not be classified within the precision
    /// budget; see `notes`.
    pub smooth: Option<bool>,
    pub notes: Vec<String>,
}

/// A candidate singular parameter is *confirmed* when the defining polynomial
/// and both partials all have relative residual below this at some common
/// point, and *refuted* when every candidate point leaves at least one
/// residual above [`REGULAR_BAND`]. The gap of seven orders of magnitude
/// between the bands is the safety margin of the classification.
const SINGULAR_BAND: f64 = 1e-25;
const REGULAR_BAND: f64 = 1e-18;

/// Dense coefficient vectors of `p` in powers of `r`; entry `j` is the
/// coefficient of `r^j` as an integer polynomial in `μ`.
fn coeffs_in_r(p: &BivarPoly) -> Vec<Uni> {
    let dr = p.degree_in(Var::Second).map_or(0, |d| d as usize);
    let mut out = vec![Vec::new(); dr + 1];
    for (&(a, b), c) in p.terms() {
        let u = &mut out[b as usize];
        if u.len() <= a as usize {
            u.resize(a as usize + 1, BigInt::zero());
        }
        u[a as usize] = c.clone();
    }
    for u in &mut out {
        uni::trim(u);
    }
    out
}

/// Coefficients (in `r`) of the slice of `p` at `μ = 0`.
fn slice_coeffs_at_mu_zero(p: &BivarPoly, mu_exp: u32) -> Uni {
    let dr = p.degree_in(Var::Second).map_or(0, |d| d as usize);
    let mut out = vec![BigInt::zero(); dr + 1];
    for (&(a, b), c) in p.terms() {
        if a == mu_exp {
            out[b as usize] = c.clone();
        }
    }
    uni::trim(&mut out);
    out
}

fn squarefree_part(u: &Uni) -> Result<Uni> {
    let d = uni::derivative(u);
    if uni::is_zero(&d) {
        return Ok(uni::one());
    }
    let g = uni::gcd(u, &d);
    uni::exact_div(u, &g)
}

fn cdd_to_c64_normalized(v: &[Cdd]) -> Vec<Complex64> {
    let max = v.iter().map(|c| c.abs_f64()).fold(0.0f64, f64::max).max(1e-300);
    v.iter()
        .map(|c| {
            let z = c.to_c64();
            Complex64::new(z.re / max, z.im / max)
        })
        .collect()
}

/// Evaluates each `μ`-coefficient vector at `μ₀`, producing the coefficients
/// in `r` of the specialized polynomial.
fn specialize_at(coeffs: &[Vec<Cdd>], mu0: Cdd) -> Vec<Cdd> {
    coeffs.iter().map(|u| eval_cdd(u, mu0)).collect()
}

/// `|p(r₀)|` and the evaluation scale `Σ |p_j| |r₀|^j`, for relative residuals.
fn residual_and_scale(spec: &[Cdd], r0: Cdd) -> (f64, f64) {
    let val = eval_cdd(spec, r0).abs_f64();
    let rr = r0.abs_f64();
    let mut scale = 0.0f64;
    let mut pw = 1.0f64;
    for c in spec {
        scale += c.abs_f64() * pw;
        pw *= rr;
    }
    (val, scale.max(1e-300))
}

enum MuZeroVerdict {
    Regular(Option<String>),
    Singular(String),
}

/// Exact analysis of possible singular points on the line `μ = 0`: the curve
/// meets it where the slice vanishes, `∂F/∂r` vanishes there iff the slice has
/// a multiple root, and `∂F/∂μ` restricted to `μ = 0` is the coefficient of
/// `μ¹` in `F`. All three conditions are intersected by exact gcds.
fn mu_zero_verdict(f: &BivarPoly) -> Result<MuZeroVerdict> {
    let slice = slice_coeffs_at_mu_zero(f, 0);
    if uni::is_zero(&slice) {
        // μ divides F: the curve contains the whole line μ = 0. Any point of
        // that line where the cofactor also vanishes is singular; over the
        // complex numbers such a point exists iff the cofactor is nonconstant
        // in r there, and the line itself already forces ∂F/∂r = 0 on it
        // whenever F/μ has positive r-degree.
        return Ok(MuZeroVerdict::Singular(
            "μ divides the defining polynomial; the curve is non-reduced along μ = 0".into(),
        ));
    }
    let h = uni::gcd(&slice, &uni::derivative(&slice));
    if uni::deg(&h) == Some(0) {
        return Ok(MuZeroVerdict::Regular(Some(
            "zero-coupling slice is squarefree (exact), so no singular point lies on μ = 0".into(),
        )));
    }
    // Multiple roots of the slice: check the μ-derivative there, exactly.
    let fm0 = slice_coeffs_at_mu_zero(f, 1);
    if uni::is_zero(&fm0) {
        return Ok(MuZeroVerdict::Singular(
            "zero-coupling slice has a multiple root and the μ-derivative vanishes on μ = 0".into(),
        ));
    }
    let common = uni::gcd(&h, &fm0);
    if uni::deg(&common).map_or(false, |d| d >= 1) {
        return Ok(MuZeroVerdict::Singular(format!(
            "singular point on μ = 0: the slice's repeated roots meet the μ-derivative \
             (common factor of degree {})",
            uni::deg(&common).unwrap()
        )));
    }
    Ok(MuZeroVerdict::Regular(Some(
        "repeated roots of the zero-coupling slice all miss the μ-derivative (exact)".into(),
    )))
}

/// Core of the smoothness certificate, usable on any squarefree defining
/// polynomial over `(μ, r)`. Returns the exact gcd filter, the verdict, and
/// human-readable notes.
pub(crate) fn certify_affine_smooth(
    f: &BivarPoly,
) -> Result<(BivarPoly, Option<bool>, Vec<String>)> {
    let mut notes = Vec::new();
    if f.is_zero() {
        return Err(Error::Domain("zero polynomial does not define a curve".into()));
    }
    let fr = f.derivative(Var::Second);
    let fm = f.derivative(Var::First);
    if fr.is_zero() && fm.is_zero() {
        return Err(Error::Domain("constant polynomial does not define a curve".into()));
    }
    // Degenerate one-variable cases: handled exactly and returned early.
    if fr.is_zero() {
        // F depends on μ only: vertical lines; singular iff a repeated line.
        let u = as_univariate(f, Var::First);
        let g = uni::gcd(&u, &uni::derivative(&u));
        let smooth = uni::deg(&g) == Some(0);
        notes.push("polynomial depends on μ only; squarefreeness decides".into());
        return Ok((BivarPoly::constant(mr(), 1), Some(smooth), notes));
    }
    if fm.is_zero() {
        let u = as_univariate(f, Var::Second);
        let g = uni::gcd(&u, &uni::derivative(&u));
        let smooth = uni::deg(&g) == Some(0);
        notes.push("polynomial depends on r only; squarefreeness decides".into());
        return Ok((BivarPoly::constant(mr(), 1), Some(smooth), notes));
    }

    let r1 = resultant(f, &fr, Var::Second)?;
    let r2 = resultant(f, &fm, Var::Second)?;
    if r1.is_zero() {
        notes.push("discriminant vanishes identically: repeated factor present".into());
        return Ok((BivarPoly::zero(mr()), Some(false), notes));
    }
    if r2.is_zero() {
        notes.push(
            "the polynomial shares a factor with its μ-derivative; cannot certify".into(),
        );
        return Ok((BivarPoly::zero(mr()), None, notes));
    }
    let gcd_poly = crate::poly::univariate_gcd(&r1, &r2, Var::First)?;
    notes.push(format!(
        "resultant degrees in μ: {:?} and {:?}; gcd degree {:?}",
        r1.degree_in(Var::First),
        r2.degree_in(Var::First),
        gcd_poly.degree_in(Var::First)
    ));

    // Exact verdict on the μ = 0 line, independent of the gcd filter.
    let mut singular_notes: Vec<String> = Vec::new();
    match mu_zero_verdict(f)? {
        MuZeroVerdict::Regular(Some(n)) => notes.push(n),
        MuZeroVerdict::Regular(None) => {}
        MuZeroVerdict::Singular(n) => {
            notes.push(n.clone());
            singular_notes.push(n);
        }
    }

    // Candidate parameters away from μ = 0: roots of the gcd with μ-powers
    // stripped, plus (defensively) roots of a nonconstant leading coefficient
    // in r, where the resultants can vanish without a common root.
    let mut w = as_univariate(&gcd_poly, Var::First);
    let mut stripped = 0usize;
    while !w.is_empty() && w[0].is_zero() {
        w.remove(0);
        stripped += 1;
    }
    if stripped > 0 {
        notes.push(format!(
            "gcd carries a factor μ^{stripped}; the μ = 0 line was analysed exactly above"
        ));
    }
    let f_coeffs = coeffs_in_r(f);
    let lc = f_coeffs.last().cloned().unwrap_or_default();
    if uni::deg(&lc).map_or(false, |d| d >= 1) {
        notes.push(
            "leading coefficient in r is nonconstant; its roots join the candidate set".into(),
        );
        w = uni::mul(&w, &lc);
        while !w.is_empty() && w[0].is_zero() {
            w.remove(0);
        }
    }
    let wsq = squarefree_part(&w)?;
    if uni::deg(&wsq).map_or(true, |d| d == 0) {
        if singular_notes.is_empty() {
            notes.push(
                "no candidate parameters off μ = 0 (gcd filter is exact); curve is smooth".into(),
            );
            return Ok((gcd_poly, Some(true), notes));
        }
        return Ok((gcd_poly, Some(false), notes));
    }

    // Numeric screening of the surviving candidates, in ~1e-32 precision.
    let fr_coeffs = coeffs_in_r(&fr);
    let fm_coeffs = coeffs_in_r(&fm);
    let f_cdd: Vec<Vec<Cdd>> = f_coeffs.iter().map(|u| uni_to_cdd(u)).collect();
    let fr_cdd: Vec<Vec<Cdd>> = fr_coeffs.iter().map(|u| uni_to_cdd(u)).collect();
    let fm_cdd: Vec<Vec<Cdd>> = fm_coeffs.iter().map(|u| uni_to_cdd(u)).collect();
    let wsq_cdd = uni_to_cdd(&wsq);
    let mu_roots = aberth_roots(&uni_to_c64_normalized(&wsq))?;
    let mut undetermined = 0usize;
    let mut refuted = 0usize;
    for root in mu_roots {
        let mu0 = polish_root_dd(&wsq_cdd, root, 60);
        let f_at = specialize_at(&f_cdd, mu0);
        let fr_at = specialize_at(&fr_cdd, mu0);
        let fm_at = specialize_at(&fm_cdd, mu0);
        // Singular points over μ0 must be common roots of F and F_r; screen
        // every root of the specialized F_r.
        let mut fr_trim = fr_at.clone();
        while fr_trim.last().map_or(false, |c| c.abs_f64() == 0.0) {
            fr_trim.pop();
        }
        if fr_trim.len() <= 1 {
            refuted += 1;
            continue;
        }
        let cands = aberth_roots(&cdd_to_c64_normalized(&fr_trim))?;
        let mut best_worst = f64::INFINITY;
        let mut best_at = Complex64::new(0.0, 0.0);
        for cand in cands {
            let r0 = polish_root_dd(&fr_at, cand, 40);
            let mut worst = 0.0f64;
            for spec in [&f_at, &fr_at, &fm_at] {
                let (val, scale) = residual_and_scale(spec, r0);
                worst = worst.max(val / scale);
            }
            if worst < best_worst {
                best_worst = worst;
                best_at = r0.to_c64();
            }
        }
        let m = mu0.to_c64();
        if best_worst < SINGULAR_BAND {
            let n = format!(
                "singular point near μ≈{:.6}{:+.6}i, r≈{:.6}{:+.6}i (worst residual {:.2e})",
                m.re, m.im, best_at.re, best_at.im, best_worst
            );
            notes.push(n.clone());
            singular_notes.push(n);
        } else if best_worst > REGULAR_BAND {
            refuted += 1;
        } else {
            undetermined += 1;
            notes.push(format!(
                "candidate μ≈{:.6}{:+.6}i unresolved: residual {:.2e} lies between the bands",
                m.re, m.im, best_worst
            ));
        }
    }
    if !singular_notes.is_empty() {
        return Ok((gcd_poly, Some(false), notes));
    }
    if undetermined > 0 {
        return Ok((gcd_poly, None, notes));
    }
    notes.push(format!(
        "all {refuted} candidate parameters refuted numerically with residuals above {REGULAR_BAND:.0e}"
    ));
    Ok((gcd_poly, Some(true), notes))
}

/// Resultant-based certificate that the affine factor curve of the given sign
/// is smooth: every common zero of the defining polynomial and its two
/// partials is excluded, by exact gcd arithmetic where possible and by
/// high-precision screening with wide safety bands otherwise.
pub fn smoothness_certificate(l: u32, sign: Sign) -> Result<SmoothnessCertificate> {
    if l < 2 {
        return Err(Error::Domain(
            "smoothness certificate needs level at least 2".into(),
        ));
    }
    let curve = xi_polynomial(l, sign)?;
    let (gcd_poly, smooth, notes) = certify_affine_smooth(&curve.poly)?;
    Ok(SmoothnessCertificate { l, sign, gcd_poly, smooth, notes })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::det_cofactor;

    fn var_mu() -> BivarPoly {
        BivarPoly::var(mr(), Var::First)
    }

    fn var_r() -> BivarPoly {
        BivarPoly::var(mr(), Var::Second)
    }

    #[test]
    fn g_matrix_order_two_matches_hand_layout() {
        let m = build_g_matrix(2).unwrap();
        assert!(m[0][0].is_zero());
        assert_eq!(m[0][1], var_mu());
        assert_eq!(m[1][0], var_mu());
        assert_eq!(m[1][1], BivarPoly::constant(mr(), -1));
    }

    #[test]
    fn g_matrix_order_three_matches_hand_layout() {
        let m = build_g_matrix(3).unwrap();
        let mu = var_mu();
        assert!(m[0][0].is_zero() && m[0][1].is_zero());
        assert_eq!(m[0][2], mu);
        assert!(m[1][0].is_zero());
        assert_eq!(m[1][1], mu);
        assert_eq!(m[1][2], BivarPoly::constant(mr(), -2));
        assert_eq!(m[2][0], mu);
        assert_eq!(m[2][1], BivarPoly::constant(mr(), -1));
        assert!(m[2][2].is_zero());
    }

    #[test]
    fn order_one_curves_are_the_two_lines() {
        let plus = xi_polynomial(1, Sign::Plus).unwrap();
        let minus = xi_polynomial(1, Sign::Minus).unwrap();
        assert_eq!(plus.poly, var_mu().add(&var_r()));
        assert_eq!(minus.poly, var_mu().sub(&var_r()));
    }

    #[test]
    fn order_two_curves_match_hand_determinants() {
        let plus = xi_polynomial(2, Sign::Plus).unwrap();
        let minus = xi_polynomial(2, Sign::Minus).unwrap();
        let r = var_r();
        let mu = var_mu();
        let expect_plus = r.mul(&r).sub(&r).sub(&mu.mul(&mu));
        let expect_minus = r.mul(&r).add(&r).sub(&mu.mul(&mu));
        assert_eq!(plus.poly, expect_plus);
        assert_eq!(minus.poly, expect_minus);
    }

    #[test]
    fn determinants_match_cofactor_oracle_through_order_five() {
        for l in 1..=5u32 {
            for sign in [Sign::Plus, Sign::Minus] {
                let mut m = build_g_matrix(l).unwrap();
                let r_term = match sign {
                    Sign::Plus => var_r(),
                    Sign::Minus => var_r().neg(),
                };
                for i in 0..l as usize {
                    m[i][i] = m[i][i].add(&r_term);
                }
                let oracle = det_cofactor(&m);
                let fast = xi_polynomial(l, sign).unwrap().poly;
                assert_eq!(fast, oracle, "l={l} sign={sign}");
            }
        }
    }

    #[test]
    fn sign_curves_are_mirror_images_in_r() {
        for l in 1..=6u32 {
            let plus = xi_polynomial(l, Sign::Plus).unwrap();
            let minus = xi_polynomial(l, Sign::Minus).unwrap();
            assert_eq!(reflect_r(&plus.poly), minus.poly, "l={l}");
        }
    }

    #[test]
    fn factorization_identity_holds_for_small_orders() {
        for l in 1..=7u32 {
            assert!(factorization_check(l).unwrap(), "l={l}");
        }
    }

    #[test]
    fn zero_coupling_slices_match_closed_forms() {
        // Order 3: r(r² − 2); order 4: r(r − 2)(r² − 3).
        let c3 = mu_zero_closed_form(3, Sign::Plus).unwrap();
        let r = var_r();
        assert_eq!(
            c3,
            r.mul(&r).mul(&r).sub(&r.scale(2)),
            "cubic closed form"
        );
        let c4 = mu_zero_closed_form(4, Sign::Plus).unwrap();
        let expect4 = r
            .mul(&r.sub(&BivarPoly::constant(mr(), 2)))
            .mul(&r.mul(&r).sub(&BivarPoly::constant(mr(), 3)));
        assert_eq!(c4, expect4, "quartic closed form");
        for l in 1..=8u32 {
            assert!(mu_zero_check(l).unwrap(), "l={l}");
        }
    }

    #[test]
    fn multiplicities_at_infinity_follow_the_floor_pattern() {
        // (sign, point) -> [l/2] when they agree, l − [l/2] when they differ.
        for l in 2..=6u32 {
            let half = l / 2;
            assert_eq!(
                multiplicity_at_infinity(l, Sign::Plus, InfinityPoint::PPlus).unwrap(),
                half,
                "l={l} + at p+"
            );
            assert_eq!(
                multiplicity_at_infinity(l, Sign::Plus, InfinityPoint::PMinus).unwrap(),
                l - half,
                "l={l} + at p-"
            );
            assert_eq!(
                multiplicity_at_infinity(l, Sign::Minus, InfinityPoint::PPlus).unwrap(),
                l - half,
                "l={l} - at p+"
            );
            assert_eq!(
                multiplicity_at_infinity(l, Sign::Minus, InfinityPoint::PMinus).unwrap(),
                half,
                "l={l} - at p-"
            );
        }
        assert!(multiplicity_at_infinity(1, Sign::Plus, InfinityPoint::PPlus).is_err());
    }

    #[test]
    fn genus_values_match_the_two_case_formula() {
        let cases = [(2u32, 0u64), (3, 0), (4, 1), (5, 2), (6, 4), (7, 6)];
        for (l, g) in cases {
            let rep = genus_bound(l).unwrap();
            assert_eq!(rep.conjectured_genus, g, "l={l}");
            assert!(!rep.certified);
        }
    }

    #[test]
    fn small_curves_certify_smooth() {
        for l in 2..=4u32 {
            for sign in [Sign::Plus, Sign::Minus] {
                let cert = smoothness_certificate(l, sign).unwrap();
                assert_eq!(cert.smooth, Some(true), "l={l} sign={sign}: {:?}", cert.notes);
            }
        }
    }

    #[test]
    fn certified_genus_for_the_elliptic_case() {
        let rep = genus_certified(4).unwrap();
        assert_eq!(rep.conjectured_genus, 1);
        assert!(rep.certified, "{}", rep.certificate_notes);
    }

    #[test]
    fn cuspidal_synthetic_curve_is_detected_singular() {
        // r² − (μ−1)³ has a cusp at (1, 0); the gcd filter leaves the factor
        // (μ−1) and the numeric screen must confirm the singular point.
        let mu = var_mu();
        let shift = mu.sub(&BivarPoly::constant(mr(), 1));
        let f = var_r().mul(&var_r()).sub(&shift.mul(&shift).mul(&shift));
        let (_, smooth, notes) = certify_affine_smooth(&f).unwrap();
        assert_eq!(smooth, Some(false), "{notes:?}");
    }

    #[test]
    fn smooth_synthetic_curve_with_nontrivial_resultants_passes() {
        // r² − μ³ + μ: both resultants are nonconstant but their gcd is
        // constant, so the exact filter alone decides.
        let mu = var_mu();
        let f = var_r()
            .mul(&var_r())
            .sub(&mu.mul(&mu).mul(&mu))
            .add(&mu);
        let (_, smooth, notes) = certify_affine_smooth(&f).unwrap();
        assert_eq!(smooth, Some(true), "{notes:?}");
    }

    #[test]
    fn constant_in_r_derivative_is_handled() {
        // r³ − 3r + μ³ − 2μ: the μ-derivative has r-degree 0, so the second
        // resultant is a pure power of it; the gcd is still constant.
        let mu = var_mu();
        let r = var_r();
        let f = r
            .mul(&r)
            .mul(&r)
            .sub(&r.scale(3))
            .add(&mu.mul(&mu).mul(&mu))
            .sub(&mu.scale(2));
        let (_, smooth, notes) = certify_affine_smooth(&f).unwrap();
        assert_eq!(smooth, Some(true), "{notes:?}");
    }

    #[test]
    fn non_squarefree_zero_coupling_slice_flags_the_singular_origin() {
        // r² − μ⁴ = (r − μ²)(r + μ²) crosses itself at the origin; the exact
        // μ = 0 analysis must find it without any numerics.
        let mu2 = var_mu().mul(&var_mu());
        let f = var_r().mul(&var_r()).sub(&mu2.mul(&mu2));
        let (_, smooth, notes) = certify_affine_smooth(&f).unwrap();
        assert_eq!(smooth, Some(false), "{notes:?}");
    }
}
