//! The spectral side of the family: the tridiagonal operator attached to the
//! parameter `l`, its characteristic polynomial in two variables, exact
//! structure certificates on that polynomial, certified eigenvalue spectra at
//! fixed coupling, the distinguished parameter points they induce, and
//! explicit polynomial kernel vectors.
//!
//! Conventions used throughout:
//!
//! * the operator `H` is `l x l`, tridiagonal, with 0-based entries
//!   `diag[i] = -i(l-i)`, `sup[i] = mu*(i+1)`, `sub[i] = mu*(l-1-i)`;
//! * `P_l(lambda, v)` is `det(H + lambda*Id)` with `v = mu^2` — only the
//!   products of paired off-diagonal entries enter a tridiagonal
//!   determinant, and each such product is `(i+1)(l-1-i) * v`;
//! * `Q(lambda, R)` is `P_l` after the substitution `v -> R - lambda`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{newton_lower_hull, tridiag_det, BivarPoly, TridiagSpec, Var};
use crate::sturm::{certified_gap, Dyadic};

/// Parameter triple of the scalar second-order equation the operator family
/// encodes: level `l >= 1`, spectral value `lambda`, coupling `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunParams {
    pub l: u32,
    pub lambda: f64,
    pub mu: f64,
}

/// The numeric tridiagonal operator `H` for given `l` and `mu` (0-based
/// bands; `sub[i]` couples row `i+1` to column `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTridiag {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
    pub sup: Vec<f64>,
}

/// Builds the numeric operator `H`: `diag[i] = -i(l-i)`, `sup[i] = mu(i+1)`,
/// `sub[i] = mu(l-1-i)`.
pub fn build_h_numeric(l: u32, mu: f64) -> NumericTridiag {
    let lf = l as f64;
    let n = l as usize;
    let diag = (0..n).map(|i| -(i as f64) * (lf - i as f64)).collect();
    let sup = (0..n.saturating_sub(1)).map(|i| mu * (i as f64 + 1.0)).collect();
    let sub = (0..n.saturating_sub(1)).map(|i| mu * (lf - 1.0 - i as f64)).collect();
    NumericTridiag { diag, sub, sup }
}

/// The characteristic data of the family at level `l`:
/// `poly = P_l(lambda, v) = det(H + lambda*Id)` with `v = mu^2`, and
/// `q = Q(lambda, R)`, the same polynomial after `v -> R - lambda`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCurve {
    pub l: u32,
    #[serde(serialize_with = "ser_poly")]
    pub poly: BivarPoly,
    #[serde(serialize_with = "ser_poly")]
    pub q: BivarPoly,
}

/// Canonical-text serialization for polynomial fields, so JSON payloads carry
/// the same strings the text emitters print.
fn ser_poly<S: serde::Serializer>(
    p: &BivarPoly,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Computes [`SpectralCurve`] exactly. `P_l` is monic of degree `l` in
/// `lambda` and of total degree `l` in `(lambda, v)`.
pub fn spectral_polynomial(l: u32) -> Result<SpectralCurve> {
    if l == 0 {
        return Err(Error::Domain("level l must be >= 1".into()));
    }
    let lv = ("λ", "v");
    let n = l as usize;
    let lam = BivarPoly::var(lv, Var::First);
    let v = BivarPoly::var(lv, Var::Second);
    let diag: Vec<BivarPoly> = (0..n)
        .map(|i| {
            let c = (i as i64) * (l as i64 - i as i64);
            lam.sub(&BivarPoly::constant(lv, c))
        })
        .collect();
    // Only sub*sup products enter the tridiagonal recurrence; the pair at
    // position i multiplies to (i+1)(l-1-i) * v, so list the integer factor
    // on one band and v on the other.
    let sub: Vec<BivarPoly> = (0..n - 1)
        .map(|i| {
            let c = (i as i64 + 1) * (l as i64 - 1 - i as i64);
            BivarPoly::constant(lv, c)
        })
        .collect();
    let sup: Vec<BivarPoly> = (0..n - 1).map(|_| v.clone()).collect();
    let spec = TridiagSpec::new(lv, diag, sub, sup)?;
    let poly = tridiag_det(&spec);
    let lr = ("λ", "R");
    let repl = BivarPoly::var(lr, Var::Second).sub(&BivarPoly::var(lr, Var::First));
    let q = poly.substitute("v", &repl)?;
    Ok(SpectralCurve { l, poly, q })
}

/// The multiset of spectral values at zero coupling: `{ i(l-i) : 0 <= i < l }`,
/// sorted ascending (interior values occur twice).
pub fn mu_zero_roots(l: u32) -> Vec<f64> {
    let mut out: Vec<f64> = (0..l as i64).map(|i| (i * (l as i64 - i)) as f64).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Outcome of the exact structure checks on `Q(lambda, R)` that feed the
/// irreducibility argument for the curve.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub l: u32,
    /// coefficient of `lambda^l` is nonzero
    pub lambda_power_present: bool,
    /// coefficient of the pure `R` term is nonzero
    pub r_term_present: bool,
    /// no pure power `lambda^k` with `k < l` occurs (constant term included)
    pub no_low_lambda_powers: bool,
    /// the lower Newton hull is the single edge from `(0,1)` to `(l,0)`
    pub single_edge_hull: bool,
    /// vertices of the lower Newton hull, for reporting
    pub hull: Vec<(u32, u32)>,
    pub pass: bool,
}

/// Runs the four exact checks on `Q(lambda, R)`. Requires `l >= 2`; the
/// degree-1 case carries no content for this certificate.
pub fn newton_certificate(l: u32) -> Result<CertificateReport> {
    if l < 2 {
        return Err(Error::Domain(
            "the structure certificate is defined for l >= 2".into(),
        ));
    }
    let curve = spectral_polynomial(l)?;
    let q = &curve.q;
    let lambda_power_present = !q.coeff((l, 0)).is_zero();
    let r_term_present = !q.coeff((0, 1)).is_zero();
    let no_low_lambda_powers = (0..l).all(|k| q.coeff((k, 0)).is_zero());
    let diagram = newton_lower_hull(q);
    let single_edge_hull = diagram.is_single_edge((0, 1), (l, 0));
    let pass = lambda_power_present && r_term_present && no_low_lambda_powers && single_edge_hull;
    Ok(CertificateReport {
        l,
        lambda_power_present,
        r_term_present,
        no_low_lambda_powers,
        single_edge_hull,
        hull: diagram.lower_hull,
        pass,
    })
}

/// Re-expresses `P_l(lambda, v)` in the variables `(lambda, mu)` with
/// `v = mu^2` and returns its top weighted-homogeneous part (weight of `mu`
/// is 1, so the part of maximal `a + 2b`).
pub fn leading_form(l: u32) -> Result<BivarPoly> {
    let curve = spectral_polynomial(l)?;
    let lm = ("λ", "μ");
    let in_mu = BivarPoly::from_terms(
        lm,
        curve.poly.terms().map(|(&(a, b), c)| ((a, 2 * b), c.clone())),
    );
    let top = in_mu
        .terms()
        .map(|(&(a, b), _)| a + b)
        .max()
        .unwrap_or(0);
    Ok(BivarPoly::from_terms(
        lm,
        in_mu
            .terms()
            .filter(|(&(a, b), _)| a + b == top)
            .map(|(&e, c)| (e, c.clone())),
    ))
}

/// The product `prod_{k=0}^{l-1} (lambda - (l-1-2k) mu)`: the expected
/// factorization of the top part into `l` distinct linear directions.
pub fn leading_form_expected(l: u32) -> BivarPoly {
    let lm = ("λ", "μ");
    let lam = BivarPoly::var(lm, Var::First);
    let mu = BivarPoly::var(lm, Var::Second);
    let mut acc = BivarPoly::constant(lm, 1);
    for k in 0..l as i64 {
        let coef = l as i64 - 1 - 2 * k;
        acc = acc.mul(&lam.sub(&mu.scale(coef)));
    }
    acc
}

/// Exact equality check of [`leading_form`] against [`leading_form_expected`].
pub fn leading_form_check(l: u32) -> Result<bool> {
    Ok(leading_form(l)? == leading_form_expected(l))
}

/// Eigenvalue spectrum of `-H` at fixed coupling: the real points of the
/// curve `P_l(., mu^2)`.
///
/// `values` are sorted ascending at `f64` resolution; adjacent entries may
/// round to the same double when the true splitting is below one ulp.
/// `min_gap` is always a certified positive lower bound on the smallest
/// true gap: pairs that `f64` cannot resolve are separated in exact dyadic
/// arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSpectrum {
    pub mu: f64,
    pub values: Vec<f64>,
    pub min_gap: f64,
}

/// Eigenvalue count of the symmetric tridiagonal `(d, e2)` below `x`, in
/// floating point (inertia of the shifted pivots, with the usual guard
/// against vanishing pivots). Fast path for bisection; the exact dyadic
/// variant backs it up where certification matters.
fn count_below_f64(d: &[f64], e2: &[f64], x: f64) -> usize {
    let mut count = 0usize;
    let mut q = 1.0f64;
    for i in 0..d.len() {
        let mut val = d[i] - x - if i > 0 { e2[i - 1] / q } else { 0.0 };
        if val == 0.0 {
            val = -1e-300;
        }
        if val < 0.0 {
            count += 1;
        }
        q = if val.abs() < 1e-290 {
            if val < 0.0 { -1e-290 } else { 1e-290 }
        } else {
            val
        };
    }
    count
}

/// Certified eigenvalues of `-H` at coupling `mu != 0`.
///
/// The symmetric similarity image has diagonal `d[i] = i(l-i)` and squared
/// couplings `e2[i] = mu^2 (i+1)(l-1-i)`; roots are located by bisection on
/// eigenvalue counts. `tol` gates the relative residual
/// `|P_l(lambda_j, mu^2)|` against the evaluation scale of the polynomial.
pub fn eigenvalues_at(l: u32, mu: f64, tol: f64) -> Result<EigenSpectrum> {
    if l == 0 {
        return Err(Error::Domain("level l must be >= 1".into()));
    }
    if mu == 0.0 {
        return Err(Error::Domain(
            "eigenvalues_at requires mu != 0; at zero coupling use the exact root multiset".into(),
        ));
    }
    if !mu.is_finite() || !(tol > 0.0) {
        return Err(Error::Domain("mu must be finite and tol positive".into()));
    }
    let n = l as usize;
    let lf = l as f64;
    let d: Vec<f64> = (0..n).map(|i| (i as f64) * (lf - i as f64)).collect();
    let e2: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| mu * mu * (i as f64 + 1.0) * (lf - 1.0 - i as f64))
        .collect();
    let e: Vec<f64> = e2.iter().map(|x| x.sqrt()).collect();
    // Gershgorin interval padded so the endpoints are strictly outside the
    // spectra of the matrix and of every leading principal submatrix.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1] } else { 0.0 } + if i < n - 1 { e[i] } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    lo -= 1.0;
    hi += 1.0;
    // Bisection to machine accuracy per index.
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if count_below_f64(&d, &e2, m) <= j {
                a = m;
            } else {
                b = m;
            }
        }
        values.push(0.5 * (a + b));
    }
    values.sort_by(f64::total_cmp);

    // Residual gate against the exact characteristic polynomial.
    let curve = spectral_polynomial(l)?;
    let v = mu * mu;
    for &lam in &values {
        let res = curve.poly.eval_f64(lam, v).abs();
        let scale = curve.poly.eval_abs_f64(lam, v).max(1.0);
        if !(res < tol * scale) {
            return Err(Error::Numerical(format!(
                "eigenvalue residual {res:e} exceeds {tol:e} * scale {scale:e} at lambda = {lam}"
            )));
        }
    }

    // Gap certification: f64 gaps where trustworthy, exact dyadic
    // separation where not.
    let span = hi - lo;
    let close_threshold = 1e-8 * span.max(1.0);
    let mut min_gap = f64::INFINITY;
    let mut exact: Option<(Vec<Dyadic>, Vec<Dyadic>, Dyadic, Dyadic)> = None;
    for k in 1..n {
        let gf = values[k] - values[k - 1];
        if gf > close_threshold {
            min_gap = min_gap.min(gf);
            continue;
        }
        if exact.is_none() {
            let mu_dy = Dyadic::from_f64(mu)?;
            let mu2 = mu_dy.square();
            let d_dy: Vec<Dyadic> = (0..n)
                .map(|i| Dyadic::from_int(i as i64 * (l as i64 - i as i64)))
                .collect();
            let e2_dy: Vec<Dyadic> = (0..n - 1)
                .map(|i| mu2.mul_int((i as i64 + 1) * (l as i64 - 1 - i as i64)))
                .collect();
            exact = Some((d_dy, e2_dy, Dyadic::from_f64(lo)?, Dyadic::from_f64(hi)?));
        }
        let (d_dy, e2_dy, lo_dy, hi_dy) = exact.as_ref().unwrap();
        let gap = certified_gap(d_dy, e2_dy, k, lo_dy, hi_dy)?;
        let g = gap.to_f64();
        if !(g > 0.0) {
            return Err(Error::Numerical(format!(
                "certified gap between eigenvalues {} and {} rounds to zero",
                k - 1,
                k
            )));
        }
        min_gap = min_gap.min(g);
    }
    Ok(EigenSpectrum { mu, values, min_gap })
}

/// One distinguished parameter point attached to the `j`-th eigenvalue
/// branch at coupling `mu > 0` (1-based `j`, ascending eigenvalue order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimpleIntersectionPoint {
    pub j: u32,
    pub mu: f64,
    pub lambda_j: f64,
    #[serde(rename = "R_j")]
    pub r_j: f64,
    pub omega_j: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub s: u32,
}

/// The parity-matched winding index attached to branch `j` at level `l`:
/// `l - j + 1` for odd `j`, `l - j` for even `j`. Always `s ≡ l (mod 2)`.
pub fn s_index(l: u32, j: u32) -> u32 {
    if j % 2 == 1 {
        l - j + 1
    } else {
        l - j
    }
}

/// Computes the distinguished points for every branch `j = 1..l` at `mu > 0`:
/// `R_j = lambda_j + mu^2` (must be positive), `omega_j = 1/(2 sqrt(R_j))`,
/// `B = l*omega_j`, `A = 2*mu*omega_j`, and the winding index `s(j)`.
/// `omega_j` is strictly decreasing in `j`.
pub fn simple_intersections(l: u32, mu: f64) -> Result<Vec<SimpleIntersectionPoint>> {
    if !(mu > 0.0) {
        return Err(Error::Domain("simple_intersections requires mu > 0".into()));
    }
    let spec = eigenvalues_at(l, mu, 1e-9)?;
    let mut out = Vec::with_capacity(l as usize);
    for (idx, &lam) in spec.values.iter().enumerate() {
        let j = idx as u32 + 1;
        let r_j = lam + mu * mu;
        if !(r_j > 0.0) {
            return Err(Error::Inconsistent(format!(
                "R_{j} = {r_j} is not positive (lambda_{j} = {lam}, mu = {mu})"
            )));
        }
        let omega_j = 0.5 / r_j.sqrt();
        out.push(SimpleIntersectionPoint {
            j,
            mu,
            lambda_j: lam,
            r_j,
            omega_j,
            b: l as f64 * omega_j,
            a: 2.0 * mu * omega_j,
            s: s_index(l, j),
        });
    }
    for w in out.windows(2) {
        if !(w[0].omega_j > w[1].omega_j) {
            return Err(Error::Inconsistent(format!(
                "omega_j not strictly decreasing between j = {} and j = {}",
                w[0].j, w[1].j
            )));
        }
    }
    Ok(out)
}

/// A kernel vector of `H + lambda*Id`, i.e. the coefficients of the
/// polynomial solution `E(z) = sum a_k z^k` of the scalar equation, with
/// the residual of pushing `E` through the full scalar operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialSolution {
    pub coeffs: Vec<f64>,
    pub residual: f64,
}

/// Dense LU solve with partial pivoting; `m` is overwritten.
fn solve_dense(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let (piv, piv_val) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if piv_val == 0.0 {
            // exactly singular: nudge so inverse iteration can proceed
            m[col][col] = 1e-300;
        } else if piv != col {
            m.swap(piv, col);
            b.swap(piv, col);
        }
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Coefficients of `z^k`, `k = 0..l+1`, of the scalar operator applied to
/// `E = sum a_k z^k`:
/// `c_k = a_k (k(k-1) + (1-l)k + lambda) + mu (k+1) a_{k+1} + mu (l-k) a_{k-1}`.
fn operator_image(l: u32, lambda: f64, mu: f64, a: &[f64]) -> Vec<f64> {
    let lf = l as f64;
    let at = |k: i64| -> f64 {
        if k < 0 || k as usize >= a.len() {
            0.0
        } else {
            a[k as usize]
        }
    };
    (0..=l as i64 + 1)
        .map(|k| {
            let kf = k as f64;
            at(k) * (kf * (kf - 1.0) + (1.0 - lf) * kf + lambda)
                + mu * (kf + 1.0) * at(k + 1)
                + mu * (lf - kf) * at(k - 1)
        })
        .collect()
}

/// Solves for the polynomial solution at a point `(lambda, mu)` on the
/// spectral curve by inverse iteration on `H + lambda*Id`. The coefficient
/// vector is normalized to `max |a_k| = 1` with the largest entry positive.
///
/// Errors when `lambda` is not (numerically) a root of `P_l(., mu^2)`, when
/// iteration fails to produce a small operator residual, or when two
/// independent starting vectors converge to independent kernel directions
/// (the kernel must be one-dimensional for a simple eigenvalue).
pub fn polynomial_solution(l: u32, lambda: f64, mu: f64) -> Result<PolynomialSolution> {
    if l == 0 {
        return Err(Error::Domain("level l must be >= 1".into()));
    }
    if mu == 0.0 {
        return Err(Error::Domain("polynomial_solution requires mu != 0".into()));
    }
    let curve = spectral_polynomial(l)?;
    let v = mu * mu;
    let on_curve = curve.poly.eval_f64(lambda, v).abs();
    let scale = curve.poly.eval_abs_f64(lambda, v).max(1.0);
    if !(on_curve < 1e-6 * scale) {
        return Err(Error::Domain(format!(
            "(lambda, mu) = ({lambda}, {mu}) is not on the spectral curve: \
             |P_l| = {on_curve:e} vs scale {scale:e}"
        )));
    }
    let n = l as usize;
    let h = build_h_numeric(l, mu);
    let mat = || -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = h.diag[i] + lambda;
            if i + 1 < n {
                m[i][i + 1] = h.sup[i];
                m[i + 1][i] = h.sub[i];
            }
        }
        m
    };
    let norm_scale: f64 = 1.0 + lambda.abs() + (l as f64).powi(2) / 4.0 + 2.0 * mu.abs() * l as f64;
    let iterate = |start: Vec<f64>| -> Option<Vec<f64>> {
        let mut x = start;
        for _ in 0..16 {
            let y = solve_dense(mat(), x.clone())?;
            let max = y.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
            if !max.is_finite() || max == 0.0 {
                return None;
            }
            x = y.into_iter().map(|t| t / max).collect();
            let res = operator_image(l, lambda, mu, &x)
                .into_iter()
                .fold(0.0f64, |m, c| m.max(c.abs()));
            if res < 1e-11 * norm_scale {
                break;
            }
        }
        // deterministic sign: biggest-magnitude entry positive
        let lead = x
            .iter()
            .cloned()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        if lead < 0.0 {
            for t in &mut x {
                *t = -*t;
            }
        }
        Some(x)
    };
    let x = iterate((0..n).map(|i| 1.0 / (1.0 + i as f64)).collect())
        .ok_or_else(|| Error::Numerical("inverse iteration failed".into()))?;
    let residual = operator_image(l, lambda, mu, &x)
        .into_iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    if !(residual < 1e-8 * norm_scale) {
        return Err(Error::Numerical(format!(
            "operator residual {residual:e} too large (scale {norm_scale:e}); \
             lambda may not be an eigenvalue"
        )));
    }
    if n >= 2 {
        // second start, roughly orthogonal: alternating signs
        if let Some(y) = iterate((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()) {
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let nx: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let ny: f64 = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            let cos = (dot / (nx * ny)).abs();
            if cos < 0.99 {
                return Err(Error::Numerical(
                    "kernel is not one-dimensional numerically".into(),
                ));
            }
        }
    }
    Ok(PolynomialSolution { coeffs: x, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_operator_entries() {
        let h = build_h_numeric(2, 1.0);
        assert_eq!(h.diag, vec![0.0, -1.0]);
        assert_eq!(h.sup, vec![1.0]);
        assert_eq!(h.sub, vec![1.0]);
        let h = build_h_numeric(1, 5.0);
        assert_eq!(h.diag, vec![0.0]);
        assert!(h.sub.is_empty() && h.sup.is_empty());
        // l = 3, mu = 2: rows below the diagonal hold mu*(l-1-i)
        let h = build_h_numeric(3, 2.0);
        assert_eq!(h.diag, vec![0.0, -2.0, -2.0]);
        assert_eq!(h.sup, vec![2.0, 4.0]);
        assert_eq!(h.sub, vec![4.0, 2.0]);
    }

    #[test]
    fn characteristic_polynomials_small_levels() {
        assert_eq!(spectral_polynomial(1).unwrap().poly.to_string(), "1*λ^1");
        let c2 = spectral_polynomial(2).unwrap();
        assert_eq!(c2.poly.to_string(), "1*λ^2 + -1*λ^1 + -1*v^1");
        assert_eq!(c2.q.to_string(), "1*λ^2 + -1*R^1");
        // hand-expanded level 3: λ³ - 4λ² + 4λ - 4vλ + 4v
        let c3 = spectral_polynomial(3).unwrap();
        let lv = ("λ", "v");
        let expect = BivarPoly::from_terms(
            lv,
            [
                ((3, 0), 1i64),
                ((2, 0), -4),
                ((1, 0), 4),
                ((1, 1), -4),
                ((0, 1), 4),
            ]
            .map(|(e, c)| (e, c.into())),
        );
        assert_eq!(c3.poly, expect);
    }

    #[test]
    fn zero_coupling_roots() {
        assert_eq!(mu_zero_roots(3), vec![0.0, 2.0, 2.0]);
        assert_eq!(mu_zero_roots(2), vec![0.0, 1.0]);
        // P_l(λ, 0) really factors through these roots
        let c = spectral_polynomial(4).unwrap();
        for &r in &mu_zero_roots(4) {
            assert!(c.poly.eval_f64(r, 0.0).abs() < 1e-9);
        }
    }

    #[test]
    fn certificate_small_levels() {
        assert!(newton_certificate(1).is_err());
        let r = newton_certificate(2).unwrap();
        assert!(r.pass);
        assert_eq!(r.hull, vec![(0, 1), (2, 0)]);
        assert!(newton_certificate(3).unwrap().pass);
    }

    #[test]
    fn leading_form_small_levels() {
        // l = 2: top part λ² - μ²
        let top = leading_form(2).unwrap();
        let lm = ("λ", "μ");
        let expect = BivarPoly::monomial(lm, (2, 0), 1).sub(&BivarPoly::monomial(lm, (0, 2), 1));
        assert_eq!(top, expect);
        assert!(leading_form_check(1).unwrap());
        assert!(leading_form_check(5).unwrap());
    }

    #[test]
    fn eigenvalues_level_two_golden_ratio() {
        // roots of λ² - λ - 1
        let s = eigenvalues_at(2, 1.0, 1e-9).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s.values[0] - (1.0 - phi)).abs() < 1e-12);
        assert!((s.values[1] - phi).abs() < 1e-12);
        assert!((s.min_gap - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_reject_zero_coupling() {
        assert!(eigenvalues_at(3, 0.0, 1e-9).is_err());
    }

    #[test]
    fn eigenvalues_sub_ulp_splitting_is_certified() {
        // level 20 at weak coupling: several pairs tie in f64 yet the gap
        // lower bound must come back strictly positive.
        let s = eigenvalues_at(20, 0.1, 1e-9).unwrap();
        assert_eq!(s.values.len(), 20);
        for w in s.values.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert!(s.min_gap > 0.0, "min_gap = {:e}", s.min_gap);
        assert!(s.min_gap < 1e-20, "expected a tiny certified gap, got {:e}", s.min_gap);
    }

    #[test]
    fn intersection_points_level_one() {
        // λ_1 = 0 forces R = μ², ω = 1/(2μ), s = 1
        let pts = simple_intersections(1, 2.0).unwrap();
        assert_eq!(pts.len(), 1);
        let p = pts[0];
        assert!(p.lambda_j.abs() < 1e-12);
        assert!((p.r_j - 4.0).abs() < 1e-10);
        assert!((p.omega_j - 0.25).abs() < 1e-10);
        assert_eq!(p.s, 1);
        assert!((p.b - 0.25).abs() < 1e-10);
        assert!((p.a - 1.0).abs() < 1e-10);
    }

    #[test]
    fn winding_indices_level_four() {
        let pts = simple_intersections(4, 1.0).unwrap();
        let s: Vec<u32> = pts.iter().map(|p| p.s).collect();
        assert_eq!(s, vec![4, 2, 2, 0]);
    }

    #[test]
    fn winding_index_map_is_onto_with_right_multiplicities() {
        for l in 1..=20u32 {
            let mut counts = std::collections::BTreeMap::<u32, u32>::new();
            for j in 1..=l {
                *counts.entry(s_index(l, j)).or_default() += 1;
            }
            for (&s, &c) in &counts {
                assert_eq!(s % 2, l % 2);
                assert!(s <= l);
                if s == l {
                    assert_eq!(c, 1);
                } else if s == 0 {
                    assert_eq!(c, 1);
                    assert_eq!(l % 2, 0);
                } else {
                    assert_eq!(c, 2);
                }
            }
        }
    }

    #[test]
    fn polynomial_solution_level_one_is_constant() {
        let sol = polynomial_solution(1, 0.0, 1.0).unwrap();
        assert_eq!(sol.coeffs, vec![1.0]);
        assert_eq!(sol.residual, 0.0);
    }

    #[test]
    fn polynomial_solution_level_two_kernel_direction() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let sol = polynomial_solution(2, phi, 1.0).unwrap();
        // kernel of [[φ, 1], [1, φ-1]] is spanned by (μ, -λ) = (1, -φ),
        // normalized so the biggest entry is +1: (-1/φ, 1)
        assert!((sol.coeffs[1] - 1.0).abs() < 1e-12);
        assert!((sol.coeffs[0] + 1.0 / phi).abs() < 1e-10);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn polynomial_solution_rejects_off_curve_points() {
        assert!(polynomial_solution(2, 10.0, 1.0).is_err());
    }
}
