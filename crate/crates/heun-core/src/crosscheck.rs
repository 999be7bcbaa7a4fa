//! Consistency checks tying the algebraic half of the crate to the dynamical
//! half: distinguished spectral-curve points must land on phase-lock boundary
//! arcs with the predicted winding indices, branch signs, counts, symmetries
//! and frequency orderings. Each half acts as an oracle for the other —
//! algebra supplies locations, dynamics supplies signs — and any disagreement
//! is reported with the residuals that witnessed it.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dynamics::{self, boundary_point, integrate_lift, monodromy, JosephsonParams};
use crate::error::{Error, Result};
use crate::numeric::{aberth_roots, uni_to_c64_normalized};
use crate::poly::uni::{self, Uni};
use crate::spectral::{s_index, simple_intersections, spectral_polynomial};
use crate::sturm::{count_positive_roots, Dyadic};
use crate::Sign;

const TAU: f64 = std::f64::consts::TAU;

/// Monodromies farther than this from ±identity count as plain crossings
/// without further scrutiny; closer ones are re-examined under integration
/// refinement to separate genuinely tiny deviations from integration noise.
const IDENTITY_MARGIN: f64 = 1e-6;

/// A measurement that shrinks below this under refinement is treated as zero.
const IDENTITY_FLOOR: f64 = 1e-11;

/// When both starting angles return within tolerance, the sign is credited to
/// one of them only if its refined residual undercuts the other by this factor.
const DECISIVE_FACTOR: f64 = 20.0;

/// Dynamical measurement attached to one distinguished spectral point.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionRecord {
    /// 1-based eigenvalue branch index.
    pub j: u32,
    /// Winding index assigned by the parity formula.
    pub s_predicted: u32,
    /// Winding index read off the lift, when exactly one branch sign matched.
    pub s_measured: Option<u32>,
    /// Starting-angle sign of the matched branch (`+` for π/2, `-` for −π/2).
    pub sign_measured: Option<Sign>,
    /// Angle residual of the matched branch, or the closest miss when no
    /// unique match exists.
    pub max_residual: f64,
    /// Distance from the period map to ±identity; plain crossings stay
    /// away from zero.
    pub identity_distance: f64,
}

/// Aggregated outcome of the per-point lift measurements at one coupling.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub l: u32,
    pub mu: f64,
    pub tol: f64,
    pub points: Vec<IntersectionRecord>,
    pub pass: bool,
}

/// One-period lift displacement from `phi0`, measured on a descending ladder
/// of integration tolerances. Two adjacent levels must agree before a value
/// is trusted — stiff parameter sets can silently slip a whole turn at loose
/// tolerances, and the slip shows up as disagreement between levels. Returns
/// `None` when no two levels agree (the point is numerically unverifiable).
fn stable_displacement(params: &JosephsonParams, phi0: f64, tol: f64) -> Result<Option<f64>> {
    let agree = (0.1 * tol).max(5e-12);
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let itol = dynamics::inner_tol(tol);
    pairs.push((itol, (itol * 1e-2).max(1e-13)));
    if itol > 1e-12 {
        pairs.push((1e-12, 1e-13));
    }
    for (loose, tight) in pairs {
        let a = integrate_lift(params, phi0, TAU, loose)? - phi0;
        let b = integrate_lift(params, phi0, TAU, tight)? - phi0;
        if (a - b).abs() <= agree {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Distance of the period map from ±identity, with refinement: distances
/// above the margin are accepted as-is, while smaller ones are re-measured at
/// two tighter integration tolerances. A genuine deviation stabilizes across
/// the tight levels; integration noise keeps shrinking and reads as zero.
fn refined_identity_distance(params: &JosephsonParams, tol: f64) -> Result<f64> {
    let itol = dynamics::inner_tol(tol);
    let coarse = monodromy(params, itol)?.distance_to_identity();
    if coarse > IDENTITY_MARGIN {
        return Ok(coarse);
    }
    let t1 = (itol * 1e-2).max(1e-13);
    let t2 = (t1 * 1e-2).max(1e-13);
    let d1 = monodromy(params, t1)?.distance_to_identity();
    if t2 >= t1 {
        return Ok(if d1 >= IDENTITY_FLOOR { d1 } else { 0.0 });
    }
    let d2 = monodromy(params, t2)?.distance_to_identity();
    if d2 < IDENTITY_FLOOR || d2 < 0.5 * d1 {
        return Ok(0.0);
    }
    Ok(d2)
}

/// Lift measurement at a single distinguished point: runs both starting
/// angles, disambiguates, and packages the outcome. `target_s` is the winding
/// index the point is predicted to carry.
fn measure_point(params: &JosephsonParams, j: u32, target_s: u32, tol: f64) -> Result<IntersectionRecord> {
    let target = TAU * f64::from(target_s);
    let mut residuals = [f64::INFINITY; 2];
    let mut turns = [None::<i64>; 2];
    for (k, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
        if let Some(advance) = stable_displacement(params, sign.as_f64() * std::f64::consts::FRAC_PI_2, tol)? {
            residuals[k] = (advance - target).abs();
            turns[k] = Some((advance / TAU).round() as i64);
        }
    }
    let identity_distance = refined_identity_distance(params, tol)?;
    let matched: Vec<usize> = (0..2).filter(|&k| residuals[k] < tol).collect();
    let record = match matched.as_slice() {
        [k] => IntersectionRecord {
            j,
            s_predicted: target_s,
            s_measured: turns[*k].and_then(|t| u32::try_from(t).ok()),
            sign_measured: Some(if *k == 0 { Sign::Plus } else { Sign::Minus }),
            max_residual: residuals[*k],
            identity_distance,
        },
        [0, 1] => {
            // Both angles return within tolerance: either the map is so close
            // to ±identity that every orbit nearly closes, or one residual is
            // real and the other is noise. Credit a sign only when decisive;
            // otherwise keep the agreed winding with the sign left open.
            let (small, large) = if residuals[0] <= residuals[1] { (0, 1) } else { (1, 0) };
            let decisive = residuals[small] * DECISIVE_FACTOR < residuals[large];
            let agreed = turns[0] == turns[1];
            IntersectionRecord {
                j,
                s_predicted: target_s,
                s_measured: if decisive {
                    turns[small].and_then(|t| u32::try_from(t).ok())
                } else if agreed {
                    turns[0].and_then(|t| u32::try_from(t).ok())
                } else {
                    None
                },
                sign_measured: if decisive {
                    Some(if small == 0 { Sign::Plus } else { Sign::Minus })
                } else {
                    None
                },
                max_residual: if decisive {
                    residuals[small]
                } else {
                    residuals[0].max(residuals[1])
                },
                identity_distance,
            }
        }
        _ => IntersectionRecord {
            j,
            s_predicted: target_s,
            s_measured: None,
            sign_measured: None,
            max_residual: residuals[0].min(residuals[1]),
            identity_distance,
        },
    };
    Ok(record)
}

/// Whether a record confirms its prediction: measured winding equals the
/// predicted one within tolerance and the period map is not ±identity.
/// The sign may legitimately stay unresolved at near-identity points.
fn record_confirms(rec: &IntersectionRecord, tol: f64) -> bool {
    rec.s_measured == Some(rec.s_predicted)
        && rec.max_residual < tol
        && rec.identity_distance > 0.0
}

/// Runs the circle-map lift at every distinguished point of level `l` at
/// coupling `mu` and checks that each point returns advanced by the predicted
/// number of turns, within `tol` on angles, from exactly one of the starting
/// angles ±π/2 (up to integration resolution). The period map must also stay
/// clear of ±identity at each point.
pub fn verify_simple_intersections(l: u32, mu: f64, tol: f64) -> Result<CrossCheckReport> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!(
            "coupling must be positive and finite, got {mu}"
        )));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let pts = simple_intersections(l, mu)?;
    let mut points = Vec::with_capacity(pts.len());
    let mut pass = true;
    for pt in &pts {
        let params = JosephsonParams::new(pt.b, pt.a, pt.omega_j)?;
        let record = measure_point(&params, pt.j, pt.s, tol)?;
        pass &= record_confirms(&record, tol);
        points.push(record);
    }
    Ok(CrossCheckReport {
        l,
        mu,
        tol,
        points,
        pass,
    })
}

/// Exact integer-coefficient restriction of the level-`l` spectral polynomial
/// to the fixed-frequency line `λ + v = R`, with `R` the dyadic value of the
/// double `1/(4ω²)`. The result is a polynomial in `v` scaled by a positive
/// power of two, so its positive roots are exactly the couplings `μ = √v > 0`
/// where the line meets the curve.
fn fixed_frequency_section(l: u32, omega: f64) -> Result<Uni> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {omega}"
        )));
    }
    let r = Dyadic::from_f64(1.0 / (4.0 * omega * omega))?;
    let (num, exp) = r.parts();
    let denom: BigInt = BigInt::from(1) << exp;
    let curve = spectral_polynomial(l)?;
    // Substitute λ = (num − denom·v)/denom and clear denominators with
    // denom^l ≥ the largest power of λ present.
    let line: Uni = vec![num.clone(), -denom];
    let mut section: Uni = Vec::new();
    for (&(a, b), c) in curve.poly.terms() {
        debug_assert!(a <= l, "λ-degree of the spectral polynomial exceeds the level");
        let clear: BigInt = BigInt::from(1) << (exp * (l - a));
        let term = uni::scale(&uni::pow(&line, a as usize), &(c * clear));
        let mut shifted: Uni = vec![BigInt::from(0); b as usize];
        shifted.extend(term);
        section = uni::add(&section, &shifted);
    }
    Ok(section)
}

/// Checks that the fixed-frequency line at `omega` meets the level-`l`
/// spectral curve in exactly `l` positive couplings (root count taken
/// exactly, in integer arithmetic) and that the crossing at the largest
/// coupling dynamically carries winding index `l` — the top arc. Intended
/// for frequencies small enough that all `l` crossings exist.
pub fn verify_count(l: u32, omega: f64, tol: f64) -> Result<bool> {
    if l < 1 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let section = fixed_frequency_section(l, omega)?;
    if count_positive_roots(&section) != l as usize {
        return Ok(false);
    }
    // The parity formula places winding index l on branch j = 1 and nowhere
    // else; re-derive rather than assume.
    if (1..=l).filter(|&j| s_index(l, j) == l).count() != 1 {
        return Ok(false);
    }
    // The largest root in v belongs to the smallest eigenvalue branch. Locate
    // it numerically, then confirm branch 1 at that coupling reproduces the
    // requested frequency and the winding index l under the lift.
    let roots = aberth_roots(&uni_to_c64_normalized(&section))?;
    let mut v_max = f64::NEG_INFINITY;
    for z in roots {
        if z.im.abs() <= 1e-8 * (1.0 + z.re.abs()) && z.re > 0.0 {
            v_max = v_max.max(z.re);
        }
    }
    if !v_max.is_finite() {
        return Ok(false);
    }
    let mu_top = v_max.sqrt();
    let pts = simple_intersections(l, mu_top)?;
    let Some(top_pt) = pts.iter().find(|p| p.j == 1) else {
        return Ok(false);
    };
    if (top_pt.omega_j - omega).abs() > 1e-6 * (1.0 + omega) {
        return Ok(false);
    }
    let params = JosephsonParams::new(top_pt.b, top_pt.a, top_pt.omega_j)?;
    let record = measure_point(&params, top_pt.j, top_pt.s, tol)?;
    Ok(record.s_measured == Some(l) && record_confirms(&record, tol))
}

/// Checks the mirror symmetry of the boundary arcs under reversing the drive
/// amplitude: for even winding index the arc maps to itself, for odd winding
/// index the two signs interchange. Each sample is `(s, A, ω)` and both
/// starting signs are exercised.
pub fn verify_symmetries(samples: &[(u32, f64, f64)], tol: f64) -> Result<bool> {
    for &(s, a, omega) in samples {
        for sign in [Sign::Plus, Sign::Minus] {
            let here = boundary_point(s, sign, a, omega, tol)?;
            let mirror_sign = if s % 2 == 0 { sign } else { sign.flip() };
            let there = boundary_point(s, mirror_sign, -a, omega, tol)?;
            if (here.b - there.b).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks, at every coupling in the grid, that the distinguished frequencies
/// ω_j strictly decrease in the branch index and that the measured pairing
/// `j ↦ (s, sign)` is the same at every grid point. Signs that stay
/// unresolved at a particular coupling (near-identity period maps) act as
/// wildcards: every coupling where the sign does resolve must agree.
pub fn verify_ordering(l: u32, mu_grid: &[f64], tol: f64) -> Result<bool> {
    if mu_grid.is_empty() {
        return Err(Error::Domain("empty coupling grid".into()));
    }
    let mut signs: Vec<Option<Sign>> = vec![None; l as usize];
    let mut windings: Vec<Option<u32>> = vec![None; l as usize];
    for &mu in mu_grid {
        let pts = simple_intersections(l, mu)?;
        for w in pts.windows(2) {
            if !(w[0].omega_j > w[1].omega_j) {
                return Ok(false);
            }
        }
        let report = verify_simple_intersections(l, mu, tol)?;
        if !report.pass {
            return Ok(false);
        }
        for rec in &report.points {
            let slot = (rec.j - 1) as usize;
            match (windings[slot], rec.s_measured) {
                (None, got) => windings[slot] = got,
                (Some(first), Some(got)) if first != got => return Ok(false),
                _ => {}
            }
            match (signs[slot], rec.sign_measured) {
                (None, got) => signs[slot] = got,
                (Some(first), Some(got)) if first != got => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_single_point_matches_winding_one() {
        for mu in [0.5, 1.5] {
            let rep = verify_simple_intersections(1, mu, 1e-6).unwrap();
            assert!(rep.pass, "level 1 at coupling {mu} failed: {rep:?}");
            assert_eq!(rep.points.len(), 1);
            let p = &rep.points[0];
            assert_eq!(p.s_predicted, 1);
            assert_eq!(p.s_measured, Some(1));
            assert!(p.identity_distance > IDENTITY_MARGIN);
        }
    }

    #[test]
    fn level_two_branch_signs_at_the_reference_frequency() {
        // At frequency 0.3 the two level-2 couplings are (1 ∓ 0.6)^{1/2}/0.6;
        // the smaller one sits on the ascending-from-+π/2 zeroth arc and the
        // larger one on the descending-from−π/2 arc of winding index 2.
        let omega: f64 = 0.3;
        let mu_plus = (1.0 - 2.0 * omega).sqrt() / (2.0 * omega);
        let mu_minus = (1.0 + 2.0 * omega).sqrt() / (2.0 * omega);

        let rep = verify_simple_intersections(2, mu_plus, 1e-6).unwrap();
        assert!(rep.pass, "report at smaller coupling failed: {rep:?}");
        let here = rep.points.iter().find(|p| p.j == 2).unwrap();
        assert_eq!(here.s_predicted, 0);
        assert_eq!(here.sign_measured, Some(Sign::Plus));

        let rep = verify_simple_intersections(2, mu_minus, 1e-6).unwrap();
        assert!(rep.pass, "report at larger coupling failed: {rep:?}");
        let here = rep.points.iter().find(|p| p.j == 1).unwrap();
        assert_eq!(here.s_predicted, 2);
        assert_eq!(here.sign_measured, Some(Sign::Minus));
    }

    #[test]
    fn reference_frequency_couplings_sit_on_the_frequency_line() {
        // The same two couplings, re-derived: branch 2 at the smaller one and
        // branch 1 at the larger one must both report frequency 0.3.
        let omega: f64 = 0.3;
        let mu_plus = (1.0 - 2.0 * omega).sqrt() / (2.0 * omega);
        let mu_minus = (1.0 + 2.0 * omega).sqrt() / (2.0 * omega);
        let pts = simple_intersections(2, mu_plus).unwrap();
        assert!((pts[1].omega_j - omega).abs() < 1e-9);
        let pts = simple_intersections(2, mu_minus).unwrap();
        assert!((pts[0].omega_j - omega).abs() < 1e-9);
    }

    #[test]
    fn fixed_frequency_section_is_exact_for_unit_line() {
        // At ω = 0.5 the line value R = 1 is exactly dyadic, and the level-2
        // section (1−v)² − (1−v) − v = v² − 2v has coefficients [0, −2, 1].
        let section = fixed_frequency_section(2, 0.5).unwrap();
        let expected: Uni = vec![BigInt::from(0), BigInt::from(-2), BigInt::from(1)];
        assert_eq!(section, expected);
        assert_eq!(count_positive_roots(&section), 1);
    }

    #[test]
    fn exact_root_count_matches_level() {
        assert!(verify_count(1, 0.2, 1e-6).unwrap());
        assert!(verify_count(2, 0.3, 1e-6).unwrap());
    }

    #[test]
    fn too_large_frequency_loses_crossings() {
        // At ω = 0.5 the level-2 line only meets one positive coupling, so
        // the count check must report failure rather than error.
        assert!(!verify_count(2, 0.5, 1e-6).unwrap());
    }

    #[test]
    fn boundary_symmetry_under_amplitude_reversal() {
        assert!(verify_symmetries(&[(0, 0.5, 1.0), (1, 0.5, 1.0)], 1e-6).unwrap());
    }

    #[test]
    fn frequency_ordering_and_stable_pairing() {
        assert!(verify_ordering(3, &[0.5, 1.0, 2.0], 1e-6).unwrap());
        assert!(verify_ordering(1, &[0.7], 1e-6).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(verify_simple_intersections(2, -1.0, 1e-6).is_err());
        assert!(verify_simple_intersections(2, 1.0, 0.0).is_err());
        assert!(verify_count(0, 0.2, 1e-6).is_err());
        assert!(verify_count(2, 0.0, 1e-6).is_err());
        assert!(verify_ordering(2, &[], 1e-6).is_err());
    }
}
