//! The overdamped-junction torus flow and its phase-lock structure.
//!
//! The scalar lift equation is `φ' = (B − sin φ + A cos τ) / ω` on the
//! `(τ, φ)` torus. Alongside it we integrate the real 2×2 linear system
//!
//! ```text
//! p' = −p/(2ω) + (v/2) q        v(τ) = (B + A cos τ)/ω
//! q' = −(v/2) p + q/(2ω)
//! ```
//!
//! whose projectivization reproduces the flow on angles through
//! `(p, q) = (sin(φ/2), cos(φ/2))`: the time-`2π` fundamental matrix is a
//! unimodular monodromy acting on the circle as a Möbius map, and the scalar
//! period map is its double cover. Rotation numbers combine an exact
//! fractional part read off the monodromy's conjugacy class with an integer
//! part pinned down by a short lift integration whose deviation from the true
//! rotation number is provably below 1/4 after four periods.

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions};
use crate::Sign;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// Normalizes an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Parameters of the junction flow: abscissa `B`, ordinate `A`, frequency
/// `ω > 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JosephsonParams {
    pub b: f64,
    pub a: f64,
    pub omega: f64,
}

impl JosephsonParams {
    pub fn new(b: f64, a: f64, omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
        }
        if !b.is_finite() || !a.is_finite() {
            return Err(Error::Domain(format!("parameters must be finite, got B={b}, A={a}")));
        }
        Ok(JosephsonParams { b, a, omega })
    }

    /// `l = B/ω`, the level of the associated algebraic family.
    pub fn level(&self) -> f64 {
        self.b / self.omega
    }

    /// `μ = A/(2ω)`, the coupling of the associated algebraic family.
    pub fn coupling(&self) -> f64 {
        self.a / (2.0 * self.omega)
    }

    /// `r = 1/(2ω)`.
    pub fn r_coord(&self) -> f64 {
        1.0 / (2.0 * self.omega)
    }

    /// `λ = r² − μ²`.
    pub fn lambda(&self) -> f64 {
        let r = self.r_coord();
        let mu = self.coupling();
        r * r - mu * mu
    }
}

fn ode_opts(p: &JosephsonParams, tol: f64) -> OdeOptions {
    OdeOptions {
        rtol: tol,
        atol: tol,
        // The sine term is steep for small ω; never step over a quarter of
        // that time scale, nor over a coarse fraction of the forcing period.
        h_max: (0.25 * p.omega).min(0.5),
        max_steps: 50_000_000,
    }
}

/// Clamps a user tolerance into the range where the integrator runs two
/// orders of magnitude tighter than the requested matching accuracy.
pub(crate) fn inner_tol(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-13, 1e-6)
}

// ---------------------------------------------------------------------------
// Lift and monodromy integration
// ---------------------------------------------------------------------------

/// Value `φ(τ_end)` of the lift through `φ(0) = φ0`, without any mod-2π
/// wrapping. Deterministic for fixed inputs.
pub fn integrate_lift(p: &JosephsonParams, phi0: f64, tau_end: f64, tol: f64) -> Result<f64> {
    if tau_end < 0.0 {
        return Err(Error::Domain("lift integration runs forward in τ only".into()));
    }
    let (b, a, omega) = (p.b, p.a, p.omega);
    let mut rhs = |tau: f64, y: &[f64; 1]| [(b - y[0].sin() + a * tau.cos()) / omega];
    let y = integrate(&mut rhs, 0.0, [phi0], tau_end, &ode_opts(p, tol))?;
    Ok(y[0])
}

/// Conjugacy class of a unimodular 2×2 monodromy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MonodromyClass {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
}

/// `±Id` both act trivially on the circle, so "identity" means distance below
/// this to either of them; "parabolic" means trace at `±2` within the same
/// tolerance without being the identity.
const CLASS_TOL: f64 = 1e-8;

/// The time-`2π` fundamental matrix of the linear system, normalized to
/// determinant one, together with its trace and conjugacy class. Acts on
/// angles as the double cover of its projective action.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MobiusMonodromy {
    /// Row-major matrix acting on column vectors `(p, q)`.
    pub m: [[f64; 2]; 2],
    pub trace: f64,
    pub class: MonodromyClass,
}

impl MobiusMonodromy {
    pub fn from_matrix(raw: [[f64; 2]; 2]) -> Result<Self> {
        let mut scale = 0.0f64;
        for row in &raw {
            for &entry in row {
                if !entry.is_finite() {
                    return Err(Error::Numerical(format!(
                        "monodromy entry {entry} is not finite"
                    )));
                }
                scale = scale.max(entry.abs());
            }
        }
        let det = raw[0][0] * raw[1][1] - raw[0][1] * raw[1][0];
        // Rounding-error ceiling for the determinant product; below it the
        // computed value carries no information.
        let det_noise = 8.0 * f64::EPSILON * scale * scale;
        let (m, trace) = if det.is_finite() && det > det_noise {
            let s = det.sqrt();
            let m = [[raw[0][0] / s, raw[0][1] / s], [raw[1][0] / s, raw[1][1] / s]];
            (m, m[0][0] + m[1][1])
        } else if scale >= 1e6 {
            // The flow has zero trace, so the true determinant is exactly 1;
            // once the entries grow this large the determinant product is
            // dominated by cancellation noise. Keep the raw entries (the
            // circle action ignores overall scale, and with unit determinant
            // the raw trace is already the normalized one). Below this scale
            // a true unit determinant always clears the noise ceiling, so
            // reaching here with moderate entries means the integration
            // itself broke.
            (raw, raw[0][0] + raw[1][1])
        } else {
            return Err(Error::Numerical(format!(
                "monodromy determinant {det} is not a positive finite number"
            )));
        };
        let dist_id = {
            let to = |sig: f64| {
                (m[0][0] - sig)
                    .abs()
                    .max(m[0][1].abs())
                    .max(m[1][0].abs())
                    .max((m[1][1] - sig).abs())
            };
            to(1.0).min(to(-1.0))
        };
        let class = if dist_id < CLASS_TOL {
            MonodromyClass::Identity
        } else if (trace.abs() - 2.0).abs() < CLASS_TOL {
            MonodromyClass::Parabolic
        } else if trace.abs() < 2.0 {
            MonodromyClass::Elliptic
        } else {
            MonodromyClass::Hyperbolic
        };
        Ok(MobiusMonodromy { m, trace, class })
    }

    /// Max-norm distance to the nearer of `±Id` (both act trivially).
    pub fn distance_to_identity(&self) -> f64 {
        let to = |sig: f64| {
            (self.m[0][0] - sig)
                .abs()
                .max(self.m[0][1].abs())
                .max(self.m[1][0].abs())
                .max((self.m[1][1] - sig).abs())
        };
        to(1.0).min(to(-1.0))
    }

    /// Image of the angle `φ` under the induced circle map, in `(−π, π]`.
    pub fn apply_angle(&self, phi: f64) -> f64 {
        let half = 0.5 * phi;
        let (p, q) = (half.sin(), half.cos());
        let pn = self.m[0][0] * p + self.m[0][1] * q;
        let qn = self.m[1][0] * p + self.m[1][1] * q;
        wrap_angle(2.0 * pn.atan2(qn))
    }

    /// Fixed angles of the circle map: one for a parabolic map, two for a
    /// hyperbolic one (attracting first), empty for the identity (everything
    /// is fixed) and for elliptic maps (nothing is).
    pub fn fixed_angles(&self) -> Vec<f64> {
        let half_tr = 0.5 * self.trace;
        let eigs = match self.class {
            MonodromyClass::Identity | MonodromyClass::Elliptic => return Vec::new(),
            MonodromyClass::Parabolic => vec![1.0f64.copysign(half_tr)],
            MonodromyClass::Hyperbolic => {
                let disc = (half_tr * half_tr - 1.0).max(0.0).sqrt();
                vec![half_tr + disc.copysign(half_tr), half_tr - disc.copysign(half_tr)]
            }
        };
        let mut out = Vec::new();
        for lam in eigs {
            // Eigenvector of [[a−λ, b], [c, d−λ]]: take the larger row.
            let (a, b) = (self.m[0][0] - lam, self.m[0][1]);
            let (c, d) = (self.m[1][0], self.m[1][1] - lam);
            let (p, q) = if a.hypot(b) >= c.hypot(d) { (b, -a) } else { (d, -c) };
            out.push(wrap_angle(2.0 * p.atan2(q)));
        }
        out
    }
}

/// Fundamental matrix of the 2×2 linear system over one forcing period.
pub fn monodromy(p: &JosephsonParams, tol: f64) -> Result<MobiusMonodromy> {
    let (level, mu, omega) = (p.level(), p.coupling(), p.omega);
    let inv2w = 1.0 / (2.0 * omega);
    // State: the two matrix columns, (y0, y1) and (y2, y3).
    let mut rhs = |tau: f64, y: &[f64; 4]| {
        let hv = 0.5 * (level + 2.0 * mu * tau.cos());
        [
            -inv2w * y[0] + hv * y[1],
            -hv * y[0] + inv2w * y[1],
            -inv2w * y[2] + hv * y[3],
            -hv * y[2] + inv2w * y[3],
        ]
    };
    let y = integrate(&mut rhs, 0.0, [1.0, 0.0, 0.0, 1.0], TAU, &ode_opts(p, tol))?;
    MobiusMonodromy::from_matrix([[y[0], y[2]], [y[1], y[3]]])
}

/// Nonlinear period-map value `h(φ0)` (reduced to `(−π, π]`) together with
/// the monodromy, cross-checked against each other: the Möbius action must
/// reproduce the directly integrated map at eight sample angles within
/// `10·tol`, or an error is returned flagging a derivation or integration
/// bug.
pub fn poincare_map(p: &JosephsonParams, phi0: f64, tol: f64) -> Result<(f64, MobiusMonodromy)> {
    let itol = inner_tol(tol);
    let mono = monodromy(p, itol)?;
    let mut worst = 0.0f64;
    for k in 0..8 {
        let phi = k as f64 * PI / 4.0;
        let direct = integrate_lift(p, phi, TAU, itol)?;
        let dev = wrap_angle(direct - mono.apply_angle(phi)).abs();
        worst = worst.max(dev);
    }
    if worst > 10.0 * tol {
        return Err(Error::Inconsistent(format!(
            "Möbius action deviates from the integrated period map by {worst:.3e} \
             (allowed {:.3e}) at B={}, A={}, ω={}",
            10.0 * tol,
            p.b,
            p.a,
            p.omega
        )));
    }
    let value = wrap_angle(integrate_lift(p, phi0, TAU, itol)?);
    Ok((value, mono))
}

// ---------------------------------------------------------------------------
// Rotation number
// ---------------------------------------------------------------------------

/// A computed rotation number with the number of forcing periods integrated
/// and a two-tolerance consistency estimate of the error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RotationNumberResult {
    pub rho: f64,
    pub periods_used: u32,
    pub error_estimate: f64,
}

/// Number of forcing periods in the integer-resolving lift: the raw average
/// over `K` periods deviates from the true rotation number by strictly less
/// than `1/K` (the displacement of a circle-map lift varies by less than one
/// turn), so `K = 4` leaves margin 1/4, ample to choose between candidates
/// spaced a full unit apart.
const LIFT_PERIODS: u32 = 4;

fn rotation_once(p: &JosephsonParams, ode_tol: f64) -> Result<f64> {
    let mono = monodromy(p, ode_tol)?;
    let tr = mono.trace;
    // Fractional part (mod 1) from the conjugacy class: an elliptic matrix
    // advances the projective circle by its rotation angle per period; maps
    // with |trace| ≥ 2 have fixed points, so their rotation number is an
    // integer.
    let frac = if tr.abs() < 2.0 {
        let beta = (tr / 2.0).clamp(-1.0, 1.0).acos();
        let signed = if mono.m[0][1] - mono.m[1][0] >= 0.0 { beta } else { -beta };
        signed / PI
    } else {
        0.0
    };
    let phi_end = integrate_lift(p, 0.0, TAU * LIFT_PERIODS as f64, ode_tol)?;
    let estimate = phi_end / (TAU * LIFT_PERIODS as f64);
    let n = (estimate - frac).round();
    Ok(n + frac)
}

/// Rotation number `ρ = lim φ(2πk)/(2πk)` of the flow.
///
/// `ρ(0, 0, ω)` is exactly zero. Inside phase-lock plateaus the result is an
/// exact integer (the monodromy trace leaves the elliptic band). The error
/// estimate is the difference between two runs at tolerances a decade apart
/// plus the inner tolerance itself; the tolerance ladder descends until the
/// estimate meets `tol` or the ladder bottoms out, in which case the achieved
/// estimate is reported.
pub fn rotation_number(p: &JosephsonParams, tol: f64) -> Result<RotationNumberResult> {
    if p.b == 0.0 && p.a == 0.0 {
        return Ok(RotationNumberResult { rho: 0.0, periods_used: 0, error_estimate: 0.0 });
    }
    let tol = tol.clamp(1e-12, 0.1);
    let mut ode_tol = inner_tol(tol);
    let mut periods = 0u32;
    let mut best: Option<RotationNumberResult> = None;
    for _ in 0..3 {
        let coarse = rotation_once(p, ode_tol)?;
        let fine = rotation_once(p, ode_tol * 0.1)?;
        periods += 2 * (1 + LIFT_PERIODS);
        let err = (coarse - fine).abs() + ode_tol;
        let result = RotationNumberResult { rho: fine, periods_used: periods, error_estimate: err };
        if err < tol {
            return Ok(result);
        }
        if best.map_or(true, |b| err < b.error_estimate) {
            best = Some(result);
        }
        if ode_tol <= 1.1e-13 {
            break;
        }
        ode_tol = (ode_tol * 1e-2).max(1e-13);
    }
    Ok(best.expect("at least one rotation-number attempt"))
}

// ---------------------------------------------------------------------------
// Phase-lock boundaries, growth points, constrictions
// ---------------------------------------------------------------------------

/// A solved point of a phase-lock boundary arc: at `B`, the lift through
/// `φ0 = sign·π/2` returns `φ0 + 2πs` after one period, within `residual`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryPoint {
    pub s: u32,
    pub sign: Sign,
    #[serde(rename = "A")]
    pub a: f64,
    pub omega: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub residual: f64,
}

/// Solves for the abscissa of the boundary arc `(s, sign)` at ordinate `A` by
/// bisection on `g(B) = φ(2π; φ0, B) − φ0 − 2πs` with `φ0 = sign·π/2`, which
/// is strictly increasing in `B` (the lift grows monotonically with `B`).
/// The primary search window sits around `B ≈ sω`; it is widened once (to
/// include negative abscissas, where the descending arcs of the zeroth area
/// live) before giving up.
pub fn boundary_point(s: u32, sign: Sign, a: f64, omega: f64, tol: f64) -> Result<BoundaryPoint> {
    let tol = tol.clamp(1e-12, 1e-2);
    let itol = inner_tol(tol);
    let phi0 = sign.as_f64() * PI / 2.0;
    let target = phi0 + TAU * s as f64;
    let g = |b: f64| -> Result<f64> {
        let p = JosephsonParams::new(b, a, omega)?;
        Ok(integrate_lift(&p, phi0, TAU, itol)? - target)
    };
    let s_f = s as f64;
    let apex = (s_f * s_f * omega * omega + 1.0).sqrt();
    let mut lo = (s_f * omega - 3.0).max(0.0);
    let mut hi = apex + 3.0 + a.abs();
    let (mut glo, mut ghi) = (g(lo)?, g(hi)?);
    if !(glo <= 0.0 && ghi >= 0.0) {
        lo = -(apex + 3.0 + a.abs());
        hi = apex + 6.0 + 2.0 * a.abs();
        glo = g(lo)?;
        ghi = g(hi)?;
        if !(glo <= 0.0 && ghi >= 0.0) {
            return Err(Error::Domain(format!(
                "no bracket for boundary arc s={s} sign={sign} at A={a}, ω={omega}: \
                 g({lo}) = {glo:.3e}, g({hi}) = {ghi:.3e}"
            )));
        }
    }
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
    }
    let b = 0.5 * (lo + hi);
    let residual = g(b)?.abs();
    Ok(BoundaryPoint { s, sign, a, omega, b, residual })
}

/// Abscissa `√(s²ω² + 1)` of the point where the `s`-th phase-lock area
/// touches the zero-ordinate axis with positive rotation number `s`.
pub fn growth_point(s: u32, omega: f64) -> Result<f64> {
    if s == 0 {
        return Err(Error::Domain("growth points are indexed by s ≥ 1".into()));
    }
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    let s = s as f64;
    Ok((s * s * omega * omega + 1.0).sqrt())
}

/// A parameter point on the axis `B = sω` where the period map is the
/// identity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constriction {
    pub s: u32,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    /// Final max-norm distance of the monodromy to `±Id`.
    pub identity_distance: f64,
}

/// Scans the axis `B = sω` over the given ordinate range for points with
/// identity monodromy: local minima of the distance to `±Id` on a uniform
/// grid are refined by ternary search, then validated (period map fixes eight
/// sampled angles within `tol`, and the rotation number equals `s`). An empty
/// result is a valid outcome.
pub fn constriction_search(
    s: u32,
    omega: f64,
    a_range: (f64, f64),
    n_scan: usize,
    tol: f64,
) -> Result<Vec<Constriction>> {
    if !(a_range.1 > a_range.0) {
        return Err(Error::Domain("ordinate range must be nondegenerate".into()));
    }
    let n_scan = n_scan.max(8);
    let tol = tol.clamp(1e-10, 1e-2);
    let itol = inner_tol(tol);
    let b = s as f64 * omega;
    let dist_at = |a: f64| -> Result<f64> {
        let p = JosephsonParams::new(b, a, omega)?;
        Ok(monodromy(&p, itol)?.distance_to_identity())
    };
    let grid: Vec<f64> = (0..=n_scan)
        .map(|i| a_range.0 + (a_range.1 - a_range.0) * i as f64 / n_scan as f64)
        .collect();
    let dists = grid
        .par_iter()
        .map(|&a| dist_at(a))
        .collect::<Result<Vec<f64>>>()?;
    let mut hits: Vec<Constriction> = Vec::new();
    for i in 1..n_scan {
        if !(dists[i] <= dists[i - 1] && dists[i] <= dists[i + 1] && dists[i] < 1.0) {
            continue;
        }
        // Ternary refinement of the V-shaped distance minimum.
        let (mut lo, mut hi) = (grid[i - 1], grid[i + 1]);
        for _ in 0..120 {
            if hi - lo < 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if dist_at(m1)? <= dist_at(m2)? {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let a_hit = 0.5 * (lo + hi);
        let d_hit = dist_at(a_hit)?;
        if d_hit > 1e-6 {
            continue;
        }
        // Validation: the period map must fix eight sampled angles, and the
        // rotation number must equal s.
        let p = JosephsonParams::new(b, a_hit, omega)?;
        let mut fixed = true;
        for k in 0..8 {
            let phi = k as f64 * PI / 4.0;
            let back = integrate_lift(&p, phi, TAU, itol)?;
            // The lift of the identity return differs from φ by a multiple
            // of 2π; compare on the circle.
            if wrap_angle(back - phi).abs() > tol {
                fixed = false;
                break;
            }
        }
        if !fixed {
            continue;
        }
        let rho = rotation_number(&p, tol)?;
        if (rho.rho - s as f64).abs() > tol.max(1e-9) {
            continue;
        }
        if hits.iter().all(|h| (h.a - a_hit).abs() > 1e-6) {
            hits.push(Constriction { s, b, a: a_hit, identity_distance: d_hit });
        }
    }
    Ok(hits)
}

// ---------------------------------------------------------------------------
// Portraits
// ---------------------------------------------------------------------------

/// A row-major raster of rotation numbers over a parameter rectangle: entry
/// `iy * nx + ix` holds `ρ` at `(B_ix, A_iy)`, with both axes linearly spaced
/// including endpoints.
#[derive(Debug, Clone, Serialize)]
pub struct PortraitRaster {
    pub omega: f64,
    pub b_range: (f64, f64),
    pub a_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub rho: Vec<f64>,
}

impl PortraitRaster {
    pub fn b_at(&self, ix: usize) -> f64 {
        lerp(self.b_range, ix, self.nx)
    }

    pub fn a_at(&self, iy: usize) -> f64 {
        lerp(self.a_range, iy, self.ny)
    }
}

fn lerp(range: (f64, f64), i: usize, n: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Computes the rotation-number raster, cell-parallel and deterministic: the
/// result is bitwise independent of the worker count because every cell is a
/// pure function of its own parameters and results are assembled in index
/// order.
pub fn portrait_scan(
    omega: f64,
    b_range: (f64, f64),
    a_range: (f64, f64),
    nx: usize,
    ny: usize,
    tol: f64,
) -> Result<PortraitRaster> {
    if nx < 2 || ny < 2 {
        return Err(Error::Domain("raster needs at least 2 samples per axis".into()));
    }
    let rho = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (iy, ix) = (idx / nx, idx % nx);
            let p = JosephsonParams::new(lerp(b_range, ix, nx), lerp(a_range, iy, ny), omega)?;
            Ok(rotation_number(&p, tol)?.rho)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(PortraitRaster { omega, b_range, a_range, nx, ny, rho })
}

// ---------------------------------------------------------------------------
