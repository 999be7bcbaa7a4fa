//! Adaptive explicit Runge–Kutta integration for small non-stiff systems.
//!
//! The scheme is the Dormand–Prince 5(4) embedded pair with the
//! first-same-as-last property and proportional–integral step-size control.
//! States are fixed-size `[f64; N]` arrays, so the torus flow (`N = 1`) and
//! the 2×2 monodromy system (`N = 5`, flow plus matrix columns) share one
//! code path without allocation in the inner loop.

use crate::error::{Error, Result};

/// Integration controls. `rtol`/`atol` weigh the per-step error estimate,
/// `h_max` caps the step (important when a forcing period must be resolved),
/// and `max_steps` bounds the total accepted-plus-rejected step count.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: u64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-9, atol: 1e-9, h_max: f64::INFINITY, max_steps: 50_000_000 }
    }
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, parts: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (w, k) in parts {
            acc += w * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Starting step size from the scaled norms of the state, the derivative, and
/// a trial Euler step (the standard automatic selection for a fifth-order
/// method).
fn initial_step<const N: usize>(
    rhs: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    opt: &OdeOptions,
) -> f64 {
    let sc = |y: &[f64; N], i: usize| opt.atol + opt.rtol * y[i].abs();
    let norm = |v: &[f64; N], y: &[f64; N]| {
        let mut s = 0.0;
        for i in 0..N {
            let w = v[i] / sc(y, i);
            s += w * w;
        }
        (s / N as f64).sqrt()
    };
    let d0 = norm(y0, y0);
    let d1 = norm(f0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = combine(y0, h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = norm(&diff, y0) / h0;
    let d_max = d1.max(d2);
    let h1 = if d_max <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d_max).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opt.h_max)
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1 ≥ t0` and returns `y(t1)`.
///
/// Deterministic for fixed inputs. Errors on step-size underflow (the error
/// controller cannot meet the tolerance with a representable step) and on
/// exceeding `max_steps`.
pub fn integrate<const N: usize>(
    rhs: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opt: &OdeOptions,
) -> Result<[f64; N]> {
    if !(t1 >= t0) {
        return Err(Error::Domain(format!("integration span [{t0}, {t1}] is not forward")));
    }
    if t1 == t0 {
        return Ok(y0);
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(rhs, t0, &y, &k1, opt).min(t1 - t0);
    let mut err_prev: f64 = 1e-4;
    let mut just_rejected = false;
    let mut steps: u64 = 0;
    while t < t1 {
        steps += 1;
        if steps > opt.max_steps {
            return Err(Error::Numerical(format!(
                "integration exceeded {} steps before reaching {t1}",
                opt.max_steps
            )));
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "step size underflow at t = {t} (h = {h:.3e})"
            )));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = combine(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = rhs(t + h, &y_new);
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                    + E7 * k7[i]);
            let sc = opt.atol + opt.rtol * y[i].abs().max(y_new[i].abs());
            let w = e / sc;
            err_sq += w * w;
        }
        let err = (err_sq / N as f64).sqrt();
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7; // first-same-as-last
            let fac_max = if just_rejected { 1.0 } else { 4.0 };
            let fac = if err == 0.0 {
                fac_max
            } else {
                (0.9 * err.powf(-0.17) * err_prev.powf(0.08)).clamp(0.2, fac_max)
            };
            err_prev = err.max(1e-10);
            h = (h * fac).min(opt.h_max);
            just_rejected = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            just_rejected = true;
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(tol: f64) -> OdeOptions {
        OdeOptions { rtol: tol, atol: tol, ..OdeOptions::default() }
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let y = integrate(&mut |_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 1.0, &opts(1e-10))
            .unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-9, "got {}", y[0]);
    }

    #[test]
    fn harmonic_oscillator_closes_one_turn() {
        let tau = 2.0 * std::f64::consts::PI;
        let y = integrate(
            &mut |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            tau,
            &opts(1e-11),
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9, "got {y:?}");
    }

    #[test]
    fn forced_quadrature_tracks_tolerance() {
        // y' = cos t over [0, π/2] has exact solution sin t.
        for tol in [1e-6, 1e-9, 1e-12] {
            let y = integrate(
                &mut |t: f64, _: &[f64; 1]| [t.cos()],
                0.0,
                [0.0],
                std::f64::consts::FRAC_PI_2,
                &opts(tol),
            )
            .unwrap();
            assert!((y[0] - 1.0).abs() < 1e3 * tol, "tol={tol} err={}", (y[0] - 1.0).abs());
        }
    }

    #[test]
    fn two_tolerances_agree() {
        let run = |tol: f64| {
            integrate(
                &mut |t: f64, y: &[f64; 1]| [(y[0] * t).sin() + 0.5],
                0.0,
                [0.2],
                10.0,
                &opts(tol),
            )
            .unwrap()[0]
        };
        let coarse = run(1e-7);
        let fine = run(1e-8);
        assert!((coarse - fine).abs() < 10.0 * 1e-7 * 10.0, "Δ={}", (coarse - fine).abs());
    }

    #[test]
    fn blow_up_reports_step_underflow() {
        // y' = y² from y(0)=1 blows up at t=1; integrating past it must fail
        // rather than silently return garbage.
        let r = integrate(&mut |_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &opts(1e-9));
        assert!(r.is_err());
    }

    #[test]
    fn step_budget_is_enforced() {
        let tight = OdeOptions { max_steps: 3, ..opts(1e-12) };
        let r = integrate(&mut |_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 50.0, &tight);
        assert!(r.is_err());
    }

    #[test]
    fn zero_span_returns_initial_state() {
        let y = integrate(&mut |_, y: &[f64; 1]| [-y[0]], 3.0, [0.7], 3.0, &opts(1e-9))
            .unwrap();
        assert_eq!(y[0], 0.7);
    }
}
