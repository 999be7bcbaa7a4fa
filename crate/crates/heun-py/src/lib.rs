//! Python bindings for the spectral-curve and phase-lock toolkit.
//!
//! Exposes the exact curve constructions (spectral polynomial, factor
//! curves, certificates) and the dynamical side (rotation numbers, boundary
//! arcs, constrictions, rasters, consistency checks) as plain functions
//! returning small record classes. Polynomials cross the boundary as their
//! canonical text form; signs as the strings `"+"` and `"-"`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use heun_core::{crosscheck, dynamics, spectral, xi, Sign};

fn err(e: heun_core::Error) -> PyErr {
    match e {
        heun_core::Error::Domain(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_sign(s: &str) -> PyResult<Sign> {
    s.parse().map_err(err)
}

fn params(b: f64, a: f64, omega: f64) -> PyResult<dynamics::JosephsonParams> {
    dynamics::JosephsonParams::new(b, a, omega).map_err(err)
}

// ---------------------------------------------------------------------------
// Record classes
// ---------------------------------------------------------------------------

/// The exact plane curve attached to one level: `poly` over `(λ, v)` and its
/// fixed-frequency form `q` over `(λ, R)`.
#[pyclass(frozen)]
struct SpectralCurve {
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    poly: String,
    #[pyo3(get)]
    q: String,
}

#[pymethods]
impl SpectralCurve {
    fn __repr__(&self) -> String {
        format!("SpectralCurve(l={}, poly='{}')", self.l, self.poly)
    }
}

/// Outcome of the four exact Newton-diagram checks on the fixed-frequency
/// polynomial, plus the lower-hull vertices.
#[pyclass(frozen)]
struct NewtonCertificate {
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    lambda_power_present: bool,
    #[pyo3(get)]
    r_term_present: bool,
    #[pyo3(get)]
    no_low_lambda_powers: bool,
    #[pyo3(get)]
    single_edge_hull: bool,
    #[pyo3(get)]
    hull: Vec<(u32, u32)>,
    #[pyo3(get)]
    pass_: bool,
}

#[pymethods]
impl NewtonCertificate {
    fn __repr__(&self) -> String {
        format!("NewtonCertificate(l={}, pass_={})", self.l, self.pass_)
    }
}

/// Certified eigenvalues at one coupling, ascending, with the smallest gap.
#[pyclass(frozen)]
struct EigenSpectrum {
    #[pyo3(get)]
    mu: f64,
    #[pyo3(get)]
    values: Vec<f64>,
    #[pyo3(get)]
    min_gap: f64,
}

#[pymethods]
impl EigenSpectrum {
    fn __repr__(&self) -> String {
        format!("EigenSpectrum(mu={}, values={:?})", self.mu, self.values)
    }
}

/// One crossing of the curve with a fixed-frequency line: branch index,
/// coordinates in every chart, and the winding index the parity rule assigns.
#[pyclass(frozen)]
struct IntersectionPoint {
    #[pyo3(get)]
    j: u32,
    #[pyo3(get)]
    mu: f64,
    #[pyo3(get)]
    lambda_j: f64,
    #[pyo3(get)]
    r_j: f64,
    #[pyo3(get)]
    omega_j: f64,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    s: u32,
}

#[pymethods]
impl IntersectionPoint {
    fn __repr__(&self) -> String {
        format!(
            "IntersectionPoint(j={}, omega_j={}, B={}, A={}, s={})",
            self.j, self.omega_j, self.b, self.a, self.s
        )
    }
}

/// One of the two determinantal factor curves over `(μ, r)`.
#[pyclass(frozen)]
struct XiCurve {
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    sign: String,
    #[pyo3(get)]
    poly: String,
}

#[pymethods]
impl XiCurve {
    fn __repr__(&self) -> String {
        format!("XiCurve(l={}, sign='{}', poly='{}')", self.l, self.sign, self.poly)
    }
}

/// Genus prediction for a factor curve, its bidegree, and whether the affine
/// smoothness certificate backs the prediction.
#[pyclass(frozen)]
struct GenusReport {
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    conjectured_genus: u64,
    #[pyo3(get)]
    bidegree: (u32, u32),
    #[pyo3(get)]
    certified: bool,
    #[pyo3(get)]
    certificate_notes: String,
}

#[pymethods]
impl GenusReport {
    fn __repr__(&self) -> String {
        format!(
            "GenusReport(l={}, conjectured_genus={}, certified={})",
            self.l, self.conjectured_genus, self.certified
        )
    }
}

/// Result of the exact singular-locus filter: `smooth` is True, False, or
/// None (undecided within the precision budget), with supporting notes.
#[pyclass(frozen)]
struct SmoothnessCertificate {
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    sign: String,
    #[pyo3(get)]
    gcd_poly: String,
    #[pyo3(get)]
    smooth: Option<bool>,
    #[pyo3(get)]
    notes: Vec<String>,
}

#[pymethods]
impl SmoothnessCertificate {
    fn __repr__(&self) -> String {
        format!("SmoothnessCertificate(l={}, sign='{}', smooth={:?})", self.l, self.sign, self.smooth)
    }
}

/// Rotation number with the period count used and an error estimate from the
/// two-tolerance comparison.
#[pyclass(frozen)]
struct RotationNumber {
    #[pyo3(get)]
    rho: f64,
    #[pyo3(get)]
    periods_used: u32,
    #[pyo3(get)]
    error_estimate: f64,
}

#[pymethods]
impl RotationNumber {
    fn __repr__(&self) -> String {
        format!("RotationNumber(rho={}, error_estimate={})", self.rho, self.error_estimate)
    }
}

/// Normalized period map of the linear system: matrix, trace, conjugacy
/// class, and its action on angles.
#[pyclass(frozen)]
struct Monodromy {
    inner: dynamics::MobiusMonodromy,
}

#[pymethods]
impl Monodromy {
    /// Row-major 2×2 matrix entries.
    #[getter]
    fn matrix(&self) -> ((f64, f64), (f64, f64)) {
        let m = self.inner.m;
        ((m[0][0], m[0][1]), (m[1][0], m[1][1]))
    }

    #[getter]
    fn trace(&self) -> f64 {
        self.inner.trace
    }

    /// One of "identity", "parabolic", "elliptic", "hyperbolic".
    #[getter]
    fn conjugacy(&self) -> &'static str {
        match self.inner.class {
            dynamics::MonodromyClass::Identity => "identity",
            dynamics::MonodromyClass::Parabolic => "parabolic",
            dynamics::MonodromyClass::Elliptic => "elliptic",
            dynamics::MonodromyClass::Hyperbolic => "hyperbolic",
        }
    }

    /// Max-norm distance to the nearer of `±Id`.
    fn distance_to_identity(&self) -> f64 {
        self.inner.distance_to_identity()
    }

    /// Image of an angle under the induced circle map.
    fn apply_angle(&self, phi: f64) -> f64 {
        self.inner.apply_angle(phi)
    }

    /// Fixed angles of the circle map in `[-π, π)`; empty in the elliptic case.
    fn fixed_angles(&self) -> Vec<f64> {
        self.inner.fixed_angles()
    }

    fn __repr__(&self) -> String {
        format!("Monodromy(trace={}, conjugacy='{}')", self.inner.trace, self.conjugacy())
    }
}

/// A point on a boundary arc of a phase-lock region, solved at fixed
/// ordinate, with the defect of the angle equation at the returned abscissa.
#[pyclass(frozen)]
struct BoundaryPoint {
    #[pyo3(get)]
    s: u32,
    #[pyo3(get)]
    sign: String,
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    omega: f64,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    residual: f64,
}

#[pymethods]
impl BoundaryPoint {
    fn __repr__(&self) -> String {
        format!("BoundaryPoint(s={}, sign='{}', A={}, B={})", self.s, self.sign, self.a, self.b)
    }
}

/// An axis point where the two boundary arcs of a region meet: the period
/// map is `±Id` up to the reported distance.
#[pyclass(frozen)]
struct Constriction {
    #[pyo3(get)]
    s: u32,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    identity_distance: f64,
}

#[pymethods]
impl Constriction {
    fn __repr__(&self) -> String {
        format!("Constriction(s={}, B={}, A={})", self.s, self.b, self.a)
    }
}

/// Rotation-number raster over a parameter rectangle. `rho` is row-major
/// with the abscissa fastest: entry `iy * nx + ix`.
#[pyclass(frozen)]
struct Portrait {
    inner: dynamics::PortraitRaster,
}

#[pymethods]
impl Portrait {
    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega
    }

    #[getter]
    fn b_range(&self) -> (f64, f64) {
        self.inner.b_range
    }

    #[getter]
    fn a_range(&self) -> (f64, f64) {
        self.inner.a_range
    }

    #[getter]
    fn nx(&self) -> usize {
        self.inner.nx
    }

    #[getter]
    fn ny(&self) -> usize {
        self.inner.ny
    }

    #[getter]
    fn rho(&self) -> Vec<f64> {
        self.inner.rho.clone()
    }

    fn b_at(&self, ix: usize) -> f64 {
        self.inner.b_at(ix)
    }

    fn a_at(&self, iy: usize) -> f64 {
        self.inner.a_at(iy)
    }

    fn rho_at(&self, ix: usize, iy: usize) -> PyResult<f64> {
        if ix >= self.inner.nx || iy >= self.inner.ny {
            return Err(PyValueError::new_err(format!(
                "index ({ix}, {iy}) outside {}x{} raster",
                self.inner.nx, self.inner.ny
            )));
        }
        Ok(self.inner.rho[iy * self.inner.nx + ix])
    }

    fn __repr__(&self) -> String {
        format!(
            "Portrait(omega={}, nx={}, ny={})",
            self.inner.omega, self.inner.nx, self.inner.ny
        )
    }
}

/// Per-point outcome of the lift measurement at one predicted crossing.
#[pyclass(frozen)]
struct IntersectionCheck {
    #[pyo3(get)]
    j: u32,
    #[pyo3(get)]
    s_predicted: u32,
    #[pyo3(get)]
    s_measured: Option<u32>,
    #[pyo3(get)]
    sign_measured: Option<String>,
    #[pyo3(get)]
    max_residual: f64,
    #[pyo3(get)]
    identity_distance: f64,
}

#[pymethods]
impl IntersectionCheck {
    fn __repr__(&self) -> String {
        format!(
            "IntersectionCheck(j={}, s_predicted={}, s_measured={:?})",
            self.j, self.s_predicted, self.s_measured
        )
    }
}

/// Aggregated algebra-versus-dynamics comparison at one coupling.
#[pyclass(frozen)]
struct CrossCheckReport {
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    mu: f64,
    #[pyo3(get)]
    tol: f64,
    #[pyo3(get)]
    points: Vec<Py<IntersectionCheck>>,
    #[pyo3(get)]
    pass_: bool,
}

#[pymethods]
impl CrossCheckReport {
    fn __repr__(&self) -> String {
        format!("CrossCheckReport(l={}, mu={}, pass_={})", self.l, self.mu, self.pass_)
    }
}

// ---------------------------------------------------------------------------
// Functions
// ---------------------------------------------------------------------------

/// Exact defining polynomial of the level-`l` curve, monic of degree `l` in λ.
#[pyfunction]
fn spectral_curve(l: u32) -> PyResult<SpectralCurve> {
    let c = spectral::spectral_polynomial(l).map_err(err)?;
    Ok(SpectralCurve { l: c.l, poly: c.poly.to_string(), q: c.q.to_string() })
}

/// Runs the exact Newton-diagram certificate on the fixed-frequency form.
#[pyfunction]
fn newton_certificate(l: u32) -> PyResult<NewtonCertificate> {
    let r = spectral::newton_certificate(l).map_err(err)?;
    Ok(NewtonCertificate {
        l: r.l,
        lambda_power_present: r.lambda_power_present,
        r_term_present: r.r_term_present,
        no_low_lambda_powers: r.no_low_lambda_powers,
        single_edge_hull: r.single_edge_hull,
        hull: r.hull,
        pass_: r.pass,
    })
}

/// Certified simple eigenvalues of the level-`l` family at coupling `mu`.
#[pyfunction]
#[pyo3(signature = (l, mu, tol=1e-12))]
fn eigenvalues(l: u32, mu: f64, tol: f64) -> PyResult<EigenSpectrum> {
    let s = spectral::eigenvalues_at(l, mu, tol).map_err(err)?;
    Ok(EigenSpectrum { mu: s.mu, values: s.values, min_gap: s.min_gap })
}

/// Winding index the parity rule assigns to branch `j` at level `l`.
#[pyfunction]
fn s_index(l: u32, j: u32) -> u32 {
    spectral::s_index(l, j)
}

/// All `l` crossings of the level-`l` curve with the coupling-`mu` line,
/// ordered by branch index.
#[pyfunction]
fn simple_intersections(l: u32, mu: f64) -> PyResult<Vec<IntersectionPoint>> {
    let pts = spectral::simple_intersections(l, mu).map_err(err)?;
    Ok(pts
        .into_iter()
        .map(|p| IntersectionPoint {
            j: p.j,
            mu: p.mu,
            lambda_j: p.lambda_j,
            r_j: p.r_j,
            omega_j: p.omega_j,
            b: p.b,
            a: p.a,
            s: p.s,
        })
        .collect())
}

/// Exact factor curve of the requested sign over `(μ, r)`.
#[pyfunction]
#[pyo3(signature = (l, sign="+"))]
fn xi_curve(l: u32, sign: &str) -> PyResult<XiCurve> {
    let c = xi::xi_polynomial(l, parse_sign(sign)?).map_err(err)?;
    Ok(XiCurve { l: c.l, sign: c.sign.to_string(), poly: c.poly.to_string() })
}

/// Exact identity test: the signed product of the two factor curves equals
/// the spectral polynomial in the matching chart, and the zero-coupling
/// slices take their closed forms.
#[pyfunction]
fn factorization_check(l: u32) -> PyResult<bool> {
    xi::factorization_check(l).map_err(err)
}

/// Genus prediction and bidegree; with `certified=True` the affine
/// smoothness certificate is run first and its outcome folded in.
#[pyfunction]
#[pyo3(signature = (l, certified=false))]
fn genus(l: u32, certified: bool) -> PyResult<GenusReport> {
    let r = if certified { xi::genus_certified(l) } else { xi::genus_bound(l) }.map_err(err)?;
    Ok(GenusReport {
        l: r.l,
        conjectured_genus: r.conjectured_genus,
        bidegree: r.bidegree,
        certified: r.certified,
        certificate_notes: r.certificate_notes,
    })
}

/// Exact singular-locus filter for one factor curve.
#[pyfunction]
#[pyo3(signature = (l, sign="+"))]
fn smoothness_certificate(l: u32, sign: &str) -> PyResult<SmoothnessCertificate> {
    let c = xi::smoothness_certificate(l, parse_sign(sign)?).map_err(err)?;
    Ok(SmoothnessCertificate {
        l: c.l,
        sign: c.sign.to_string(),
        gcd_poly: c.gcd_poly.to_string(),
        smooth: c.smooth,
        notes: c.notes,
    })
}

/// Rotation number of the circle flow at `(B, A, omega)`.
#[pyfunction]
#[pyo3(signature = (b, a, omega, tol=1e-8))]
fn rotation_number(b: f64, a: f64, omega: f64, tol: f64) -> PyResult<RotationNumber> {
    let r = dynamics::rotation_number(&params(b, a, omega)?, tol).map_err(err)?;
    Ok(RotationNumber {
        rho: r.rho,
        periods_used: r.periods_used,
        error_estimate: r.error_estimate,
    })
}

/// Value at `tau_end` of the angle lift started at `phi0`.
#[pyfunction]
#[pyo3(signature = (b, a, omega, phi0, tau_end, tol=1e-8))]
fn integrate_lift(b: f64, a: f64, omega: f64, phi0: f64, tau_end: f64, tol: f64) -> PyResult<f64> {
    dynamics::integrate_lift(&params(b, a, omega)?, phi0, tau_end, tol).map_err(err)
}

/// Normalized period map of the linear system at `(B, A, omega)`.
#[pyfunction]
#[pyo3(signature = (b, a, omega, tol=1e-8))]
fn monodromy(b: f64, a: f64, omega: f64, tol: f64) -> PyResult<Monodromy> {
    let inner = dynamics::monodromy(&params(b, a, omega)?, tol).map_err(err)?;
    Ok(Monodromy { inner })
}

/// Abscissa of the boundary arc `(s, sign)` at ordinate `a`, by bisection on
/// the one-period angle equation.
#[pyfunction]
#[pyo3(signature = (s, a, omega, sign="+", tol=1e-9))]
fn boundary_point(s: u32, a: f64, omega: f64, sign: &str, tol: f64) -> PyResult<BoundaryPoint> {
    let p = dynamics::boundary_point(s, parse_sign(sign)?, a, omega, tol).map_err(err)?;
    Ok(BoundaryPoint {
        s: p.s,
        sign: p.sign.to_string(),
        a: p.a,
        omega: p.omega,
        b: p.b,
        residual: p.residual,
    })
}

/// Half-width of region `s` on the axis: the two arcs cross it at `sω ± g`.
#[pyfunction]
fn growth_point(s: u32, omega: f64) -> PyResult<f64> {
    dynamics::growth_point(s, omega).map_err(err)
}

/// Scans the axis of region `s` over ordinates `[a_min, a_max]` for points
/// with `±Id` period map.
#[pyfunction]
#[pyo3(signature = (s, omega, a_max, a_min=0.0, samples=200, tol=1e-9))]
fn constrictions(
    s: u32,
    omega: f64,
    a_max: f64,
    a_min: f64,
    samples: usize,
    tol: f64,
) -> PyResult<Vec<Constriction>> {
    let hits = dynamics::constriction_search(s, omega, (a_min, a_max), samples, tol).map_err(err)?;
    Ok(hits
        .into_iter()
        .map(|c| Constriction { s: c.s, b: c.b, a: c.a, identity_distance: c.identity_distance })
        .collect())
}

/// Rotation-number raster over `[b_min, b_max] × [a_min, a_max]`; the result
/// is bitwise independent of the worker count.
#[pyfunction]
#[pyo3(signature = (omega, b_max, a_max, b_min=0.0, a_min=0.0, nx=100, ny=100, tol=1e-4))]
#[allow(clippy::too_many_arguments)]
fn portrait(
    omega: f64,
    b_max: f64,
    a_max: f64,
    b_min: f64,
    a_min: f64,
    nx: usize,
    ny: usize,
    tol: f64,
) -> PyResult<Portrait> {
    let inner =
        dynamics::portrait_scan(omega, (b_min, b_max), (a_min, a_max), nx, ny, tol).map_err(err)?;
    Ok(Portrait { inner })
}

/// Measures every predicted crossing at coupling `mu` dynamically and
/// compares winding indices; returns the per-point records and verdict.
#[pyfunction]
#[pyo3(signature = (l, mu, tol=1e-6))]
fn verify_simple_intersections(py: Python<'_>, l: u32, mu: f64, tol: f64) -> PyResult<CrossCheckReport> {
    let r = crosscheck::verify_simple_intersections(l, mu, tol).map_err(err)?;
    let points = r
        .points
        .into_iter()
        .map(|p| {
            Py::new(
                py,
                IntersectionCheck {
                    j: p.j,
                    s_predicted: p.s_predicted,
                    s_measured: p.s_measured,
                    sign_measured: p.sign_measured.map(|s| s.to_string()),
                    max_residual: p.max_residual,
                    identity_distance: p.identity_distance,
                },
            )
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(CrossCheckReport { l: r.l, mu: r.mu, tol: r.tol, points, pass_: r.pass })
}

/// Counts positive fixed-frequency crossings exactly and confirms the count,
/// the top branch's uniqueness, and its dynamical winding index.
#[pyfunction]
#[pyo3(signature = (l, omega, tol=1e-6))]
fn verify_count(l: u32, omega: f64, tol: f64) -> PyResult<bool> {
    crosscheck::verify_count(l, omega, tol).map_err(err)
}

/// Checks the two parameter symmetries of the rotation number on the given
/// `(s, A, omega)` samples.
#[pyfunction]
#[pyo3(signature = (samples, tol=1e-6))]
fn verify_symmetries(samples: Vec<(u32, f64, f64)>, tol: f64) -> PyResult<bool> {
    crosscheck::verify_symmetries(&samples, tol).map_err(err)
}

/// Confirms, over a coupling grid, that measured winding indices follow the
/// parity rule and the crossing frequencies decrease strictly in the branch
/// index.
#[pyfunction]
#[pyo3(signature = (l, mu_grid, tol=1e-6))]
fn verify_ordering(l: u32, mu_grid: Vec<f64>, tol: f64) -> PyResult<bool> {
    crosscheck::verify_ordering(l, &mu_grid, tol).map_err(err)
}

#[pymodule]
fn heun_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SpectralCurve>()?;
    m.add_class::<NewtonCertificate>()?;
    m.add_class::<EigenSpectrum>()?;
    m.add_class::<IntersectionPoint>()?;
    m.add_class::<XiCurve>()?;
    m.add_class::<GenusReport>()?;
    m.add_class::<SmoothnessCertificate>()?;
    m.add_class::<RotationNumber>()?;
    m.add_class::<Monodromy>()?;
    m.add_class::<BoundaryPoint>()?;
    m.add_class::<Constriction>()?;
    m.add_class::<Portrait>()?;
    m.add_class::<IntersectionCheck>()?;
    m.add_class::<CrossCheckReport>()?;
    m.add_function(wrap_pyfunction!(spectral_curve, m)?)?;
    m.add_function(wrap_pyfunction!(newton_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(s_index, m)?)?;
    m.add_function(wrap_pyfunction!(simple_intersections, m)?)?;
    m.add_function(wrap_pyfunction!(xi_curve, m)?)?;
    m.add_function(wrap_pyfunction!(factorization_check, m)?)?;
    m.add_function(wrap_pyfunction!(genus, m)?)?;
    m.add_function(wrap_pyfunction!(smoothness_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_number, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_lift, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_point, m)?)?;
    m.add_function(wrap_pyfunction!(growth_point, m)?)?;
    m.add_function(wrap_pyfunction!(constrictions, m)?)?;
    m.add_function(wrap_pyfunction!(portrait, m)?)?;
    m.add_function(wrap_pyfunction!(verify_simple_intersections, m)?)?;
    m.add_function(wrap_pyfunction!(verify_count, m)?)?;
    m.add_function(wrap_pyfunction!(verify_symmetries, m)?)?;
    m.add_function(wrap_pyfunction!(verify_ordering, m)?)?;
    Ok(())
}
