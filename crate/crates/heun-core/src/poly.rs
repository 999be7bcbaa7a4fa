//! Exact bivariate polynomial arithmetic over arbitrary-precision integers.
//!
//! Everything downstream (spectral polynomials, factor curves, certificates)
//! reduces to a handful of exact operations implemented here:
//!
//! * sparse bivariate polynomials with [`num_bigint::BigInt`] coefficients,
//! * determinants of symbolic tridiagonal matrices via the three-term
//!   recurrence (with a dense cofactor expansion kept as a cross-check),
//! * substitution of a polynomial for one variable,
//! * resultants through the subresultant pseudo-remainder sequence (with a
//!   Sylvester-determinant reference implementation for tests),
//! * Newton diagrams (lower convex hulls of exponent sets),
//! * gcds of univariate integer polynomials.
//!
//! Coefficients are exact integers by design: the determinants handled here
//! overflow `i64`/`i128` well before the sizes we need, and rationals never
//! show up because every algorithm used is fraction-free.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Names one of the two variables of a [`BivarPoly`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// The variable printed first (exponent slot 0).
    First,
    /// The variable printed second (exponent slot 1).
    Second,
}

impl Var {
    fn other(self) -> Var {
        match self {
            Var::First => Var::Second,
            Var::Second => Var::First,
        }
    }
}

/// A sparse bivariate polynomial with exact integer coefficients.
///
/// Terms are stored in a map from exponent pairs `(a, b)` to nonzero
/// coefficients; zero coefficients are never kept. The two variable labels
/// are carried along so that polynomials over different alphabets cannot be
/// mixed silently and so that the canonical text form can print itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivarPoly {
    vars: (String, String),
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    /// The zero polynomial over the given alphabet.
    pub fn zero(vars: (&str, &str)) -> Self {
        BivarPoly { vars: (vars.0.to_owned(), vars.1.to_owned()), terms: BTreeMap::new() }
    }

    /// A constant polynomial.
    pub fn constant(vars: (&str, &str), c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    /// The monomial `c * x^a * y^b`.
    pub fn monomial(vars: (&str, &str), (a, b): (u32, u32), c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert((a, b), c);
        }
        p
    }

    /// The polynomial consisting of a single variable to the first power.
    pub fn var(vars: (&str, &str), which: Var) -> Self {
        match which {
            Var::First => Self::monomial(vars, (1, 0), 1),
            Var::Second => Self::monomial(vars, (0, 1), 1),
        }
    }

    /// Builds a polynomial from raw terms; zero coefficients are dropped and
    /// repeated exponent pairs are accumulated.
    pub fn from_terms(
        vars: (&str, &str),
        terms: impl IntoIterator<Item = ((u32, u32), BigInt)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// The variable labels, in printing order.
    pub fn var_names(&self) -> (&str, &str) {
        (&self.vars.0, &self.vars.1)
    }

    /// Iterates over `((a, b), coeff)` pairs in map order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `x^a * y^b` (zero if the term is absent).
    pub fn coeff(&self, e: (u32, u32)) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    /// Degree in a single variable, or `None` for the zero polynomial.
    pub fn degree_in(&self, which: Var) -> Option<u32> {
        match which {
            Var::First => self.terms.keys().map(|&(a, _)| a).max(),
            Var::Second => self.terms.keys().map(|&(_, b)| b).max(),
        }
    }

    /// Largest absolute coefficient as `f64` (0 for the zero polynomial).
    /// Used for scale factors in numerical residual gates.
    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    fn add_term(&mut self, e: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn assert_same_alphabet(&self, other: &BivarPoly) {
        assert!(
            self.vars == other.vars,
            "variable alphabets disagree: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn neg(&self) -> BivarPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -(c.clone());
        }
        out
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        self.assert_same_alphabet(other);
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.assert_same_alphabet(other);
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        self.assert_same_alphabet(other);
        let mut out = Self::zero((&self.vars.0, &self.vars.1));
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> BivarPoly {
        let c = c.into();
        let mut out = Self::zero((&self.vars.0, &self.vars.1));
        if c.is_zero() {
            return out;
        }
        for (&e, t) in &self.terms {
            out.terms.insert(e, t * &c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> BivarPoly {
        let mut out = Self::constant((&self.vars.0, &self.vars.1), 1);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, which: Var) -> BivarPoly {
        let mut out = Self::zero((&self.vars.0, &self.vars.1));
        for (&(a, b), c) in &self.terms {
            match which {
                Var::First if a > 0 => out.add_term((a - 1, b), c * BigInt::from(a)),
                Var::Second if b > 0 => out.add_term((a, b - 1), c * BigInt::from(b)),
                _ => {}
            }
        }
        out
    }

    /// Evaluates at a pair of floats. Exactness is not promised; this is for
    /// residual gates and plotting, not for certification.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(a, b), c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::INFINITY);
            acc += c * x.powi(a as i32) * y.powi(b as i32);
        }
        acc
    }

    /// Swaps the two variables (labels and exponents together).
    pub fn swap_vars(&self) -> BivarPoly {
        BivarPoly {
            vars: (self.vars.1.clone(), self.vars.0.clone()),
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
        }
    }

    /// Evaluates `sum |c| * |x|^a * |y|^b`: the natural scale against which
    /// a floating-point residual of `eval_f64` should be measured.
    pub fn eval_abs_f64(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (x.abs(), y.abs());
        let mut acc = 0.0;
        for (&(a, b), c) in &self.terms {
            let c = c.abs().to_f64().unwrap_or(f64::INFINITY);
            acc += c * x.powi(a as i32) * y.powi(b as i32);
        }
        acc
    }

    /// Substitutes `replacement` for the variable named `label`.
    ///
    /// The variable that is kept must occupy the same slot in the
    /// replacement's alphabet, and the result is expressed over the
    /// replacement's alphabet. Substituting an unknown label is an error.
    pub fn substitute(&self, label: &str, replacement: &BivarPoly) -> Result<BivarPoly> {
        let which = if label == self.vars.0 {
            Var::First
        } else if label == self.vars.1 {
            Var::Second
        } else {
            return Err(Error::UnknownVariable(label.to_owned(), self.vars.clone()));
        };
        let kept = match which {
            Var::First => (&self.vars.1, &replacement.vars.1),
            Var::Second => (&self.vars.0, &replacement.vars.0),
        };
        if kept.0 != kept.1 {
            return Err(Error::AlphabetMismatch(self.vars.clone(), replacement.vars.clone()));
        }
        let out_vars = (replacement.vars.0.as_str(), replacement.vars.1.as_str());
        // Horner in the substituted variable: group terms by its exponent.
        let max_k = self.degree_in(which).unwrap_or(0);
        let mut acc = BivarPoly::zero(out_vars);
        for k in (0..=max_k).rev() {
            acc = acc.mul(replacement);
            // Coefficient of (substituted var)^k, re-expressed over out_vars
            // in the slot the kept variable occupies there.
            for (&(a, b), c) in &self.terms {
                let (sub_exp, kept_exp) = match which {
                    Var::First => (a, b),
                    Var::Second => (b, a),
                };
                if sub_exp == k {
                    let e = match which {
                        // kept variable is the second slot of the output
                        Var::First => (0, kept_exp),
                        // kept variable is the first slot of the output
                        Var::Second => (kept_exp, 0),
                    };
                    acc.add_term(e, c.clone());
                }
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for BivarPoly {
    /// Canonical text form: `c*x^a*y^b` pieces joined by ` + `, terms sorted
    /// by (total degree, first exponent) descending, zero-exponent factors
    /// omitted, coefficients always printed with their sign.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(a, b)| (std::cmp::Reverse(a + b), std::cmp::Reverse(a)));
        let mut pieces = Vec::with_capacity(keys.len());
        for &&(a, b) in &keys {
            let c = &self.terms[&(a, b)];
            let mut s = c.to_string();
            if a > 0 {
                s.push_str(&format!("*{}^{}", self.vars.0, a));
            }
            if b > 0 {
                s.push_str(&format!("*{}^{}", self.vars.1, b));
            }
            pieces.push(s);
        }
        write!(f, "{}", pieces.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Tridiagonal determinants
// ---------------------------------------------------------------------------

/// A symbolic tridiagonal matrix: `diag` of length `n`, `sub`/`sup` of length
/// `n - 1`. `sub[i]` sits at entry `(i+1, i)` and `sup[i]` at `(i, i+1)`
/// (0-based).
#[derive(Debug, Clone)]
pub struct TridiagSpec {
    vars: (String, String),
    pub diag: Vec<BivarPoly>,
    pub sub: Vec<BivarPoly>,
    pub sup: Vec<BivarPoly>,
}

impl TridiagSpec {
    pub fn new(
        vars: (&str, &str),
        diag: Vec<BivarPoly>,
        sub: Vec<BivarPoly>,
        sup: Vec<BivarPoly>,
    ) -> Result<Self> {
        let n = diag.len();
        let expected = n.saturating_sub(1);
        if sub.len() != expected || sup.len() != expected {
            return Err(Error::BadTridiagShape {
                n,
                expected,
                got: sub.len().max(sup.len()),
            });
        }
        let vars = (vars.0.to_owned(), vars.1.to_owned());
        for p in diag.iter().chain(&sub).chain(&sup) {
            if (p.vars.0.as_str(), p.vars.1.as_str()) != (vars.0.as_str(), vars.1.as_str()) {
                return Err(Error::AlphabetMismatch(vars.clone(), p.vars.clone()));
            }
        }
        Ok(TridiagSpec { vars, diag, sub, sup })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }
}

/// Determinant of a tridiagonal matrix by the three-term recurrence
/// `D_k = diag_k * D_{k-1} - sub_{k-1} * sup_{k-1} * D_{k-2}`, `D_0 = 1`.
/// The empty matrix has determinant 1.
pub fn tridiag_det(spec: &TridiagSpec) -> BivarPoly {
    let vars = (spec.vars.0.as_str(), spec.vars.1.as_str());
    let mut d_prev = BivarPoly::constant(vars, 1); // D_0
    if spec.n() == 0 {
        return d_prev;
    }
    let mut d_cur = spec.diag[0].clone(); // D_1
    for k in 1..spec.n() {
        let next = spec.diag[k]
            .mul(&d_cur)
            .sub(&spec.sub[k - 1].mul(&spec.sup[k - 1]).mul(&d_prev));
        d_prev = d_cur;
        d_cur = next;
    }
    d_cur
}

/// Dense determinant by cofactor expansion along the first row. Exponential;
/// retained as the independent oracle for small orders.
pub fn det_cofactor(m: &[Vec<BivarPoly>]) -> BivarPoly {
    let n = m.len();
    assert!(n > 0, "cofactor oracle needs a nonempty matrix");
    for row in m {
        assert_eq!(row.len(), n, "cofactor oracle needs a square matrix");
    }
    let vars = (m[0][0].vars.0.as_str(), m[0][0].vars.1.as_str());
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BivarPoly::zero(vars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BivarPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(k, p)| (k != j).then(|| p.clone()))
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&det_cofactor(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

// ---------------------------------------------------------------------------
// Newton diagrams
// ---------------------------------------------------------------------------

/// The exponent set of a polynomial together with the lower-left convex hull
/// (the Newton diagram at the origin).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonDiagram {
    /// All exponent pairs with nonzero coefficient, sorted.
    pub points: Vec<(u32, u32)>,
    /// Vertices of the lower-left hull, sorted by first coordinate.
    pub lower_hull: Vec<(u32, u32)>,
}

impl NewtonDiagram {
    /// True when the hull is exactly the single segment between `a` and `b`.
    pub fn is_single_edge(&self, a: (u32, u32), b: (u32, u32)) -> bool {
        let (lo, hi) = if a.0 <= b.0 { (a, b) } else { (b, a) };
        self.lower_hull == vec![lo, hi]
    }
}

/// Computes the Newton diagram of `p`: the vertices of the convex hull of
/// `{exponents} + (nonnegative quadrant)` that face the origin.
pub fn newton_lower_hull(p: &BivarPoly) -> NewtonDiagram {
    let points: Vec<(u32, u32)> = p.terms.keys().copied().collect();
    // Pareto-minimal points: nothing else dominates them componentwise.
    let mut minimal: Vec<(u32, u32)> = points
        .iter()
        .copied()
        .filter(|&(a, b)| {
            !points
                .iter()
                .any(|&(c, d)| (c, d) != (a, b) && c <= a && d <= b)
        })
        .collect();
    minimal.sort();
    // The minimal set is an antichain: x ascending means y strictly
    // descending. Keep only convex-position vertices (monotone chain).
    let mut hull: Vec<(u32, u32)> = Vec::new();
    let cross = |o: (u32, u32), a: (u32, u32), b: (u32, u32)| -> i64 {
        let (ox, oy) = (o.0 as i64, o.1 as i64);
        (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
    };
    for pnt in minimal {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pnt) <= 0 {
            hull.pop();
        }
        hull.push(pnt);
    }
    NewtonDiagram { points, lower_hull: hull }
}

// ---------------------------------------------------------------------------
// Univariate integer polynomial helpers (dense, little-endian)
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over `BigInt`, lowest degree first.
/// Internal representation shared by the resultant, gcd and root-counting
/// code; kept crate-private.
pub(crate) mod uni {
    use super::*;
    use num_integer::Integer;

    pub type Uni = Vec<BigInt>;

    pub fn trim(p: &mut Uni) {
        while p.last().map_or(false, |c| c.is_zero()) {
            p.pop();
        }
    }

    pub fn is_zero(p: &Uni) -> bool {
        p.iter().all(|c| c.is_zero())
    }

    /// Degree, or `None` for zero.
    pub fn deg(p: &Uni) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    pub fn lc(p: &Uni) -> BigInt {
        deg(p).map(|d| p[d].clone()).unwrap_or_else(BigInt::zero)
    }

    pub fn one() -> Uni {
        vec![BigInt::one()]
    }

    pub fn neg(p: &Uni) -> Uni {
        p.iter().map(|c| -c.clone()).collect()
    }

    pub fn add(a: &Uni, b: &Uni) -> Uni {
        let mut out = vec![BigInt::zero(); a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i] += c;
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &Uni, b: &Uni) -> Uni {
        add(a, &neg(b))
    }

    pub fn mul(a: &Uni, b: &Uni) -> Uni {
        if is_zero(a) || is_zero(b) {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if !cb.is_zero() {
                    out[i + j] += ca * cb;
                }
            }
        }
        trim(&mut out);
        out
    }

    pub fn scale(p: &Uni, c: &BigInt) -> Uni {
        if c.is_zero() {
            return Vec::new();
        }
        p.iter().map(|t| t * c).collect()
    }

    pub fn pow(p: &Uni, n: usize) -> Uni {
        let mut out = one();
        for _ in 0..n {
            out = mul(&out, p);
        }
        out
    }

    pub fn derivative(p: &Uni) -> Uni {
        let mut out: Uni = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        trim(&mut out);
        out
    }

    /// Exact division; errors if the remainder is nonzero (caller bug).
    pub fn exact_div(a: &Uni, b: &Uni) -> crate::error::Result<Uni> {
        let db = deg(b).ok_or(crate::error::Error::InexactDivision)?;
        let mut rem = a.clone();
        trim(&mut rem);
        let mut quo = vec![BigInt::zero(); rem.len().saturating_sub(db)];
        let lb = b[db].clone();
        while let Some(dr) = deg(&rem) {
            if dr < db {
                return Err(crate::error::Error::InexactDivision);
            }
            let (q, r) = rem[dr].div_rem(&lb);
            if !r.is_zero() {
                return Err(crate::error::Error::InexactDivision);
            }
            quo[dr - db] = q.clone();
            for i in 0..=db {
                let delta = &b[i] * &q;
                rem[dr - db + i] -= delta;
            }
            trim(&mut rem);
        }
        trim(&mut quo);
        Ok(quo)
    }

    /// Integer content (gcd of coefficients), nonnegative.
    pub fn content(p: &Uni) -> BigInt {
        let mut g = BigInt::zero();
        for c in p {
            g = g.gcd(c);
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_normalized(p: &Uni) -> Uni {
        let Some(d) = deg(p) else { return Vec::new() };
        let mut g = content(p);
        if g.is_zero() {
            return Vec::new();
        }
        if p[d].is_negative() {
            g = -g;
        }
        let mut out: Uni = p.iter().map(|c| c / &g).collect();
        trim(&mut out);
        out
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a  mod  b`.
    pub fn prem(a: &Uni, b: &Uni) -> Uni {
        let db = deg(b).expect("prem: zero divisor");
        let Some(da) = deg(a) else { return Vec::new() };
        if da < db {
            let factor = pow(&vec![lc(b)], 0);
            return mul(a, &factor);
        }
        let lb = lc(b);
        let mut r = a.clone();
        trim(&mut r);
        let mut e = (da - db + 1) as i64;
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let lr = lc(&r);
            // r <- lb * r - lr * x^(dr-db) * b
            let mut shifted = vec![BigInt::zero(); dr - db];
            shifted.extend(scale(b, &lr));
            r = sub(&scale(&r, &lb), &shifted);
            e -= 1;
        }
        for _ in 0..e.max(0) {
            r = scale(&r, &lb);
        }
        trim(&mut r);
        r
    }

    /// Gcd over the integers via the primitive pseudo-remainder sequence;
    /// result is primitive with positive leading coefficient, times the gcd
    /// of the integer contents.
    pub fn gcd(a: &Uni, b: &Uni) -> Uni {
        if is_zero(a) {
            return primitive_part_signed(b);
        }
        if is_zero(b) {
            return primitive_part_signed(a);
        }
        let ca = content(a);
        let cb = content(b);
        let cg = ca.gcd(&cb);
        let mut p = primitive_normalized(a);
        let mut q = primitive_normalized(b);
        if deg(&p) < deg(&q) {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            let r = prem(&p, &q);
            if is_zero(&r) {
                break;
            }
            p = q;
            q = primitive_normalized(&r);
        }
        let mut out = scale(&q, &cg);
        trim(&mut out);
        out
    }

    fn primitive_part_signed(p: &Uni) -> Uni {
        let mut out = primitive_normalized(p);
        let c = content(p);
        out = scale(&out, &c);
        primitive_times_content_fixup(out)
    }

    fn primitive_times_content_fixup(mut p: Uni) -> Uni {
        // normalize sign: positive leading coefficient
        if let Some(d) = deg(&p) {
            if p[d].is_negative() {
                p = neg(&p);
            }
        }
        p
    }
}

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

use uni::Uni;

/// Re-expresses `p` as a dense polynomial in the eliminated variable with
/// univariate coefficients in the surviving variable.
fn as_poly_in(p: &BivarPoly, eliminate: Var) -> Vec<Uni> {
    let de = p.degree_in(eliminate).map_or(0, |d| d as usize);
    let ds = p.degree_in(eliminate.other()).map_or(0, |d| d as usize);
    let mut out = vec![vec![BigInt::zero(); ds + 1]; de + 1];
    for (&(a, b), c) in &p.terms {
        let (e, s) = match eliminate {
            Var::First => (a as usize, b as usize),
            Var::Second => (b as usize, a as usize),
        };
        out[e][s] = c.clone();
    }
    for u in &mut out {
        uni::trim(u);
    }
    while out.last().map_or(false, uni::is_zero) {
        out.pop();
    }
    out
}

fn uni_to_bivar(u: &Uni, vars: (&str, &str), survivor: Var) -> BivarPoly {
    BivarPoly::from_terms(
        vars,
        u.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            let e = match survivor {
                Var::First => (i as u32, 0),
                Var::Second => (0, i as u32),
            };
            (e, c.clone())
        }),
    )
}

fn ry_deg(p: &[Uni]) -> Option<usize> {
    p.iter().rposition(|c| !uni::is_zero(c))
}

fn ry_trim(p: &mut Vec<Uni>) {
    while p.last().map_or(false, |c| uni::is_zero(c)) {
        p.pop();
    }
}

/// Pseudo-remainder in `R[y]` with `R = Z[x]`: `lc(b)^(da-db+1) * a mod b`.
fn ry_prem(a: &[Uni], b: &[Uni]) -> Vec<Uni> {
    let db = ry_deg(b).expect("ry_prem: zero divisor");
    let Some(da) = ry_deg(a) else { return Vec::new() };
    assert!(da >= db);
    let lb = b[db].clone();
    let mut r: Vec<Uni> = a.to_vec();
    let mut e = (da - db + 1) as i64;
    while let Some(dr) = ry_deg(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        // r <- lb*r - lr*y^(dr-db)*b
        let mut next = vec![Vec::new(); r.len()];
        for (i, c) in r.iter().enumerate() {
            next[i] = uni::mul(c, &lb);
        }
        for (i, c) in b.iter().enumerate() {
            let t = uni::mul(c, &lr);
            next[dr - db + i] = uni::sub(&next[dr - db + i], &t);
        }
        r = next;
        ry_trim(&mut r);
        e -= 1;
    }
    for _ in 0..e.max(0) {
        for c in &mut r {
            *c = uni::mul(c, &lb);
        }
    }
    ry_trim(&mut r);
    r
}

fn ry_div_exact(p: &[Uni], d: &Uni) -> Result<Vec<Uni>> {
    let mut out = Vec::with_capacity(p.len());
    for c in p {
        if uni::is_zero(c) {
            out.push(Vec::new());
        } else {
            out.push(uni::exact_div(c, d)?);
        }
    }
    Ok(out)
}

/// Resultant of `p` and `q` with respect to the eliminated variable, via the
/// subresultant pseudo-remainder sequence. The result is univariate in the
/// surviving variable (expressed as a [`BivarPoly`] over the same alphabet).
///
/// Errors if both inputs are constant in the eliminated variable. Satisfies
/// `resultant(p, q) = (-1)^(deg p * deg q) * resultant(q, p)`.
pub fn resultant(p: &BivarPoly, q: &BivarPoly, eliminate: Var) -> Result<BivarPoly> {
    p.assert_same_alphabet(q);
    let vars = (p.vars.0.as_str(), p.vars.1.as_str());
    let survivor = eliminate.other();
    let a = as_poly_in(p, eliminate);
    let b = as_poly_in(q, eliminate);
    let da = ry_deg(&a);
    let db = ry_deg(&b);
    match (da, db) {
        (None, _) | (_, None) => {
            // Res with the zero polynomial: zero unless the other is a nonzero
            // constant, in which case conventionally zero as well when deg>0.
            return Ok(BivarPoly::zero(vars));
        }
        (Some(0), Some(0)) => return Err(Error::ResultantBothConstant),
        _ => {}
    }
    let (mut a, mut b, mut s) = {
        let (da, db) = (da.unwrap(), db.unwrap());
        if da < db {
            let sign = if (da * db) % 2 == 1 { -1i32 } else { 1 };
            (b, a, sign)
        } else {
            (a, b, 1)
        }
    };
    // Extract integer-polynomial contents (in the survivor variable) first:
    // Res(c*A, B) = c^(deg B) Res(A, B).
    let cont_a = {
        let mut g: Uni = Vec::new();
        for c in &a {
            g = uni::gcd(&g, c);
        }
        g
    };
    let cont_b = {
        let mut g: Uni = Vec::new();
        for c in &b {
            g = uni::gcd(&g, c);
        }
        g
    };
    for c in &mut a {
        if !uni::is_zero(c) {
            *c = uni::exact_div(c, &cont_a)?;
        }
    }
    for c in &mut b {
        if !uni::is_zero(c) {
            *c = uni::exact_div(c, &cont_b)?;
        }
    }
    let da = ry_deg(&a).unwrap();
    let db = ry_deg(&b).unwrap();
    let t = uni::mul(&uni::pow(&cont_a, db), &uni::pow(&cont_b, da));

    if db == 0 {
        // Res(A, b0) = b0^(deg A)
        let res = uni::mul(&t, &uni::pow(&b[0], da));
        let res = if s < 0 { uni::neg(&res) } else { res };
        return Ok(uni_to_bivar(&res, vars, survivor));
    }

    let mut g = uni::one();
    let mut h = uni::one();
    loop {
        let da = ry_deg(&a).unwrap();
        let db = ry_deg(&b).unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = ry_prem(&a, &b);
        a = b;
        let denom = uni::mul(&g, &uni::pow(&h, delta));
        b = ry_div_exact(&r, &denom)?;
        ry_trim(&mut b);
        g = a[ry_deg(&a).unwrap()].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => uni::exact_div(&uni::pow(&g, delta), &uni::pow(&h, delta - 1))?,
        };
        match ry_deg(&b) {
            None => {
                // vanishing remainder with positive-degree divisor
                return Ok(BivarPoly::zero(vars));
            }
            Some(0) => break,
            Some(_) => {}
        }
    }
    let dfin = ry_deg(&a).unwrap();
    let num = uni::pow(&b[0], dfin);
    let den = uni::pow(&h, dfin - 1);
    let res = uni::exact_div(&num, &den)?;
    let res = uni::mul(&res, &t);
    let res = if s < 0 { uni::neg(&res) } else { res };
    Ok(uni_to_bivar(&res, vars, survivor))
}

/// Reference resultant through the Sylvester matrix determinant (cofactor
/// expansion). Exponential in the matrix order; test oracle only.
pub fn resultant_sylvester(p: &BivarPoly, q: &BivarPoly, eliminate: Var) -> Result<BivarPoly> {
    p.assert_same_alphabet(q);
    let vars = (p.vars.0.as_str(), p.vars.1.as_str());
    let survivor = eliminate.other();
    let a = as_poly_in(p, eliminate);
    let b = as_poly_in(q, eliminate);
    let (da, db) = match (ry_deg(&a), ry_deg(&b)) {
        (Some(da), Some(db)) => (da, db),
        _ => return Ok(BivarPoly::zero(vars)),
    };
    if da == 0 && db == 0 {
        return Err(Error::ResultantBothConstant);
    }
    let n = da + db;
    let coeff = |u: &[Uni], i: usize| -> BivarPoly {
        u.get(i)
            .map(|c| uni_to_bivar(c, vars, survivor))
            .unwrap_or_else(|| BivarPoly::zero(vars))
    };
    let mut m = vec![vec![BivarPoly::zero(vars); n]; n];
    // db rows of p's coefficients (descending), then da rows of q's.
    for r in 0..db {
        for k in 0..=da {
            m[r][r + k] = coeff(&a, da - k);
        }
    }
    for r in 0..da {
        for k in 0..=db {
            m[db + r][r + k] = coeff(&b, db - k);
        }
    }
    Ok(det_cofactor(&m))
}

/// Gcd of two polynomials that are univariate in `var` (the other variable
/// must not occur). Result is primitive with positive leading coefficient,
/// up to the gcd of the integer contents.
pub fn univariate_gcd(p: &BivarPoly, q: &BivarPoly, var: Var) -> Result<BivarPoly> {
    p.assert_same_alphabet(q);
    let vars = (p.vars.0.as_str(), p.vars.1.as_str());
    for x in [p, q] {
        if x.degree_in(var.other()).unwrap_or(0) > 0 {
            let label = match var {
                Var::First => vars.0,
                Var::Second => vars.1,
            };
            return Err(Error::NotUnivariate(label.to_owned()));
        }
    }
    let a = as_univariate(p, var);
    let b = as_univariate(q, var);
    let g = uni::gcd(&a, &b);
    Ok(uni_to_bivar(&g, vars, var))
}

/// Dense coefficient vector of a polynomial that only involves `var`.
pub(crate) fn as_univariate(p: &BivarPoly, var: Var) -> Uni {
    let d = p.degree_in(var).map_or(0, |d| d as usize);
    let mut out = vec![BigInt::zero(); d + 1];
    for (&(a, b), c) in &p.terms {
        let e = match var {
            Var::First => a as usize,
            Var::Second => b as usize,
        };
        out[e] = c.clone();
    }
    uni::trim(&mut out);
    out
}
