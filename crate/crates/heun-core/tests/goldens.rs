//! Frozen reference values: canonical polynomial strings, genus and
//! multiplicity tables, closed-form dynamical quantities, and the JSON/CSV
//! shapes relied on by downstream tooling.

use heun_core::dynamics::{
    boundary_point, growth_point, rotation_number, JosephsonParams,
};
use heun_core::spectral::{
    eigenvalues_at, newton_certificate, s_index, simple_intersections, spectral_polynomial,
};
use heun_core::xi::{
    genus_bound, multiplicity_at_infinity, xi_polynomial, InfinityPoint,
};
use heun_core::Sign;

#[test]
fn spectral_polynomial_strings_up_to_level_four() {
    let expected = [
        (1, "1*λ^1"),
        (2, "1*λ^2 + -1*λ^1 + -1*v^1"),
        (3, "1*λ^3 + -4*λ^2 + -4*λ^1*v^1 + 4*λ^1 + 4*v^1"),
        (
            4,
            "1*λ^4 + -10*λ^3 + -10*λ^2*v^1 + 33*λ^2 + 42*λ^1*v^1 + 9*v^2 + -36*λ^1 + -36*v^1",
        ),
    ];
    for (l, text) in expected {
        assert_eq!(
            spectral_polynomial(l).unwrap().poly.to_string(),
            text,
            "level {l}"
        );
    }
}

#[test]
fn newton_line_polynomial_string_for_level_two() {
    assert_eq!(
        spectral_polynomial(2).unwrap().q.to_string(),
        "1*λ^2 + -1*R^1"
    );
    assert!(newton_certificate(2).unwrap().pass);
}

#[test]
fn factor_curve_strings_up_to_level_three() {
    let expected = [
        (1, Sign::Plus, "1*μ^1 + 1*r^1"),
        (1, Sign::Minus, "1*μ^1 + -1*r^1"),
        (2, Sign::Plus, "-1*μ^2 + 1*r^2 + -1*r^1"),
        (2, Sign::Minus, "-1*μ^2 + 1*r^2 + 1*r^1"),
        (
            3,
            Sign::Plus,
            "-1*μ^3 + -1*μ^2*r^1 + 1*μ^1*r^2 + 1*r^3 + -2*r^1",
        ),
        (
            3,
            Sign::Minus,
            "-1*μ^3 + 1*μ^2*r^1 + 1*μ^1*r^2 + -1*r^3 + 2*r^1",
        ),
    ];
    for (l, sign, text) in expected {
        assert_eq!(
            xi_polynomial(l, sign).unwrap().poly.to_string(),
            text,
            "level {l} sign {sign}"
        );
    }
}

#[test]
fn genus_and_bidegree_table() {
    let expected = [
        (2, 0, (1, 1)),
        (3, 0, (1, 2)),
        (4, 1, (2, 2)),
        (5, 2, (2, 3)),
        (6, 4, (3, 3)),
        (7, 6, (3, 4)),
        (20, 81, (10, 10)),
    ];
    for (l, genus, bidegree) in expected {
        let rep = genus_bound(l).unwrap();
        assert_eq!(rep.conjectured_genus, genus, "level {l}");
        assert_eq!(rep.bidegree, bidegree, "level {l}");
        assert!(!rep.certified);
    }
}

#[test]
fn multiplicity_table_is_the_split_of_l() {
    for l in 2..=8u32 {
        let half = l / 2;
        assert_eq!(
            multiplicity_at_infinity(l, Sign::Plus, InfinityPoint::PPlus).unwrap(),
            half
        );
        assert_eq!(
            multiplicity_at_infinity(l, Sign::Plus, InfinityPoint::PMinus).unwrap(),
            l - half
        );
        assert_eq!(
            multiplicity_at_infinity(l, Sign::Minus, InfinityPoint::PPlus).unwrap(),
            l - half
        );
        assert_eq!(
            multiplicity_at_infinity(l, Sign::Minus, InfinityPoint::PMinus).unwrap(),
            half
        );
    }
}

#[test]
fn winding_index_table_low_levels() {
    let expected: [(u32, &[u32]); 5] = [
        (1, &[1]),
        (2, &[2, 0]),
        (3, &[3, 1, 1]),
        (4, &[4, 2, 2, 0]),
        (5, &[5, 3, 3, 1, 1]),
    ];
    for (l, table) in expected {
        let got: Vec<u32> = (1..=l).map(|j| s_index(l, j)).collect();
        assert_eq!(got, table, "level {l}");
    }
}

#[test]
fn golden_eigenvalues_for_level_two() {
    // At unit coupling the two eigenvalues are (1 ± √5)/2 and the gap is √5.
    let spec = eigenvalues_at(2, 1.0, 1e-12).unwrap();
    let root5 = 5f64.sqrt();
    assert!((spec.values[0] - (1.0 - root5) / 2.0).abs() < 1e-12);
    assert!((spec.values[1] - (1.0 + root5) / 2.0).abs() < 1e-12);
    assert!((spec.min_gap - root5).abs() < 1e-9);
}

#[test]
fn golden_rotation_number_values() {
    let p = JosephsonParams::new(2.0, 0.0, 1.0).unwrap();
    let got = rotation_number(&p, 1e-8).unwrap();
    assert!((got.rho - 3f64.sqrt()).abs() < 1e-7);

    let origin = JosephsonParams::new(0.0, 0.0, 1.0).unwrap();
    assert_eq!(rotation_number(&origin, 1e-8).unwrap().rho, 0.0);
}

#[test]
fn golden_growth_and_boundary_values() {
    assert!((growth_point(2, 0.5).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert!((growth_point(1, 2.0).unwrap() - 5f64.sqrt()).abs() < 1e-15);
    let bp = boundary_point(0, Sign::Plus, 0.0, 0.7, 1e-9).unwrap();
    assert!((bp.b - 1.0).abs() < 1e-8, "zeroth arc foot at {}", bp.b);
}

#[test]
fn json_shapes_are_stable() {
    let bp = boundary_point(1, Sign::Minus, 0.25, 0.8, 1e-8).unwrap();
    let v = serde_json::to_value(&bp).unwrap();
    assert_eq!(v["s"], 1);
    assert_eq!(v["sign"], "-");
    assert!(v.get("A").is_some() && v.get("B").is_some());
    assert!(v.get("omega").is_some() && v.get("residual").is_some());

    let pts = simple_intersections(2, 1.0).unwrap();
    let v = serde_json::to_value(&pts[0]).unwrap();
    for key in ["j", "mu", "lambda_j", "R_j", "omega_j", "B", "A", "s"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }

    let curve = xi_polynomial(2, Sign::Plus).unwrap();
    let v = serde_json::to_value(&curve).unwrap();
    assert_eq!(v["l"], 2);
    assert_eq!(v["sign"], "+");
    assert_eq!(v["poly"], "-1*μ^2 + 1*r^2 + -1*r^1");
}
