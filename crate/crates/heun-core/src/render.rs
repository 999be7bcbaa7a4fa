//! Plain-text (CSV) and vector-image (SVG) emission for the dynamical
//! artifacts. All output is assembled single-threaded from already-computed
//! data, uses the shortest round-trip float formatting, and is byte-identical
//! across runs and thread counts.

use std::fmt::Write as _;

use crate::dynamics::{BoundaryPoint, Constriction, PortraitRaster};
use crate::spectral::SimpleIntersectionPoint;

/// Absolute distance to the nearest integer below which a rotation number is
/// rendered as a saturated plateau cell.
const PLATEAU_EPS: f64 = 1e-9;

/// Twelve saturated fill colors for integer plateaus, indexed by the integer
/// modulo 12.
const PALETTE: [[u8; 3]; 12] = [
    [0x1f, 0x77, 0xb4],
    [0xff, 0x7f, 0x0e],
    [0x2c, 0xa0, 0x2c],
    [0xd6, 0x27, 0x28],
    [0x94, 0x67, 0xbd],
    [0x8c, 0x56, 0x4b],
    [0xe3, 0x77, 0xc2],
    [0x7f, 0x7f, 0x7f],
    [0xbc, 0xbd, 0x22],
    [0x17, 0xbe, 0xcf],
    [0xae, 0xc7, 0xe8],
    [0xff, 0xbb, 0x78],
];

/// CSV for the distinguished spectral points:
/// `j,mu,lambda_j,R_j,omega_j,B,A,s`, one row per point.
pub fn intersections_csv(points: &[SimpleIntersectionPoint]) -> String {
    let mut out = String::from("j,mu,lambda_j,R_j,omega_j,B,A,s\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.j, p.mu, p.lambda_j, p.r_j, p.omega_j, p.b, p.a, p.s
        );
    }
    out
}

/// CSV for solved boundary-arc points: `s,sign,A,omega,B,residual`.
pub fn boundary_csv(points: &[BoundaryPoint]) -> String {
    let mut out = String::from("s,sign,A,omega,B,residual\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.s, p.sign, p.a, p.omega, p.b, p.residual
        );
    }
    out
}

/// CSV for constrictions, sharing the boundary header
/// `s,sign,A,omega,B,residual`. The sign column carries `*` because both
/// starting angles close up at an identity period map, and the residual
/// column carries the distance of the period map to ±identity.
pub fn constrictions_csv(points: &[Constriction], omega: f64) -> String {
    let mut out = String::from("s,sign,A,omega,B,residual\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},*,{},{},{},{}",
            p.s, p.a, omega, p.b, p.identity_distance
        );
    }
    out
}

/// CSV for a rotation-number raster: `B,A,rho`, row-major with the abscissa
/// varying fastest.
pub fn portrait_csv(raster: &PortraitRaster) -> String {
    let mut out = String::from("B,A,rho\n");
    for iy in 0..raster.ny {
        for ix in 0..raster.nx {
            let _ = writeln!(
                out,
                "{},{},{}",
                raster.b_at(ix),
                raster.a_at(iy),
                raster.rho[iy * raster.nx + ix]
            );
        }
    }
    out
}

fn fill_color(rho: f64) -> [u8; 3] {
    let nearest = rho.round();
    if (rho - nearest).abs() < PLATEAU_EPS {
        return PALETTE[(nearest as i64).rem_euclid(12) as usize];
    }
    // Graded zone between plateaus: blend the neighboring plateau colors by
    // the fractional position, quantized so the bytes depend only on integer
    // arithmetic, then lighten to visually separate it from saturated cells.
    let lo = rho.floor();
    let a = PALETTE[(lo as i64).rem_euclid(12) as usize];
    let b = PALETTE[(lo as i64 + 1).rem_euclid(12) as usize];
    let t = (((rho - lo) * 256.0).floor() as i64).clamp(0, 255);
    let mut c = [0u8; 3];
    for k in 0..3 {
        let blended = i64::from(a[k]) + (i64::from(b[k]) - i64::from(a[k])) * t / 256;
        c[k] = (blended + (255 - blended) * 115 / 256) as u8;
    }
    c
}

/// SVG heat map of a rotation-number raster. Integer plateaus get saturated
/// colors from a fixed 12-color palette; fractional cells are lightened
/// blends of the neighboring plateau colors. Cells are emitted bottom-up
/// (ordinate increasing upward) as run-length-merged rectangles, so equal
/// rasters produce identical bytes.
pub fn portrait_svg(raster: &PortraitRaster) -> String {
    let cell = (720 / raster.nx.max(raster.ny).max(1)).max(1);
    let width = raster.nx * cell;
    let height = raster.ny * cell;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    for iy in 0..raster.ny {
        let y = (raster.ny - 1 - iy) * cell;
        let row = &raster.rho[iy * raster.nx..(iy + 1) * raster.nx];
        let mut ix = 0;
        while ix < raster.nx {
            let color = fill_color(row[ix]);
            let mut run = 1;
            while ix + run < raster.nx && fill_color(row[ix + run]) == color {
                run += 1;
            }
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#{:02x}{:02x}{:02x}\"/>",
                ix * cell,
                y,
                run * cell,
                cell,
                color[0],
                color[1],
                color[2]
            );
            ix += run;
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{boundary_point, constriction_search, portrait_scan};
    use crate::spectral::simple_intersections;
    use crate::Sign;

    #[test]
    fn intersection_rows_match_points() {
        let pts = simple_intersections(2, 1.0).unwrap();
        let csv = intersections_csv(&pts);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,mu,lambda_j,R_j,omega_j,B,A,s");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,1,"));
        assert!(lines[1].ends_with(",2"));
        assert!(lines[2].starts_with("2,1,"));
        assert!(lines[2].ends_with(",0"));
    }

    #[test]
    fn boundary_rows_carry_sign_and_frequency() {
        let p = boundary_point(1, Sign::Minus, 0.25, 0.8, 1e-8).unwrap();
        let csv = boundary_csv(&[p]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "s,sign,A,omega,B,residual");
        assert!(lines[1].starts_with("1,-,0.25,0.8,"));
    }

    #[test]
    fn constriction_rows_use_the_shared_header() {
        let found = constriction_search(1, 2.0, (0.0, 10.0), 200, 1e-9).unwrap();
        assert!(!found.is_empty());
        let csv = constrictions_csv(&found, 2.0);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "s,sign,A,omega,B,residual");
        assert!(lines[1].starts_with("1,*,"));
        assert_eq!(lines.len(), found.len() + 1);
    }

    #[test]
    fn portrait_csv_is_row_major_with_header() {
        let r = portrait_scan(2.0, (0.0, 1.0), (0.0, 1.0), 3, 2, 1e-4).unwrap();
        let csv = portrait_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "B,A,rho");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("0,0,"));
        assert!(lines[2].starts_with("0.5,0,"));
        assert!(lines[4].starts_with("0,1,"));
    }

    #[test]
    fn plateau_cells_are_saturated_and_graded_cells_are_lighter() {
        assert_eq!(fill_color(0.0), PALETTE[0]);
        assert_eq!(fill_color(3.0), PALETTE[3]);
        assert_eq!(fill_color(3.0 + 0.5e-9), PALETTE[3]);
        let graded = fill_color(0.5);
        assert_ne!(graded, PALETTE[0]);
        assert_ne!(graded, PALETTE[1]);
        // Lightening moves every channel toward white relative to the blend.
        let blend = [
            (PALETTE[0][0] as i64 + PALETTE[1][0] as i64) / 2,
            (PALETTE[0][1] as i64 + PALETTE[1][1] as i64) / 2,
            (PALETTE[0][2] as i64 + PALETTE[1][2] as i64) / 2,
        ];
        for k in 0..3 {
            assert!(i64::from(graded[k]) >= blend[k] - 1);
        }
    }

    #[test]
    fn svg_output_is_deterministic_and_run_length_merged() {
        let r = portrait_scan(2.0, (0.0, 0.5), (0.0, 0.5), 4, 3, 1e-4).unwrap();
        let svg1 = portrait_svg(&r);
        let svg2 = portrait_svg(&r);
        assert_eq!(svg1, svg2);
        assert!(svg1.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg1.ends_with("</svg>\n"));
        // A tiny raster near the origin is one solid plateau: each row merges
        // into a single full-width rectangle.
        let rects = svg1.matches("<rect").count();
        assert!(rects >= 3, "expected at least one rect per row: {svg1}");
        assert!(svg1.contains("width=\"720\""));
    }
}
