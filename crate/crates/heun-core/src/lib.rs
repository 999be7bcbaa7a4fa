//! Spectral curves and phase-lock areas for the double confluent Heun /
//! resistively-shunted Josephson junction family.
//!
//! The crate is organised around three layers:
//!
//! * **exact algebra** ([`poly`], [`sturm`]): big-integer polynomials,
//!   determinants, resultants, Newton diagrams, and exact real-root counting;
//! * **curve constructions** ([`spectral`], [`xi`]): the spectral polynomial
//!   of the tridiagonal family, its eigenvalue structure, the determinantal
//!   plane curves attached to it, and certificates about their geometry;
//! * **dynamics** ([`ode`], [`dynamics`], [`crosscheck`]): the driven
//!   pendulum-type circle flow, rotation numbers, boundary points of the
//!   phase-lock areas, and the numeric-vs-algebraic consistency report.
//!
//! [`render`] writes the CSV and SVG artifacts used by the command-line tool.

pub mod crosscheck;
pub mod dynamics;
pub mod error;
pub(crate) mod numeric;
pub mod ode;
pub mod poly;
pub mod render;
pub mod spectral;
pub(crate) mod sturm;
pub mod xi;

pub use error::{Error, Result};

/// A two-valued sign tag, used both for the pair of factor curves and for
/// the two boundary arcs of a phase-lock region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// +1.0 or -1.0.
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "Plus" => Ok(Sign::Plus),
            "-" | "minus" | "Minus" => Ok(Sign::Minus),
            other => Err(Error::Domain(format!("unknown sign {other:?}, expected + or -"))),
        }
    }
}
