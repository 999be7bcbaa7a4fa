//! One binary, thirteen subcommands: curve polynomials, certificates,
//! eigenvalue sections, circle-map dynamics, rotation-number portraits and
//! cross-validation — each with deterministic text/JSON (and, for portraits,
//! SVG) output suitable for golden-file testing.
//!
//! Exit codes: 0 on success, 1 when a verification ran and failed (or a
//! computation broke down), 2 on usage errors.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use heun_core::crosscheck::{
    verify_count, verify_ordering, verify_simple_intersections, verify_symmetries,
};
use heun_core::dynamics::{
    boundary_point, constriction_search, portrait_scan, rotation_number, JosephsonParams,
};
use heun_core::error::Error;
use heun_core::render;
use heun_core::spectral::{
    eigenvalues_at, newton_certificate, simple_intersections, spectral_polynomial,
};
use heun_core::xi::{
    factorization_check, genus_bound, genus_certified, mu_zero_check, smoothness_certificate,
    xi_polynomial,
};
use heun_core::Sign;

#[derive(Parser)]
#[command(
    name = "heun",
    version,
    about = "Spectral curves and phase-lock areas of the Josephson circle-map family",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output format (`svg` is accepted by `portrait` only).
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,

    /// Write the output bytes to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for grid scans (overrides the HEUN_THREADS variable;
    /// results are identical for every thread count).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Svg,
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Emit::Text => "text",
            Emit::Json => "json",
            Emit::Svg => "svg",
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the level-l curve polynomial in canonical text form.
    SpectralPoly {
        #[arg(long)]
        l: u32,
    },
    /// Irreducibility certificate from the support of the line-section form.
    NewtonCert {
        #[arg(long)]
        l: u32,
    },
    /// Eigenvalues of the level-l operator pencil at one coupling.
    Eigen {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Distinguished curve points (branch frequencies and plane coordinates).
    Intersections {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        mu: f64,
    },
    /// Determinantal boundary-curve polynomial(s) for level l.
    Xi {
        #[arg(long)]
        l: u32,
        /// Restrict to one branch sign; both are printed when omitted.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<Sign>,
    },
    /// Exact product identity joining the curve polynomial to the two
    /// boundary-curve factors, plus the zero-coupling closed forms.
    FactorCheck {
        #[arg(long)]
        l: u32,
    },
    /// Genus prediction and bidegree for the boundary curve.
    Genus {
        #[arg(long)]
        l: u32,
        /// Also run the affine smoothness certificate backing the prediction.
        #[arg(long)]
        certified: bool,
    },
    /// Affine smoothness certificate for one boundary-curve sign.
    SmoothCert {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
    },
    /// Rotation number of the circle-map flow at one parameter point.
    Rotnum {
        #[arg(long = "B", allow_hyphen_values = true)]
        b: f64,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Point of a phase-lock boundary arc at a given ordinate.
    Boundary {
        #[arg(long)]
        s: u32,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Rotation-number raster over a parameter rectangle (CSV, JSON or SVG).
    Portrait {
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long, default_value_t = 0.0)]
        a_min: f64,
        #[arg(long)]
        a_max: f64,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        #[arg(long, default_value_t = 200)]
        ny: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Identity-monodromy points on the axis B = s·ω of one lock area.
    Constrictions {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        a_min: f64,
        #[arg(long)]
        a_max: f64,
        /// Grid resolution of the initial scan along the axis.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Cross-validate algebraic curve data against the circle-map dynamics.
    Crosscheck {
        /// Level for the point/count/ordering modes.
        #[arg(long)]
        l: Option<u32>,
        #[command(flatten)]
        mode: CrosscheckMode,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CrosscheckMode {
    /// Verify every distinguished point at this coupling.
    #[arg(long)]
    mu: Option<f64>,
    /// Count crossings on this fixed-frequency line and confirm that the
    /// largest-coupling one carries the top winding index.
    #[arg(long)]
    count_omega: Option<f64>,
    /// Comma-separated couplings: check frequency ordering and that the
    /// measured winding/sign pairing is the same at each one.
    #[arg(long)]
    grid: Option<String>,
    /// Semicolon-separated `s,A,omega` triples for the mirror-symmetry check.
    #[arg(long)]
    symmetry: Option<String>,
}

/// What a subcommand produced: bytes for the output stream plus the verdict
/// that decides between exit codes 0 and 1.
struct Outcome {
    content: String,
    pass: bool,
}

impl Outcome {
    fn ok(content: String) -> Self {
        Outcome {
            content,
            pass: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    if cli.emit == Emit::Svg && !matches!(cli.cmd, Cmd::Portrait { .. }) {
        eprintln!("error: --emit svg is only available for the portrait subcommand");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(outcome) => {
            let delivered = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.content)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{}", outcome.content);
                    Ok(())
                }
            };
            match delivered {
                Ok(()) if outcome.pass => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Resolution order for the worker-pool size: `--threads` flag, then the
/// `HEUN_THREADS` variable, then the library default.
fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("HEUN_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // A second initialization attempt in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
}

fn require_positive(name: &str, value: f64) -> Result<(), Error> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let emit = cli.emit;
    match &cli.cmd {
        Cmd::SpectralPoly { l } => {
            let curve = spectral_polynomial(*l)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => format!("{}\n", curve.poly),
                _ => json_line(&curve)?,
            }))
        }
        Cmd::NewtonCert { l } => {
            let report = newton_certificate(*l)?;
            let content = match emit {
                Emit::Text => {
                    let mut s = String::new();
                    s.push_str(if report.pass { "PASS\n" } else { "FAIL\n" });
                    s.push_str(&format!(
                        "top-degree term: {}\nline term: {}\nlow pure powers absent: {}\nsingle-edge hull: {}\nhull:",
                        report.lambda_power_present,
                        report.r_term_present,
                        report.no_low_lambda_powers,
                        report.single_edge_hull,
                    ));
                    for (a, b) in &report.hull {
                        s.push_str(&format!(" ({a},{b})"));
                    }
                    s.push('\n');
                    s
                }
                _ => json_line(&report)?,
            };
            Ok(Outcome {
                content,
                pass: report.pass,
            })
        }
        Cmd::Eigen { l, mu, tol } => {
            require_positive("--tol", *tol)?;
            let spec = eigenvalues_at(*l, *mu, *tol)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => {
                    let mut s = String::from("j,lambda\n");
                    for (i, v) in spec.values.iter().enumerate() {
                        s.push_str(&format!("{},{v}\n", i + 1));
                    }
                    s
                }
                _ => json_line(&spec)?,
            }))
        }
        Cmd::Intersections { l, mu } => {
            let pts = simple_intersections(*l, *mu)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => render::intersections_csv(&pts),
                _ => json_line(&pts)?,
            }))
        }
        Cmd::Xi { l, sign } => {
            let signs: &[Sign] = match sign {
                Some(s) => &[*s][..],
                None => &[Sign::Plus, Sign::Minus][..],
            };
            let curves = signs
                .iter()
                .map(|&s| xi_polynomial(*l, s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::ok(match emit {
                Emit::Text => {
                    let mut s = String::new();
                    for c in &curves {
                        if sign.is_some() {
                            s.push_str(&format!("{}\n", c.poly));
                        } else {
                            s.push_str(&format!("{}: {}\n", c.sign, c.poly));
                        }
                    }
                    s
                }
                _ => {
                    if curves.len() == 1 {
                        json_line(&curves[0])?
                    } else {
                        json_line(&curves)?
                    }
                }
            }))
        }
        Cmd::FactorCheck { l } => {
            let product = factorization_check(*l)?;
            let zero_coupling = mu_zero_check(*l)?;
            let pass = product && zero_coupling;
            let content = match emit {
                Emit::Text => format!(
                    "{}\nproduct identity: {product}\nzero-coupling forms: {zero_coupling}\n",
                    if pass { "PASS" } else { "FAIL" }
                ),
                _ => json_line(&serde_json::json!({
                    "l": l,
                    "product_identity": product,
                    "zero_coupling_forms": zero_coupling,
                    "pass": pass,
                }))?,
            };
            Ok(Outcome { content, pass })
        }
        Cmd::Genus { l, certified } => {
            let report = if *certified {
                genus_certified(*l)?
            } else {
                genus_bound(*l)?
            };
            let content = match emit {
                Emit::Text => format!(
                    "conjectured_genus: {}\nbidegree: {},{}\ncertified: {}\n",
                    report.conjectured_genus,
                    report.bidegree.0,
                    report.bidegree.1,
                    report.certified
                ),
                _ => json_line(&report)?,
            };
            let pass = !*certified || report.certified;
            Ok(Outcome { content, pass })
        }
        Cmd::SmoothCert { l, sign } => {
            let cert = smoothness_certificate(*l, *sign)?;
            let pass = cert.smooth == Some(true);
            let content = match emit {
                Emit::Text => {
                    let verdict = match cert.smooth {
                        Some(true) => "smooth: certified",
                        Some(false) => "smooth: refuted",
                        None => "smooth: inconclusive",
                    };
                    let mut s = format!("{verdict}\n");
                    for note in &cert.notes {
                        s.push_str(&format!("note: {note}\n"));
                    }
                    s
                }
                _ => json_line(&cert)?,
            };
            Ok(Outcome { content, pass })
        }
        Cmd::Rotnum { b, a, omega, tol } => {
            require_positive("--tol", *tol)?;
            let p = JosephsonParams::new(*b, *a, *omega)?;
            let result = rotation_number(&p, *tol)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => format!("{}\n", result.rho),
                _ => json_line(&result)?,
            }))
        }
        Cmd::Boundary {
            s,
            sign,
            a,
            omega,
            tol,
        } => {
            require_positive("--tol", *tol)?;
            let pt = boundary_point(*s, *sign, *a, *omega, *tol)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => render::boundary_csv(std::slice::from_ref(&pt)),
                _ => json_line(&pt)?,
            }))
        }
        Cmd::Portrait {
            omega,
            b_min,
            b_max,
            a_min,
            a_max,
            nx,
            ny,
            tol,
        } => {
            require_positive("--tol", *tol)?;
            let raster = portrait_scan(*omega, (*b_min, *b_max), (*a_min, *a_max), *nx, *ny, *tol)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => render::portrait_csv(&raster),
                Emit::Svg => render::portrait_svg(&raster),
                Emit::Json => json_line(&raster)?,
            }))
        }
        Cmd::Constrictions {
            s,
            omega,
            a_min,
            a_max,
            samples,
            tol,
        } => {
            require_positive("--tol", *tol)?;
            let found = constriction_search(*s, *omega, (*a_min, *a_max), *samples, *tol)?;
            Ok(Outcome::ok(match emit {
                Emit::Text => render::constrictions_csv(&found, *omega),
                _ => json_line(&found)?,
            }))
        }
        Cmd::Crosscheck { l, mode, tol } => run_crosscheck(*l, mode, *tol, emit),
    }
}

fn require_level(l: Option<u32>) -> Result<u32, Error> {
    l.ok_or_else(|| Error::Domain("this crosscheck mode requires --l".into()))
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad coupling {tok:?} in --grid")))
        })
        .collect()
}

fn parse_symmetry_samples(text: &str) -> Result<Vec<(u32, f64, f64)>, Error> {
    text.split(';')
        .map(|triple| {
            let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::Domain(format!(
                    "bad sample {triple:?} in --symmetry, expected s,A,omega"
                )));
            }
            let s = parts[0]
                .parse::<u32>()
                .map_err(|_| Error::Domain(format!("bad winding index {:?}", parts[0])))?;
            let a = parts[1]
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad ordinate {:?}", parts[1])))?;
            let omega = parts[2]
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad frequency {:?}", parts[2])))?;
            Ok((s, a, omega))
        })
        .collect()
}

fn run_crosscheck(
    l: Option<u32>,
    mode: &CrosscheckMode,
    tol: f64,
    emit: Emit,
) -> Result<Outcome, Error> {
    require_positive("--tol", tol)?;
    if let Some(mu) = mode.mu {
        let report = verify_simple_intersections(require_level(l)?, mu, tol)?;
        let content = match emit {
            Emit::Text => {
                let mut s = String::new();
                s.push_str(if report.pass { "PASS\n" } else { "FAIL\n" });
                s.push_str("j,s_predicted,s_measured,sign,max_residual,identity_distance\n");
                for p in &report.points {
                    s.push_str(&format!(
                        "{},{},{},{},{:e},{:e}\n",
                        p.j,
                        p.s_predicted,
                        p.s_measured.map_or("?".to_string(), |v| v.to_string()),
                        p.sign_measured.map_or("?".to_string(), |v| v.to_string()),
                        p.max_residual,
                        p.identity_distance,
                    ));
                }
                s
            }
            _ => json_line(&report)?,
        };
        return Ok(Outcome {
            content,
            pass: report.pass,
        });
    }
    let (mode_name, pass, detail) = if let Some(omega) = mode.count_omega {
        let level = require_level(l)?;
        (
            "count",
            verify_count(level, omega, tol)?,
            serde_json::json!({"l": level, "omega": omega}),
        )
    } else if let Some(grid) = &mode.grid {
        let level = require_level(l)?;
        let couplings = parse_grid(grid)?;
        (
            "ordering",
            verify_ordering(level, &couplings, tol)?,
            serde_json::json!({"l": level, "grid": couplings}),
        )
    } else if let Some(samples) = &mode.symmetry {
        let parsed = parse_symmetry_samples(samples)?;
        (
            "symmetry",
            verify_symmetries(&parsed, tol)?,
            serde_json::json!({"samples": parsed}),
        )
    } else {
        unreachable!("clap enforces one mode flag");
    };
    let content = match emit {
        Emit::Text => format!("{}\n", if pass { "PASS" } else { "FAIL" }),
        _ => json_line(&serde_json::json!({
            "mode": mode_name,
            "params": detail,
            "tol": tol,
            "pass": pass,
        }))?,
    };
    Ok(Outcome { content, pass })
}
