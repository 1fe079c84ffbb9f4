//! `gegtau`: build Tau matrices, compute spectra and characteristic
//! polynomials, run the theorem checks and emit sweep data.
//!
//! Exit status: 0 on success, 1 when a check fails or a computation errors,
//! 2 on bad usage.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gegtau::io;
use gegtau::spectra::{
    exact_neumann_spectrum, exact_spectrum, pencil_spectrum, tau_spectrum_with_tol,
    BoundaryCondition, DEFAULT_TOL_REAL,
};
use gegtau::sweep::{conditioning_sweep, error_report_from, gamma_scan, spectrum_error_report};
use gegtau::tau_operator::{build_diff_pencil, build_gi2, PencilVariant};
use gegtau::verify::{phi_poly, run_suite, PhiVariant, Suite, SuiteOptions};
use gegtau::{charpoly, Error, GegenbauerIndex, JacobiIndex, Parity};

const DEFAULT_M_GRID: &str = "8,12,16,24,32,48,64,96,128,192,256,384,512,768,1024";

#[derive(Parser, Debug)]
#[command(
    name = "gegtau",
    version,
    about = "Gegenbauer/Jacobi Tau operators for D²u = λu"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    /// Sparse triplets (gi2 only).
    Coo,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The (m+1) x m double-integration matrix.
    Gi2 {
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value = "even")]
        parity: Parity,
        #[command(flatten)]
        output: Output,
    },
    /// Eigenvalues with errors against the exact spectrum.
    Eig {
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value = "even")]
        parity: Parity,
        #[arg(long, default_value = "dirichlet")]
        bc: BoundaryCondition,
        /// Solve a generalized pencil instead (even modes, Dirichlet).
        #[arg(long)]
        variant: Option<PencilVariant>,
        #[arg(long, default_value_t = DEFAULT_TOL_REAL)]
        tol_real: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Characteristic polynomial in μ = 1/λ.
    ///
    /// With --alpha/--beta: the Jacobi polynomial B_n (or the mixed-BC one,
    /// or a Φ polynomial with --variant); otherwise the Gegenbauer p_m / q_m.
    Charpoly {
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, default_value = "even")]
        parity: Parity,
        #[arg(long, default_value = "dirichlet")]
        bc: BoundaryCondition,
        /// Φ variant: base, plus or plus_mu2.
        #[arg(long)]
        variant: Option<PhiVariant>,
        /// Weight A of the Φ variants.
        #[arg(long, default_value_t = 0.0)]
        weight: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Theorem checks; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "theorems")]
        suite: Suite,
        /// `default`, a comma list, or start:stop:step.
        #[arg(long, default_value = "default", allow_hyphen_values = true)]
        gamma_grid: String,
        /// Matrix sizes for the matrix-path checks.
        #[arg(long, default_value = "50,200")]
        matrix_sizes: String,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL_REAL)]
        tol_real: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Per-mode relative errors of the Dirichlet spectrum.
    SweepError {
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value = "odd")]
        parity: Parity,
        #[command(flatten)]
        output: Output,
    },
    /// First even eigenvalue error versus m for several formulations.
    SweepConditioning {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value = DEFAULT_M_GRID)]
        m_grid: String,
        /// Comma list of formulation tags.
        #[arg(long, default_value = "diff-elim-last,diff-elim-first,integration")]
        variant: String,
        #[command(flatten)]
        output: Output,
    },
    /// Non-real eigenvalue counts across γ.
    SweepGamma {
        #[arg(long, default_value_t = 200)]
        modes: usize,
        #[arg(long, default_value = "2:3:0.1", allow_hyphen_values = true)]
        gamma_grid: String,
        #[arg(long, default_value = "odd")]
        parity: Parity,
        #[arg(long, default_value_t = DEFAULT_TOL_REAL)]
        tol_real: f64,
        #[command(flatten)]
        output: Output,
    },
}

/// Rendered output and whether every check in it passed.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            // bad parameter values are usage errors too
            CliError::Lib(
                Error::InvalidGegenbauerIndex(_)
                | Error::InvalidJacobiIndex(..)
                | Error::TooSmall { .. }
                | Error::UnknownTag { .. }
                | Error::InvalidArgument { .. }
                | Error::Parse { .. }
                | Error::VariantIndexMismatch { .. }
                | Error::DegreeMismatch(..),
            ) => 2,
            CliError::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => e.fmt(f),
        }
    }
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

fn no_coo(format: Format) -> Result<(), CliError> {
    if format == Format::Coo {
        return Err(usage("--format coo is only available for gi2"));
    }
    Ok(())
}

fn meta(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn run(cmd: Command) -> Result<(Outcome, Output), CliError> {
    match cmd {
        Command::Gi2 {
            modes,
            gamma,
            parity,
            output,
        } => {
            let mat = build_gi2(modes, GegenbauerIndex::new(gamma)?, parity)?;
            let text = match output.format {
                Format::Csv => io::matrix_to_csv(&mat.rect()),
                Format::Json => io::matrix_to_json(
                    &mat.rect(),
                    json!({ "command": "gi2", "modes": modes, "gamma": gamma, "parity": parity }),
                ),
                Format::Coo => io::coordinate_to_string(modes + 1, modes, &mat.triplets()),
            };
            Ok((Outcome::ok(text), output))
        }
        Command::Eig {
            modes,
            gamma,
            parity,
            bc,
            variant,
            tol_real,
            output,
        } => {
            no_coo(output.format)?;
            let idx = GegenbauerIndex::new(gamma)?;
            let (spec, exact) = match variant {
                Some(v) => {
                    if parity != Parity::Even || bc != BoundaryCondition::Dirichlet {
                        return Err(usage("--variant needs --parity even and --bc dirichlet"));
                    }
                    let mut s = pencil_spectrum(&build_diff_pencil(modes, idx, v)?)?;
                    s = gegtau::spectra::Spectrum::from_lambdas(s.eigenvalues, s.source, tol_real);
                    let e = exact_spectrum(s.len(), Parity::Even);
                    (s, e)
                }
                None => {
                    let s = tau_spectrum_with_tol(modes, idx, parity, bc, tol_real)?;
                    let e = match bc {
                        BoundaryCondition::Neumann => exact_neumann_spectrum(s.len(), parity),
                        _ => exact_spectrum(s.len(), parity),
                    };
                    (s, e)
                }
            };
            let report = error_report_from(&spec, &exact, idx, parity);
            let text = match output.format {
                Format::Json => io::sweep_to_json(
                    &report,
                    meta(&[
                        ("command", json!("eig")),
                        ("bc", json!(bc.to_string())),
                        ("source", json!(spec.source)),
                        ("variant", json!(variant.map(|v| v.tag()))),
                    ]),
                ),
                _ => io::sweep_to_csv(&report),
            };
            Ok((Outcome::ok(text), output))
        }
        Command::Charpoly {
            modes,
            gamma,
            alpha,
            beta,
            parity,
            bc,
            variant,
            weight,
            output,
        } => {
            no_coo(output.format)?;
            let (p, m) = match (alpha, beta) {
                (Some(a), Some(b)) => {
                    let idx = JacobiIndex::new(a, b)?;
                    let p = match (variant, bc) {
                        (Some(v), _) => phi_poly(modes, idx, weight, v)?,
                        (None, BoundaryCondition::Dirichlet) => {
                            charpoly::jacobi_char_poly(modes, idx)?
                        }
                        (None, BoundaryCondition::Mixed) => charpoly::mixed_char_poly(modes, idx)?,
                        (None, BoundaryCondition::Neumann) => {
                            return Err(usage("Jacobi polynomials support --bc dirichlet or mixed"))
                        }
                    };
                    let kind = match (variant, bc) {
                        (Some(v), _) => format!("phi-{v}"),
                        (None, b) => format!("jacobi-{b}"),
                    };
                    (
                        p,
                        json!({ "command": "charpoly", "kind": kind, "n": modes, "alpha": a, "beta": b, "weight": weight }),
                    )
                }
                (None, None) => {
                    if variant.is_some() || bc != BoundaryCondition::Dirichlet {
                        return Err(usage("--variant and --bc apply to Jacobi polynomials (give --alpha and --beta)"));
                    }
                    let idx = GegenbauerIndex::new(gamma)?;
                    let p = charpoly::charpoly_sequence(modes, idx, parity).swap_remove(modes);
                    (
                        p,
                        json!({ "command": "charpoly", "kind": "gegenbauer", "modes": modes, "gamma": gamma, "parity": parity }),
                    )
                }
                _ => return Err(usage("--alpha and --beta go together")),
            };
            let text = match output.format {
                Format::Json => io::polynomial_to_json(&p, m),
                _ => io::polynomial_to_csv(&p),
            };
            Ok((Outcome::ok(text), output))
        }
        Command::Verify {
            suite,
            gamma_grid,
            matrix_sizes,
            seed,
            tol_real,
            output,
        } => {
            no_coo(output.format)?;
            let opts = SuiteOptions {
                gamma_grid: io::parse_float_grid(&gamma_grid)?,
                matrix_sizes: io::parse_usize_grid(&matrix_sizes)?,
                seed,
                tol_real,
                ..SuiteOptions::default()
            };
            let reports = run_suite(suite, &opts)?;
            let failed = reports.iter().filter(|r| !r.passed).count();
            for r in reports.iter().filter(|r| !r.passed) {
                eprintln!("{r}");
            }
            eprintln!("{} checks, {} failed", reports.len(), failed);
            let text = match output.format {
                Format::Json => io::reports_to_json(
                    &reports,
                    meta(&[
                        ("command", json!("verify")),
                        ("gamma_grid", json!(opts.gamma_grid)),
                        ("matrix_sizes", json!(opts.matrix_sizes)),
                        ("seed", json!(seed)),
                        ("tol_real", json!(tol_real)),
                    ]),
                ),
                _ => io::reports_to_csv(&reports),
            };
            Ok((
                Outcome {
                    text,
                    ok: failed == 0,
                },
                output,
            ))
        }
        Command::SweepError {
            modes,
            gamma,
            parity,
            output,
        } => {
            no_coo(output.format)?;
            let r = spectrum_error_report(modes, GegenbauerIndex::new(gamma)?, parity)?;
            let text = match output.format {
                Format::Json => io::sweep_to_json(&r, meta(&[("command", json!("sweep-error"))])),
                _ => io::sweep_to_csv(&r),
            };
            Ok((Outcome::ok(text), output))
        }
        Command::SweepConditioning {
            gamma,
            m_grid,
            variant,
            output,
        } => {
            no_coo(output.format)?;
            let grid = io::parse_usize_grid(&m_grid)?;
            let variants = variant
                .split(',')
                .map(|t| t.trim().parse::<PencilVariant>())
                .collect::<gegtau::Result<Vec<_>>>()?;
            let r = conditioning_sweep(GegenbauerIndex::new(gamma)?, &grid, &variants)?;
            for f in &r.fits {
                eprintln!(
                    "{}: slope {:.3} (95% CI {:.3}..{:.3}, {} points from m = {})",
                    f.label, f.slope, f.ci_low, f.ci_high, f.points, f.x_min
                );
            }
            let text = match output.format {
                Format::Json => {
                    io::sweep_to_json(&r, meta(&[("command", json!("sweep-conditioning"))]))
                }
                _ => io::sweep_to_csv(&r),
            };
            Ok((Outcome::ok(text), output))
        }
        Command::SweepGamma {
            modes,
            gamma_grid,
            parity,
            tol_real,
            output,
        } => {
            no_coo(output.format)?;
            let grid = io::parse_float_grid(&gamma_grid)?;
            let r = gamma_scan(modes, &grid, parity, tol_real)?;
            let text = match output.format {
                Format::Json => io::sweep_to_json(&r, meta(&[("command", json!("sweep-gamma"))])),
                _ => io::sweep_to_csv(&r),
            };
            Ok((Outcome::ok(text), output))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((outcome, output)) => {
            if let Err(e) = emit(&outcome.text, output.out.as_ref()) {
                eprintln!("gegtau: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("gegtau: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
