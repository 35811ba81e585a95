//! `homcheck`: norms, law verification, decomposition and fuzzing from the
//! command line.
//!
//! Exit codes: 0 all checks pass, 1 a law failed, 2 input or usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use homcheck::decomposition::{decompose_with, DecomposeOptions};
use homcheck::doc::{parse, to_text, DecompositionReport, MapDocument};
use homcheck::generator::fuzz_theorems;
use homcheck::hom::{verify, RealLinearMap, DEFAULT_TOL};
use homcheck::spectral::{norm_by_bisection, operator_norm, order_norm};
use homcheck::{Element, Error};

#[derive(Parser)]
#[command(name = "homcheck", version, about = "Certify ring *-homomorphisms between finite-dimensional C*-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator norm of an element.
    Norm {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Eig)]
        method: Method,
        /// Target accuracy of the bisection method.
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
    },
    /// Check every ring *-homomorphism law; prints a JSON report.
    Verify {
        map: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "HOMCHECK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Split a verified map into complex-linear and conjugate-linear parts.
    Decompose {
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Work in the full codomain instead of the subalgebra generated by
        /// the image.
        #[arg(long)]
        no_restrict: bool,
        /// Write the two parts as `phi1.json` and `phi2.json` here.
        #[arg(long)]
        emit_parts: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "HOMCHECK_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Generate random homomorphisms and near-misses and check every theorem.
    Fuzz {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "HOMCHECK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_dim: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Eig,
    Bisect,
    Order,
}

/// Usage and input errors; always exit 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Norm { file, method, precision } => {
            let a: Element = parse(&read(&file)?)?;
            let value = match method {
                Method::Eig => operator_norm(&a),
                Method::Bisect => norm_by_bisection(&a, precision)?,
                Method::Order => order_norm(&a)?,
            };
            println!("{}", significant(value));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { map, trials, seed, tol } => {
            check_tol(tol)?;
            let m = load_map(&map)?;
            let report = verify(&m, trials, seed, tol);
            println!("{}", to_text(&report));
            Ok(law_exit(report.passed))
        }
        Command::Decompose {
            map,
            tol,
            no_restrict,
            emit_parts,
            trials,
            seed,
        } => {
            check_tol(tol)?;
            let m = load_map(&map)?;
            let report = verify(&m, trials, seed, tol);
            if !report.passed {
                eprintln!("map failed verification (largest residual {:e})", report.max_residual());
                println!("{}", to_text(&report));
                return Ok(law_exit(false));
            }
            if no_restrict {
                eprintln!("warning: codomain not restricted; T need not be central in the full codomain");
            }
            let opts = DecomposeOptions {
                restrict: !no_restrict,
                strict: false,
                tol,
            };
            let d = match decompose_with(&m, &opts) {
                Ok(d) => d,
                Err(e @ Error::DecompositionResidual { .. }) => {
                    eprintln!("{e}");
                    return Ok(law_exit(false));
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(dir) = emit_parts {
                fs::create_dir_all(&dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
                write(&dir.join("phi1.json"), &MapDocument::from(d.phi1.clone()))?;
                write(&dir.join("phi2.json"), &MapDocument::from(d.phi2.clone()))?;
            }
            println!("{}", to_text(&DecompositionReport::from(&d)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzz {
            trials,
            seed,
            max_dim,
            tol,
        } => {
            check_tol(tol)?;
            let report = fuzz_theorems(trials as usize, seed, max_dim as usize, tol)?;
            println!("{}", to_text(&report));
            Ok(law_exit(report.fail_count == 0))
        }
    }
}

fn law_exit(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure(format!("tolerance must be positive and finite, got {tol}")))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write(path: &Path, doc: &MapDocument) -> Result<(), Failure> {
    fs::write(path, to_text(doc) + "\n").map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<RealLinearMap, Failure> {
    let doc: MapDocument = parse(&read(path)?)?;
    Ok(doc.to_map()?)
}

/// Fixed-point text with at least 12 significant digits.
fn significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.12}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(12) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(significant(1.0), "1.000000000000");
        assert_eq!(significant(0.0), "0.000000000000");
        assert_eq!(significant(0.05), "0.0500000000000");
        assert_eq!(significant(2.0f64.sqrt()), "1.414213562373");
        assert_eq!(significant(12345.5), "12345.500000000000");
    }
}
