//! `ribbonlab`: catalog generation, model checks, Drinfeld and ribbon
//! operators, and braid-closure invariants.
//!
//! Exit status: 0 when everything requested passes, 1 on a failed check or a
//! model that cannot be processed, 2 on unreadable or malformed input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use ribbonlab::catalog::ClassicalType;
use ribbonlab::ribbon::Sign;

use commands::{CatalogRequest, CheckOptions, Input, InvariantOptions};
use report::{Format, RunConfig};

#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1.
    Check(String),
}

#[derive(Parser)]
#[command(name = "ribbonlab", version, about = "Face models, ribbon functionals and link invariants")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Numerical tolerance; overrides RIBBONLAB_TOL (default 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Eigenvalue clustering radius.
    #[arg(long, global = true, default_value_t = 1e-7)]
    radius: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 20240229)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in model with metadata.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Run check suites on a model file.
    Check {
        /// Suites to run; repeat or separate with commas.
        #[arg(long = "suite", value_enum, value_delimiter = ',', required = true)]
        suites: Vec<Suite>,
        /// Take λ and q for the BMW suite from the model metadata.
        #[arg(long)]
        lambda_from_meta: bool,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Option<Complex64>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q: Option<Complex64>,
        /// Roots `a,b` of the quadratic relation.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        hecke: Option<(Complex64, Complex64)>,
        #[arg(long)]
        report: Option<PathBuf>,
        model: PathBuf,
    },
    /// Drinfeld operators on the edge space.
    Drinfeld {
        #[arg(long)]
        report: Option<PathBuf>,
        model: PathBuf,
    },
    /// Ribbon and modified ribbon solutions with their checks.
    Ribbon {
        #[arg(long)]
        report: Option<PathBuf>,
        model: PathBuf,
    },
    /// Normalized invariant of a braid closure.
    Invariant {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = MribArg::Plus)]
        mrib: MribArg,
        /// Signed generator indices, e.g. "1 -2 1".
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        #[arg(long)]
        strands: usize,
        /// Append a randomized conjugation/stabilization drift check.
        #[arg(long)]
        markov_suite: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Jimbo braiding of a classical type.
    Jimbo {
        #[arg(long = "type", value_parser = parse_type)]
        kind: ClassicalType,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q: Option<Complex64>,
        /// Square root of q; required for type B.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q_half: Option<Complex64>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
        eta: Complex64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SU(N)_L SOS model.
    Sos {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        t_num: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        eps: i32,
        #[arg(long, default_value_t = 0)]
        zeta_root: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ybe,
    Closable,
    Hecke,
    Bmw,
    Glf,
    Enhancement,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MribArg {
    Plus,
    Minus,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim().parse().map_err(|_| format!("{s:?} is not a complex number"))
}

fn parse_pair(s: &str) -> Result<(Complex64, Complex64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    Ok((parse_complex(a)?, parse_complex(b)?))
}

fn parse_type(s: &str) -> Result<ClassicalType, String> {
    s.parse().map_err(|e: ribbonlab::Error| e.to_string())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let RunArgs {
        tol,
        radius,
        format,
        seed,
    } = cli.run;
    let cfg = RunConfig::resolve(tol, radius, format, seed)?;
    match cli.command {
        Command::Catalog(c) => {
            let (request, out) = match c {
                CatalogCmd::Jimbo {
                    kind,
                    rank,
                    q,
                    q_half,
                    eta,
                    out,
                } => (
                    CatalogRequest::Jimbo {
                        kind,
                        rank,
                        q,
                        q_half,
                        eta,
                    },
                    out,
                ),
                CatalogCmd::Sos {
                    n,
                    level,
                    t_num,
                    eps,
                    zeta_root,
                    out,
                } => (
                    CatalogRequest::Sos {
                        n,
                        level,
                        t_num,
                        eps,
                        zeta_root,
                    },
                    out,
                ),
            };
            commands::cmd_catalog(request, commands::out_path(&out))
        }
        Command::Check {
            suites,
            lambda_from_meta,
            lambda,
            q,
            hecke,
            report,
            model,
        } => {
            let input = Input::load(&model)?;
            let opts = CheckOptions {
                suites,
                lambda_from_meta,
                lambda,
                q,
                hecke,
            };
            commands::cmd_check(&input, &opts, &cfg, commands::out_path(&report))
        }
        Command::Drinfeld { report, model } => {
            commands::cmd_drinfeld(&Input::load(&model)?, &cfg, commands::out_path(&report))
        }
        Command::Ribbon { report, model } => {
            commands::cmd_ribbon(&Input::load(&model)?, &cfg, commands::out_path(&report))
        }
        Command::Invariant {
            model,
            mrib,
            braid,
            strands,
            markov_suite,
            trials,
            report,
        } => {
            let input = Input::load(&model)?;
            let opts = InvariantOptions {
                sign: match mrib {
                    MribArg::Plus => Sign::Plus,
                    MribArg::Minus => Sign::Minus,
                },
                braid,
                strands,
                markov_suite,
                trials,
            };
            commands::cmd_invariant(&input, &opts, &cfg, commands::out_path(&report))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
