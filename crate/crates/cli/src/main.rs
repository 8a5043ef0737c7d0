//! Command-line front end: reads a coloured cloud from CSV and writes
//! triangulations, filtrations, diagrams and verification reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chromatic_tda::bench::{records_to_csv, run_benchmark, Scheme};
use chromatic_tda::cloud::{maximal_colouring, ChromaticPointCloud};
use chromatic_tda::delaunay::chromatic_delaunay;
use chromatic_tda::filtration::{build, FiltrationKind};
use chromatic_tda::general_position::{check_general_position_with, GpOptions, DEFAULT_BUDGET};
use chromatic_tda::morse::verify_collapse_theorems;
use chromatic_tda::persistence::compute_persistence;
use chromatic_tda::stability::perturbation_experiment;
use chromatic_tda::{io, par, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "chromatic-tda", version, about = "Chromatic Delaunay filtrations and collapse checks")]
struct Cli {
    /// Worker threads for per-simplex maps [env: CHROMATIC_TDA_THREADS]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Colouring {
    /// Colours from the input file
    Input,
    /// A single colour
    Mono,
    /// Every point its own colour
    Maximal,
}

#[derive(clap::Args)]
struct Input {
    /// Cloud CSV with header x0,...,x{d-1},colour
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "input")]
    colouring: Colouring,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic Delaunay triangulation as JSON
    Triangulate {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Filtration as JSON
    Filtrate {
        #[command(flatten)]
        input: Input,
        /// cech, rips, alpha, selective, del-cech or del-rips
        #[arg(long)]
        kind: FiltrationKind,
        /// Largest simplex dimension (Čech, Rips and selective only)
        #[arg(long)]
        dim_cap: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Persistence diagram as CSV
    Persist {
        /// Cloud CSV; the filtration is built with --kind
        #[arg(short, long, required_unless_present = "filtration")]
        input: Option<PathBuf>,
        /// Filtration JSON written by `filtrate`
        #[arg(long, conflicts_with = "input")]
        filtration: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "input")]
        colouring: Colouring,
        #[arg(long, default_value = "del-cech")]
        kind: FiltrationKind,
        #[arg(long)]
        dim_cap: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify the Delaunay–Čech and alpha collapses at every critical radius
    CollapseCheck {
        #[command(flatten)]
        input: Input,
        /// Finer colouring: "maximal" or comma-separated colours
        #[arg(long, default_value = "maximal")]
        nu: String,
        /// Include every individual check in the report
        #[arg(long)]
        full: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// General-position check; exits 2 on a violation
    GpCheck {
        #[command(flatten)]
        input: Input,
        /// Decide predicates in exact rational arithmetic
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Perturb every point by at most eta and compare
    Stability {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Timing benchmark, CSV output
    Bench {
        /// points, dimension or colours
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        seed: u64,
        /// Skip instances with more points
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: String,
    message: String,
    detail: Option<serde_json::Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GeneralPosition(_) => 2,
            Error::Falsified(_)
            | Error::PartitionFailure(_)
            | Error::StuckCollapse(_)
            | Error::NotCollapsible(_)
            | Error::NotInterval(_)
            | Error::NotUnionOfIntervals(_)
            | Error::NumericalFailure(_) => 3,
            _ => 1,
        };
        Failure { code, kind: e.kind().into(), message: e.to_string(), detail: None }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, kind: "Io".into(), message: format!("{}: {e}", path.display()), detail: None }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn load(path: &Path, colouring: Colouring) -> Result<(ChromaticPointCloud, Vec<usize>), Failure> {
    let cloud = io::read_cloud_csv(&read(path)?)?;
    let mu = match colouring {
        Colouring::Input => cloud.colours().to_vec(),
        Colouring::Mono => vec![0; cloud.len()],
        Colouring::Maximal => maximal_colouring(cloud.len()),
    };
    Ok((cloud, mu))
}

fn parse_nu(text: &str, n: usize) -> Result<Vec<usize>, Failure> {
    if text == "maximal" {
        return Ok(maximal_colouring(n));
    }
    let nu = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::from(Error::InvalidInput(format!("--nu must be \"maximal\" or a colour list, got {text:?}"))))?;
    if nu.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: nu.len() }.into());
    }
    Ok(nu)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Triangulate { input, output } => {
            let (cloud, mu) = load(&input.input, input.colouring)?;
            let tri = chromatic_delaunay(&cloud, &mu)?;
            emit(output.as_deref(), &io::write_triangulation_json(&cloud, &mu, &tri))
        }
        Command::Filtrate { input, kind, dim_cap, output } => {
            let (cloud, mu) = load(&input.input, input.colouring)?;
            let f = build(kind, &cloud, &mu, dim_cap)?;
            emit(output.as_deref(), &io::write_filtration_json(&f)?)
        }
        Command::Persist { input, filtration, colouring, kind, dim_cap, max_degree, output } => {
            let f = match (input, filtration) {
                (_, Some(path)) => io::read_filtration_json(&read(&path)?)?,
                (Some(path), None) => {
                    let (cloud, mu) = load(&path, colouring)?;
                    build(kind, &cloud, &mu, dim_cap)?
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let dgm = compute_persistence(&f, max_degree)?;
            emit(output.as_deref(), &io::write_diagram_csv(&dgm))
        }
        Command::CollapseCheck { input, nu, full, output } => {
            let (cloud, mu) = load(&input.input, input.colouring)?;
            let nu = parse_nu(&nu, cloud.len())?;
            let rep = verify_collapse_theorems(&cloud, &mu, &nu, None)?;
            let failures: Vec<_> = rep.failures().collect();
            let mut doc = json!({
                "ok": rep.all_ok(),
                "radii": rep.radii.len(),
                "checks": rep.checks.len(),
                "collapses": rep.checks.iter().map(|c| c.collapses).sum::<usize>(),
                "failures": failures,
            });
            if full {
                doc["report"] = serde_json::to_value(&rep).expect("serializable");
            }
            emit(output.as_deref(), &to_json(&doc))?;
            if rep.all_ok() {
                Ok(())
            } else {
                Err(Failure {
                    code: 3,
                    kind: "Falsified".into(),
                    message: format!("{} collapse checks failed", failures.len()),
                    detail: None,
                })
            }
        }
        Command::GpCheck { input, exact, budget } => {
            let (cloud, mu) = load(&input.input, input.colouring)?;
            let rep = check_general_position_with(&cloud, &mu, GpOptions { budget, exact })?;
            print!("{}", to_json(&rep));
            if rep.general_position {
                Ok(())
            } else {
                Err(Failure {
                    code: 2,
                    kind: "GeneralPosition".into(),
                    message: "input is not in general position".into(),
                    detail: Some(serde_json::to_value(&rep.witness).expect("serializable")),
                })
            }
        }
        Command::Stability { input, eta, seed, output } => {
            let (cloud, mu) = load(&input.input, input.colouring)?;
            let rep = perturbation_experiment(&cloud, &mu, eta, seed)?;
            emit(output.as_deref(), &to_json(&rep))?;
            // a changed complex is outside the local regime, not a failure
            if rep.complex_isomorphic && !rep.within_bounds() {
                return Err(Failure { code: 3, kind: "Falsified".into(), message: "stability bound violated".into(), detail: None });
            }
            Ok(())
        }
        Command::Bench { scheme, seed, max_n, output } => {
            let rows = run_benchmark(scheme, seed, max_n)?;
            emit(output.as_deref(), &records_to_csv(&rows))
        }
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("CHROMATIC_TDA_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| {
            Failure::from(Error::InvalidInput(format!("CHROMATIC_TDA_THREADS must be a positive integer, got {v:?}")))
        }),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads(cli.threads).and_then(|t| match t {
        Some(t) => par::with_threads(t, || run(cli.command)),
        None => run(cli.command),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut doc = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
            if let Some(d) = f.detail {
                doc["witness"] = d;
            }
            eprintln!("{doc}");
            ExitCode::from(f.code)
        }
    }
}
