use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semicyclic_core::braid::solve_colorings;
use semicyclic_core::json::{to_json, JobSpec, RMatrixOutput, SolveOutput};
use semicyclic_core::semicyclic::{holonomy_matrix, SemicyclicParams};
use semicyclic_core::verify::{run_suite, Suite, VerifyConfig};
use semicyclic_core::{ado_invariant, conjecture_compare, invariant, Error, GStarColor, RootContext, C64};

/// Semi-cyclic holonomy invariants of colored braid closures.
#[derive(Parser, Debug)]
#[command(name = "semicyclic", version)]
struct Cli {
    /// Comparison tolerance (overrides the job spec)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for the verification suites
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Strand count (overrides the count inferred from the braid word)
    #[arg(long, global = true)]
    strands: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Raw and normalized invariant of the job's colored braid
    Invariant { job: PathBuf },
    /// Basis of epsilon colorings fixed by the braid
    Solve { job: PathBuf },
    /// Holonomy R-matrix between two colors, each given as kappa,eps[,branch]
    Rmatrix {
        #[arg(long = "N")]
        order: u32,
        #[arg(long, allow_hyphen_values = true)]
        color1: String,
        #[arg(long, allow_hyphen_values = true)]
        color2: String,
        /// Include the exchange of tensor factors
        #[arg(long)]
        flip: bool,
    },
    /// Invariant of the job's braid with every epsilon set to zero
    Ado { job: PathBuf },
    /// Solved non-abelian invariant against the epsilon = 0 value
    Compare { job: PathBuf },
    /// Run verification suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Restrict to a single root-of-unity order
        #[arg(long = "N")]
        order: Option<u32>,
    },
}

enum Failure {
    Input(String),
    Math(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

fn load_job(path: &PathBuf) -> Result<JobSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    JobSpec::from_json(&text).map_err(|e| Failure::Input(format!("malformed job spec {}: {e}", path.display())))
}

fn parse_complex(s: &str) -> Result<C64, Failure> {
    let t = s.trim().replace(' ', "");
    t.parse::<C64>().map_err(|_| Failure::Input(format!("cannot parse complex number '{s}'")))
}

/// `kappa,eps[,branch]`.
fn parse_color(s: &str, ctx: &RootContext) -> Result<SemicyclicParams, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(Failure::Input(format!("color '{s}' must be kappa,eps[,branch]")));
    }
    let kappa = parse_complex(parts[0])?;
    let eps = parse_complex(parts[1])?;
    let branch = match parts.get(2) {
        Some(m) => m.trim().parse::<i64>().map_err(|_| Failure::Input(format!("bad branch '{m}'")))?,
        None => 0,
    };
    let y = GStarColor::new(kappa, eps, ctx.tol())?;
    Ok(SemicyclicParams::from_color(&y, branch, *ctx)?)
}

fn plain<T>(r: Result<T, Failure>) -> Result<T, (Failure, Option<String>)> {
    r.map_err(|f| (f, None))
}

fn run(cli: &Cli) -> Result<String, (Failure, Option<String>)> {
    let tol = cli.tolerance;
    match &cli.command {
        Command::Invariant { job } => plain((|| {
            let spec = load_job(job)?;
            let ctx = spec.context(tol)?;
            let b = spec.braid_word(cli.strands)?;
            let y = spec.coloring(&b, &ctx)?;
            Ok(to_json(&invariant(&b, &y, ctx)?))
        })()),
        Command::Solve { job } => plain((|| {
            let spec = load_job(job)?;
            let ctx = spec.context(tol)?;
            let b = spec.braid_word(cli.strands)?;
            let sol = solve_colorings(&b, &spec.kappa_by_component, &spec.branches(&b), ctx.tol())?;
            Ok(to_json(&SolveOutput::from(&sol)))
        })()),
        Command::Rmatrix { order, color1, color2, flip } => plain((|| {
            let ctx = RootContext::new(*order, tol.unwrap_or(semicyclic_core::qnum::DEFAULT_TOL))?;
            let p1 = parse_color(color1, &ctx)?;
            let p2 = parse_color(color2, &ctx)?;
            Ok(to_json(&RMatrixOutput::from(&holonomy_matrix(&p1, &p2, *flip)?)))
        })()),
        Command::Ado { job } => plain((|| {
            let spec = load_job(job)?;
            let ctx = spec.context(tol)?;
            let b = spec.braid_word(cli.strands)?;
            Ok(to_json(&ado_invariant(&b, &spec.kappa_by_component, &spec.branches(&b), ctx)?))
        })()),
        Command::Compare { job } => {
            let report = plain((|| {
                let spec = load_job(job)?;
                let ctx = spec.context(tol)?;
                let b = spec.braid_word(cli.strands)?;
                let scalings = spec.scalings_or_default();
                Ok(conjecture_compare(&b, &spec.kappa_by_component, &spec.branches(&b), &scalings, spec.basis_index(), ctx)?)
            })())?;
            let text = to_json(&report);
            if report.pass {
                Ok(text)
            } else {
                Err((Failure::Verification, Some(text)))
            }
        }
        Command::Verify { suite, order } => {
            let cfg = VerifyConfig {
                order: *order,
                seed: cli.seed,
                tol: tol.unwrap_or(semicyclic_core::qnum::DEFAULT_TOL),
            };
            let report = run_suite(*suite, &cfg);
            let text = report.render();
            if report.all_passed() {
                Ok(text)
            } else {
                Err((Failure::Verification, Some(text)))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, text) = match run(&cli) {
        Ok(text) => (0, Some(text)),
        Err((Failure::Input(msg), _)) => {
            eprintln!("error: {msg}");
            (2, None)
        }
        Err((Failure::Math(e), _)) => {
            eprintln!("precondition failed: {e}");
            (3, None)
        }
        Err((Failure::Verification, text)) => (1, text),
    };
    if let Some(text) = text {
        if let Err(msg) = emit(&cli, &text) {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
