use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgraph::cli::{
    cmd_eval, cmd_order, cmd_solve, cmd_verify, EvalPoints, GraphSpecFile, SolverOverrides,
    DEFAULT_VERIFY_TOL,
};
use qgraph::Error;

#[derive(Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Spectra of quantum graphs via derivative ladders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Graph spec file (TOML)
    #[arg(long)]
    graph: PathBuf,
    /// Upper end of the k window
    #[arg(long)]
    kmax: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root tolerance (solve) or pairwise match tolerance (verify)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    coincidence_tol: Option<f64>,
    #[arg(long)]
    max_order: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the eigenvalue table as CSV
    Solve(Common),
    /// Print the order M and the regularity sums of each level
    Order(Common),
    /// Check the solver against the brute-force oracle and the Weyl count
    Verify(Common),
    /// Evaluate every ladder level at given points
    Eval {
        #[command(flatten)]
        common: Common,
        /// Comma-separated k values
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Vec<f64>,
        #[arg(long, requires_all = ["to", "step"], conflicts_with = "k")]
        from: Option<f64>,
        #[arg(long, requires_all = ["from", "step"])]
        to: Option<f64>,
        #[arg(long, requires_all = ["from", "to"])]
        step: Option<f64>,
    },
}

enum Outcome {
    Done,
    Mismatch,
}

fn load(common: &Common, root_tol_flag: bool) -> qgraph::Result<(GraphSpecFile, SolverOverrides)> {
    let spec = GraphSpecFile::load(&common.graph)?;
    let flags = SolverOverrides {
        k_max: common.kmax,
        root_tol: if root_tol_flag { common.tol } else { None },
        coincidence_tol: common.coincidence_tol,
        max_order: common.max_order,
    };
    let merged = spec.solver.overlay(flags);
    Ok((spec, merged))
}

fn sink(out: &Option<PathBuf>) -> qgraph::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> qgraph::Result<Outcome> {
    match cli.command {
        Command::Solve(c) => {
            let (spec, o) = load(&c, true)?;
            let cfg = o.solver_config()?;
            let mut out = sink(&c.out)?;
            cmd_solve(&spec, &cfg, &mut out, &mut io::stderr())?;
            out.flush()?;
        }
        Command::Order(c) => {
            let (spec, o) = load(&c, true)?;
            let mut out = sink(&c.out)?;
            cmd_order(&spec, o.max_order(), &mut out)?;
            out.flush()?;
        }
        Command::Verify(c) => {
            let (spec, o) = load(&c, false)?;
            let cfg = o.solver_config()?;
            let mut out = sink(&c.out)?;
            let outcome = cmd_verify(
                &spec,
                &cfg,
                c.tol.unwrap_or(DEFAULT_VERIFY_TOL),
                &mut out,
                None,
            )?;
            out.flush()?;
            if !outcome.passed() {
                return Ok(Outcome::Mismatch);
            }
        }
        Command::Eval {
            common,
            k,
            from,
            to,
            step,
        } => {
            let (spec, o) = load(&common, true)?;
            let points = match (from, to, step) {
                (Some(from), Some(to), Some(step)) => EvalPoints::Grid { from, to, step },
                _ if !k.is_empty() => EvalPoints::List(k),
                _ => return Err(Error::Parse("eval needs --k or --from/--to/--step".into())),
            };
            let mut out = sink(&common.out)?;
            cmd_eval(&spec, o.max_order(), &points, &mut out)?;
            out.flush()?;
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
