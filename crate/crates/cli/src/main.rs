//! `nsfif`: build interpolants, verify bounds, run dependence sweeps.
//!
//! Exit codes: 0 success, 1 bound violation, 2 invalid input.

mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nsfif::bounds::{self, BaseOperator, BaseOperatorSpec, Campaign};
use nsfif::config::{load_config, LoadedConfig};
use nsfif::export::{self, BuildSummary};
use nsfif::{DepthPolicy, Mode, Problem, Strategy};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "nsfif", version, about = "Non-stationary alpha-fractal interpolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the interpolant; writes curve.csv and summary.json.
    Build {
        #[command(flatten)]
        common: Common,
        /// Evaluator; defaults to the config's choice.
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Run bound verification campaigns; writes report.csv and report.json.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the dependence experiments of a manifest; writes results.csv.
    Sweep {
        /// Experiment manifest (JSON).
        manifest: PathBuf,
        /// Config used when the manifest names none.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Config file (JSON with a .json extension, TOML otherwise).
    #[arg(long)]
    config: PathBuf,
    /// Grid size M.
    #[arg(long)]
    grid: Option<usize>,
    /// Fixed trajectory depth.
    #[arg(long, conflicts_with = "eps")]
    depth: Option<usize>,
    /// Tail tolerance used to pick the depth.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cont,
    Lip,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Trajectory,
    Series,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Error,
    Stability,
    Sensitivity,
    Operator,
    All,
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
}

pub(crate) enum Failure {
    Violation,
    Invalid(nsfif::Error),
}

impl From<nsfif::Error> for Failure {
    fn from(e: nsfif::Error) -> Self {
        Failure::Invalid(e)
    }
}

impl Common {
    fn load(&self) -> Result<LoadedConfig, nsfif::Error> {
        let mut loaded = load_config(&self.config)?;
        let cfg = &mut loaded.problem;
        if let Some(m) = self.grid {
            cfg.grid_size = m;
        }
        if let Some(k) = self.depth {
            cfg.depth = DepthPolicy::Fixed(k);
        }
        if let Some(e) = self.eps {
            cfg.depth = DepthPolicy::Tolerance(e);
        }
        if let Some(m) = self.mode {
            cfg.mode = match m {
                ModeArg::Cont => Mode::Continuous,
                ModeArg::Lip => Mode::Lipschitz,
            };
        }
        Ok(loaded)
    }
}

fn out_dir(dir: &Path) -> Result<(), nsfif::Error> {
    fs::create_dir_all(dir).map_err(|e| nsfif::Error::Io(format!("{}: {e}", dir.display())))
}

fn build(common: &Common, strategy: Option<StrategyArg>) -> Result<(), Failure> {
    let loaded = common.load()?;
    let problem = Problem::new(loaded.problem)?;
    let strategy = match strategy {
        Some(StrategyArg::Trajectory) => Strategy::Trajectory,
        Some(StrategyArg::Series) => Strategy::Series,
        None => loaded.strategy,
    };
    let interpolant = problem.interpolant(strategy)?;
    out_dir(&common.out)?;
    export::write_curve(&common.out.join("curve.csv"), &interpolant)?;
    export::write_json(&common.out.join("summary.json"), &BuildSummary::new(&interpolant)?)?;
    Ok(())
}

fn verify(common: &Common, suite: Suite, trials: usize, seed: u64) -> Result<(), Failure> {
    let loaded = common.load()?;
    let problem = Problem::new(loaded.problem)?;
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let lspec = loaded
        .operator
        .unwrap_or_else(|| BaseOperatorSpec::stationary(BaseOperator::EndpointLine));
    let single = |name: &str, r: bounds::BoundReport| Campaign {
        name: name.into(),
        reports: vec![r],
        skipped: 0,
    };

    let mut campaigns = Vec::new();
    if wants(Suite::Error) {
        campaigns.push(single("error_config", bounds::error_bound_own(&problem)?));
        let (err, cor) = bounds::error_bound_check(&problem, trials, seed)?;
        campaigns.push(err);
        campaigns.push(cor);
    }
    if wants(Suite::Stability) {
        campaigns.push(bounds::stability_check(&problem, trials, seed)?);
    }
    if wants(Suite::Sensitivity) {
        if let Some(spec) = &loaded.perturbation {
            campaigns.push(single("sensitivity_config", bounds::sensitivity_bound(&problem, spec)?));
        }
        campaigns.push(bounds::sensitivity_check(&problem, trials, seed)?);
    }
    if wants(Suite::Operator) {
        let own = bounds::operator_problem(&problem, problem.germ().clone(), &lspec)?;
        campaigns.push(single("error_operator", bounds::error_bound(&own, &lspec)?));
        campaigns.push(bounds::operator_lipschitz_check(&problem, &lspec, trials, seed)?);
        campaigns.push(bounds::relative_bound_check(&problem, &lspec, trials, seed)?);
    }

    out_dir(&common.out)?;
    let reports: Vec<_> = campaigns.iter().flat_map(|c| c.reports.iter().cloned()).collect();
    export::write_reports_csv(&common.out.join("report.csv"), &reports)?;
    export::write_json(&common.out.join("report.json"), &campaigns)?;

    let failing: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        for r in failing {
            println!("{}", serde_json::to_string(r).unwrap_or_default());
        }
        Err(Failure::Violation)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { common, strategy } => build(common, *strategy),
        Command::Verify {
            common,
            suite,
            trials,
            seed,
        } => verify(common, *suite, *trials, *seed),
        Command::Sweep {
            manifest,
            config,
            out,
        } => sweep::run(manifest, config.as_deref(), out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Invalid(e)) => {
            let d = Diagnostic {
                error: e.kind(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&d).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(2)
        }
    }
}
