use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use clustersense::dendrogram::validate;
use clustersense::harness::{
    error_vs_budget_sweep, format_float, format_summary, phase_transition_sweep, summarize,
    write_csv, write_records, Algorithm, DendrogramSpec, Execution, ExperimentConfig, GraphSpec,
    Sweep,
};

/// Adaptive sensing experiments for recovering a cluster of activated
/// vertices on a graph.
#[derive(Parser, Debug)]
#[command(name = "clustersense", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one trial and print the estimate next to the truth.
    Recover {
        #[command(flatten)]
        opts: Options,
        /// Trial index, selects the seed stream.
        #[arg(long, default_value_t = 0)]
        trial: usize,
    },
    /// Success probability of exact recovery against theta.
    PhaseTransition {
        #[command(flatten)]
        opts: Options,
    },
    /// Recovery error of both algorithms against the sensing budget.
    ErrorVsBudget {
        #[command(flatten)]
        opts: Options,
    },
    /// Build a dendrogram and check it against the hierarchy rules.
    ValidateDendrogram {
        #[arg(long, default_value = "torus:16x16")]
        graph: String,
        #[arg(long, default_value = "built")]
        dendrogram: String,
        /// Print every block.
        #[arg(long)]
        dump: bool,
    },
}

/// Flags shared by the experiment commands. Each maps onto the config key
/// of the same name; flags override the config file.
#[derive(Args, Debug, Default)]
struct Options {
    /// Flat `key=value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    /// Comma-separated graph specs: path:N, cycle:N, torus:RxC, file:PATH.
    #[arg(long)]
    graph: Option<String>,
    /// built | binary
    #[arg(long)]
    dendrogram: Option<String>,
    /// Comma-separated cluster shapes: interval:K[@A], rect:WxH, ball:K.
    #[arg(long)]
    cluster: Option<String>,
    /// Comma-separated mu/sigma values.
    #[arg(long, conflicts_with = "theta_list")]
    snr_list: Option<String>,
    /// Comma-separated theta values.
    #[arg(long)]
    theta_list: Option<String>,
    /// Comma-separated budgets; a trailing `n` means per vertex.
    #[arg(long)]
    budget_list: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    /// Comma-separated list of exact, approx.
    #[arg(long, visible_alias = "algorithm")]
    algorithms: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Share of the budget for the adaptive phase of approx.
    #[arg(long)]
    split: Option<String>,
    /// fixed | remaining
    #[arg(long)]
    passive: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    partial_t: Option<String>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    /// Record per-trial wall time.
    #[arg(long)]
    timing: bool,
}

impl Options {
    fn apply(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig> {
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let pairs = [
            ("experiment", &self.experiment),
            ("graph", &self.graph),
            ("dendrogram", &self.dendrogram),
            ("cluster", &self.cluster),
            ("snr-list", &self.snr_list),
            ("theta-list", &self.theta_list),
            ("budget-list", &self.budget_list),
            ("sigma", &self.sigma),
            ("algorithms", &self.algorithms),
            ("trials", &self.trials),
            ("delta", &self.delta),
            ("seed", &self.seed),
            ("split", &self.split),
            ("passive", &self.passive),
            ("rho", &self.rho),
            ("partial-t", &self.partial_t),
            ("out", &self.out),
            ("threads", &self.threads),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.timing {
            cfg.timing = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("clustersense: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Recover { opts, trial } => recover(&opts, trial),
        Command::PhaseTransition { opts } => {
            let cfg = opts.apply(ExperimentConfig::phase_transition())?;
            sweep(cfg, phase_transition_sweep)
        }
        Command::ErrorVsBudget { opts } => {
            let cfg = opts.apply(ExperimentConfig::error_vs_budget())?;
            sweep(cfg, error_vs_budget_sweep)
        }
        Command::ValidateDendrogram {
            graph,
            dendrogram,
            dump,
        } => {
            let spec: GraphSpec = graph.parse()?;
            let g = spec.build()?;
            let d = dendrogram.parse::<DendrogramSpec>()?.build(&g)?;
            let report = validate(&d, &g);
            println!("{report}");
            if dump {
                print!("{}", d.dump());
            }
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn recover(opts: &Options, trial: usize) -> Result<ExitCode> {
    let mut cfg = opts.apply(ExperimentConfig {
        experiment: "recover".into(),
        algorithms: vec![Algorithm::Exact],
        ..Default::default()
    })?;
    cfg.trials = trial + 1;
    let sweep = Sweep::new(cfg, &[Algorithm::Exact])?;
    let outcome = sweep.run_trial_detailed(0, trial);
    let r = &outcome.record;
    let instance = &sweep.instances()[sweep.cells()[0].instance];
    let mut out = io::stdout().lock();
    writeln!(out, "graph      {} (n={}, d={}, L={})", instance.label, r.n, r.d, instance.dendrogram.height())?;
    if let Some(truth) = &outcome.truth {
        writeln!(out, "cluster    {truth} (k={}, rho={})", r.k, r.rho)?;
    }
    writeln!(out, "algorithm  {} (mu={}, sigma={}, m={})", r.algorithm, format_float(r.mu), format_float(r.sigma), format_float(r.m))?;
    if let Some(est) = &outcome.estimate {
        writeln!(out, "estimate   {est}")?;
    }
    let show = |v: Option<f64>| v.map(format_float).unwrap_or_else(|| "-".into());
    writeln!(out, "dist       {}", show(r.dist))?;
    if r.partial_dist.is_some() {
        writeln!(out, "partial    {}", show(r.partial_dist))?;
    }
    match r.exact_success {
        Some(true) => writeln!(out, "exact recovery")?,
        Some(false) => writeln!(out, "not exact")?,
        None => {}
    }
    writeln!(
        out,
        "energy     {} in {} measurements",
        show(r.energy_spent),
        r.measurements.map(|m| m.to_string()).unwrap_or_else(|| "-".into())
    )?;
    if let Some(k) = r.pruned_size {
        writeln!(out, "pruned     {k} blocks")?;
    }
    match &r.error {
        Some(e) if r.dist.is_none() => bail!("trial failed: {e}"),
        Some(e) => writeln!(out, "note       {e}")?,
        None => {}
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(
    cfg: ExperimentConfig,
    runner: fn(ExperimentConfig, Execution) -> clustersense::Result<Vec<clustersense::harness::TrialRecord>>,
) -> Result<ExitCode> {
    let out = cfg.resolved_out();
    let exec = Execution::preferred(cfg.threads);
    let records = runner(cfg, exec)?;
    let summary = format_summary(&summarize(&records));
    match out {
        Some(path) => {
            write_csv(&path, &records)?;
            print!("{summary}");
            eprintln!("wrote {} records to {}", records.len(), path.display());
        }
        None => {
            write_records(io::stdout().lock(), &records).context("writing CSV to stdout")?;
            eprint!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
