//! The `hyperphase` command-line front end.
//!
//! Exit codes: 0 success (all verdicts pass), 1 a verdict failed, 2 usage,
//! configuration or malformed input, 3 a resource guard was hit.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{Overrides, RunConfig};
use crate::error::{Error, Result};
use crate::experiment::{
    compare_to_theory, er_comparison, er_csv, fmt_f64, records_csv, report_csv, run_experiment, slopes_csv,
    summary_csv, RECORDS_HEADER,
};
use crate::hypergraph::{parse_weights, weights_to_text, Hypergraph};
use crate::powerlaw::Body;
use crate::sampler::{sample_hypergraph, sample_weights, Method, WeightAssignment};
use crate::stats::{count_loose2_bruteforce, motif_counts};
use crate::theory::{prediction_for, Statistic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hyperphase", version, about = "Power-law random uniform hypergraphs")]
pub struct Cli {
    /// Worker threads for experiments (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one hypergraph and write it with its weights.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Use these weights (one per line) instead of sampling them.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Count hyperedges and loose 2-cycles of a hypergraph file.
    Stats {
        file: PathBuf,
        /// Run config whose alpha, tau and seed label the output row.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the predicted growth laws as CSV.
    Theory {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        statistic: Option<String>,
    },
    /// Run a Monte Carlo sweep and write records.csv and summary.csv.
    Experiment {
        #[command(flatten)]
        common: Common,
    },
    /// Run a sweep and check fitted exponents against the predictions.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Compare loose 2-cycles with the uniform model of equal edge density.
    ErCompare {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args, Default)]
pub struct Common {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    /// `pure_pareto` or `uniform_body`.
    #[arg(long)]
    pub body: Option<String>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<u32>,
    /// `skip` or `naive`.
    #[arg(long)]
    pub method: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let body = match self.body.as_deref() {
            None => None,
            Some("pure_pareto") => Some(Body::PurePareto),
            Some("uniform_body") => Some(Body::UniformBody),
            Some(other) => return Err(Error::Config(format!("unknown body `{other}`"))),
        };
        let method = self.method.as_deref().map(str::parse::<Method>).transpose()?;
        let overrides = Overrides {
            n: self.n,
            m: self.m,
            alpha: self.alpha,
            lambda: self.lambda,
            x0: self.x0,
            body,
            tau: self.tau,
            seed: self.seed,
            reps: self.reps,
            method,
            out: self.out.clone(),
        };
        let cfg = RunConfig::resolve(self.config.as_deref(), &overrides)?;
        eprintln!("# resolved config\n{}", cfg.to_toml());
        Ok(cfg)
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let workers = cli.workers;
    let result = match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool.install(|| dispatch(cli.command)),
        Err(e) => Err(Error::Config(format!("cannot start worker pool: {e}"))),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                EXIT_GUARD
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Sample { common, weights } => cmd_sample(&common, weights.as_deref()),
        Command::Stats { file, config } => cmd_stats(&file, config.as_deref()),
        Command::Theory { common, statistic } => cmd_theory(&common, statistic.as_deref()),
        Command::Experiment { common } => cmd_experiment(&common),
        Command::Compare { common } => cmd_compare(&common),
        Command::ErCompare { common } => cmd_er_compare(&common),
    }
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write(&dir.join("resolved_config.toml"), &cfg.to_toml())?;
    Ok(dir)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn tau_note(outside: bool) -> &'static str {
    if outside {
        "outside: tau > 1/alpha, no edge-count asymptotics apply"
    } else {
        "inside: tau <= 1/alpha or alpha >= 1"
    }
}

pub fn cmd_sample(common: &Common, weights: Option<&Path>) -> Result<i32> {
    let cfg = common.resolve()?;
    let model = cfg.model()?;
    let mut rng = model.rng();
    let w = match weights {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            let w = parse_weights(&text, &p.display().to_string())?;
            if w.len() != model.n as usize {
                return Err(Error::Config(format!(
                    "{} holds {} weights, expected n = {}",
                    p.display(),
                    w.len(),
                    model.n
                )));
            }
            WeightAssignment::supplied(w)?
        }
        None => sample_weights(&model, &mut rng),
    };
    let h = sample_hypergraph(&model, &w, &mut rng)?;
    let dir = out_dir(&cfg)?;
    h.write_file(&dir.join("hypergraph.txt"))?;
    write(&dir.join("weights.txt"), &weights_to_text(w.weights()))?;
    let meta = format!(
        "edge_count = {}\nseed = {}\ntau_regime = \"{}\"\n",
        h.edge_count(),
        model.seed,
        tau_note(model.outside_tau_regime())
    );
    write(&dir.join("metadata.toml"), &meta)?;
    eprintln!("# tau regime: {}", tau_note(model.outside_tau_regime()));
    println!("{}", h.edge_count());
    Ok(EXIT_OK)
}

pub fn cmd_stats(file: &Path, config: Option<&Path>) -> Result<i32> {
    let h = Hypergraph::read_file(file)?;
    let start = Instant::now();
    let (edges, loose2) = match h.m() {
        2 => (h.edge_count() as u64, "NA".to_string()),
        3 | 4 => {
            let c = motif_counts(&h)?;
            (c.edge_count, c.loose2_count.to_string())
        }
        _ => (h.edge_count() as u64, count_loose2_bruteforce(&h)?.to_string()),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (alpha, tau, seed) = match config {
        Some(p) => {
            let c = RunConfig::load(p)?;
            (fmt_f64(c.weights.alpha), fmt_f64(c.tau), c.seed.to_string())
        }
        None => ("NA".into(), "NA".into(), "NA".into()),
    };
    println!("{RECORDS_HEADER}");
    println!(
        "{alpha},{},{},{tau},NA,{seed},{edges},{loose2},{}",
        h.n(),
        h.m(),
        fmt_f64(wall_ms)
    );
    Ok(EXIT_OK)
}

pub const THEORY_HEADER: &str =
    "statistic,alpha,m,tau,n_exponent,log_exponent,constant_or_NA,upper_bound_flag,concentration";

pub fn cmd_theory(common: &Common, statistic: Option<&str>) -> Result<i32> {
    let cfg = common.resolve()?;
    let params = cfg.params()?;
    let stats = match statistic {
        Some(s) => vec![s.parse::<Statistic>()?],
        None if cfg.m == 3 && cfg.tau == 1.0 => vec![Statistic::Edges, Statistic::Loose2],
        None => vec![Statistic::Edges],
    };
    let mut out = format!("{THEORY_HEADER}\n");
    for s in stats {
        let p = prediction_for(&params, s, cfg.m, cfg.tau)?;
        let (constant, bound) = match (p.constant, p.upper_bound_constant) {
            (Some(c), _) => (fmt_f64(c), false),
            (None, Some(u)) => (fmt_f64(u), true),
            (None, None) => ("NA".to_string(), false),
        };
        out += &format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.name(),
            fmt_f64(params.alpha),
            cfg.m,
            fmt_f64(cfg.tau),
            fmt_f64(p.n_exponent),
            fmt_f64(p.log_exponent),
            constant,
            bound,
            p.concentration
        );
    }
    print!("{out}");
    Ok(EXIT_OK)
}

pub fn cmd_experiment(common: &Common) -> Result<i32> {
    let cfg = common.resolve()?;
    let exp = cfg.experiment()?;
    let records = run_experiment(&exp)?;
    let dir = out_dir(&cfg)?;
    write(&dir.join("records.csv"), &records_csv(&records))?;
    write(&dir.join("summary.csv"), &summary_csv(&records, &exp.statistics))?;
    if records.iter().any(|r| r.outside_tau_regime) {
        eprintln!("# note: some cells are outside the tau <= 1/alpha regime");
    }
    println!("{}", dir.join("records.csv").display());
    Ok(EXIT_OK)
}

pub fn cmd_compare(common: &Common) -> Result<i32> {
    let cfg = common.resolve()?;
    let exp = cfg.experiment()?;
    let records = run_experiment(&exp)?;
    let mut rows = Vec::new();
    for &s in &exp.statistics {
        rows.extend(compare_to_theory(&records, &exp.params, s)?);
    }
    let dir = out_dir(&cfg)?;
    write(&dir.join("records.csv"), &records_csv(&records))?;
    write(&dir.join("summary.csv"), &summary_csv(&records, &exp.statistics))?;
    write(&dir.join("report.csv"), &report_csv(&rows))?;
    write(&dir.join("slopes.csv"), &slopes_csv(&rows))?;
    let mut all = true;
    for r in &rows {
        println!(
            "{} alpha={} {}: predicted {:.3}, fitted {:.3} +- {:.3} (tol {})",
            if r.pass { "PASS" } else { "FAIL" },
            r.alpha,
            r.statistic.name(),
            r.predicted_n_exponent,
            r.pairwise.n_exponent_hat,
            r.pairwise.stderr,
            r.tolerance
        );
        all &= r.pass;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_er_compare(common: &Common) -> Result<i32> {
    let cfg = common.resolve()?;
    let report = er_comparison(&cfg.er()?)?;
    let dir = out_dir(&cfg)?;
    write(&dir.join("er.csv"), &er_csv(&report))?;
    let increasing = report.ratio_increasing();
    let matched = report.rows.iter().all(|r| r.edges_match());
    for r in &report.rows {
        println!("n={} ratio={:.4} edges_match={}", r.n, r.ratio, r.edges_match());
    }
    println!(
        "{} ratio strictly increasing; {} edge counts matched",
        if increasing { "PASS" } else { "FAIL" },
        if matched { "PASS" } else { "FAIL" }
    );
    Ok(if increasing && matched { EXIT_OK } else { EXIT_FAILED })
}
