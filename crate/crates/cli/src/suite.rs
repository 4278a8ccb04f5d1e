use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Deserialize;

use momapf_core::graph::Time;
use momapf_core::mocbs::{solve, Instance, Metrics, SolveConfig, Status};

use crate::options::{check_low_level, cost_model, load_agents, load_map, Algo, CostModelArg, LowLevelArg, Problem};
use crate::run::{oracle_costs, sorted, status_name, time_limit};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub suite: Settings,
    #[serde(rename = "experiment", default)]
    pub experiments: Vec<Experiment>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default = "default_horizon")]
    pub horizon: Time,
    /// Seconds per instance; zero or negative disables the limit.
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
    /// Worker threads; defaults to the number of CPUs.
    pub workers: Option<usize>,
    /// Compare every completed instance against the exhaustive oracle.
    #[serde(default)]
    pub oracle: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            horizon: default_horizon(),
            time_limit: default_time_limit(),
            workers: None,
            oracle: false,
        }
    }
}

fn default_horizon() -> Time {
    64
}

fn default_time_limit() -> f64 {
    300.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub name: String,
    /// Paths are relative to the config file.
    pub map: PathBuf,
    pub scen: Option<PathBuf>,
    pub agents: Vec<usize>,
    #[serde(default = "default_objectives")]
    pub objectives: usize,
    #[serde(default = "default_cost_model")]
    pub cost_model: CostModelArg,
    #[serde(default = "default_cmax")]
    pub cmax: u64,
    pub seeds: Vec<u64>,
    pub algos: Vec<Algo>,
    #[serde(default = "default_lowlevels")]
    pub lowlevels: Vec<LowLevelArg>,
}

fn default_objectives() -> usize {
    2
}

fn default_cost_model() -> CostModelArg {
    CostModelArg::Random
}

fn default_cmax() -> u64 {
    5
}

fn default_lowlevels() -> Vec<LowLevelArg> {
    vec![LowLevelArg::Boa]
}

pub fn load_config(path: &Path) -> Result<SuiteConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config: SuiteConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    for e in &mut config.experiments {
        e.map = base.join(&e.map);
        e.scen = e.scen.as_ref().map(|s| base.join(s));
    }
    if config.experiments.is_empty() {
        bail!("{} lists no experiments", path.display());
    }
    Ok(config)
}

/// One cell of the experiment matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellKey {
    pub experiment: String,
    pub agents: usize,
    pub algo: &'static str,
    pub lowlevel: &'static str,
}

#[derive(Debug, Clone)]
struct Job<'a> {
    experiment: &'a Experiment,
    agents: usize,
    seed: u64,
    algo: Algo,
    lowlevel: LowLevelArg,
}

#[derive(Debug, Clone)]
pub struct InstanceRecord {
    pub cell: CellKey,
    pub seed: u64,
    /// `complete`, `timeout`, `no_solution` or `error`.
    pub status: String,
    pub metrics: Option<Metrics>,
    pub oracle_mismatch: bool,
    pub error: Option<String>,
}

impl InstanceRecord {
    pub fn succeeded(&self) -> bool {
        self.status == "complete" && !self.oracle_mismatch
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<Vec<InstanceRecord>> {
    let mut jobs = Vec::new();
    for e in &config.experiments {
        for &agents in &e.agents {
            for &algo in &e.algos {
                for &lowlevel in &e.lowlevels {
                    for &seed in &e.seeds {
                        jobs.push(Job {
                            experiment: e,
                            agents,
                            seed,
                            algo,
                            lowlevel,
                        });
                    }
                }
            }
        }
    }
    let limit = time_limit(config.suite.time_limit)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.suite.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().context("building worker pool")?;
    // `collect` on an indexed parallel iterator keeps job order.
    let records = pool.install(|| {
        jobs.par_iter()
            .map(|job| run_job(job, config, limit))
            .collect::<Vec<_>>()
    });
    Ok(records)
}

fn run_job(job: &Job<'_>, config: &SuiteConfig, limit: Option<std::time::Duration>) -> InstanceRecord {
    let cell = CellKey {
        experiment: job.experiment.name.clone(),
        agents: job.agents,
        algo: job.algo.name(),
        lowlevel: match job.lowlevel {
            LowLevelArg::Boa => "boa",
            LowLevelArg::NamoaDr => "namoa-dr",
        },
    };
    match try_job(job, config, limit) {
        Ok((status, metrics, oracle_mismatch)) => InstanceRecord {
            cell,
            seed: job.seed,
            status: status_name(status).to_string(),
            metrics: Some(metrics),
            oracle_mismatch,
            error: None,
        },
        Err(e) => InstanceRecord {
            cell,
            seed: job.seed,
            status: "error".to_string(),
            metrics: None,
            oracle_mismatch: false,
            error: Some(format!("{e:#}")),
        },
    }
}

fn try_job(
    job: &Job<'_>,
    config: &SuiteConfig,
    limit: Option<std::time::Duration>,
) -> Result<(Status, Metrics, bool)> {
    let e = job.experiment;
    let spec = cost_model(e.cost_model, e.objectives, e.cmax, job.seed)?;
    check_low_level(job.lowlevel, spec.objectives())?;
    let graph = load_map(&e.map)?;
    let agents = load_agents(&graph, e.scen.as_deref(), job.agents, job.seed)?;
    let problem = Problem {
        costs: spec.build(&graph),
        agents,
    };
    let cfg = SolveConfig {
        strategy: job.algo.strategy(),
        low_level: job.lowlevel.into(),
        horizon: config.suite.horizon,
        time_limit: limit,
    };
    let result = solve(
        Instance {
            costs: &problem.costs,
            agents: &problem.agents,
        },
        &cfg,
    )?;
    let mismatch = if config.suite.oracle && result.status != Status::Timeout {
        oracle_costs(&problem, config.suite.horizon)? != sorted(result.costs())
    } else {
        false
    };
    Ok((result.status, result.metrics, mismatch))
}

/// Min, median and max; the median of an even count averages the middle two.
pub fn min_median_max(values: &[u64]) -> Option<(u64, f64, u64)> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    let median = if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    };
    Some((v[0], median, v[n - 1]))
}

type Getter = fn(&Metrics) -> u64;

const METRICS: [(&str, Getter); 5] = [
    ("root", |m| m.n_root),
    ("conflict", |m| m.n_conflict),
    ("filter", |m| m.n_filter),
    ("sol", |m| m.n_sol),
    ("ms", |m| m.ms),
];

/// Per-cell summary rows. Metric aggregates cover succeeded instances only.
pub fn write_summary(path: &Path, records: &[InstanceRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    let mut header: Vec<String> = ["experiment", "agents", "algo", "lowlevel", "instances", "succeeded", "success_rate"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for (name, _) in METRICS {
        for stat in ["min", "median", "max"] {
            header.push(format!("{name}_{stat}"));
        }
    }
    header.push("oracle_mismatches".into());
    header.push("errors".into());
    w.write_record(&header)?;

    let mut cells: Vec<&CellKey> = Vec::new();
    for r in records {
        if !cells.contains(&&r.cell) {
            cells.push(&r.cell);
        }
    }
    for cell in cells {
        let rows: Vec<&InstanceRecord> = records.iter().filter(|r| &r.cell == cell).collect();
        let ok: Vec<&Metrics> = rows
            .iter()
            .filter(|r| r.succeeded())
            .filter_map(|r| r.metrics.as_ref())
            .collect();
        let mut rec = vec![
            cell.experiment.clone(),
            cell.agents.to_string(),
            cell.algo.to_string(),
            cell.lowlevel.to_string(),
            rows.len().to_string(),
            ok.len().to_string(),
            format!("{:.4}", ok.len() as f64 / rows.len() as f64),
        ];
        for (_, get) in METRICS {
            let vals: Vec<u64> = ok.iter().map(|m| get(m)).collect();
            match min_median_max(&vals) {
                Some((lo, med, hi)) => {
                    rec.push(lo.to_string());
                    rec.push(format_median(med));
                    rec.push(hi.to_string());
                }
                None => rec.extend(["", "", ""].map(String::from)),
            }
        }
        rec.push(rows.iter().filter(|r| r.oracle_mismatch).count().to_string());
        rec.push(rows.iter().filter(|r| r.status == "error").count().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn format_median(m: f64) -> String {
    if m.fract() == 0.0 {
        format!("{}", m as u64)
    } else {
        format!("{m}")
    }
}

/// One row per instance, in job order.
pub fn write_instances(path: &Path, records: &[InstanceRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record([
        "experiment",
        "agents",
        "algo",
        "lowlevel",
        "seed",
        "status",
        "n_root",
        "n_conflict",
        "n_filter",
        "n_filter_pop",
        "n_filter_child",
        "n_sol",
        "ms",
        "oracle_mismatch",
        "error",
    ])?;
    for r in records {
        let m = r.metrics.clone().unwrap_or_default();
        let has = r.metrics.is_some();
        let num = |v: u64| if has { v.to_string() } else { String::new() };
        w.write_record([
            r.cell.experiment.clone(),
            r.cell.agents.to_string(),
            r.cell.algo.to_string(),
            r.cell.lowlevel.to_string(),
            r.seed.to_string(),
            r.status.clone(),
            num(m.n_root),
            num(m.n_conflict),
            num(m.n_filter),
            num(m.n_filter_pop),
            num(m.n_filter_child),
            num(m.n_sol),
            num(m.ms),
            r.oracle_mismatch.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
