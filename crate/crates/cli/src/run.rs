use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use clap::Args;

use momapf_core::cost::CostVector;
use momapf_core::graph::Time;
use momapf_core::mocbs::{solve, Instance, SolveConfig, SolveResult, Status};
use momapf_core::oracle::joint_front_bruteforce;

use crate::options::{check_low_level, cost_model, load_agents, load_map, Algo, CostModelArg, LowLevelArg, Problem};

#[derive(Debug, Args)]
pub struct RunArgs {
    /// MovingAI map file.
    #[arg(long)]
    pub map: PathBuf,
    /// MovingAI scenario file; agents are generated from the seed if omitted.
    #[arg(long)]
    pub scen: Option<PathBuf>,
    /// Number of agents (the first N of the scenario).
    #[arg(long)]
    pub agents: usize,
    #[arg(long, default_value_t = 2)]
    pub objectives: usize,
    #[arg(long, value_enum, default_value_t = CostModelArg::Random)]
    pub cost_model: CostModelArg,
    /// Largest random cost component.
    #[arg(long, default_value_t = 5)]
    pub cmax: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Algo::Mocbs)]
    pub algo: Algo,
    #[arg(long, value_enum, default_value_t = LowLevelArg::Boa)]
    pub lowlevel: LowLevelArg,
    /// Latest allowed arrival time.
    #[arg(long, default_value_t = 64)]
    pub horizon: Time,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 300.0)]
    pub time_limit: f64,
    /// Result JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Also compute the exact front by exhaustive joint search and compare.
    #[arg(long)]
    pub oracle: bool,
    /// Front points as CSV, one row per point.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Outcome of a single run, before it is mapped to an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Complete,
    Timeout,
    NoSolution,
    OracleMismatch,
}

impl RunOutcome {
    pub fn exit_code(self) -> u8 {
        match self {
            RunOutcome::Complete => 0,
            RunOutcome::Timeout => 2,
            RunOutcome::NoSolution => 3,
            RunOutcome::OracleMismatch => 4,
        }
    }
}

pub fn load_problem(args: &RunArgs) -> Result<Problem> {
    let spec = cost_model(args.cost_model, args.objectives, args.cmax, args.seed)?;
    check_low_level(args.lowlevel, spec.objectives())?;
    let graph = load_map(&args.map)?;
    let agents = load_agents(&graph, args.scen.as_deref(), args.agents, args.seed)?;
    Ok(Problem {
        costs: spec.build(&graph),
        agents,
    })
}

pub fn time_limit(seconds: f64) -> Result<Option<Duration>> {
    if seconds <= 0.0 {
        return Ok(None);
    }
    Duration::try_from_secs_f64(seconds)
        .map(Some)
        .context("invalid --time-limit")
}

pub fn execute(args: &RunArgs) -> Result<RunOutcome> {
    let problem = load_problem(args)?;
    let config = SolveConfig {
        strategy: args.algo.strategy(),
        low_level: args.lowlevel.into(),
        horizon: args.horizon,
        time_limit: time_limit(args.time_limit)?,
    };
    let instance = Instance {
        costs: &problem.costs,
        agents: &problem.agents,
    };
    let result = solve(instance, &config)?;
    write_file(&args.out, &result.to_json())?;
    if let Some(csv) = &args.csv {
        write_front_csv(csv, &result, problem.costs.objectives())?;
    }
    println!(
        "status {} | front {} | roots {} | conflicts {} | filtered {} | {} ms",
        status_name(result.status),
        result.front.len(),
        result.metrics.n_root,
        result.metrics.n_conflict,
        result.metrics.n_filter,
        result.metrics.ms
    );

    let outcome = match result.status {
        Status::Complete => RunOutcome::Complete,
        Status::Timeout => RunOutcome::Timeout,
        Status::NoSolution => RunOutcome::NoSolution,
    };
    if args.oracle {
        if result.status == Status::Timeout {
            println!("oracle SKIPPED (search timed out)");
            return Ok(outcome);
        }
        let exact = oracle_costs(&problem, args.horizon)?;
        if exact == sorted(result.costs()) {
            println!("oracle MATCH ({} points)", exact.len());
        } else {
            println!("oracle MISMATCH: expected {exact:?}");
            return Ok(RunOutcome::OracleMismatch);
        }
    }
    Ok(outcome)
}

pub fn oracle_costs(problem: &Problem, horizon: Time) -> Result<Vec<CostVector>> {
    let front = joint_front_bruteforce(&problem.costs, &problem.agents, horizon).context("oracle")?;
    Ok(sorted(front.into_iter().map(|(c, _)| c).collect()))
}

pub fn sorted(mut v: Vec<CostVector>) -> Vec<CostVector> {
    v.sort_by(|a, b| a.lex_cmp(b));
    v
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Complete => "complete",
        Status::Timeout => "timeout",
        Status::NoSolution => "no_solution",
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_front_csv(path: &Path, result: &SolveResult, objectives: usize) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record((0..objectives).map(|k| format!("cost_{k}")))?;
    for p in &result.front {
        w.write_record(p.cost.as_slice().iter().map(u64::to_string))?;
    }
    w.flush()?;
    Ok(())
}
