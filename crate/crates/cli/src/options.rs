use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Deserialize;

use momapf_core::graph::{EdgeCosts, GridGraph};
use momapf_core::instance::{parse_map, parse_scen, random_scenario, AgentTask, CostModelSpec};
use momapf_core::lowlevel::LowLevel;
use momapf_core::mocbs::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    /// All roots in one OPEN list.
    Mocbs,
    /// One constraint tree at a time.
    MocbsT,
}

impl Algo {
    pub fn strategy(self) -> Strategy {
        match self {
            Algo::Mocbs => Strategy::Global,
            Algo::MocbsT => Strategy::TreeByTree,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algo::Mocbs => "mocbs",
            Algo::MocbsT => "mocbs-t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowLevelArg {
    Boa,
    NamoaDr,
}

impl From<LowLevelArg> for LowLevel {
    fn from(l: LowLevelArg) -> Self {
        match l {
            LowLevelArg::Boa => LowLevel::Boa,
            LowLevelArg::NamoaDr => LowLevel::NamoaDr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostModelArg {
    Random,
    TimeRisk,
}

pub fn cost_model(model: CostModelArg, objectives: usize, cmax: u64, seed: u64) -> Result<CostModelSpec> {
    match model {
        CostModelArg::Random => {
            if objectives == 0 {
                bail!("--objectives must be at least 1");
            }
            if cmax == 0 {
                bail!("--cmax must be at least 1");
            }
            Ok(CostModelSpec::Random {
                objectives,
                cmax,
                seed,
            })
        }
        CostModelArg::TimeRisk => {
            if objectives != 2 {
                bail!("the time-risk model has exactly 2 objectives, got {objectives}");
            }
            Ok(CostModelSpec::TimeRisk)
        }
    }
}

pub fn load_map(path: &Path) -> Result<GridGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading map {}", path.display()))?;
    parse_map(&text).with_context(|| format!("parsing map {}", path.display()))
}

/// The first `n` agents of the scenario file, or `n` generated agents when
/// no file is given.
pub fn load_agents(graph: &GridGraph, scen: Option<&Path>, n: usize, seed: u64) -> Result<Vec<AgentTask>> {
    if n == 0 {
        bail!("at least one agent is required");
    }
    match scen {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading scenario {}", path.display()))?;
            let scen = parse_scen(&text, graph).with_context(|| format!("parsing scenario {}", path.display()))?;
            if scen.agents.len() < n {
                bail!("scenario {} has {} agents, {n} requested", path.display(), scen.agents.len());
            }
            Ok(scen.truncated(n).agents)
        }
        None => {
            if n > graph.num_vertices() {
                bail!("{n} agents do not fit on {} free cells", graph.num_vertices());
            }
            Ok(random_scenario(graph, n, seed).agents)
        }
    }
}

/// Loaded problem shared by `run` and `suite`.
pub struct Problem {
    pub costs: EdgeCosts,
    pub agents: Vec<AgentTask>,
}

pub fn check_low_level(low: LowLevelArg, objectives: usize) -> Result<()> {
    if low == LowLevelArg::Boa && objectives != 2 {
        bail!("the boa low level needs exactly 2 objectives, got {objectives}; use namoa-dr");
    }
    Ok(())
}
