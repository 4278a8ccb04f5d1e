//! Constraint-respecting multi-objective planners over the time-expanded grid.
//!
//! Both planners search states `(vertex, time)` with `time <= horizon`, pop
//! labels in lexicographic order of `f = g + h`, and return every cost-unique
//! Pareto-optimal path that respects the agent's constraints. A label at the
//! goal ends the search branch only if no vertex constraint at the goal lies
//! in its future.

mod boa;
mod constraint;
mod heuristic;
mod namoa;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use boa::boa_st;
pub use constraint::{consistent, AgentConstraints, Constraint};
pub use heuristic::{build_heuristic, HeuristicTable};
pub use namoa::{namoa_dr_st, TruncatedFront};

use crate::cost::CostVector;
use crate::error::SearchError;
use crate::graph::{EdgeCosts, Path, Time, Vertex};

/// One individual path with its cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plan {
    pub path: Path,
    pub cost: CostVector,
}

/// A single-agent query on the time-expanded graph.
#[derive(Debug, Clone, Copy)]
pub struct SingleAgentProblem<'a> {
    pub costs: &'a EdgeCosts,
    pub start: Vertex,
    pub goal: Vertex,
    pub heuristic: &'a HeuristicTable,
    pub horizon: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowLevel {
    /// Bi-objective search with scalar pruning (two objectives only).
    Boa,
    /// Dimensionality-reduced NAMOA* for any number of objectives.
    NamoaDr,
}

impl LowLevel {
    pub fn plan(
        self,
        problem: &SingleAgentProblem<'_>,
        constraints: &AgentConstraints,
        deadline: Option<Instant>,
    ) -> Result<Vec<Plan>, SearchError> {
        match self {
            LowLevel::Boa => boa_st(problem, constraints, deadline),
            LowLevel::NamoaDr => namoa_dr_st(problem, constraints, deadline),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LowLevel::Boa => "boa",
            LowLevel::NamoaDr => "namoa-dr",
        }
    }
}

/// How often (in pops) the deadline is polled.
const DEADLINE_POLL: u64 = 512;

#[derive(Debug)]
struct StLabel {
    vertex: Vertex,
    time: Time,
    g: CostVector,
    f: CostVector,
    parent: Option<u32>,
}

#[derive(Debug, PartialEq, Eq)]
struct OpenEntry {
    f: CostVector,
    seq: u64,
    label: u32,
}

impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap: smallest f (lexicographic), then earliest insertion, on top.
        other
            .f
            .lex_cmp(&self.f)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Label arena and OPEN list shared by both planners.
#[derive(Default)]
struct SearchSpace {
    labels: Vec<StLabel>,
    open: BinaryHeap<OpenEntry>,
    seq: u64,
    pops: u64,
}

impl SearchSpace {
    fn push(&mut self, label: StLabel) {
        let id = self.labels.len() as u32;
        self.open.push(OpenEntry {
            f: label.f.clone(),
            seq: self.seq,
            label: id,
        });
        self.seq += 1;
        self.labels.push(label);
    }

    fn pop(&mut self, deadline: Option<Instant>) -> Result<Option<u32>, SearchError> {
        self.pops += 1;
        if self.pops.is_multiple_of(DEADLINE_POLL) {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Err(SearchError::Deadline);
                }
            }
        }
        Ok(self.open.pop().map(|e| e.label))
    }

    fn reconstruct(&self, mut id: u32) -> Path {
        let mut vertices = Vec::new();
        loop {
            let l = &self.labels[id as usize];
            vertices.push(l.vertex);
            match l.parent {
                Some(p) => id = p,
                None => break,
            }
        }
        vertices.reverse();
        Path::new(vertices)
    }
}

/// Successor `(vertex, cost)` pairs of `(v, t)` that respect `constraints`.
fn expansions<'a>(
    problem: &'a SingleAgentProblem<'_>,
    constraints: &'a AgentConstraints,
    v: Vertex,
    t: Time,
) -> impl Iterator<Item = (Vertex, &'a CostVector)> + 'a {
    let graph = problem.costs.graph();
    crate::graph::Direction::ALL.into_iter().filter_map(move |d| {
        if t >= problem.horizon {
            return None;
        }
        let w = graph.step(v, d)?;
        if !constraints.consistent(v, w, t) || !problem.heuristic.reachable(w) {
            return None;
        }
        Some((w, problem.costs.cost_dir(v, d)?))
    })
}
