//! Multi-objective conflict-based search.
//!
//! The high level keeps a forest of constraint trees, one root per
//! combination of the agents' unconstrained Pareto-optimal paths. Nodes leave
//! OPEN in lexicographic order of their joint cost. A popped node is discarded
//! if a known solution weakly dominates it; a conflict-free node becomes a
//! solution; anything else is split on its first conflict and the constrained
//! agent is replanned, one child per returned path.
//!
//! The global strategy puts every root into one OPEN list up front. The
//! tree-by-tree strategy materializes roots one at a time and exhausts each
//! tree before moving to the next.

mod front;
mod roots;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use front::{filter, SolutionFront};
pub use roots::RootEnumerator;

use crate::conflicts::{detect_first_conflict, split_conflict};
use crate::cost::CostVector;
use crate::error::SearchError;
use crate::graph::{EdgeCosts, JointPath, Time};
use crate::instance::AgentTask;
use crate::lowlevel::{build_heuristic, AgentConstraints, Constraint, HeuristicTable, LowLevel, Plan, SingleAgentProblem};

#[derive(Debug, Clone, Copy)]
pub struct Instance<'a> {
    pub costs: &'a EdgeCosts,
    pub agents: &'a [AgentTask],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Global,
    TreeByTree,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub strategy: Strategy,
    pub low_level: LowLevel,
    pub horizon: Time,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighLevelNode {
    pub plans: Vec<Arc<Plan>>,
    pub cost: CostVector,
    pub constraints: Vec<Constraint>,
    pub tree: u64,
}

impl HighLevelNode {
    fn root(tree: u64, plans: Vec<Arc<Plan>>) -> Self {
        let cost = sum_costs(&plans);
        HighLevelNode {
            plans,
            cost,
            constraints: Vec::new(),
            tree,
        }
    }

    pub fn joint_path(&self) -> JointPath {
        JointPath(self.plans.iter().map(|p| p.path.clone()).collect())
    }
}

fn sum_costs(plans: &[Arc<Plan>]) -> CostVector {
    let mut it = plans.iter();
    let mut total = it.next().expect("at least one agent").cost.clone();
    for p in it {
        total += &p.cost;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Timeout,
    NoSolution,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub n_root: u64,
    pub n_conflict: u64,
    /// Sum of the two filter counters below.
    pub n_filter: u64,
    /// Nodes discarded when popped.
    pub n_filter_pop: u64,
    /// Children discarded when generated.
    pub n_filter_child: u64,
    pub n_sol: u64,
    pub ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub cost: CostVector,
    pub paths: JointPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    /// Sorted lexicographically by cost.
    pub front: Vec<FrontPoint>,
    pub metrics: Metrics,
}

impl SolveResult {
    pub fn costs(&self) -> Vec<CostVector> {
        self.front.iter().map(|p| p.cost.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

type PlanSet = Arc<Vec<Arc<Plan>>>;

/// Low-level planning with per-agent heuristics and a memo keyed by the
/// agent's own constraints.
struct Planner<'a> {
    instance: Instance<'a>,
    low_level: LowLevel,
    horizon: Time,
    heuristics: Vec<HeuristicTable>,
    cache: HashMap<(usize, Vec<Constraint>), PlanSet>,
    deadline: Option<Instant>,
}

impl<'a> Planner<'a> {
    fn new(instance: Instance<'a>, low_level: LowLevel, horizon: Time, deadline: Option<Instant>) -> Self {
        let heuristics = instance
            .agents
            .iter()
            .map(|a| build_heuristic(instance.costs, a.goal))
            .collect();
        Planner {
            instance,
            low_level,
            horizon,
            heuristics,
            cache: HashMap::new(),
            deadline,
        }
    }

    fn plan(&mut self, agent: usize, constraints: &[Constraint]) -> Result<PlanSet, SearchError> {
        let mut own: Vec<Constraint> = constraints.iter().filter(|c| c.agent == agent).copied().collect();
        own.sort_unstable();
        let key = (agent, own);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(Arc::clone(hit));
        }
        let task = self.instance.agents[agent];
        let problem = SingleAgentProblem {
            costs: self.instance.costs,
            start: task.start,
            goal: task.goal,
            heuristic: &self.heuristics[agent],
            horizon: self.horizon,
        };
        let plans = self
            .low_level
            .plan(&problem, &AgentConstraints::new(agent, &key.1), self.deadline)?;
        let set: PlanSet = Arc::new(plans.into_iter().map(Arc::new).collect());
        self.cache.insert(key, Arc::clone(&set));
        Ok(set)
    }

    fn roots(&mut self) -> Result<RootEnumerator, SearchError> {
        let mut fronts = Vec::with_capacity(self.instance.agents.len());
        for agent in 0..self.instance.agents.len() {
            let set = self.plan(agent, &[])?;
            if set.is_empty() {
                return Err(SearchError::Infeasible { agent });
            }
            fronts.push(set.iter().map(|p| Plan::clone(p)).collect());
        }
        Ok(RootEnumerator::new(fronts))
    }

    /// Children of `node` that survive `front`, and how many were filtered.
    fn expand(
        &mut self,
        node: &HighLevelNode,
        front: &SolutionFront,
    ) -> Result<(Vec<HighLevelNode>, u64), SearchError> {
        let conflict = detect_first_conflict(&node.joint_path()).expect("expand needs a conflict");
        let (wi, wj) = split_conflict(&conflict);
        let mut children = Vec::new();
        let mut filtered = 0;
        for omega in [wi, wj] {
            let mut constraints = node.constraints.clone();
            constraints.push(omega);
            let replans = self.plan(omega.agent, &constraints)?;
            for p in replans.iter() {
                let mut plans = node.plans.clone();
                plans[omega.agent] = Arc::clone(p);
                let cost = sum_costs(&plans);
                if front.filter(&cost) {
                    filtered += 1;
                    continue;
                }
                children.push(HighLevelNode {
                    plans,
                    cost,
                    constraints: constraints.clone(),
                    tree: node.tree,
                });
            }
        }
        Ok((children, filtered))
    }
}

/// One root per combination of the agents' unconstrained fronts, in
/// mixed-radix order with agent 0 as the slowest digit.
pub fn init_roots(instance: Instance<'_>, low_level: LowLevel, horizon: Time) -> Result<Vec<HighLevelNode>, SearchError> {
    let mut planner = Planner::new(instance, low_level, horizon, None);
    Ok(planner
        .roots()?
        .map(|(tree, plans)| HighLevelNode::root(tree, plans))
        .collect())
}

/// Splits the first conflict of `node` and returns the children not
/// filtered by `front`, together with the number filtered.
pub fn expand(
    instance: Instance<'_>,
    low_level: LowLevel,
    horizon: Time,
    node: &HighLevelNode,
    front: &SolutionFront,
) -> Result<(Vec<HighLevelNode>, u64), SearchError> {
    Planner::new(instance, low_level, horizon, None).expand(node, front)
}

struct OpenItem {
    node: HighLevelNode,
    seq: u64,
}

impl PartialEq for OpenItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenItem {}

impl Ord for OpenItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .node
            .cost
            .lex_cmp(&self.node.cost)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for OpenItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Default)]
struct Open {
    heap: BinaryHeap<OpenItem>,
    seq: u64,
}

impl Open {
    fn push(&mut self, node: HighLevelNode) {
        self.heap.push(OpenItem { node, seq: self.seq });
        self.seq += 1;
    }

    fn pop(&mut self) -> Option<HighLevelNode> {
        self.heap.pop().map(|i| i.node)
    }
}

pub fn solve(instance: Instance<'_>, config: &SolveConfig) -> Result<SolveResult, SearchError> {
    let started = Instant::now();
    let deadline = config.time_limit.map(|d| started + d);
    let mut planner = Planner::new(instance, config.low_level, config.horizon, deadline);
    let mut metrics = Metrics::default();
    let mut front = SolutionFront::new();

    let finish = |status: Status, front: SolutionFront, mut metrics: Metrics| {
        metrics.n_sol = front.len() as u64;
        metrics.n_filter = metrics.n_filter_pop + metrics.n_filter_child;
        metrics.ms = started.elapsed().as_millis() as u64;
        let front = front
            .into_sorted()
            .into_iter()
            .map(|(cost, paths)| FrontPoint { cost, paths })
            .collect();
        Ok(SolveResult { status, front, metrics })
    };

    let mut roots = match planner.roots() {
        Ok(r) => r,
        Err(SearchError::Infeasible { .. }) => return finish(Status::NoSolution, front, metrics),
        Err(SearchError::Deadline) => return finish(Status::Timeout, front, metrics),
        Err(e) => return Err(e),
    };

    let timed_out = |deadline: Option<Instant>| deadline.is_some_and(|d| Instant::now() >= d);
    let mut open = Open::default();
    if config.strategy == Strategy::Global {
        for (tree, plans) in roots.by_ref() {
            if timed_out(deadline) {
                return finish(Status::Timeout, front, metrics);
            }
            open.push(HighLevelNode::root(tree, plans));
            metrics.n_root += 1;
        }
    }

    loop {
        if timed_out(deadline) {
            return finish(Status::Timeout, front, metrics);
        }
        let node = match open.pop() {
            Some(n) => n,
            None => match roots.next() {
                Some((tree, plans)) => {
                    metrics.n_root += 1;
                    HighLevelNode::root(tree, plans)
                }
                None => break,
            },
        };
        if front.filter(&node.cost) {
            metrics.n_filter_pop += 1;
            continue;
        }
        if detect_first_conflict(&node.joint_path()).is_none() {
            front.update(node.cost.clone(), node.joint_path());
            continue;
        }
        metrics.n_conflict += 1;
        match planner.expand(&node, &front) {
            Ok((children, filtered)) => {
                metrics.n_filter_child += filtered;
                for c in children {
                    open.push(c);
                }
            }
            Err(SearchError::Deadline) => return finish(Status::Timeout, front, metrics),
            Err(e) => return Err(e),
        }
    }

    let status = if front.is_empty() {
        Status::NoSolution
    } else {
        Status::Complete
    };
    finish(status, front, metrics)
}
