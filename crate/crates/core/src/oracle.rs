//! Exhaustive reference solvers for small instances.
//!
//! Both oracles sweep the time-expanded graph layer by layer and keep, for
//! each timed state, every cost vector not weakly dominated by another one
//! reaching the same state (two prefixes ending in the same timed state have
//! identical futures). Partial prefixes are also dropped once a completed
//! solution weakly dominates them; costs are nonnegative, so no extension could
//! beat that solution. No heuristic is involved anywhere.
//!
//! Collision and constraint checks are written out here rather than borrowed
//! from the planners, so that a shared bug cannot hide.

use std::collections::HashMap;

use crate::cost::CostVector;
use crate::error::SearchError;
use crate::graph::{EdgeCosts, JointPath, Path, Time, Vertex};
use crate::instance::AgentTask;
use crate::lowlevel::Constraint;
use crate::mosipp::ObstacleTrajectory;

/// Default cap on stored oracle states.
pub const DEFAULT_STATE_BUDGET: usize = 4_000_000;

/// What a single agent must avoid.
#[derive(Debug, Clone, Copy)]
pub enum Blockers<'a> {
    None,
    /// Constraints of the planned agent (others are ignored). Arriving at the
    /// goal ends a path only if no vertex constraint at the goal lies later.
    Constraints { agent: usize, constraints: &'a [Constraint] },
    /// Dynamic obstacles occupying vertices; arriving at the goal ends a path.
    Obstacles(&'a [ObstacleTrajectory]),
}

impl Blockers<'_> {
    fn move_allowed(&self, from: Vertex, to: Vertex, t: Time) -> bool {
        match *self {
            Blockers::None => true,
            Blockers::Constraints { agent, constraints } => !constraints.iter().any(|c| {
                c.agent == agent
                    && ((c.from == c.to && c.from == to && c.time == t + 1)
                        || (c.from != c.to && c.from == from && c.to == to && c.time == t))
            }),
            Blockers::Obstacles(obs) => !obstacle_at(obs, to, t + 1),
        }
    }

    fn start_allowed(&self, start: Vertex) -> bool {
        match *self {
            Blockers::None => true,
            Blockers::Constraints { agent, constraints } => !constraints
                .iter()
                .any(|c| c.agent == agent && c.from == c.to && c.from == start && c.time == 0),
            Blockers::Obstacles(obs) => !obstacle_at(obs, start, 0),
        }
    }

    fn may_end(&self, goal: Vertex, t: Time) -> bool {
        match *self {
            Blockers::Constraints { agent, constraints } => !constraints
                .iter()
                .any(|c| c.agent == agent && c.from == c.to && c.from == goal && c.time > t),
            _ => true,
        }
    }
}

fn obstacle_at(obs: &[ObstacleTrajectory], v: Vertex, t: Time) -> bool {
    obs.iter().any(|o| {
        let cells = o.vertices();
        if cells.is_empty() || t < o.start_time() {
            return false;
        }
        let k = (t - o.start_time()) as usize;
        match cells.get(k) {
            Some(&c) => c == v,
            None => o.stays() && *cells.last().unwrap() == v,
        }
    })
}

/// Pareto set of completed solutions with witnesses.
struct Front<W> {
    members: Vec<(CostVector, W)>,
}

impl<W> Front<W> {
    fn new() -> Self {
        Front { members: Vec::new() }
    }

    fn covers(&self, c: &CostVector) -> bool {
        self.members.iter().any(|(m, _)| m.dominates_or_equal(c))
    }

    fn offer(&mut self, c: CostVector, witness: W) {
        if self.covers(&c) {
            return;
        }
        self.members.retain(|(m, _)| !c.dominates(m));
        self.members.push((c, witness));
    }

    fn into_sorted(mut self) -> Vec<(CostVector, W)> {
        self.members.sort_by(|a, b| a.0.lex_cmp(&b.0));
        self.members
    }
}

/// Inserts `cost` into a per-state Pareto bucket; `false` if it was covered.
fn bucket_insert<P>(bucket: &mut Vec<(CostVector, P)>, cost: CostVector, payload: P) -> bool {
    if bucket.iter().any(|(c, _)| c.dominates_or_equal(&cost)) {
        return false;
    }
    bucket.retain(|(c, _)| !cost.dominates(c));
    bucket.push((cost, payload));
    true
}

/// Exact cost-unique Pareto front of one agent's timed paths with arrival
/// time at most `horizon`, sorted lexicographically by cost.
pub fn single_agent_front_bruteforce(
    costs: &EdgeCosts,
    start: Vertex,
    goal: Vertex,
    blockers: Blockers<'_>,
    horizon: Time,
) -> Result<Vec<(CostVector, Path)>, SearchError> {
    single_agent_front_with_budget(costs, start, goal, blockers, horizon, DEFAULT_STATE_BUDGET)
}

pub fn single_agent_front_with_budget(
    costs: &EdgeCosts,
    start: Vertex,
    goal: Vertex,
    blockers: Blockers<'_>,
    horizon: Time,
    budget: usize,
) -> Result<Vec<(CostVector, Path)>, SearchError> {
    let graph = costs.graph();
    let m = costs.objectives();
    // Arena of (vertex, parent) nodes.
    let mut nodes: Vec<(Vertex, Option<usize>)> = Vec::new();
    let mut front: Front<usize> = Front::new();
    if !blockers.start_allowed(start) {
        return Ok(Vec::new());
    }
    nodes.push((start, None));
    let mut layer: Vec<(usize, CostVector)> = Vec::new();
    if start == goal && blockers.may_end(goal, 0) {
        front.offer(CostVector::zero(m), 0);
    } else {
        layer.push((0, CostVector::zero(m)));
    }

    for t in 0..horizon {
        let mut next: HashMap<Vertex, Vec<(CostVector, usize)>> = HashMap::new();
        for (idx, cost) in &layer {
            if front.covers(cost) {
                continue;
            }
            let v = nodes[*idx].0;
            for w in graph.successors(v) {
                if !blockers.move_allowed(v, w, t) {
                    continue;
                }
                let c = cost + costs.cost(v, w).expect("successor edge");
                if front.covers(&c) {
                    continue;
                }
                bucket_insert(next.entry(w).or_default(), c, *idx);
            }
        }
        let mut keys: Vec<Vertex> = next.keys().copied().collect();
        keys.sort_unstable();
        layer.clear();
        for w in keys {
            for (c, parent) in next.remove(&w).unwrap() {
                if nodes.len() >= budget {
                    return Err(SearchError::OracleTooBig { budget });
                }
                nodes.push((w, Some(parent)));
                let id = nodes.len() - 1;
                if w == goal && blockers.may_end(goal, t + 1) {
                    front.offer(c, id);
                } else {
                    layer.push((id, c));
                }
            }
        }
        if layer.is_empty() {
            break;
        }
    }

    Ok(front
        .into_sorted()
        .into_iter()
        .map(|(c, id)| {
            let mut verts = Vec::new();
            let mut cur = Some(id);
            while let Some(i) = cur {
                verts.push(nodes[i].0);
                cur = nodes[i].1;
            }
            verts.reverse();
            (c, Path::new(verts))
        })
        .collect())
}

struct JointNode {
    positions: Vec<Vertex>,
    /// Bit `i` set once agent `i` has stopped at its goal for good.
    finished: u32,
    parent: Option<usize>,
}

/// Positions plus a bitmask of agents that have stopped at their goal.
type JointKey = (Vec<Vertex>, u32);

/// Exact cost-unique Pareto front of conflict-free joint paths in which every
/// agent arrives by `horizon`, sorted lexicographically by cost.
///
/// An agent may stop at its goal (after which it occupies it forever at no
/// cost) or pass through it and continue.
pub fn joint_front_bruteforce(
    costs: &EdgeCosts,
    agents: &[AgentTask],
    horizon: Time,
) -> Result<Vec<(CostVector, JointPath)>, SearchError> {
    joint_front_with_budget(costs, agents, horizon, DEFAULT_STATE_BUDGET)
}

pub fn joint_front_with_budget(
    costs: &EdgeCosts,
    agents: &[AgentTask],
    horizon: Time,
    budget: usize,
) -> Result<Vec<(CostVector, JointPath)>, SearchError> {
    let n = agents.len();
    assert!(n <= 32, "joint oracle supports at most 32 agents");
    let m = costs.objectives();
    let all_done: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let graph = costs.graph();

    let mut nodes: Vec<JointNode> = Vec::new();
    let mut front: Front<usize> = Front::new();
    let mut layer: Vec<(usize, CostVector)> = Vec::new();

    let starts: Vec<Vertex> = agents.iter().map(|a| a.start).collect();
    if has_duplicate(&starts) {
        return Ok(Vec::new());
    }
    // Agents already at their goal may stop immediately or stay active.
    let at_goal: Vec<usize> = (0..n).filter(|&i| agents[i].start == agents[i].goal).collect();
    for subset in 0u32..(1 << at_goal.len()) {
        let mut finished = 0u32;
        for (k, &i) in at_goal.iter().enumerate() {
            if subset & (1 << k) != 0 {
                finished |= 1 << i;
            }
        }
        nodes.push(JointNode {
            positions: starts.clone(),
            finished,
            parent: None,
        });
        let id = nodes.len() - 1;
        if finished == all_done {
            front.offer(CostVector::zero(m), id);
        } else {
            layer.push((id, CostVector::zero(m)));
        }
    }

    // Per-agent options: (next vertex, action cost or None for a stopped agent, stops now).
    let mut options: Vec<Vec<(Vertex, Option<CostVector>, bool)>> = vec![Vec::new(); n];
    for _t in 0..horizon {
        let mut next: HashMap<JointKey, Vec<(CostVector, usize)>> = HashMap::new();
        for (idx, cost) in &layer {
            if front.covers(cost) {
                continue;
            }
            let node = &nodes[*idx];
            for i in 0..n {
                options[i].clear();
                let v = node.positions[i];
                if node.finished & (1 << i) != 0 {
                    options[i].push((v, None, true));
                    continue;
                }
                for w in graph.successors(v) {
                    let c = costs.cost(v, w).expect("successor edge").clone();
                    if w == agents[i].goal {
                        options[i].push((w, Some(c.clone()), true));
                    }
                    options[i].push((w, Some(c), false));
                }
            }
            let mut choice = vec![0usize; n];
            'product: loop {
                let moves: Vec<&(Vertex, Option<CostVector>, bool)> =
                    (0..n).map(|i| &options[i][choice[i]]).collect();
                if collision_free(&node.positions, &moves) {
                    let mut c = cost.clone();
                    let mut finished = node.finished;
                    for (i, mv) in moves.iter().enumerate() {
                        if let Some(step) = &mv.1 {
                            c += step;
                        }
                        if mv.2 {
                            finished |= 1 << i;
                        }
                    }
                    if !front.covers(&c) {
                        let positions: Vec<Vertex> = moves.iter().map(|mv| mv.0).collect();
                        bucket_insert(next.entry((positions, finished)).or_default(), c, *idx);
                    }
                }
                // Mixed-radix increment, last agent fastest.
                let mut k = n;
                loop {
                    if k == 0 {
                        break 'product;
                    }
                    k -= 1;
                    choice[k] += 1;
                    if choice[k] < options[k].len() {
                        break;
                    }
                    choice[k] = 0;
                }
            }
        }
        let mut keys: Vec<(Vec<Vertex>, u32)> = next.keys().cloned().collect();
        keys.sort_unstable();
        layer.clear();
        for key in keys {
            let bucket = next.remove(&key).unwrap();
            for (c, parent) in bucket {
                if nodes.len() >= budget {
                    return Err(SearchError::OracleTooBig { budget });
                }
                nodes.push(JointNode {
                    positions: key.0.clone(),
                    finished: key.1,
                    parent: Some(parent),
                });
                let id = nodes.len() - 1;
                if key.1 == all_done {
                    front.offer(c, id);
                } else {
                    layer.push((id, c));
                }
            }
        }
        if layer.is_empty() {
            break;
        }
    }

    Ok(front
        .into_sorted()
        .into_iter()
        .map(|(c, id)| (c, joint_witness(&nodes, id, n)))
        .collect())
}

fn has_duplicate(vs: &[Vertex]) -> bool {
    vs.iter().enumerate().any(|(i, a)| vs[i + 1..].contains(a))
}

fn collision_free(from: &[Vertex], moves: &[&(Vertex, Option<CostVector>, bool)]) -> bool {
    let n = from.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a0, a1) = (from[i], moves[i].0);
            let (b0, b1) = (from[j], moves[j].0);
            if a1 == b1 {
                return false;
            }
            if a0 != a1 && a0 == b1 && a1 == b0 {
                return false;
            }
        }
    }
    true
}

fn joint_witness(nodes: &[JointNode], id: usize, n: usize) -> JointPath {
    let mut chain = Vec::new();
    let mut cur = Some(id);
    while let Some(i) = cur {
        chain.push(i);
        cur = nodes[i].parent;
    }
    chain.reverse();
    let paths = (0..n)
        .map(|a| {
            let mut verts = Vec::new();
            for &i in &chain {
                verts.push(nodes[i].positions[a]);
                if nodes[i].finished & (1 << a) != 0 {
                    break;
                }
            }
            Path::new(verts)
        })
        .collect();
    JointPath(paths)
}
