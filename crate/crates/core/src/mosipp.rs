//! Multi-objective safe-interval path planning around dynamic obstacles.
//!
//! States pair a vertex with one of its safe intervals. Labels at a state
//! remember cost and arrival time, and successors are generated by waiting in
//! the current interval and then moving.
//!
//! Two dominance rules are available. [`DominanceRule::Strict`] compares cost
//! and arrival time directly and only generates earliest-arrival successors.
//! That is exact when waiting is free or uniformly priced, but can discard
//! optimal trajectories when self-loop costs differ between vertices: a label
//! that arrives earlier also pays more waiting later. [`DominanceRule::WaitAware`]
//! charges the earlier label for waiting up to the later arrival time before
//! comparing, and emits later arrivals into an interval whenever waiting at the
//! target is not uniformly cheaper than waiting at the source. With identical
//! wait costs everywhere the two rules produce the same search.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::error::{ModelError, ParseError, SearchError};
use crate::graph::{EdgeCosts, GridGraph, Path, Time, Vertex};
use crate::lowlevel::HeuristicTable;

/// Interval end meaning "forever".
pub const INFINITE_TIME: Time = Time::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SafeInterval {
    pub begin: Time,
    /// Inclusive; [`INFINITE_TIME`] if unbounded.
    pub end: Time,
}

impl SafeInterval {
    pub fn new(begin: Time, end: Time) -> Self {
        assert!(begin <= end, "empty safe interval");
        SafeInterval { begin, end }
    }

    pub fn contains(&self, t: Time) -> bool {
        self.begin <= t && t <= self.end
    }

    pub fn is_unbounded(&self) -> bool {
        self.end == INFINITE_TIME
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SippState {
    pub vertex: Vertex,
    pub interval: SafeInterval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub state: SippState,
    pub g: CostVector,
    pub t_r: Time,
    pub parent: Option<usize>,
}

impl Label {
    pub fn new(state: SippState, g: CostVector, t_r: Time) -> Self {
        Label {
            state,
            g,
            t_r,
            parent: None,
        }
    }
}

/// A dynamic obstacle that occupies `vertices[k]` at time `start_time + k`,
/// and its last vertex forever after if `stays` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstacleTrajectory {
    start_time: Time,
    vertices: Vec<Vertex>,
    stays: bool,
}

impl ObstacleTrajectory {
    pub fn new(start_time: Time, vertices: Vec<Vertex>, stays: bool) -> Self {
        assert!(!vertices.is_empty(), "obstacle trajectory needs a vertex");
        ObstacleTrajectory {
            start_time,
            vertices,
            stays,
        }
    }

    pub fn start_time(&self) -> Time {
        self.start_time
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn stays(&self) -> bool {
        self.stays
    }

    /// Finite `(vertex, time)` occupancies, excluding the tail of a stay.
    pub fn occupancies(&self) -> impl Iterator<Item = (Vertex, Time)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, self.start_time + k as Time))
    }

    pub fn occupies(&self, v: Vertex, t: Time) -> bool {
        if t < self.start_time {
            return false;
        }
        let k = (t - self.start_time) as usize;
        match self.vertices.get(k) {
            Some(&u) => u == v,
            None => self.stays && *self.vertices.last().unwrap() == v,
        }
    }
}

/// JSON form of an obstacle: at `vertex` at `start_time`, then `path[k]` at
/// `start_time + 1 + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstacleRecord {
    pub vertex: Vertex,
    pub start_time: Time,
    #[serde(default)]
    pub path: Vec<Vertex>,
    #[serde(default)]
    pub stays: bool,
}

impl From<&ObstacleRecord> for ObstacleTrajectory {
    fn from(r: &ObstacleRecord) -> Self {
        let mut vertices = vec![r.vertex];
        vertices.extend_from_slice(&r.path);
        ObstacleTrajectory::new(r.start_time, vertices, r.stays)
    }
}

impl From<&ObstacleTrajectory> for ObstacleRecord {
    fn from(o: &ObstacleTrajectory) -> Self {
        ObstacleRecord {
            vertex: o.vertices[0],
            start_time: o.start_time,
            path: o.vertices[1..].to_vec(),
            stays: o.stays,
        }
    }
}

pub fn obstacles_from_json(text: &str) -> Result<Vec<ObstacleTrajectory>, ParseError> {
    let records: Vec<ObstacleRecord> =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    Ok(records.iter().map(ObstacleTrajectory::from).collect())
}

pub fn obstacles_to_json(obstacles: &[ObstacleTrajectory]) -> String {
    let records: Vec<ObstacleRecord> = obstacles.iter().map(ObstacleRecord::from).collect();
    serde_json::to_string_pretty(&records).expect("obstacle records serialize")
}

/// Maximal unoccupied intervals per vertex (sorted by begin). Blocked cells
/// and vertices occupied at every time get no interval.
pub fn compute_safe_intervals(
    graph: &GridGraph,
    obstacles: &[ObstacleTrajectory],
    horizon: Time,
) -> Vec<Vec<SafeInterval>> {
    let n = graph.num_cells();
    let mut occupied = vec![vec![false; horizon as usize + 1]; n];
    // Earliest time from which a vertex is occupied forever.
    let mut forever = vec![INFINITE_TIME; n];
    for o in obstacles {
        for (v, t) in o.occupancies() {
            if t <= horizon {
                occupied[v as usize][t as usize] = true;
            }
        }
        if o.stays {
            let last = *o.vertices.last().unwrap() as usize;
            let from = o.start_time + o.vertices.len() as Time - 1;
            forever[last] = forever[last].min(from);
            for t in from..=horizon {
                occupied[last][t as usize] = true;
            }
        }
    }
    (0..n)
        .map(|v| {
            let mut out = Vec::new();
            if !graph.is_passable(v as Vertex) {
                return out;
            }
            let mut run: Option<Time> = None;
            for t in 0..=horizon {
                match (occupied[v][t as usize], run) {
                    (false, None) => run = Some(t),
                    (true, Some(b)) => {
                        out.push(SafeInterval::new(b, t - 1));
                        run = None;
                    }
                    _ => {}
                }
            }
            if let Some(b) = run {
                let end = if forever[v] == INFINITE_TIME {
                    INFINITE_TIME
                } else {
                    forever[v] - 1
                };
                out.push(SafeInterval::new(b, end));
            }
            out
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominanceRule {
    /// Cost and arrival time compared directly; earliest arrivals only.
    Strict,
    /// Earlier labels are charged for waiting until the later arrival.
    #[default]
    WaitAware,
}

/// `l` label-dominates `l2`: weakly smaller cost and no later arrival.
pub fn label_dominates(l: &Label, l2: &Label) -> Result<bool, ModelError> {
    if l.state != l2.state {
        return Err(ModelError::StateMismatch);
    }
    Ok(l.g.dominates_or_equal(&l2.g) && l.t_r <= l2.t_r)
}

fn dominates_under(rule: DominanceRule, l: &Label, l2: &Label, wait: &CostVector) -> bool {
    if l.t_r > l2.t_r {
        return false;
    }
    match rule {
        DominanceRule::Strict => l.g.dominates_or_equal(&l2.g),
        DominanceRule::WaitAware => l
            .g
            .add_scaled(wait, (l2.t_r - l.t_r) as u64)
            .dominates_or_equal(&l2.g),
    }
}

/// Per-state label sets, each kept free of label-dominated pairs.
#[derive(Debug, Default, Clone)]
pub struct LabelFrontier {
    sets: HashMap<SippState, Vec<(usize, Label)>>,
}

impl LabelFrontier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn labels(&self, state: &SippState) -> impl Iterator<Item = &Label> {
        self.sets.get(state).into_iter().flatten().map(|(_, l)| l)
    }
}

/// Outcome of [`label_dominated_check_and_insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrontierCheck {
    /// A stored label dominates the candidate; nothing changed.
    Dominated,
    /// The candidate was stored; these ids were evicted and must leave OPEN.
    Inserted { evicted: Vec<usize> },
}

/// Discards `label` if a stored label at its state dominates it, otherwise
/// evicts every stored label it dominates and stores it under `id`.
pub fn label_dominated_check_and_insert(
    id: usize,
    label: &Label,
    frontier: &mut LabelFrontier,
    rule: DominanceRule,
    costs: &EdgeCosts,
) -> FrontierCheck {
    let wait = costs.wait_cost(label.state.vertex);
    let set = frontier.sets.entry(label.state).or_default();
    if set.iter().any(|(_, l)| dominates_under(rule, l, label, wait)) {
        return FrontierCheck::Dominated;
    }
    let mut evicted = Vec::new();
    set.retain(|(i, l)| {
        let gone = dominates_under(rule, label, l, wait);
        if gone {
            evicted.push(*i);
        }
        !gone
    });
    set.push((id, label.clone()));
    FrontierCheck::Inserted { evicted }
}

/// Wait-and-move successors of `label`, arriving no later than `horizon`.
pub fn get_successors(
    label: &Label,
    intervals: &[Vec<SafeInterval>],
    costs: &EdgeCosts,
    rule: DominanceRule,
    horizon: Time,
) -> Vec<Label> {
    let v = label.state.vertex;
    let graph = costs.graph();
    let wait_v = costs.wait_cost(v);
    // Latest time the agent may still be at v, plus one.
    let leave_by = label.state.interval.end.saturating_add(1);
    let mut out = Vec::new();
    for u in graph.neighbors(v) {
        let step = costs.cost(v, u).expect("neighbour edge");
        let later_pays = rule == DominanceRule::WaitAware
            && !costs.wait_cost(u).dominates_or_equal(wait_v);
        for &iv in &intervals[u as usize] {
            let first = label.t_r.saturating_add(1).max(iv.begin);
            let last = iv.end.min(leave_by).min(horizon);
            if first > last {
                continue;
            }
            let stop = if later_pays { last } else { first };
            for t in first..=stop {
                let waited = (t - label.t_r - 1) as u64;
                let g = &label.g.add_scaled(wait_v, waited) + step;
                out.push(Label {
                    state: SippState {
                        vertex: u,
                        interval: iv,
                    },
                    g,
                    t_r: t,
                    parent: None,
                });
            }
        }
    }
    out
}

#[derive(Debug, PartialEq, Eq)]
struct Entry {
    f: CostVector,
    t_r: Time,
    seq: u64,
    id: usize,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .lex_cmp(&self.f)
            .then_with(|| other.t_r.cmp(&self.t_r))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct SippProblem<'a> {
    pub costs: &'a EdgeCosts,
    pub obstacles: &'a [ObstacleTrajectory],
    pub start: Vertex,
    pub goal: Vertex,
    pub heuristic: &'a HeuristicTable,
    pub horizon: Time,
    pub rule: DominanceRule,
}

/// All cost-unique Pareto-optimal collision-free trajectories from `start` at
/// time 0 to `goal`, arriving by the horizon, in the order they were found.
/// Reaching the goal ends a trajectory.
pub fn mosipp_solve(
    problem: &SippProblem<'_>,
    deadline: Option<Instant>,
) -> Result<Vec<(Path, CostVector)>, SearchError> {
    let costs = problem.costs;
    let m = costs.objectives();
    let intervals = compute_safe_intervals(costs.graph(), problem.obstacles, problem.horizon);
    let Some(&first) = intervals[problem.start as usize].first() else {
        return Ok(Vec::new());
    };
    if first.begin != 0 || !problem.heuristic.reachable(problem.start) {
        return Ok(Vec::new());
    }

    let mut labels: Vec<Label> = Vec::new();
    let mut dead: Vec<bool> = Vec::new();
    let mut open = BinaryHeap::new();
    let mut frontier = LabelFrontier::new();
    let mut solutions: Vec<(usize, CostVector)> = Vec::new();
    let mut seq = 0u64;
    let mut pops = 0u64;

    let mut offer = |label: Label,
                     labels: &mut Vec<Label>,
                     dead: &mut Vec<bool>,
                     open: &mut BinaryHeap<Entry>,
                     frontier: &mut LabelFrontier| {
        let id = labels.len();
        match label_dominated_check_and_insert(id, &label, frontier, problem.rule, costs) {
            FrontierCheck::Dominated => {}
            FrontierCheck::Inserted { evicted } => {
                for e in evicted {
                    dead[e] = true;
                }
                let f = &label.g + problem.heuristic.get(label.state.vertex);
                open.push(Entry {
                    f,
                    t_r: label.t_r,
                    seq,
                    id,
                });
                seq += 1;
                labels.push(label);
                dead.push(false);
            }
        }
    };

    offer(
        Label::new(
            SippState {
                vertex: problem.start,
                interval: first,
            },
            CostVector::zero(m),
            0,
        ),
        &mut labels,
        &mut dead,
        &mut open,
        &mut frontier,
    );

    while let Some(entry) = open.pop() {
        pops += 1;
        if pops.is_multiple_of(512) && deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SearchError::Deadline);
        }
        if dead[entry.id] {
            continue;
        }
        // Lazy FilterOpen: anything whose f is covered by a solution is useless.
        if solutions.iter().any(|(_, s)| s.dominates_or_equal(&entry.f)) {
            continue;
        }
        let label = labels[entry.id].clone();
        if label.state.vertex == problem.goal {
            solutions.push((entry.id, label.g.clone()));
            continue;
        }
        for mut succ in get_successors(&label, &intervals, costs, problem.rule, problem.horizon) {
            if !problem.heuristic.reachable(succ.state.vertex) {
                continue;
            }
            let f = &succ.g + problem.heuristic.get(succ.state.vertex);
            if solutions.iter().any(|(_, s)| s.dominates_or_equal(&f)) {
                continue;
            }
            succ.parent = Some(entry.id);
            offer(succ, &mut labels, &mut dead, &mut open, &mut frontier);
        }
    }

    Ok(solutions
        .into_iter()
        .map(|(id, g)| (reconstruct(&labels, id), g))
        .collect())
}

/// Expands parent links into a step-by-step path, filling in waits.
fn reconstruct(labels: &[Label], id: usize) -> Path {
    let mut chain = Vec::new();
    let mut cur = Some(id);
    while let Some(i) = cur {
        chain.push(i);
        cur = labels[i].parent;
    }
    chain.reverse();
    let mut verts = vec![labels[chain[0]].state.vertex];
    for &i in &chain[1..] {
        let l = &labels[i];
        let prev = *verts.last().unwrap();
        while (verts.len() as Time) < l.t_r {
            verts.push(prev);
        }
        verts.push(l.state.vertex);
    }
    Path::new(verts)
}
