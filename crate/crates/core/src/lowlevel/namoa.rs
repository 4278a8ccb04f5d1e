use std::collections::HashMap;
use std::time::Instant;

use smallvec::SmallVec;

use super::{expansions, AgentConstraints, Plan, SearchSpace, SingleAgentProblem, StLabel};
use crate::cost::{slice_leq, CostVector};
use crate::error::SearchError;
use crate::graph::{Time, Vertex};

type Tail = SmallVec<[u64; 3]>;

/// Truncated costs of the labels expanded at one state, kept as an antichain.
#[derive(Debug, Default, Clone)]
pub struct TruncatedFront {
    members: Vec<Tail>,
}

impl TruncatedFront {
    pub fn covers(&self, tail: &[u64]) -> bool {
        self.members.iter().any(|m| slice_leq(m, tail))
    }

    /// Callers check [`covers`](Self::covers) first.
    pub fn insert(&mut self, tail: &[u64]) {
        self.members.retain(|m| !slice_leq(tail, m));
        self.members.push(Tail::from_slice(tail));
    }

    pub fn members(&self) -> impl Iterator<Item = &[u64]> {
        self.members.iter().map(|m| m.as_slice())
    }
}

/// NAMOA* with dimensionality reduction on the time-expanded graph.
///
/// Because labels leave OPEN in lexicographic `f` order and the heuristic is
/// consistent, the first objective of anything expanded later at a state is
/// never smaller, so pruning only compares objectives `1..M`.
pub fn namoa_dr_st(
    problem: &SingleAgentProblem<'_>,
    constraints: &AgentConstraints,
    deadline: Option<Instant>,
) -> Result<Vec<Plan>, SearchError> {
    let m = problem.costs.objectives();
    let mut solutions = Vec::new();
    if constraints.vertex_blocked(problem.start, 0) || !problem.heuristic.reachable(problem.start) {
        return Ok(solutions);
    }

    let mut space = SearchSpace::default();
    let mut closed: HashMap<(Vertex, Time), TruncatedFront> = HashMap::new();
    let mut goal_front = TruncatedFront::default();

    let g0 = CostVector::zero(m);
    let f0 = &g0 + problem.heuristic.get(problem.start);
    space.push(StLabel {
        vertex: problem.start,
        time: 0,
        g: g0,
        f: f0,
        parent: None,
    });

    while let Some(id) = space.pop(deadline)? {
        let (v, t) = {
            let l = &space.labels[id as usize];
            (l.vertex, l.time)
        };
        {
            let l = &space.labels[id as usize];
            if goal_front.covers(l.f.tail())
                || closed.get(&(v, t)).is_some_and(|c| c.covers(l.g.tail()))
            {
                continue;
            }
        }
        closed
            .entry((v, t))
            .or_default()
            .insert(space.labels[id as usize].g.tail());

        if v == problem.goal && constraints.can_rest_at(v, t) {
            let g = space.labels[id as usize].g.clone();
            goal_front.insert(g.tail());
            solutions.push(Plan {
                path: space.reconstruct(id),
                cost: g,
            });
            continue;
        }

        let g = space.labels[id as usize].g.clone();
        for (w, c) in expansions(problem, constraints, v, t) {
            let g2 = &g + c;
            let f2 = &g2 + problem.heuristic.get(w);
            if goal_front.covers(f2.tail())
                || closed.get(&(w, t + 1)).is_some_and(|cl| cl.covers(g2.tail()))
            {
                continue;
            }
            space.push(StLabel {
                vertex: w,
                time: t + 1,
                g: g2,
                f: f2,
                parent: Some(id),
            });
        }
    }
    Ok(solutions)
}
