use std::collections::HashMap;
use std::time::Instant;

use super::{expansions, AgentConstraints, Plan, SearchSpace, SingleAgentProblem, StLabel};
use crate::cost::CostVector;
use crate::error::SearchError;
use crate::graph::{Time, Vertex};

/// Bi-objective search on the time-expanded graph.
///
/// Keeps one scalar per timed state, the smallest second-objective `g` among
/// labels expanded there, and one scalar for the goal, the smallest
/// second-objective cost of an accepted solution.
pub fn boa_st(
    problem: &SingleAgentProblem<'_>,
    constraints: &AgentConstraints,
    deadline: Option<Instant>,
) -> Result<Vec<Plan>, SearchError> {
    let m = problem.costs.objectives();
    if m != 2 {
        return Err(SearchError::ObjectiveCount {
            expected: 2,
            found: m,
        });
    }
    let mut solutions = Vec::new();
    if constraints.vertex_blocked(problem.start, 0) || !problem.heuristic.reachable(problem.start) {
        return Ok(solutions);
    }

    let mut space = SearchSpace::default();
    let mut g2_min: HashMap<(Vertex, Time), u64> = HashMap::new();
    let mut goal_g2_min = u64::MAX;

    let g0 = CostVector::zero(2);
    let f0 = &g0 + problem.heuristic.get(problem.start);
    space.push(StLabel {
        vertex: problem.start,
        time: 0,
        g: g0,
        f: f0,
        parent: None,
    });

    while let Some(id) = space.pop(deadline)? {
        let (v, t, g2, f2) = {
            let l = &space.labels[id as usize];
            (l.vertex, l.time, l.g.get(1), l.f.get(1))
        };
        let seen = g2_min.get(&(v, t)).copied().unwrap_or(u64::MAX);
        if g2 >= seen || f2 >= goal_g2_min {
            continue;
        }
        g2_min.insert((v, t), g2);

        if v == problem.goal && constraints.can_rest_at(v, t) {
            goal_g2_min = g2;
            solutions.push(Plan {
                path: space.reconstruct(id),
                cost: space.labels[id as usize].g.clone(),
            });
            continue;
        }

        let g = space.labels[id as usize].g.clone();
        for (w, c) in expansions(problem, constraints, v, t) {
            let g_next = &g + c;
            let f_next = &g_next + problem.heuristic.get(w);
            let seen = g2_min.get(&(w, t + 1)).copied().unwrap_or(u64::MAX);
            if g_next.get(1) >= seen || f_next.get(1) >= goal_g2_min {
                continue;
            }
            space.push(StLabel {
                vertex: w,
                time: t + 1,
                g: g_next,
                f: f_next,
                parent: Some(id),
            });
        }
    }
    Ok(solutions)
}
