use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::graph::{Time, Vertex};

/// `from == to` forbids agent `agent` from being at `from` at `time`;
/// otherwise it forbids the directed move `from -> to` between `time` and
/// `time + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Constraint {
    pub agent: usize,
    pub from: Vertex,
    pub to: Vertex,
    pub time: Time,
}

impl Constraint {
    pub fn vertex(agent: usize, v: Vertex, time: Time) -> Self {
        Constraint {
            agent,
            from: v,
            to: v,
            time,
        }
    }

    pub fn edge(agent: usize, from: Vertex, to: Vertex, time: Time) -> Self {
        Constraint {
            agent,
            from,
            to,
            time,
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.from == self.to
    }
}

/// The constraints of one agent, indexed for the low-level search.
#[derive(Debug, Clone, Default)]
pub struct AgentConstraints {
    vertex: HashSet<(Vertex, Time)>,
    edge: HashSet<(Vertex, Vertex, Time)>,
    /// Latest time of a vertex constraint per vertex, for the goal-hold rule.
    latest_vertex: Vec<(Vertex, Time)>,
    max_time: Option<Time>,
}

impl AgentConstraints {
    /// Collects the members of `all` that belong to `agent`.
    pub fn new<'a>(agent: usize, all: impl IntoIterator<Item = &'a Constraint>) -> Self {
        let mut out = AgentConstraints::default();
        for c in all.into_iter().filter(|c| c.agent == agent) {
            out.max_time = Some(out.max_time.map_or(c.time, |m| m.max(c.time)));
            if c.is_vertex() {
                out.vertex.insert((c.from, c.time));
                match out.latest_vertex.iter_mut().find(|(v, _)| *v == c.from) {
                    Some((_, t)) => *t = (*t).max(c.time),
                    None => out.latest_vertex.push((c.from, c.time)),
                }
            } else {
                out.edge.insert((c.from, c.to, c.time));
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty() && self.edge.is_empty()
    }

    pub fn vertex_blocked(&self, v: Vertex, t: Time) -> bool {
        self.vertex.contains(&(v, t))
    }

    /// Whether the move `(from, t) -> (to, t + 1)` survives the constraints.
    #[inline]
    pub fn consistent(&self, from: Vertex, to: Vertex, t: Time) -> bool {
        if self.vertex.contains(&(to, t + 1)) {
            return false;
        }
        from == to || !self.edge.contains(&(from, to, t))
    }

    /// Latest vertex-constraint time at `v`, if any.
    pub fn latest_vertex_constraint(&self, v: Vertex) -> Option<Time> {
        self.latest_vertex
            .iter()
            .find(|(u, _)| *u == v)
            .map(|&(_, t)| t)
    }

    /// An agent arriving at `goal` at `t` may stop there only if no vertex
    /// constraint at `goal` lies in the future.
    pub fn can_rest_at(&self, goal: Vertex, t: Time) -> bool {
        self.latest_vertex_constraint(goal).is_none_or(|last| last <= t)
    }

    pub fn max_time(&self) -> Option<Time> {
        self.max_time
    }
}

/// Free-function form of [`AgentConstraints::consistent`].
pub fn consistent(from: Vertex, to: Vertex, t: Time, constraints: &AgentConstraints) -> bool {
    constraints.consistent(from, to, t)
}
