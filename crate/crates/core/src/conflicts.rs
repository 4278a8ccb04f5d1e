//! First-conflict detection and constraint splitting.

use serde::{Deserialize, Serialize};

use crate::graph::{JointPath, Time, Vertex};
use crate::lowlevel::Constraint;

/// `(i, j, v_i, v_j, t)`: a vertex conflict when `v_i == v_j` (both there at
/// `t`), otherwise agent `i` moves `v_i -> v_j` while `j` moves the other way
/// between `t` and `t + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conflict {
    pub i: usize,
    pub j: usize,
    pub v_i: Vertex,
    pub v_j: Vertex,
    pub time: Time,
}

impl Conflict {
    pub fn is_vertex(&self) -> bool {
        self.v_i == self.v_j
    }
}

/// Scans time steps in order (agents hold their goals after arriving). At each
/// step, vertex conflicts over pairs `i < j` come first, then swaps into the
/// next step.
pub fn detect_first_conflict(jp: &JointPath) -> Option<Conflict> {
    let paths = jp.paths();
    let n = paths.len();
    let horizon = jp.makespan();
    for t in 0..=horizon {
        for i in 0..n {
            for j in i + 1..n {
                let v = paths[i].at(t);
                if v == paths[j].at(t) {
                    return Some(Conflict {
                        i,
                        j,
                        v_i: v,
                        v_j: v,
                        time: t,
                    });
                }
            }
        }
        if t == horizon {
            break;
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a0, a1) = (paths[i].at(t), paths[i].at(t + 1));
                let (b0, b1) = (paths[j].at(t), paths[j].at(t + 1));
                if a0 != a1 && a0 == b1 && a1 == b0 {
                    return Some(Conflict {
                        i,
                        j,
                        v_i: a0,
                        v_j: a1,
                        time: t,
                    });
                }
            }
        }
    }
    None
}

pub fn split_conflict(c: &Conflict) -> (Constraint, Constraint) {
    (
        Constraint::edge(c.i, c.v_i, c.v_j, c.time),
        Constraint::edge(c.j, c.v_j, c.v_i, c.time),
    )
}
