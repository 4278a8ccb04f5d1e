use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::{CostVector, INFINITE_COST};
use crate::graph::{EdgeCosts, Vertex};

/// Per-vertex lower bounds on the cost-to-go, one backward Dijkstra per objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicTable {
    goal: Vertex,
    values: Vec<CostVector>,
}

impl HeuristicTable {
    pub fn goal(&self) -> Vertex {
        self.goal
    }

    pub fn get(&self, v: Vertex) -> &CostVector {
        &self.values[v as usize]
    }

    /// `false` if any component is the unreachable sentinel.
    pub fn reachable(&self, v: Vertex) -> bool {
        self.values[v as usize]
            .as_slice()
            .iter()
            .all(|&c| c < INFINITE_COST)
    }
}

/// Self-loops are not relaxed: waiting never lowers a bound.
pub fn build_heuristic(costs: &EdgeCosts, goal: Vertex) -> HeuristicTable {
    let graph = costs.graph();
    assert!(graph.is_passable(goal), "goal must be a free cell");
    let m = costs.objectives();
    let n = graph.num_cells();
    let mut values = vec![CostVector::from_slice(&vec![INFINITE_COST; m]); n];
    let mut column = vec![INFINITE_COST; n];
    for obj in 0..m {
        column.fill(INFINITE_COST);
        column[goal as usize] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, goal)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > column[v as usize] {
                continue;
            }
            for u in graph.neighbors(v) {
                // Reverse edge: the action u -> v.
                let c = costs.cost(u, v).expect("neighbour edge").get(obj);
                let nd = d + c;
                if nd < column[u as usize] {
                    column[u as usize] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        for v in 0..n {
            let mut vals = values[v].as_slice().to_vec();
            vals[obj] = column[v];
            values[v] = CostVector::from(vals);
        }
    }
    HeuristicTable { goal, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GridGraph;
    use crate::instance::assign_random_costs;

    #[test]
    fn goal_is_zero_and_chain_counts_steps() {
        let g = GridGraph::open(3, 1);
        let costs = EdgeCosts::uniform(&g, CostVector::from_slice(&[1, 1]));
        let h = build_heuristic(&costs, 2);
        assert_eq!(h.get(2), &CostVector::zero(2));
        assert_eq!(h.get(0), &CostVector::from_slice(&[2, 2]));
    }

    #[test]
    fn unreachable_cells_get_sentinel() {
        let g = GridGraph::new(3, 1, vec![true, false, true]);
        let costs = EdgeCosts::uniform(&g, CostVector::from_slice(&[1]));
        let h = build_heuristic(&costs, 2);
        assert!(!h.reachable(0));
        assert!(h.reachable(2));
    }

    #[test]
    fn matches_floyd_warshall_per_objective() {
        let g = GridGraph::open(4, 4);
        let n = g.num_cells();
        for seed in 0..20 {
            let costs = assign_random_costs(&g, 2, 5, seed);
            let goal = (seed % 16) as Vertex;
            let h = build_heuristic(&costs, goal);
            for obj in 0..2 {
                let mut d = vec![vec![INFINITE_COST; n]; n];
                for v in 0..n {
                    d[v][v] = 0;
                    for w in g.neighbors(v as Vertex) {
                        d[v][w as usize] = costs.cost(v as Vertex, w).unwrap().get(obj);
                    }
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let via = d[i][k].saturating_add(d[k][j]);
                            if via < d[i][j] {
                                d[i][j] = via;
                            }
                        }
                    }
                }
                for v in 0..n {
                    assert_eq!(h.get(v as Vertex).get(obj), d[v][goal as usize]);
                }
            }
        }
    }
}
