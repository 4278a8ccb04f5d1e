use crate::cost::CostVector;
use crate::graph::JointPath;

/// Conflict-free solutions found so far, one witness per cost vector, with no
/// member dominating another.
#[derive(Debug, Clone, Default)]
pub struct SolutionFront {
    entries: Vec<(CostVector, JointPath)>,
}

impl SolutionFront {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(CostVector, JointPath)] {
        &self.entries
    }

    pub fn costs(&self) -> impl Iterator<Item = &CostVector> {
        self.entries.iter().map(|(c, _)| c)
    }

    /// `true` if some member weakly dominates `cost`, i.e. a node with this
    /// cost cannot lead to a new cost-unique Pareto-optimal solution.
    pub fn filter(&self, cost: &CostVector) -> bool {
        self.costs().any(|c| c.dominates_or_equal(cost))
    }

    /// Drops members dominated by `cost` and stores the new solution. The
    /// caller has already checked [`filter`](Self::filter).
    pub fn update(&mut self, cost: CostVector, joint: JointPath) {
        debug_assert!(!self.filter(&cost));
        self.entries.retain(|(c, _)| !cost.dominates(c));
        self.entries.push((cost, joint));
    }

    /// Entries in lexicographic cost order.
    pub fn into_sorted(mut self) -> Vec<(CostVector, JointPath)> {
        self.entries.sort_by(|a, b| a.0.lex_cmp(&b.0));
        self.entries
    }
}

/// `filter` as a free function over any cost set.
pub fn filter<'a>(cost: &CostVector, front: impl IntoIterator<Item = &'a CostVector>) -> bool {
    front.into_iter().any(|c| c.dominates_or_equal(cost))
}
