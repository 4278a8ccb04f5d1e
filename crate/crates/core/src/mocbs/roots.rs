use std::sync::Arc;

use crate::lowlevel::Plan;

/// Mixed-radix walk over the Cartesian product of per-agent unconstrained
/// fronts. Agent 0 is the slowest digit.
#[derive(Debug, Clone)]
pub struct RootEnumerator {
    fronts: Vec<Vec<Arc<Plan>>>,
    next: Option<Vec<usize>>,
    index: u64,
}

impl RootEnumerator {
    /// Each front is sorted lexicographically by cost.
    pub fn new(fronts: Vec<Vec<Plan>>) -> Self {
        let fronts: Vec<Vec<Arc<Plan>>> = fronts
            .into_iter()
            .map(|mut f| {
                f.sort_by(|a, b| a.cost.lex_cmp(&b.cost));
                f.into_iter().map(Arc::new).collect()
            })
            .collect();
        let next = if fronts.iter().any(Vec::is_empty) {
            None
        } else {
            Some(vec![0; fronts.len()])
        };
        RootEnumerator {
            fronts,
            next,
            index: 0,
        }
    }

    pub fn fronts(&self) -> &[Vec<Arc<Plan>>] {
        &self.fronts
    }

    /// Product of the front sizes (saturating).
    pub fn total(&self) -> u64 {
        self.fronts
            .iter()
            .fold(1u64, |acc, f| acc.saturating_mul(f.len() as u64))
    }

    /// Number of roots handed out so far.
    pub fn produced(&self) -> u64 {
        self.index
    }
}

impl Iterator for RootEnumerator {
    /// `(tree id, one plan per agent)`.
    type Item = (u64, Vec<Arc<Plan>>);

    fn next(&mut self) -> Option<Self::Item> {
        let digits = self.next.take()?;
        let plans = digits
            .iter()
            .enumerate()
            .map(|(i, &d)| Arc::clone(&self.fronts[i][d]))
            .collect();
        let mut succ = digits;
        let mut k = succ.len();
        let mut carry = true;
        while carry && k > 0 {
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.fronts[k].len() {
                carry = false;
            } else {
                succ[k] = 0;
            }
        }
        if !carry {
            self.next = Some(succ);
        }
        let id = self.index;
        self.index += 1;
        Some((id, plans))
    }
}
