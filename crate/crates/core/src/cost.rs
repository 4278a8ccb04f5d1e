//! Integer cost vectors and the dominance relations used by every planner.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::ModelError;

/// Component value used for "unreachable" in heuristic tables.
pub const INFINITE_COST: u64 = u64::MAX / 4;

/// An `M`-dimensional vector of nonnegative integer costs.
///
/// The relation methods on this type (`dominates`, `dominates_or_equal`,
/// `lex_less`) assume equal lengths and panic otherwise; the free functions of
/// the same names report a [`ModelError::LengthMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostVector(SmallVec<[u64; 4]>);

impl CostVector {
    pub fn zero(m: usize) -> Self {
        CostVector(SmallVec::from_elem(0, m))
    }

    pub fn from_slice(values: &[u64]) -> Self {
        CostVector(SmallVec::from_slice(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, m: usize) -> u64 {
        self.0[m]
    }

    /// Every component no larger than `other`'s, with at least one strictly smaller.
    #[inline]
    pub fn dominates(&self, other: &CostVector) -> bool {
        assert_eq!(self.len(), other.len(), "cost vector length mismatch");
        let mut strict = false;
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a > b {
                return false;
            }
            strict |= a < b;
        }
        strict
    }

    /// Every component no larger than `other`'s.
    #[inline]
    pub fn dominates_or_equal(&self, other: &CostVector) -> bool {
        assert_eq!(self.len(), other.len(), "cost vector length mismatch");
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// Strict lexicographic order, component 0 first.
    #[inline]
    pub fn lex_less(&self, other: &CostVector) -> bool {
        self.lex_cmp(other) == Ordering::Less
    }

    #[inline]
    pub fn lex_cmp(&self, other: &CostVector) -> Ordering {
        assert_eq!(self.len(), other.len(), "cost vector length mismatch");
        self.0.as_slice().cmp(other.0.as_slice())
    }

    /// Components `1..M`, the part compared by dimensionality-reduced pruning.
    pub fn tail(&self) -> &[u64] {
        &self.0[1..]
    }

    /// `self + k * step`, saturating so that sentinel values stay large.
    pub fn add_scaled(&self, step: &CostVector, k: u64) -> CostVector {
        assert_eq!(self.len(), step.len(), "cost vector length mismatch");
        CostVector(
            self.0
                .iter()
                .zip(step.0.iter())
                .map(|(a, b)| a.saturating_add(b.saturating_mul(k)))
                .collect(),
        )
    }
}

impl From<Vec<u64>> for CostVector {
    fn from(v: Vec<u64>) -> Self {
        CostVector(SmallVec::from_vec(v))
    }
}

impl FromIterator<u64> for CostVector {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        CostVector(iter.into_iter().collect())
    }
}

impl AddAssign<&CostVector> for CostVector {
    fn add_assign(&mut self, rhs: &CostVector) {
        assert_eq!(self.len(), rhs.len(), "cost vector length mismatch");
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a = a.saturating_add(*b);
        }
    }
}

impl Add<&CostVector> for &CostVector {
    type Output = CostVector;

    fn add(self, rhs: &CostVector) -> CostVector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Debug for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn check_lengths(a: &CostVector, b: &CostVector) -> Result<(), ModelError> {
    if a.len() != b.len() {
        return Err(ModelError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Pareto dominance: `a` is no worse anywhere and strictly better somewhere.
pub fn dominates(a: &CostVector, b: &CostVector) -> Result<bool, ModelError> {
    check_lengths(a, b)?;
    Ok(a.dominates(b))
}

/// Weak dominance (`a <= b` componentwise), the test used by filtering.
pub fn dominates_or_equal(a: &CostVector, b: &CostVector) -> Result<bool, ModelError> {
    check_lengths(a, b)?;
    Ok(a.dominates_or_equal(b))
}

pub fn lex_less(a: &CostVector, b: &CostVector) -> Result<bool, ModelError> {
    check_lengths(a, b)?;
    Ok(a.lex_less(b))
}

/// `true` iff every element of `a` is `<=` the matching element of `b`.
/// Two empty slices compare as weakly dominating.
#[inline]
pub(crate) fn slice_leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

/// Keeps only the non-dominated, cost-unique members of `costs`, in first-seen order.
pub fn pareto_filter(costs: &[CostVector]) -> Vec<CostVector> {
    let mut out: Vec<CostVector> = Vec::new();
    for c in costs {
        if out.iter().any(|o| o.dominates_or_equal(c)) {
            continue;
        }
        out.retain(|o| !c.dominates(o));
        out.push(c.clone());
    }
    out
}
