//! Multi-objective utility vectors, finite sets of them, and the set algebra
//! (scaling, Minkowski sum, pruned union) used by variable elimination.
//!
//! Every objective is maximized internally. A [`UtilitySet`] is always kept
//! maximal under the relation it was last pruned with, and is never empty:
//! the neutral element of the algebra is the singleton zero vector.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::dominance::{self, CoveringParams, DominanceError, TradeoffSet};
use crate::lp::{self, Feasibility, LpError};

/// Errors raised by vector and set operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum UtilityError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("utility vectors need at least one coordinate")]
    ZeroDimension,
    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },
    #[error("utility sets cannot be empty")]
    EmptySet,
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),
    #[error(transparent)]
    Dominance(#[from] DominanceError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// A point in R^p, one coordinate per objective.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UtilityVector(SmallVec<[f64; 4]>);

impl UtilityVector {
    /// Builds a vector, rejecting empty or non-finite input.
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self, UtilityError> {
        let coords = coords.into();
        if coords.is_empty() {
            return Err(UtilityError::ZeroDimension);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(UtilityError::NonFinite { index });
        }
        Ok(Self(SmallVec::from_vec(coords)))
    }

    pub fn zero(dim: usize) -> Self {
        Self(SmallVec::from_elem(0.0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
    }

    pub fn scale(&self, q: f64) -> Self {
        Self(self.0.iter().map(|a| a * q).collect())
    }

    /// Flips the sign of the coordinates selected by `mask`.
    pub fn negate_where(&self, mask: &[bool]) -> Self {
        Self(
            self.0
                .iter()
                .zip(mask)
                .map(|(&c, &flip)| if flip { -c } else { c })
                .collect(),
        )
    }

    /// Componentwise `>=` without dimension checking.
    pub(crate) fn weakly_dominates(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }

    pub(crate) fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn check_dim(&self, other: &Self) -> Result<(), UtilityError> {
        if self.dim() != other.dim() {
            return Err(UtilityError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("").field(&&self.0[..]).finish()
    }
}

impl Index<usize> for UtilityVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for UtilityVector {
    type Error = UtilityError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<UtilityVector> for Vec<f64> {
    fn from(v: UtilityVector) -> Self {
        v.0.to_vec()
    }
}

/// A dominance relation used to prune utility sets.
#[derive(Debug, Clone)]
pub enum DominanceRelation {
    /// Weak Pareto order (componentwise `>=`).
    Pareto,
    /// Multiplicative (ε, λ)-dominance on positive vectors. Not transitive;
    /// pruning under this kind goes through the grid covering.
    Epsilon(CoveringParams),
    /// Cone dominance induced by elicited tradeoffs.
    Tradeoff(Arc<TradeoffSet>),
}

impl DominanceRelation {
    pub fn epsilon(epsilon: f64) -> Result<Self, UtilityError> {
        Ok(Self::Epsilon(CoveringParams::new(epsilon, 1.0)?))
    }

    pub fn tradeoff(theta: TradeoffSet) -> Self {
        Self::Tradeoff(Arc::new(theta))
    }

    pub fn tag(&self) -> RelationTag {
        match self {
            Self::Pareto => RelationTag::Pareto,
            Self::Epsilon(_) => RelationTag::Epsilon,
            Self::Tradeoff(_) => RelationTag::Tradeoff,
        }
    }

    /// Weak dominance `u ⪰ v` under this relation.
    pub fn dominates(&self, u: &UtilityVector, v: &UtilityVector) -> Result<bool, UtilityError> {
        match self {
            Self::Pareto => pareto_dominates(u, v),
            Self::Epsilon(params) => Ok(dominance::epsilon_dominates(u, v, params)?),
            Self::Tradeoff(theta) => Ok(dominance::tradeoff_dominates(u, v, theta)?),
        }
    }
}

/// Identifies the relation a set was last pruned under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationTag {
    Pareto,
    Epsilon,
    Tradeoff,
}

/// Weak Pareto dominance: every coordinate of `u` is at least the matching
/// coordinate of `v`. Exact comparison.
pub fn pareto_dominates(u: &UtilityVector, v: &UtilityVector) -> Result<bool, UtilityError> {
    u.check_dim(v)?;
    Ok(u.weakly_dominates(v))
}

/// A finite, non-empty set of utility vectors kept maximal under `tag`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilitySet {
    elements: Vec<UtilityVector>,
    tag: RelationTag,
}

impl UtilitySet {
    /// The neutral element `{0}`.
    pub fn zero(dim: usize) -> Self {
        Self {
            elements: vec![UtilityVector::zero(dim)],
            tag: RelationTag::Pareto,
        }
    }

    pub(crate) fn from_parts(elements: Vec<UtilityVector>, tag: RelationTag) -> Self {
        debug_assert!(!elements.is_empty());
        Self { elements, tag }
    }

    pub fn elements(&self) -> &[UtilityVector] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<UtilityVector> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn tag(&self) -> RelationTag {
        self.tag
    }

    pub fn iter(&self) -> impl Iterator<Item = &UtilityVector> {
        self.elements.iter()
    }

    /// Order-insensitive equality of the underlying vector sets.
    pub fn same_elements(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut a: Vec<_> = self.elements.iter().collect();
        let mut b: Vec<_> = other.elements.iter().collect();
        a.sort_by(|x, y| x.lex_cmp(y));
        b.sort_by(|x, y| x.lex_cmp(y));
        a == b
    }
}

fn check_uniform(points: &[UtilityVector]) -> Result<usize, UtilityError> {
    let first = points.first().ok_or(UtilityError::EmptySet)?;
    let dim = first.dim();
    for p in points {
        if p.dim() != dim {
            return Err(UtilityError::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
    }
    Ok(dim)
}

/// Indices of the Pareto-maximal elements of `points`, in input order.
/// Exact duplicates collapse to their first occurrence.
pub(crate) fn pareto_maximal_indices(points: &[UtilityVector]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let dim = points[0].dim();
    let mut order: Vec<usize> = (0..points.len()).collect();
    // lexicographically descending; a strict dominator always sorts first
    order.sort_by(|&a, &b| points[b].lex_cmp(&points[a]).then(a.cmp(&b)));
    order.dedup_by(|b, a| points[*a] == points[*b]);

    let mut kept: Vec<usize> = Vec::new();
    match dim {
        1 => kept.push(order[0]),
        2 => {
            let mut best = f64::NEG_INFINITY;
            for &i in &order {
                if points[i][1] > best {
                    best = points[i][1];
                    kept.push(i);
                }
            }
        }
        _ => {
            for &i in &order {
                let p = &points[i];
                if !kept.iter().any(|&k| points[k].weakly_dominates(p)) {
                    kept.push(i);
                }
            }
        }
    }
    kept.sort_unstable();
    kept
}

/// Indices of the elements kept by pruning `points` under `rel`, in input
/// order.
pub(crate) fn maximal_indices(
    points: &[UtilityVector],
    rel: &DominanceRelation,
) -> Result<Vec<usize>, UtilityError> {
    check_uniform(points)?;
    match rel {
        DominanceRelation::Pareto => Ok(pareto_maximal_indices(points)),
        DominanceRelation::Epsilon(params) => Ok(dominance::covering_indices(points, params)?),
        DominanceRelation::Tradeoff(theta) => {
            if theta.dim() != points[0].dim() {
                return Err(UtilityError::DimensionMismatch {
                    left: theta.dim(),
                    right: points[0].dim(),
                });
            }
            Ok(dominance::tradeoff_maximal_indices(points, theta)?)
        }
    }
}

/// The maximal subset of `points` under `rel`.
pub fn maximal_set(
    points: &[UtilityVector],
    rel: &DominanceRelation,
) -> Result<UtilitySet, UtilityError> {
    let kept = maximal_indices(points, rel)?;
    Ok(UtilitySet::from_parts(
        kept.into_iter().map(|i| points[i].clone()).collect(),
        rel.tag(),
    ))
}

/// `q × U`. A zero factor yields `{0}`.
pub fn set_scale(q: f64, set: &UtilitySet) -> Result<UtilitySet, UtilityError> {
    if !q.is_finite() || q < 0.0 {
        return Err(UtilityError::NegativeScale(q));
    }
    if q == 0.0 {
        return Ok(UtilitySet::zero(set.dim()));
    }
    Ok(UtilitySet::from_parts(
        set.elements.iter().map(|u| u.scale(q)).collect(),
        set.tag,
    ))
}

fn check_pair(u: &UtilitySet, v: &UtilitySet) -> Result<(), UtilityError> {
    if u.dim() != v.dim() {
        return Err(UtilityError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}

/// Minkowski sum followed by pruning under `rel`.
pub fn set_sum(
    u: &UtilitySet,
    v: &UtilitySet,
    rel: &DominanceRelation,
) -> Result<UtilitySet, UtilityError> {
    check_pair(u, v)?;
    let sums: Vec<UtilityVector> = u
        .iter()
        .flat_map(|a| v.iter().map(move |b| a.add(b)))
        .collect();
    maximal_set(&sums, rel)
}

/// Union followed by pruning under `rel`.
pub fn set_max_union(
    u: &UtilitySet,
    v: &UtilitySet,
    rel: &DominanceRelation,
) -> Result<UtilitySet, UtilityError> {
    check_pair(u, v)?;
    let union: Vec<UtilityVector> = u.iter().chain(v.iter()).cloned().collect();
    maximal_set(&union, rel)
}

/// True iff every element of `dominated` is weakly Pareto-dominated by some
/// convex combination of `dominating`, within `tol` per constraint.
pub fn convex_set_dominates_with_tolerance(
    dominating: &[UtilityVector],
    dominated: &[UtilityVector],
    tol: f64,
) -> Result<bool, UtilityError> {
    let dim = check_uniform(dominating)?;
    if check_uniform(dominated)? != dim {
        return Err(UtilityError::DimensionMismatch {
            left: dim,
            right: dominated[0].dim(),
        });
    }
    // rows: -Σ q_j u_j ≤ -v, Σ q_j ≤ 1, -Σ q_j ≤ -1
    let n = dominating.len();
    let mut rows: Vec<Vec<f64>> = (0..dim)
        .map(|i| dominating.iter().map(|u| -u[i]).collect())
        .collect();
    rows.push(vec![1.0; n]);
    rows.push(vec![-1.0; n]);
    let mut bounds = vec![0.0; dim + 2];
    bounds[dim] = 1.0;
    bounds[dim + 1] = -1.0;
    for v in dominated {
        if dominating.iter().any(|u| u.weakly_dominates(v)) {
            continue;
        }
        for i in 0..dim {
            bounds[i] = -v[i];
        }
        if let Feasibility::Infeasible = lp::linear_feasible_with_tolerance(&rows, &bounds, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`convex_set_dominates_with_tolerance`] at the default LP tolerance.
pub fn convex_set_dominates(
    dominating: &UtilitySet,
    dominated: &UtilitySet,
) -> Result<bool, UtilityError> {
    convex_set_dominates_with_tolerance(
        dominating.elements(),
        dominated.elements(),
        lp::DEFAULT_TOLERANCE,
    )
}

/// Convex-closure equivalence: each set convex-dominates the other.
pub fn convex_equivalent(
    a: &[UtilityVector],
    b: &[UtilityVector],
    tol: f64,
) -> Result<bool, UtilityError> {
    Ok(convex_set_dominates_with_tolerance(a, b, tol)?
        && convex_set_dominates_with_tolerance(b, a, tol)?)
}
