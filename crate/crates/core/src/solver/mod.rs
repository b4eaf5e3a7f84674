//! Variable elimination for multi-objective influence diagrams.
//!
//! [`solve`] eliminates variables along a legal order, keeping for every
//! configuration of a message's scope a maximal set of expected-utility
//! vectors under the chosen [`DominanceRelation`]. Decision rules are then
//! recovered by tracing provenance tags from a root element.

mod brute;
mod elim;
mod order;
mod policy;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use brute::{
    brute_force_solve, brute_force_solve_with_cap, policy_count, BruteForceResult,
    PolicyEnumeration, DEFAULT_POLICY_CAP,
};
pub use order::{induced_width, legal_elimination_order, EliminationOrder};

use crate::dominance::{check_consistency, CoveringParams, DominanceError};
use crate::model::{InfluenceDiagram, ModelError, Policy};
use crate::utility::{DominanceRelation, UtilityError, UtilitySet, UtilityVector};

use elim::Pruning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitKind {
    Time,
    Memory,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{kind:?} limit exceeded after {elapsed:.3}s ({completed_buckets} buckets completed)")]
    LimitExceeded {
        kind: LimitKind,
        elapsed: f64,
        completed_buckets: usize,
        set_size_trace: Vec<usize>,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(
        "epsilon mode needs strictly positive utilities; smallest entry per objective is {minima:?}, rescale the utilities"
    )]
    EpsilonDomain { minima: Vec<f64> },
    #[error(
        "tradeoff set is inconsistent: its cone contains a non-trivial non-positive direction"
    )]
    InconsistentTradeoffs,
    #[error("relation has dimension {relation} but the diagram has {objectives} objectives")]
    DimensionMismatch { relation: usize, objectives: usize },
    #[error("{count} policies exceed the enumeration cap of {cap}")]
    PolicyCap { count: u64, cap: u64 },
    #[error("joint table of {0} entries is too large to enumerate")]
    JointTooLarge(u64),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error(transparent)]
    Dominance(#[from] DominanceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverLimits {
    pub time_limit: Duration,
    /// Bound on the estimated bytes held by utility messages.
    pub memory_limit: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        Self {
            time_limit: Duration::from_secs(20 * 60),
            memory_limit: 8 << 30,
        }
    }
}

/// Pruning regime a report was produced under.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Pareto,
    Epsilon { epsilon: f64 },
    Tradeoff { pairs: usize },
}

impl Mode {
    pub fn of(rel: &DominanceRelation) -> Self {
        match rel {
            DominanceRelation::Pareto => Mode::Pareto,
            DominanceRelation::Epsilon(p) => Mode::Epsilon {
                epsilon: p.epsilon(),
            },
            DominanceRelation::Tradeoff(t) => Mode::Tradeoff { pairs: t.len() },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Maximal expected-utility vectors in the declared objective senses.
    pub maximal_utilities: Vec<UtilityVector>,
    /// The same set in the internal maximize-all convention.
    pub internal: UtilitySet,
    pub policy: Policy,
    pub induced_width: usize,
    pub wall_time: Duration,
    /// Largest entry of each bucket's utility message, in elimination order.
    pub set_size_trace: Vec<usize>,
    pub mode: Mode,
    pub seed: u64,
    pub order: EliminationOrder,
}

pub(crate) fn check_relation(
    d: &InfluenceDiagram,
    rel: &DominanceRelation,
) -> Result<(), SolveError> {
    let p = d.num_objectives();
    match rel {
        DominanceRelation::Pareto => Ok(()),
        DominanceRelation::Epsilon(_) => {
            let mut minima = vec![f64::INFINITY; p];
            for u in &d.utilities {
                for v in &u.values {
                    for (m, &c) in minima.iter_mut().zip(v.coords()) {
                        *m = m.min(c);
                    }
                }
            }
            if minima.iter().any(|&m| m <= 0.0) {
                return Err(SolveError::EpsilonDomain { minima });
            }
            Ok(())
        }
        DominanceRelation::Tradeoff(theta) => {
            if theta.dim() != p {
                return Err(SolveError::DimensionMismatch {
                    relation: theta.dim(),
                    objectives: p,
                });
            }
            if !check_consistency(theta) {
                return Err(SolveError::InconsistentTradeoffs);
            }
            Ok(())
        }
    }
}

fn pruning_for(d: &InfluenceDiagram, rel: &DominanceRelation) -> Result<Pruning, SolveError> {
    Ok(match rel {
        DominanceRelation::Pareto => Pruning::Pareto,
        DominanceRelation::Tradeoff(theta) => Pruning::Tradeoff(theta.clone()),
        DominanceRelation::Epsilon(params) => {
            let t = d.num_vars().max(1) as f64;
            Pruning::Covering(CoveringParams::new(params.epsilon(), params.lambda() / t)?)
        }
    })
}

struct Run {
    elim: elim::Elimination,
    order: EliminationOrder,
    width: usize,
    rng: ChaCha8Rng,
}

fn run(
    d: &InfluenceDiagram,
    rel: &DominanceRelation,
    limits: &SolverLimits,
    seed: u64,
) -> Result<Run, SolveError> {
    check_relation(d, rel)?;
    let pruning = pruning_for(d, rel)?;
    let order = legal_elimination_order(d);
    let width = induced_width(d, &order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elim = elim::run(d, &order, pruning, limits, &mut rng)?;
    Ok(Run {
        elim,
        order,
        width,
        rng,
    })
}

/// Computes the maximal set of expected utilities of `d` under `rel` and one
/// policy attaining a randomly chosen element of it.
pub fn solve(
    d: &InfluenceDiagram,
    rel: &DominanceRelation,
    limits: &SolverLimits,
    seed: u64,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let Run {
        elim,
        order,
        width,
        mut rng,
        ..
    } = run(d, rel, limits, seed)?;
    let target = rng.gen_range(0..elim.root.len());
    let policy = policy::trace_policy(d, &elim, target, &mut rng);
    let points: Vec<UtilityVector> = elim.root.iter().map(|c| c.point.clone()).collect();
    let maximal_utilities = points.iter().map(|u| d.to_user_senses(u)).collect();
    Ok(SolveReport {
        maximal_utilities,
        internal: UtilitySet::from_parts(points, rel.tag()),
        policy,
        induced_width: width,
        wall_time: start.elapsed(),
        set_size_trace: elim.set_size_trace,
        mode: Mode::of(rel),
        seed,
        order,
    })
}

/// One witness policy per element of the maximal set, paired with that
/// element in user senses.
pub fn extract_all_optimal_policies(
    d: &InfluenceDiagram,
    rel: &DominanceRelation,
    limits: &SolverLimits,
    seed: u64,
) -> Result<Vec<(UtilityVector, Policy)>, SolveError> {
    let Run { elim, mut rng, .. } = run(d, rel, limits, seed)?;
    Ok((0..elim.root.len())
        .map(|i| {
            let policy = policy::trace_policy(d, &elim, i, &mut rng);
            (d.to_user_senses(&elim.root[i].point), policy)
        })
        .collect())
}
