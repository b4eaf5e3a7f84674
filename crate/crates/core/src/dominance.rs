//! Approximate and preference-based dominance.
//!
//! Two relations live here. The multiplicative (ε, λ)-dominance on positive
//! vectors, together with the logarithmic grid used to build coverings of a
//! vector set; and the cone dominance `⪰_Θ` induced by a set of elicited
//! tradeoffs, decided with the feasibility kernel in [`crate::lp`].

use std::path::Path;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::lp::{self, Feasibility, LpError};
use crate::model::{Objective, Sense};
use crate::utility::{pareto_maximal_indices, UtilityVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DominanceError {
    #[error("invalid covering parameters: {0}")]
    InvalidParams(String),
    #[error(
        "epsilon dominance needs strictly positive coordinates, coordinate {index} is {value}"
    )]
    EpsilonDomain { index: usize, value: f64 },
    #[error("grid mapping needs nonnegative coordinates, coordinate {index} is {value}")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot cover an empty set")]
    EmptySet,
    #[error("tradeoff file: {0}")]
    Document(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Approximation factor ε and per-step budget λ of (ε, λ)-dominance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringParams {
    epsilon: f64,
    lambda: f64,
}

impl CoveringParams {
    pub fn new(epsilon: f64, lambda: f64) -> Result<Self, DominanceError> {
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(DominanceError::InvalidParams(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(DominanceError::InvalidParams(format!(
                "lambda must be in (0, 1], got {lambda}"
            )));
        }
        Ok(Self { epsilon, lambda })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `(1+ε)^λ`
    pub fn factor(&self) -> f64 {
        (1.0 + self.epsilon).powf(self.lambda)
    }

    fn log_base(&self) -> f64 {
        self.lambda * (1.0 + self.epsilon).ln()
    }
}

/// Cell of the logarithmic grid. Zero coordinates map to [`GridIndex::ZERO`],
/// which sorts below every finite cell index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridIndex(pub SmallVec<[i64; 4]>);

impl GridIndex {
    pub const ZERO: i64 = i64::MIN;

    pub fn cells(&self) -> &[i64] {
        &self.0
    }

    fn dominates(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }
}

/// `u ≥_ε^λ v ⟺ (1+ε)^λ · u ≥ v`, on strictly positive vectors.
pub fn epsilon_dominates(
    u: &UtilityVector,
    v: &UtilityVector,
    params: &CoveringParams,
) -> Result<bool, DominanceError> {
    if u.dim() != v.dim() {
        return Err(DominanceError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    for w in [u, v] {
        if let Some(index) = w.coords().iter().position(|&c| c.is_nan() || c <= 0.0) {
            return Err(DominanceError::EpsilonDomain {
                index,
                value: w[index],
            });
        }
    }
    let f = params.factor();
    Ok(u.coords().iter().zip(v.coords()).all(|(a, b)| f * a >= *b))
}

/// Maps `u` to its grid cell: `⌈log uᵢ / (λ·log(1+ε))⌉` per coordinate.
pub fn grid_map(u: &UtilityVector, params: &CoveringParams) -> Result<GridIndex, DominanceError> {
    let base = params.log_base();
    let mut cells = SmallVec::with_capacity(u.dim());
    for (index, &c) in u.coords().iter().enumerate() {
        if c < 0.0 {
            return Err(DominanceError::NegativeCoordinate { index, value: c });
        }
        if c == 0.0 {
            cells.push(GridIndex::ZERO);
        } else {
            cells.push((c.ln() / base).ceil() as i64);
        }
    }
    Ok(GridIndex(cells))
}

/// Indices of an (ε, λ)-covering of `points`, in input order.
///
/// Elements are scanned in input order; an element whose cell is already
/// occupied or dominated by an occupied cell is dropped, otherwise it evicts
/// every cell it dominates and claims its own. The claimant of each surviving
/// cell is its representative.
pub(crate) fn covering_indices(
    points: &[UtilityVector],
    params: &CoveringParams,
) -> Result<Vec<usize>, DominanceError> {
    if points.is_empty() {
        return Err(DominanceError::EmptySet);
    }
    let mut cells: Vec<(GridIndex, usize)> = Vec::new();
    for (i, u) in points.iter().enumerate() {
        let cell = grid_map(u, params)?;
        if cells.iter().any(|(c, _)| c.dominates(&cell)) {
            continue;
        }
        cells.retain(|(c, _)| !cell.dominates(c));
        cells.push((cell, i));
    }
    let mut kept: Vec<usize> = cells.into_iter().map(|(_, i)| i).collect();
    kept.sort_unstable();
    Ok(kept)
}

/// An (ε, λ)-covering of `points`: a subset such that every input element is
/// (ε, λ)-dominated by some member.
pub fn covering(
    points: &[UtilityVector],
    params: &CoveringParams,
) -> Result<crate::utility::UtilitySet, DominanceError> {
    let dim = points.first().ok_or(DominanceError::EmptySet)?.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(DominanceError::DimensionMismatch {
            left: dim,
            right: p.dim(),
        });
    }
    let kept = covering_indices(points, params)?;
    Ok(crate::utility::UtilitySet::from_parts(
        kept.into_iter().map(|i| points[i].clone()).collect(),
        crate::utility::RelationTag::Epsilon,
    ))
}

/// One elicited preference: `better` is preferred to `worse`.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPair {
    pub better: UtilityVector,
    pub worse: UtilityVector,
}

/// A set Θ of elicited tradeoffs and the cone of their differences.
#[derive(Debug, Clone)]
pub struct TradeoffSet {
    dim: usize,
    pairs: Vec<TradeoffPair>,
    diffs: Vec<UtilityVector>,
    // p × k, row-major: column i is diffs[i]
    cone: Vec<f64>,
    tolerance: f64,
    // strictly positive functional nonnegative on every difference
    order_weights: Option<Vec<f64>>,
}

impl TradeoffSet {
    pub fn new(
        dim: usize,
        pairs: Vec<(UtilityVector, UtilityVector)>,
    ) -> Result<Self, DominanceError> {
        let pairs: Vec<TradeoffPair> = pairs
            .into_iter()
            .map(|(better, worse)| TradeoffPair { better, worse })
            .collect();
        for p in &pairs {
            for w in [&p.better, &p.worse] {
                if w.dim() != dim {
                    return Err(DominanceError::DimensionMismatch {
                        left: dim,
                        right: w.dim(),
                    });
                }
            }
        }
        let diffs: Vec<UtilityVector> = pairs.iter().map(|p| p.better.sub(&p.worse)).collect();
        let k = diffs.len();
        let mut cone = vec![0.0; dim * k];
        for (i, w) in diffs.iter().enumerate() {
            for j in 0..dim {
                cone[j * k + i] = w[j];
            }
        }
        let mut set = Self {
            dim,
            pairs,
            diffs,
            cone,
            tolerance: lp::DEFAULT_TOLERANCE,
            order_weights: None,
        };
        set.order_weights = set.compute_order_weights();
        Ok(set)
    }

    /// Builds Θ directly from difference vectors (each paired with zero).
    pub fn from_differences(dim: usize, diffs: Vec<UtilityVector>) -> Result<Self, DominanceError> {
        Self::new(
            dim,
            diffs
                .into_iter()
                .map(|w| (w, UtilityVector::zero(dim)))
                .collect(),
        )
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(dim, Vec::new()).expect("no pairs to check")
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[TradeoffPair] {
        &self.pairs
    }

    pub fn differences(&self) -> &[UtilityVector] {
        &self.diffs
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn compute_order_weights(&self) -> Option<Vec<f64>> {
        if self.diffs.is_empty() {
            return None;
        }
        // λ >= 1 componentwise, λ·w_i >= 0
        let p = self.dim;
        let mut rows = Vec::with_capacity(p + self.diffs.len());
        for j in 0..p {
            let mut r = vec![0.0; p];
            r[j] = -1.0;
            rows.push(r);
        }
        for w in &self.diffs {
            rows.push(w.coords().iter().map(|c| -c).collect());
        }
        let mut bounds = vec![-1.0; p];
        bounds.extend(std::iter::repeat_n(0.0, self.diffs.len()));
        let w = match lp::linear_feasible_with_tolerance(&rows, &bounds, 1e-9) {
            Ok(Feasibility::Feasible(w)) => w,
            _ => return None,
        };
        let sound = self
            .diffs
            .iter()
            .all(|d| d.coords().iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() >= -1e-12);
        sound.then_some(w)
    }

    /// Cone membership witness for `u - v`, if any.
    fn cone_witness(
        &self,
        u: &UtilityVector,
        v: &UtilityVector,
    ) -> Result<Option<Vec<f64>>, DominanceError> {
        if u.weakly_dominates(v) {
            return Ok(Some(vec![0.0; self.len()]));
        }
        if self.diffs.is_empty() {
            return Ok(None);
        }
        let gap: Vec<f64> = u
            .coords()
            .iter()
            .zip(v.coords())
            .map(|(a, b)| a - b)
            .collect();
        match lp::feasible_dense(self.dim, self.diffs.len(), &self.cone, &gap, self.tolerance)? {
            Feasibility::Feasible(q) => Ok(Some(q)),
            Feasibility::Infeasible => Ok(None),
        }
    }

    /// Necessary condition for `u ⪰_Θ v`, checked without an LP.
    fn may_dominate(&self, score_u: f64, score_v: f64, weight_sum: f64) -> bool {
        score_u >= score_v - 2.0 * self.tolerance * weight_sum - 1e-12 * score_v.abs().max(1.0)
    }
}

fn check_dims(
    u: &UtilityVector,
    v: &UtilityVector,
    theta: &TradeoffSet,
) -> Result<(), DominanceError> {
    for w in [u, v] {
        if w.dim() != theta.dim() {
            return Err(DominanceError::DimensionMismatch {
                left: theta.dim(),
                right: w.dim(),
            });
        }
    }
    Ok(())
}

/// `u ⪰_Θ v`: `u - v` weakly dominates some nonnegative combination of the
/// tradeoff differences. With an empty Θ this is weak Pareto dominance.
pub fn tradeoff_dominates(
    u: &UtilityVector,
    v: &UtilityVector,
    theta: &TradeoffSet,
) -> Result<bool, DominanceError> {
    check_dims(u, v, theta)?;
    Ok(theta.cone_witness(u, v)?.is_some())
}

/// Like [`tradeoff_dominates`] but returns the multipliers `q` on success.
pub fn tradeoff_witness(
    u: &UtilityVector,
    v: &UtilityVector,
    theta: &TradeoffSet,
) -> Result<Option<Vec<f64>>, DominanceError> {
    check_dims(u, v, theta)?;
    theta.cone_witness(u, v)
}

/// Whether some partial order extending Θ and Pareto exists.
///
/// Θ is rejected when a nontrivial nonnegative combination of its nonzero
/// differences is componentwise `<= 0`: the cone then contains a nonzero
/// vector together with its negation (or a free improvement), so `⪰_Θ` is
/// not antisymmetric. In particular any Θ whose cone reaches `(-1,…,-1)` is
/// rejected.
pub fn check_consistency(theta: &TradeoffSet) -> bool {
    let diffs: Vec<&UtilityVector> = theta
        .differences()
        .iter()
        .filter(|w| w.coords().iter().any(|&c| c != 0.0))
        .collect();
    if diffs.is_empty() {
        return true;
    }
    // ∃ r >= 0: Σ r_i w_i <= 0, Σ r_i >= 1
    let mut rows: Vec<Vec<f64>> = (0..theta.dim())
        .map(|j| diffs.iter().map(|w| w[j]).collect())
        .collect();
    rows.push(vec![-1.0; diffs.len()]);
    let mut bounds = vec![0.0; theta.dim()];
    bounds.push(-1.0);
    match lp::linear_feasible_with_tolerance(&rows, &bounds, theta.tolerance()) {
        Ok(Feasibility::Infeasible) => true,
        Ok(Feasibility::Feasible(_)) | Err(_) => false,
    }
}

/// Indices of the `⪰_Θ`-maximal elements of `points`, in input order.
pub(crate) fn tradeoff_maximal_indices(
    points: &[UtilityVector],
    theta: &TradeoffSet,
) -> Result<Vec<usize>, DominanceError> {
    // Pareto-strict dominance implies strict cone dominance for consistent Θ.
    let mut order = pareto_maximal_indices(points);
    if theta.is_empty() || order.len() < 2 {
        return Ok(order);
    }
    let scores: Vec<f64> = match &theta.order_weights {
        Some(w) => points
            .iter()
            .map(|p| p.coords().iter().zip(w).map(|(a, b)| a * b).sum())
            .collect(),
        None => vec![0.0; points.len()],
    };
    let weight_sum: f64 = theta.order_weights.as_ref().map_or(0.0, |w| w.iter().sum());
    let filtered = theta.order_weights.is_some();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let may =
        |a: usize, b: usize| !filtered || theta.may_dominate(scores[a], scores[b], weight_sum);
    let dom = |a: usize, b: usize| -> Result<bool, DominanceError> {
        Ok(theta.cone_witness(&points[a], &points[b])?.is_some())
    };
    let strictly = |a: usize, b: usize| -> Result<bool, DominanceError> {
        Ok(may(a, b) && dom(a, b)? && !(may(b, a) && dom(b, a)?))
    };

    let mut kept: Vec<usize> = Vec::new();
    for &c in &order {
        let mut beaten = false;
        for &k in &kept {
            if strictly(k, c)? {
                beaten = true;
                break;
            }
        }
        if beaten {
            continue;
        }
        let mut survivors = Vec::with_capacity(kept.len() + 1);
        for &k in &kept {
            if !strictly(c, k)? {
                survivors.push(k);
            }
        }
        survivors.push(c);
        kept = survivors;
    }
    kept.sort_unstable();
    Ok(kept)
}

#[derive(Debug, Serialize, Deserialize)]
struct PairDoc {
    better: Vec<f64>,
    worse: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TradeoffDoc {
    objectives: Vec<Objective>,
    pairs: Vec<PairDoc>,
}

/// Parses a tradeoff document. Values are given in the declared senses and
/// converted to the maximize-all convention.
pub fn parse_tradeoffs(text: &str) -> Result<(Vec<Objective>, TradeoffSet), DominanceError> {
    let doc: TradeoffDoc =
        serde_json::from_str(text).map_err(|e| DominanceError::Document(e.to_string()))?;
    let dim = doc.objectives.len();
    if dim == 0 {
        return Err(DominanceError::Document(
            "at least one objective is required".into(),
        ));
    }
    let mask: Vec<bool> = doc
        .objectives
        .iter()
        .map(|o| o.sense == Sense::Min)
        .collect();
    let mut pairs = Vec::with_capacity(doc.pairs.len());
    for (i, p) in doc.pairs.into_iter().enumerate() {
        let conv = |v: Vec<f64>, what: &str| -> Result<UtilityVector, DominanceError> {
            if v.len() != dim {
                return Err(DominanceError::Document(format!(
                    "pair {i}: {what} has {} values, expected {dim}",
                    v.len()
                )));
            }
            UtilityVector::new(v)
                .map(|u| u.negate_where(&mask))
                .map_err(|e| DominanceError::Document(format!("pair {i}: {e}")))
        };
        pairs.push((conv(p.better, "better")?, conv(p.worse, "worse")?));
    }
    Ok((doc.objectives, TradeoffSet::new(dim, pairs)?))
}

/// Serializes Θ in the senses of `objectives`.
pub fn render_tradeoffs(objectives: &[Objective], theta: &TradeoffSet) -> String {
    let mask: Vec<bool> = objectives.iter().map(|o| o.sense == Sense::Min).collect();
    let doc = TradeoffDoc {
        objectives: objectives.to_vec(),
        pairs: theta
            .pairs()
            .iter()
            .map(|p| PairDoc {
                better: p.better.negate_where(&mask).to_vec(),
                worse: p.worse.negate_where(&mask).to_vec(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("tradeoff document serializes")
}

pub fn read_tradeoffs(path: &Path) -> Result<(Vec<Objective>, TradeoffSet), DominanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DominanceError::Document(format!("{}: {e}", path.display())))?;
    parse_tradeoffs(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(c: &[f64]) -> UtilityVector {
        UtilityVector::new(c.to_vec()).unwrap()
    }

    fn params(eps: f64, lambda: f64) -> CoveringParams {
        CoveringParams::new(eps, lambda).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(CoveringParams::new(0.0, 1.0).is_err());
        assert!(CoveringParams::new(0.1, 0.0).is_err());
        assert!(CoveringParams::new(0.1, 1.5).is_err());
        assert!(CoveringParams::new(0.1, 1.0).is_ok());
    }

    #[test]
    fn epsilon_dominance_examples() {
        let p = params(0.1, 1.0);
        let u = uv(&[3.1, 2.9]);
        let v = uv(&[3.0, 3.05]);
        assert!(epsilon_dominates(&u, &v, &p).unwrap());
        assert!(epsilon_dominates(&v, &u, &p).unwrap());
        assert!(epsilon_dominates(&u, &u, &params(1e-6, 0.3)).unwrap());
        assert!(!epsilon_dominates(&uv(&[1.0, 1.0]), &uv(&[2.0, 2.0]), &p).unwrap());
        assert!(matches!(
            epsilon_dominates(&uv(&[1.0, 0.0]), &u, &p),
            Err(DominanceError::EpsilonDomain { index: 1, .. })
        ));
    }

    #[test]
    fn grid_examples() {
        let p = params(0.1, 1.0);
        assert_eq!(grid_map(&uv(&[3.1, 2.9]), &p).unwrap().cells(), &[12, 12]);
        assert_eq!(grid_map(&uv(&[3.0, 3.05]), &p).unwrap().cells(), &[12, 12]);
        assert_eq!(
            grid_map(&uv(&[1.0, 1.0, 1.0]), &params(0.37, 0.2))
                .unwrap()
                .cells(),
            &[0, 0, 0]
        );
        assert_eq!(
            grid_map(&uv(&[3.1]), &params(0.1, 0.5)).unwrap().cells(),
            &[24]
        );
        assert_eq!(
            grid_map(&uv(&[0.0, 1.0]), &p).unwrap().cells(),
            &[GridIndex::ZERO, 0]
        );
        assert!(matches!(
            grid_map(&uv(&[-1.0]), &p),
            Err(DominanceError::NegativeCoordinate { .. })
        ));
    }

    #[test]
    fn covering_examples() {
        let p = params(0.1, 1.0);
        let c = covering(&[uv(&[3.1, 2.9]), uv(&[3.0, 3.05])], &p).unwrap();
        assert_eq!(c.elements(), &[uv(&[3.1, 2.9])]);
        let c = covering(&[uv(&[2.0, 5.0])], &p).unwrap();
        assert_eq!(c.elements(), &[uv(&[2.0, 5.0])]);
        let c = covering(&[uv(&[1.0, 1.0]), uv(&[100.0, 100.0])], &p).unwrap();
        assert_eq!(c.elements(), &[uv(&[100.0, 100.0])]);
        // a dominated cell arriving late does not re-enter
        let c = covering(&[uv(&[100.0, 100.0]), uv(&[1.0, 1.0])], &p).unwrap();
        assert_eq!(c.elements(), &[uv(&[100.0, 100.0])]);
        assert_eq!(covering(&[], &p).unwrap_err(), DominanceError::EmptySet);
    }

    #[test]
    fn zero_coordinates_only_covered_by_zero() {
        let p = params(0.5, 1.0);
        let c = covering(&[uv(&[0.0, 5.0]), uv(&[0.001, 1.0])], &p).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn tradeoff_three_objectives() {
        let theta =
            TradeoffSet::from_differences(3, vec![uv(&[-1.0, 2.0, -1.0]), uv(&[4.0, -3.0, 0.0])])
                .unwrap();
        let u = uv(&[1.0, -1.0, 0.0]);
        let v = uv(&[0.0, -2.0, 1.0]);
        let q = tradeoff_witness(&u, &v, &theta)
            .unwrap()
            .expect("dominates");
        assert!(1.0 >= -q[0] + 4.0 * q[1] - 1e-7);
        assert!(1.0 >= 2.0 * q[0] - 3.0 * q[1] - 1e-7);
        assert!(-1.0 >= -q[0] - 1e-7);
    }

    #[test]
    fn tradeoff_removes_low_payoff_policy() {
        let theta = TradeoffSet::new(2, vec![(uv(&[50.0, -12.0]), uv(&[0.0, 0.0]))]).unwrap();
        assert!(tradeoff_dominates(&uv(&[20.0, -14.2]), &uv(&[11.0, -12.78]), &theta).unwrap());
        assert!(!tradeoff_dominates(&uv(&[11.0, -12.78]), &uv(&[20.0, -14.2]), &theta).unwrap());
        assert!(!tradeoff_dominates(&uv(&[22.5, -17.56]), &uv(&[20.0, -14.2]), &theta).unwrap());
        assert!(!tradeoff_dominates(&uv(&[20.0, -14.2]), &uv(&[22.5, -17.56]), &theta).unwrap());
    }

    #[test]
    fn empty_theta_is_pareto() {
        let theta = TradeoffSet::empty(2);
        assert!(tradeoff_dominates(&uv(&[2.0, 2.0]), &uv(&[1.0, 2.0]), &theta).unwrap());
        assert!(!tradeoff_dominates(&uv(&[2.0, 1.0]), &uv(&[1.0, 2.0]), &theta).unwrap());
        assert!(check_consistency(&theta));
    }

    #[test]
    fn consistency_examples() {
        let t = TradeoffSet::new(2, vec![(uv(&[1.0, 0.0]), uv(&[0.0, 1.0]))]).unwrap();
        assert!(check_consistency(&t));
        let t = TradeoffSet::new(2, vec![(uv(&[0.0, 0.0]), uv(&[1.0, 1.0]))]).unwrap();
        assert!(!check_consistency(&t));
        let t = TradeoffSet::new(
            2,
            vec![
                (uv(&[2.0, -1.0]), uv(&[0.0, 0.0])),
                (uv(&[-1.0, 2.0]), uv(&[0.0, 0.0])),
            ],
        )
        .unwrap();
        assert!(check_consistency(&t));
        // exact negations collapse two objectives into one exchange rate
        let t = TradeoffSet::from_differences(2, vec![uv(&[1.0, -1.0]), uv(&[-1.0, 1.0])]).unwrap();
        assert!(!check_consistency(&t));
        // a free improvement on one objective
        let t = TradeoffSet::from_differences(2, vec![uv(&[0.0, -1.0])]).unwrap();
        assert!(!check_consistency(&t));
    }

    #[test]
    fn tradeoff_document_round_trip() {
        let text = r#"{"objectives":[{"name":"payoff","sense":"max"},{"name":"damage","sense":"min"}],
            "pairs":[{"better":[50,12],"worse":[0,0]}]}"#;
        let (objs, theta) = parse_tradeoffs(text).unwrap();
        assert_eq!(theta.differences(), &[uv(&[50.0, -12.0])]);
        let again = render_tradeoffs(&objs, &theta);
        let (_, theta2) = parse_tradeoffs(&again).unwrap();
        assert_eq!(theta2.pairs(), theta.pairs());
        assert!(parse_tradeoffs(
            r#"{"objectives":[{"name":"a","sense":"max"}],"pairs":[{"better":[1,2],"worse":[0]}]}"#
        )
        .is_err());
    }
}
