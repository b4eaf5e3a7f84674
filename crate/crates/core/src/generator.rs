//! Random multi-objective influence diagrams and random tradeoff sets.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dominance::{check_consistency, DominanceError, TradeoffSet};
use crate::model::{
    InfluenceDiagram, Objective, ProbabilityTable, Sense, TemporalOrder, UtilityFunction, VarId,
    VarKind, Variable,
};
use crate::utility::UtilityVector;

/// Draws of a tradeoff set before giving up.
pub const MAX_TRADEOFF_ATTEMPTS: usize = 100;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} need at least {needed} objectives, got {got}")]
    TooFewObjectives {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("no consistent tradeoff set in {0} attempts")]
    Inconsistent(usize),
    #[error(transparent)]
    Dominance(#[from] DominanceError),
}

/// Shape of a random diagram: `chance` C, `decisions` D, `max_domain` k,
/// `parents` p, `roots` r, `arity` a and `objectives` O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoidParams {
    pub chance: usize,
    pub decisions: usize,
    pub max_domain: usize,
    pub parents: usize,
    pub roots: usize,
    pub arity: usize,
    pub objectives: usize,
    pub seed: u64,
}

impl MoidParams {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let n = self.chance + self.decisions;
        let fail = |m: String| Err(GeneratorError::InvalidParams(m));
        if n == 0 {
            return fail("at least one variable is required".into());
        }
        if self.roots > n {
            return fail(format!("{} roots for {n} variables", self.roots));
        }
        if self.parents == 0 {
            return fail("parents per variable must be at least 1".into());
        }
        if self.max_domain < 2 {
            return fail("maximum domain size must be at least 2".into());
        }
        if self.objectives == 0 {
            return fail("at least one objective is required".into());
        }
        if self.arity == 0 {
            return fail("utility arity must be at least 1".into());
        }
        Ok(())
    }
}

/// Builds a random diagram. Variables are laid out along a random total
/// order; each non-root draws its parents from earlier variables; the
/// decisions are chained by a directed path; a chance variable is observed
/// just before the first decision that lists it as a parent, or at the end.
pub fn generate_moid(params: &MoidParams) -> Result<InfluenceDiagram, GeneratorError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.chance + params.decisions;

    let mut kinds: Vec<VarKind> = std::iter::repeat_n(VarKind::Chance, params.chance)
        .chain(std::iter::repeat_n(VarKind::Decision, params.decisions))
        .collect();
    kinds.shuffle(&mut rng);

    let mut is_root = vec![false; n];
    for i in index::sample(&mut rng, n, params.roots) {
        is_root[i] = true;
    }
    let mut parents: Vec<Vec<VarId>> = (0..n)
        .map(|v| {
            if is_root[v] || v == 0 {
                return Vec::new();
            }
            let mut ps = index::sample(&mut rng, v, params.parents.min(v)).into_vec();
            ps.sort_unstable();
            ps
        })
        .collect();

    let decisions: Vec<VarId> = (0..n).filter(|&v| kinds[v] == VarKind::Decision).collect();
    for w in decisions.windows(2) {
        if !reaches(&parents, w[0], w[1]) {
            parents[w[1]].push(w[0]);
            parents[w[1]].sort_unstable();
        }
    }

    let cards: Vec<usize> = (0..n)
        .map(|_| rng.gen_range(2..=params.max_domain))
        .collect();
    let mut chance_count = 0;
    let mut decision_count = 0;
    let variables: Vec<Variable> = (0..n)
        .map(|v| {
            let name = match kinds[v] {
                VarKind::Chance => {
                    chance_count += 1;
                    format!("X{chance_count}")
                }
                VarKind::Decision => {
                    decision_count += 1;
                    format!("D{decision_count}")
                }
            };
            Variable {
                name,
                kind: kinds[v],
                domain: (0..cards[v]).map(|i| format!("v{i}")).collect(),
                parents: if kinds[v] == VarKind::Decision {
                    parents[v].clone()
                } else {
                    Vec::new()
                },
            }
        })
        .collect();

    let chance: Vec<VarId> = (0..n).filter(|&v| kinds[v] == VarKind::Chance).collect();
    let mut deterministic = vec![false; n];
    for i in index::sample(&mut rng, chance.len(), chance.len() / 4) {
        deterministic[chance[i]] = true;
    }
    let cpts = chance
        .iter()
        .map(|&v| {
            let rows: usize = parents[v].iter().map(|&p| cards[p]).product();
            let width = cards[v];
            let mut table = Vec::with_capacity(rows * width);
            for _ in 0..rows {
                if deterministic[v] {
                    let hot = rng.gen_range(0..width);
                    table.extend((0..width).map(|i| if i == hot { 1.0 } else { 0.0 }));
                } else {
                    let raw: Vec<f64> = (0..width).map(|_| 1.0 - rng.gen::<f64>()).collect();
                    let sum: f64 = raw.iter().sum();
                    table.extend(raw.iter().map(|x| x / sum));
                }
            }
            ProbabilityTable {
                target: v,
                parents: parents[v].clone(),
                values: table,
            }
        })
        .collect();

    let arity = params.arity.min(n);
    let utilities = (0..params.decisions)
        .map(|_| {
            let mut scope = index::sample(&mut rng, n, arity).into_vec();
            scope.sort_unstable();
            let size: usize = scope.iter().map(|&v| cards[v]).product();
            let values = (0..size)
                .map(|_| {
                    let coords: Vec<f64> = (0..params.objectives)
                        .map(|_| rng.gen_range(1..=30) as f64)
                        .collect();
                    UtilityVector::new(coords).expect("finite entries")
                })
                .collect();
            UtilityFunction { scope, values }
        })
        .collect();

    let mut chance_blocks = vec![Vec::new(); decisions.len() + 1];
    for &x in &chance {
        let first = decisions
            .iter()
            .position(|&dec| parents[dec].contains(&x))
            .unwrap_or(decisions.len());
        chance_blocks[first].push(x);
    }

    Ok(InfluenceDiagram {
        name: format!(
            "random-C{}-D{}-k{}-p{}-r{}-a{}-O{}-seed{}",
            params.chance,
            params.decisions,
            params.max_domain,
            params.parents,
            params.roots,
            params.arity,
            params.objectives,
            params.seed
        ),
        objectives: (1..=params.objectives)
            .map(|i| Objective {
                name: format!("f{i}"),
                sense: Sense::Max,
            })
            .collect(),
        variables,
        cpts,
        utilities,
        temporal: TemporalOrder {
            chance_blocks,
            decisions,
        },
    })
}

/// True when `to` is reachable from `from` along parent arcs.
fn reaches(parents: &[Vec<VarId>], from: VarId, to: VarId) -> bool {
    let mut stack = vec![to];
    let mut seen = vec![false; parents.len()];
    while let Some(v) = stack.pop() {
        if v == from {
            return true;
        }
        for &p in &parents[v] {
            if !std::mem::replace(&mut seen[p], true) {
                stack.push(p);
            }
        }
    }
    false
}

/// Random tradeoffs: `pairs` objective pairs and `triplets` objective
/// triplets, with coefficients drawn from `range`. `strength` fixes the
/// reverse-pair coefficient c; when `None` it is drawn like the others.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffParams {
    pub pairs: usize,
    pub triplets: usize,
    pub range: (f64, f64),
    pub strength: Option<f64>,
    pub seed: u64,
}

impl TradeoffParams {
    pub fn validate(&self, p: usize) -> Result<(), GeneratorError> {
        let (lo, hi) = self.range;
        if !(0.0..1.0).contains(&lo) || !(0.0..1.0).contains(&hi) || lo > hi {
            return Err(GeneratorError::InvalidParams(format!(
                "coefficient range [{lo}, {hi}) must lie within [0, 1)"
            )));
        }
        if let Some(c) = self.strength {
            if !(0.0..=1.0).contains(&c) {
                return Err(GeneratorError::InvalidParams(format!(
                    "strength {c} must lie in [0, 1]"
                )));
            }
        }
        if self.pairs > 0 && p < 2 {
            return Err(GeneratorError::TooFewObjectives {
                what: "pair tradeoffs",
                needed: 2,
                got: p,
            });
        }
        if self.triplets > 0 && p < 3 {
            return Err(GeneratorError::TooFewObjectives {
                what: "triplet tradeoffs",
                needed: 3,
                got: p,
            });
        }
        Ok(())
    }
}

fn unit(p: usize, i: usize, x: f64) -> Vec<f64> {
    let mut v = vec![0.0; p];
    v[i] = x;
    v
}

/// Draws a consistent tradeoff set over `p` objectives. For each pair (i, j)
/// the forward pair is `(a·eᵢ, b·eⱼ)` and, when c > 0, the reverse pair is
/// `(b·eⱼ, c·a·eᵢ)`. Each triplet contributes `(a·eᵢ + b·eⱼ, c·eₖ)`.
pub fn generate_tradeoffs(
    params: &TradeoffParams,
    p: usize,
) -> Result<TradeoffSet, GeneratorError> {
    params.validate(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (lo, hi) = params.range;
    let draw = |rng: &mut ChaCha8Rng| if lo < hi { rng.gen_range(lo..hi) } else { lo };
    for _ in 0..MAX_TRADEOFF_ATTEMPTS {
        let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for _ in 0..params.pairs {
            let ij = index::sample(&mut rng, p, 2);
            let (i, j) = (ij.index(0), ij.index(1));
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let c = match params.strength {
                Some(c) => c,
                None => draw(&mut rng),
            };
            pairs.push((unit(p, i, a), unit(p, j, b)));
            if c > 0.0 {
                pairs.push((unit(p, j, b), unit(p, i, c * a)));
            }
        }
        for _ in 0..params.triplets {
            let ijk = index::sample(&mut rng, p, 3);
            let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let mut better = unit(p, ijk.index(0), a);
            better[ijk.index(1)] = b;
            pairs.push((better, unit(p, ijk.index(2), c)));
        }
        let pairs = pairs
            .into_iter()
            .map(|(x, y)| {
                (
                    UtilityVector::new(x).expect("finite"),
                    UtilityVector::new(y).expect("finite"),
                )
            })
            .collect();
        let theta = TradeoffSet::new(p, pairs)?;
        if check_consistency(&theta) {
            return Ok(theta);
        }
    }
    Err(GeneratorError::Inconsistent(MAX_TRADEOFF_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{load_diagram, save_diagram};

    fn params(seed: u64) -> MoidParams {
        MoidParams {
            chance: 15,
            decisions: 5,
            max_domain: 2,
            parents: 2,
            roots: 5,
            arity: 3,
            objectives: 2,
            seed,
        }
    }

    #[test]
    fn benchmark_class_shape() {
        for seed in 0..5 {
            let d = generate_moid(&params(seed)).unwrap();
            assert_eq!(d.num_vars(), 20);
            assert_eq!(d.decisions().len(), 5);
            assert_eq!(d.utilities.len(), 5);
            assert_eq!(d.num_objectives(), 2);
            for u in &d.utilities {
                assert!(u.scope.len() <= 3);
                for v in &u.values {
                    assert!(v
                        .coords()
                        .iter()
                        .all(|&c| (1.0..=30.0).contains(&c) && c.fract() == 0.0));
                }
            }
            let again = load_diagram(&save_diagram(&d)).unwrap();
            assert_eq!(again, d);
        }
    }

    #[test]
    fn all_roots() {
        let p = MoidParams {
            roots: 20,
            ..params(3)
        };
        let d = generate_moid(&p).unwrap();
        assert!(d.cpts.iter().all(|c| c.parents.is_empty()));
        let decs = d.decisions();
        for w in decs.windows(2) {
            assert_eq!(d.variables[w[1]].parents, vec![w[0]]);
        }
    }

    #[test]
    fn determinism() {
        assert_eq!(
            generate_moid(&params(11)).unwrap(),
            generate_moid(&params(11)).unwrap()
        );
        assert_ne!(
            generate_moid(&params(11)).unwrap(),
            generate_moid(&params(12)).unwrap()
        );
    }

    #[test]
    fn invalid_params() {
        let p = MoidParams {
            roots: 21,
            ..params(0)
        };
        assert!(matches!(
            generate_moid(&p),
            Err(GeneratorError::InvalidParams(_))
        ));
        let p = MoidParams {
            max_domain: 1,
            ..params(0)
        };
        assert!(generate_moid(&p).is_err());
    }

    fn tp(pairs: usize, triplets: usize, strength: Option<f64>) -> TradeoffParams {
        TradeoffParams {
            pairs,
            triplets,
            range: (0.1, 0.9),
            strength,
            seed: 5,
        }
    }

    #[test]
    fn reverse_pair_strength() {
        let theta = generate_tradeoffs(&tp(1, 0, Some(0.0)), 3).unwrap();
        assert_eq!(theta.len(), 1);
        let theta = generate_tradeoffs(&tp(1, 0, Some(0.5)), 3).unwrap();
        assert_eq!(theta.len(), 2);
        let w = theta.differences();
        let sum = w[0].add(&w[1]);
        assert!(sum.coords().iter().all(|&c| c >= 0.0));
        assert!(sum.coords().iter().any(|&c| c > 0.0));
    }

    #[test]
    fn exact_exchange_rate_is_rejected() {
        // c = 1 makes the two differences exact negations
        let p = TradeoffParams {
            range: (0.5, 0.5),
            ..tp(1, 0, Some(1.0))
        };
        assert!(matches!(
            generate_tradeoffs(&p, 2),
            Err(GeneratorError::Inconsistent(_))
        ));
    }

    #[test]
    fn empty_and_invalid() {
        let theta = generate_tradeoffs(&tp(0, 0, None), 3).unwrap();
        assert!(theta.is_empty());
        assert!(matches!(
            generate_tradeoffs(&tp(0, 1, None), 2),
            Err(GeneratorError::TooFewObjectives { needed: 3, .. })
        ));
        let bad = TradeoffParams {
            range: (0.2, 1.0),
            ..tp(1, 0, None)
        };
        assert!(generate_tradeoffs(&bad, 2).is_err());
    }

    #[test]
    fn tradeoffs_consistent_and_deterministic() {
        for seed in 0..20 {
            let p = TradeoffParams {
                seed,
                ..tp(2, 1, None)
            };
            let a = generate_tradeoffs(&p, 3).unwrap();
            let b = generate_tradeoffs(&p, 3).unwrap();
            assert!(check_consistency(&a));
            assert_eq!(a.differences(), b.differences());
        }
    }
}
