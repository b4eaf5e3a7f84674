//! Exhaustive policy enumeration, used as an oracle on small diagrams.

use crate::model::{strides, table_index, DecisionRule, InfluenceDiagram, Policy, VarId};
use crate::utility::{maximal_indices, DominanceRelation, UtilitySet, UtilityVector};

use super::elim::advance;
use super::SolveError;

pub const DEFAULT_POLICY_CAP: u64 = 1_000_000;

/// Largest full joint table the oracle will tabulate.
const MAX_JOINT_ENTRIES: usize = 1 << 22;

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    /// Maximal set in the internal maximize-all convention.
    pub maximal: UtilitySet,
    /// One witness per maximal vector, in user senses.
    pub witnesses: Vec<(UtilityVector, Policy)>,
    pub policy_count: u64,
}

/// Number of policies whose rules range over full temporal predecessor sets,
/// or `None` on overflow.
pub fn policy_count(d: &InfluenceDiagram) -> Option<u64> {
    let mut total: u64 = 1;
    for (k, &dec) in d.decisions().iter().enumerate() {
        let configs = d.config_count(&d.temporal.predecessors(k));
        let exp = u32::try_from(configs).ok()?;
        total = total.checked_mul((d.card(dec) as u64).checked_pow(exp)?)?;
    }
    Some(total)
}

/// Expected utility (internal senses) of every policy, in enumeration order.
pub struct PolicyEnumeration {
    rules: Vec<DecisionRule>,
    pub utilities: Vec<UtilityVector>,
}

impl PolicyEnumeration {
    pub fn new(d: &InfluenceDiagram, cap: u64) -> Result<Self, SolveError> {
        let count = policy_count(d).unwrap_or(u64::MAX);
        if count > cap {
            return Err(SolveError::PolicyCap { count, cap });
        }
        let n = d.num_vars();
        let cards: Vec<usize> = d.variables.iter().map(|v| v.card()).collect();
        let all: Vec<VarId> = (0..n).collect();
        let joint_size = d.config_count(&all);
        if joint_size > MAX_JOINT_ENTRIES as u64 {
            return Err(SolveError::JointTooLarge(joint_size));
        }
        let joint_strides = strides(&all, &cards);
        let p = d.num_objectives();

        // joint probability and summed utility for every full configuration
        let mut prob = vec![0.0; joint_size as usize];
        let mut util = vec![0.0; joint_size as usize * p];
        let cpt_strides: Vec<(Vec<VarId>, Vec<usize>)> = d
            .cpts
            .iter()
            .map(|c| {
                let s = c.scope();
                let st = strides(&s, &cards);
                (s, st)
            })
            .collect();
        let util_strides: Vec<Vec<usize>> = d
            .utilities
            .iter()
            .map(|u| strides(&u.scope, &cards))
            .collect();
        let mut values = vec![0usize; n];
        for i in 0..joint_size as usize {
            prob[i] = d
                .cpts
                .iter()
                .zip(&cpt_strides)
                .map(|(c, (s, st))| c.values[table_index(s, st, &values)])
                .product();
            for (u, st) in d.utilities.iter().zip(&util_strides) {
                let v = &u.values[table_index(&u.scope, st, &values)];
                for j in 0..p {
                    util[i * p + j] += v[j];
                }
            }
            advance(&all, &cards, &mut values);
        }

        let chance: Vec<VarId> = d.chance_vars().collect();
        let mut rules: Vec<DecisionRule> = d
            .decisions()
            .iter()
            .enumerate()
            .map(|(k, &dec)| {
                let parents = d.temporal.predecessors(k);
                let size = d.config_count(&parents) as usize;
                DecisionRule {
                    decision: dec,
                    parents,
                    choices: vec![0; size],
                }
            })
            .collect();
        let rule_strides: Vec<Vec<usize>> =
            rules.iter().map(|r| strides(&r.parents, &cards)).collect();
        let chance_configs = d.config_count(&chance);

        let mut utilities = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let mut eu = vec![0.0; p];
            values.iter_mut().for_each(|v| *v = 0);
            for _ in 0..chance_configs {
                for (r, st) in rules.iter().zip(&rule_strides) {
                    values[r.decision] = r.choose(&values, st);
                }
                let i = table_index(&all, &joint_strides, &values);
                let pr = prob[i];
                if pr != 0.0 {
                    for j in 0..p {
                        eu[j] += pr * util[i * p + j];
                    }
                }
                advance(&chance, &cards, &mut values);
            }
            utilities.push(UtilityVector::new(eu)?);
            next_policy(d, &mut rules);
        }
        for r in &mut rules {
            r.choices.iter_mut().for_each(|c| *c = 0);
        }
        Ok(Self { rules, utilities })
    }

    pub fn len(&self) -> usize {
        self.utilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utilities.is_empty()
    }

    /// The policy at position `index` of the enumeration.
    pub fn policy(&self, d: &InfluenceDiagram, index: usize) -> Policy {
        let mut rules = self.rules.clone();
        let mut rest = index;
        for r in &mut rules {
            let card = d.card(r.decision);
            for c in &mut r.choices {
                *c = rest % card;
                rest /= card;
            }
        }
        Policy { rules }
    }
}

fn next_policy(d: &InfluenceDiagram, rules: &mut [DecisionRule]) {
    for r in rules {
        let card = d.card(r.decision);
        for c in &mut r.choices {
            *c += 1;
            if *c < card {
                return;
            }
            *c = 0;
        }
    }
}

/// Maximal set of expected utilities over every policy, with one witness
/// per vector.
pub fn brute_force_solve(
    d: &InfluenceDiagram,
    rel: &DominanceRelation,
) -> Result<BruteForceResult, SolveError> {
    brute_force_solve_with_cap(d, rel, DEFAULT_POLICY_CAP)
}

pub fn brute_force_solve_with_cap(
    d: &InfluenceDiagram,
    rel: &DominanceRelation,
    cap: u64,
) -> Result<BruteForceResult, SolveError> {
    super::check_relation(d, rel)?;
    let all = PolicyEnumeration::new(d, cap)?;
    let keep = maximal_indices(&all.utilities, rel)?;
    let witnesses = keep
        .iter()
        .map(|&i| (d.to_user_senses(&all.utilities[i]), all.policy(d, i)))
        .collect();
    let maximal = UtilitySet::from_parts(
        keep.iter().map(|&i| all.utilities[i].clone()).collect(),
        rel.tag(),
    );
    Ok(BruteForceResult {
        maximal,
        witnesses,
        policy_count: all.len() as u64,
    })
}
