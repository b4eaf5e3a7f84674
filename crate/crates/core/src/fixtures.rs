//! Bundled example diagrams: the oil wildcatter problem with a payoff and an
//! environmental damage objective.

use crate::dominance::{parse_tradeoffs, TradeoffSet};
use crate::model::{load_diagram, DecisionRule, InfluenceDiagram, Policy};

pub const OIL_WILDCATTER: &str = include_str!("../fixtures/oil_wildcatter.json");
pub const OIL_WILDCATTER_PAYOFF: &str = include_str!("../fixtures/oil_wildcatter_payoff.json");
pub const OIL_TRADEOFFS: &str = include_str!("../fixtures/oil_tradeoffs.json");

/// Bi-objective oil wildcatter: maximize payoff, minimize damage.
pub fn oil_wildcatter() -> InfluenceDiagram {
    load_diagram(OIL_WILDCATTER).expect("bundled fixture is valid")
}

/// The same problem with the payoff objective alone.
pub fn oil_wildcatter_payoff() -> InfluenceDiagram {
    load_diagram(OIL_WILDCATTER_PAYOFF).expect("bundled fixture is valid")
}

/// "+50 payoff is worth +12 damage", in the maximize-all convention.
pub fn oil_tradeoffs() -> TradeoffSet {
    parse_tradeoffs(OIL_TRADEOFFS)
        .expect("bundled fixture is valid")
        .1
}

/// Builds an oil wildcatter policy: whether to test, and whether to drill
/// for each seismic outcome (closed, open, diffuse, notest).
pub fn oil_policy(d: &InfluenceDiagram, test: bool, drill: [bool; 4]) -> Policy {
    let t = d.var_id("T").expect("T");
    let s = d.var_id("S").expect("S");
    let dv = d.var_id("D").expect("D");
    let choice = |yes: bool| if yes { 0 } else { 1 };
    Policy {
        rules: vec![
            DecisionRule {
                decision: t,
                parents: vec![],
                choices: vec![choice(test)],
            },
            DecisionRule {
                decision: dv,
                parents: vec![t, s],
                choices: (0..2)
                    .flat_map(|_| drill.iter().map(|&x| choice(x)))
                    .collect(),
            },
        ],
    }
}
