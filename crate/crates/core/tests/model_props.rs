mod common;

use common::tiny_params;
use moid::generator::generate_moid;
use moid::model::{
    load_diagram, policy_expected_utility, policy_expected_utility_with_mass, save_diagram,
    DecisionRule, VarKind, NORMALIZATION_TOLERANCE,
};
use moid::{InfluenceDiagram, Policy, Sense, UtilityVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::HashSet;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

/// A policy whose rules observe every temporal predecessor.
fn random_policy(d: &InfluenceDiagram, seed: u64) -> Policy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rules = d
        .decisions()
        .iter()
        .enumerate()
        .map(|(k, &dec)| {
            let parents = d.temporal.predecessors(k);
            let size: usize = parents.iter().map(|&p| d.card(p)).product();
            DecisionRule {
                decision: dec,
                parents,
                choices: (0..size).map(|_| rng.gen_range(0..d.card(dec))).collect(),
            }
        })
        .collect();
    Policy { rules }
}

fn close(a: &UtilityVector, b: &UtilityVector, tol: f64) -> bool {
    a.coords()
        .iter()
        .zip(b.coords())
        .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0))
}

/// Checks every structural invariant of a loaded diagram.
fn satisfies_invariants(d: &InfluenceDiagram) -> Result<(), String> {
    let names: HashSet<&str> = d.variables.iter().map(|v| v.name.as_str()).collect();
    if names.len() != d.num_vars() {
        return Err("duplicate ids".into());
    }
    if d.variables.iter().any(|v| v.domain.is_empty()) {
        return Err("empty domain".into());
    }
    let p = d.num_objectives();
    if p == 0 {
        return Err("no objectives".into());
    }
    for u in &d.utilities {
        if u.values
            .iter()
            .any(|v| v.dim() != p || v.coords().iter().any(|c| !c.is_finite()))
        {
            return Err("bad utility entry".into());
        }
    }
    let mut targets = HashSet::new();
    for cpt in &d.cpts {
        if d.variables[cpt.target].kind != VarKind::Chance || !targets.insert(cpt.target) {
            return Err("bad cpt target".into());
        }
        let card = d.card(cpt.target);
        for row in cpt.values.chunks(card) {
            if row.iter().any(|&x| x < 0.0)
                || (row.iter().sum::<f64>() - 1.0).abs() > NORMALIZATION_TOLERANCE
            {
                return Err("unnormalized row".into());
            }
        }
    }
    if targets.len() != d.chance_vars().count() {
        return Err("missing cpt".into());
    }
    let pos = d.temporal.block_positions(d.num_vars());
    let mut seen = vec![0; d.num_vars()];
    for v in d
        .temporal
        .chance_blocks
        .iter()
        .flatten()
        .chain(&d.temporal.decisions)
    {
        seen[*v] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        return Err("temporal order does not list every variable once".into());
    }
    for &dec in d.decisions() {
        if d.variables[dec].parents.iter().any(|&q| pos[q] >= pos[dec]) {
            return Err("decision parent after decision".into());
        }
    }
    // acyclicity by repeated removal of sources
    let arcs = d.arcs();
    let mut indeg = vec![0; d.num_vars()];
    for &(_, b) in &arcs {
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (0..d.num_vars()).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &(a, b) in &arcs {
            if a == v {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
    }
    if removed != d.num_vars() {
        return Err("cycle".into());
    }
    Ok(())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn accepted_documents_satisfy_invariants(
        params in tiny_params(),
        which in any::<prop::sample::Index>(),
        delta in prop::sample::select(vec![0.0, 1e-12, 1e-3, 0.1, -0.2, 2.0]),
    ) {
        let d = generate_moid(&params).unwrap();
        let mut doc: Value = serde_json::from_str(&save_diagram(&d)).unwrap();
        let cpts = doc["cpts"].as_array_mut().unwrap();
        if !cpts.is_empty() {
            let c = which.index(cpts.len());
            let cpt = &mut cpts[c];
            let table = cpt["table"].as_array_mut().unwrap();
            let i = which.index(table.len());
            let x = table[i].as_f64().unwrap() + delta;
            table[i] = serde_json::json!(x);
        }
        if let Ok(loaded) = load_diagram(&doc.to_string()) {
            prop_assert_eq!(satisfies_invariants(&loaded), Ok(()));
        }
        prop_assert_eq!(satisfies_invariants(&d), Ok(()));
    }

    #[test]
    fn expected_utility_is_linear_in_each_utility(params in tiny_params(), seed in any::<u64>(), which in any::<prop::sample::Index>()) {
        let d = generate_moid(&params).unwrap();
        let j = which.index(d.utilities.len());
        let policy = random_policy(&d, seed);
        let base = policy_expected_utility(&d, &policy).unwrap();

        let mut doubled = d.clone();
        doubled.utilities[j].values.iter_mut().for_each(|v| *v = v.scale(2.0));
        let mut alone = d.clone();
        for (i, u) in alone.utilities.iter_mut().enumerate() {
            if i != j {
                u.values.iter_mut().for_each(|v| *v = UtilityVector::zero(v.dim()));
            }
        }
        let contribution = policy_expected_utility(&alone, &policy).unwrap();
        let got = policy_expected_utility(&doubled, &policy).unwrap();
        prop_assert!(close(&got, &base.add(&contribution), 1e-9));
    }

    #[test]
    fn policies_visit_unit_mass(params in tiny_params(), seed in any::<u64>()) {
        let d = generate_moid(&params).unwrap();
        let (_, mass) = policy_expected_utility_with_mass(&d, &random_policy(&d, seed)).unwrap();
        prop_assert!((mass - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn save_then_load_is_identity(params in tiny_params(), flip in prop::collection::vec(any::<bool>(), 3)) {
        let mut d = generate_moid(&params).unwrap();
        // declare some objectives as minimized, keeping internal values fixed
        for (o, &f) in d.objectives.iter_mut().zip(&flip) {
            if f {
                o.sense = Sense::Min;
            }
        }
        let text = save_diagram(&d);
        let doc: Value = serde_json::from_str(&text).unwrap();
        if let (Some(u), Some(k)) = (d.utilities.first(), flip.iter().position(|&f| f)) {
            if k < d.num_objectives() {
                let stored = doc["utilities"][0]["table"][0][k].as_f64().unwrap();
                prop_assert_eq!(stored, -u.values[0][k]);
            }
        }
        prop_assert_eq!(load_diagram(&text).unwrap(), d);
    }
}
