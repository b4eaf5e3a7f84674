//! Bottom-up pass: follows provenance from a root element back through the
//! decision buckets and materializes decision rules.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::model::{DecisionRule, InfluenceDiagram, Policy, VarKind};

use super::elim::Elimination;

struct Tracer<'a> {
    d: &'a InfluenceDiagram,
    elim: &'a Elimination,
    /// Chosen value per entry of each decision's message, indexed by variable.
    choices: Vec<Vec<Option<usize>>>,
}

impl Tracer<'_> {
    fn visit(&mut self, msg_id: usize, values: &mut [usize], point: usize) {
        let msg = &self.elim.messages[msg_id];
        let Some(origin) = &msg.origin else { return };
        let at = msg.index(values);
        let entry = &msg.entries[at];
        if !entry.reachable {
            return;
        }
        let prov = &entry.prov[point];
        let var = origin.var;
        let nc = origin.components.len();
        if self.d.variables[var].kind == VarKind::Decision {
            let choice = prov[0] as usize;
            values[var] = choice;
            self.choices[var][at] = Some(choice);
            for (j, &c) in origin.components.iter().enumerate() {
                self.visit(c, values, prov[1 + j] as usize);
            }
        } else {
            for (b, &y) in entry.branches.iter().enumerate() {
                values[var] = y as usize;
                for (j, &c) in origin.components.iter().enumerate() {
                    self.visit(c, values, prov[b * nc + j] as usize);
                }
            }
        }
    }
}

/// Policy reaching root element `target`. Entries never visited (zero
/// probability, or decisions without utility downstream) are filled by
/// `rng`.
pub(crate) fn trace_policy(
    d: &InfluenceDiagram,
    elim: &Elimination,
    target: usize,
    rng: &mut ChaCha8Rng,
) -> Policy {
    let choices = elim
        .decision_messages
        .iter()
        .map(|m| m.map_or_else(Vec::new, |id| vec![None; elim.messages[id].entries.len()]))
        .collect();
    let mut tracer = Tracer { d, elim, choices };
    let mut values = vec![0usize; d.num_vars()];
    let prov = &elim.root[target].prov;
    for (&r, &idx) in elim.roots.iter().zip(prov) {
        tracer.visit(r, &mut values, idx as usize);
    }
    let rules = d
        .decisions()
        .iter()
        .map(|&dec| {
            let card = d.card(dec);
            match elim.decision_messages[dec] {
                Some(id) => DecisionRule {
                    decision: dec,
                    parents: elim.messages[id].scope.clone(),
                    choices: tracer.choices[dec]
                        .iter()
                        .map(|c| c.unwrap_or_else(|| rng.gen_range(0..card)))
                        .collect(),
                },
                None => DecisionRule {
                    decision: dec,
                    parents: Vec::new(),
                    choices: vec![rng.gen_range(0..card)],
                },
            }
        })
        .collect();
    Policy { rules }
}
