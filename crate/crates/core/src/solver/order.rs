//! Legal elimination orders and induced width.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{InfluenceDiagram, VarId};

/// Variables in elimination sequence, with the temporal block each came from
/// (`I₀` = 0, `D₁` = 1, `I₁` = 2, …).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationOrder {
    pub sequence: Vec<VarId>,
    pub blocks: Vec<usize>,
}

impl EliminationOrder {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// `position[v]` is the step at which `v` is eliminated.
    pub fn positions(&self, n: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.sequence.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// True when the sequence eliminates every variable once and its reverse
    /// extends the temporal order.
    pub fn is_legal(&self, d: &InfluenceDiagram) -> bool {
        let n = d.num_vars();
        if self.sequence.len() != n {
            return false;
        }
        let block = d.temporal.block_positions(n);
        let mut seen = vec![false; n];
        for w in self.sequence.windows(2) {
            if block[w[0]] < block[w[1]] {
                return false;
            }
        }
        self.sequence
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }
}

/// Undirected interaction graph over all variables: every CPT and utility
/// scope is a clique.
pub(crate) struct InteractionGraph {
    adj: Vec<BTreeSet<VarId>>,
}

impl InteractionGraph {
    pub(crate) fn new(d: &InfluenceDiagram) -> Self {
        let mut adj = vec![BTreeSet::new(); d.num_vars()];
        let scopes = d
            .cpts
            .iter()
            .map(|c| c.scope())
            .chain(d.utilities.iter().map(|u| u.scope.clone()));
        for scope in scopes {
            for &a in &scope {
                for &b in &scope {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        Self { adj }
    }

    fn fill_in(&self, v: VarId) -> usize {
        let nb: Vec<VarId> = self.adj[v].iter().copied().collect();
        let mut fill = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !self.adj[a].contains(&b) {
                    fill += 1;
                }
            }
        }
        fill
    }

    /// Removes `v`, connecting its neighbours; returns its degree.
    fn eliminate(&mut self, v: VarId) -> usize {
        let nb: Vec<VarId> = std::mem::take(&mut self.adj[v]).into_iter().collect();
        for &a in &nb {
            self.adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    self.adj[a].insert(b);
                }
            }
        }
        nb.len()
    }
}

/// Eliminates temporal blocks last to first. Chance blocks are ordered by
/// min-fill on the current interaction graph, ties going to the lowest id.
pub fn legal_elimination_order(d: &InfluenceDiagram) -> EliminationOrder {
    let mut graph = InteractionGraph::new(d);
    let mut sequence = Vec::with_capacity(d.num_vars());
    let mut blocks = Vec::with_capacity(d.num_vars());
    let t = &d.temporal;
    for k in (0..t.chance_blocks.len()).rev() {
        let mut pending: BTreeSet<VarId> = t.chance_blocks[k].iter().copied().collect();
        while let Some(v) = pending
            .iter()
            .copied()
            .min_by_key(|&v| (graph.fill_in(v), v))
        {
            pending.remove(&v);
            graph.eliminate(v);
            sequence.push(v);
            blocks.push(2 * k);
        }
        if k > 0 {
            let dec = t.decisions[k - 1];
            graph.eliminate(dec);
            sequence.push(dec);
            blocks.push(2 * k - 1);
        }
    }
    EliminationOrder { sequence, blocks }
}

/// Largest neighbour count met while eliminating along `order`.
pub fn induced_width(d: &InfluenceDiagram, order: &EliminationOrder) -> usize {
    let mut graph = InteractionGraph::new(d);
    order
        .sequence
        .iter()
        .map(|&v| graph.eliminate(v))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::load_diagram;

    #[test]
    fn oil_order_and_width() {
        let d = fixtures::oil_wildcatter();
        let order = legal_elimination_order(&d);
        let names: Vec<&str> = order
            .sequence
            .iter()
            .map(|&v| d.variables[v].name.as_str())
            .collect();
        assert_eq!(names, ["O", "D", "S", "T"]);
        assert!(order.is_legal(&d));
        assert_eq!(induced_width(&d, &order), 3);
    }

    fn chance_only(vars: usize, utilities: &str) -> InfluenceDiagram {
        let names: Vec<String> = (0..vars).map(|i| format!("X{i}")).collect();
        let variables: Vec<String> = names
            .iter()
            .map(|n| format!(r#"{{"id":"{n}","kind":"chance","domain":["a","b"]}}"#))
            .collect();
        let cpts: Vec<String> = names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                if i == 0 {
                    format!(r#"{{"target":"{n}","parents":[],"table":[0.5,0.5]}}"#)
                } else {
                    format!(
                        r#"{{"target":"{n}","parents":["{}"],"table":[0.9,0.1,0.2,0.8]}}"#,
                        names[i - 1]
                    )
                }
            })
            .collect();
        let block: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
        let text = format!(
            r#"{{"name":"chain","objectives":[{{"name":"v","sense":"max"}}],"variables":[{}],"cpts":[{}],"utilities":[{}],"temporal_order":[{{"chance":[{}]}}]}}"#,
            variables.join(","),
            cpts.join(","),
            utilities,
            block.join(",")
        );
        load_diagram(&text).unwrap()
    }

    #[test]
    fn chain_has_width_one() {
        let d = chance_only(5, r#"{"scope":["X4"],"table":[[1],[2]]}"#);
        let order = legal_elimination_order(&d);
        assert!(order.is_legal(&d));
        assert_eq!(induced_width(&d, &order), 1);
        assert_eq!(legal_elimination_order(&d), order);
    }

    #[test]
    fn single_factor_and_isolated_variables() {
        let d = chance_only(1, r#"{"scope":["X0"],"table":[[1],[2]]}"#);
        let order = legal_elimination_order(&d);
        assert_eq!(induced_width(&d, &order), 0);

        let d = chance_only(
            3,
            r#"{"scope":["X0","X1","X2"],"table":[[1],[2],[3],[4],[5],[6],[7],[8]]}"#,
        );
        let order = legal_elimination_order(&d);
        assert_eq!(induced_width(&d, &order), 2);
    }

    #[test]
    fn illegal_orders_detected() {
        let d = fixtures::oil_wildcatter();
        let mut order = legal_elimination_order(&d);
        order.sequence.swap(0, 1);
        assert!(!order.is_legal(&d));
        order.sequence.truncate(3);
        assert!(!order.is_legal(&d));
    }
}
