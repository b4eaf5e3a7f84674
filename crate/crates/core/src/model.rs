//! The multi-objective influence diagram: variables, conditional probability
//! tables, vector-valued utility functions and the temporal order, plus the
//! JSON document they are stored in.
//!
//! Flat tables are indexed row-major over their scope with the last scope
//! variable varying fastest. A CPT's scope is its parents followed by its
//! target.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::utility::UtilityVector;

pub type VarId = usize;

/// Rows of a CPT must sum to one within this tolerance.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Refuse to enumerate more chance configurations than this when scoring a
/// policy.
pub const MAX_ENUMERATED_CONFIGS: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed diagram document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{}", format_issues(.0))]
    Invalid(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("policy does not match the diagram: {0}")]
    BadPolicy(String),
    #[error("{0} chance configurations exceed the enumeration cap")]
    TooLarge(u64),
}

fn format_issues(issues: &[String]) -> String {
    let mut s = format!("diagram failed validation ({} issues)", issues.len());
    for i in issues {
        s.push_str("\n  - ");
        s.push_str(i);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub name: String,
    pub sense: Sense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Chance,
    Decision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub domain: Vec<String>,
    /// Declared informational parents (decisions only).
    pub parents: Vec<VarId>,
}

impl Variable {
    pub fn card(&self) -> usize {
        self.domain.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    pub target: VarId,
    pub parents: Vec<VarId>,
    pub values: Vec<f64>,
}

impl ProbabilityTable {
    pub fn scope(&self) -> Vec<VarId> {
        let mut s = self.parents.clone();
        s.push(self.target);
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityFunction {
    pub scope: Vec<VarId>,
    pub values: Vec<UtilityVector>,
}

/// `I₀ ≺ D₁ ≺ I₁ ≺ … ≺ D_m ≺ I_m`: `chance_blocks` has `m + 1` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalOrder {
    pub chance_blocks: Vec<Vec<VarId>>,
    pub decisions: Vec<VarId>,
}

impl TemporalOrder {
    /// Variables known when decision `k` (0-based) is taken, in temporal order.
    pub fn predecessors(&self, k: usize) -> Vec<VarId> {
        let mut out = Vec::new();
        for j in 0..k {
            out.extend_from_slice(&self.chance_blocks[j]);
            out.push(self.decisions[j]);
        }
        out.extend_from_slice(&self.chance_blocks[k]);
        out
    }

    /// Position of every variable's block in the alternating sequence
    /// (`I₀` = 0, `D₁` = 1, `I₁` = 2, …).
    pub fn block_positions(&self, n: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; n];
        for (k, block) in self.chance_blocks.iter().enumerate() {
            for &v in block {
                if v < n {
                    pos[v] = 2 * k;
                }
            }
        }
        for (k, &d) in self.decisions.iter().enumerate() {
            if d < n {
                pos[d] = 2 * k + 1;
            }
        }
        pos
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceDiagram {
    pub name: String,
    pub objectives: Vec<Objective>,
    pub variables: Vec<Variable>,
    pub cpts: Vec<ProbabilityTable>,
    /// Utilities in the internal maximize-all convention.
    pub utilities: Vec<UtilityFunction>,
    pub temporal: TemporalOrder,
}

impl InfluenceDiagram {
    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn card(&self, v: VarId) -> usize {
        self.variables[v].card()
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn chance_vars(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.num_vars()).filter(|&v| self.variables[v].kind == VarKind::Chance)
    }

    pub fn decisions(&self) -> &[VarId] {
        &self.temporal.decisions
    }

    /// Mask of objectives stored negated internally.
    pub fn min_mask(&self) -> Vec<bool> {
        self.objectives
            .iter()
            .map(|o| o.sense == Sense::Min)
            .collect()
    }

    /// Converts an internal vector back to the declared senses.
    pub fn to_user_senses(&self, u: &UtilityVector) -> UtilityVector {
        u.negate_where(&self.min_mask())
    }

    pub fn from_user_senses(&self, u: &UtilityVector) -> UtilityVector {
        u.negate_where(&self.min_mask())
    }

    /// Directed arcs `parent -> child` from CPTs and declared decision parents.
    pub fn arcs(&self) -> Vec<(VarId, VarId)> {
        let mut arcs = Vec::new();
        for cpt in &self.cpts {
            arcs.extend(cpt.parents.iter().map(|&p| (p, cpt.target)));
        }
        for (d, var) in self.variables.iter().enumerate() {
            if var.kind == VarKind::Decision {
                arcs.extend(var.parents.iter().map(|&p| (p, d)));
            }
        }
        arcs
    }

    /// Product of domain sizes over `scope`.
    pub fn config_count(&self, scope: &[VarId]) -> u64 {
        scope
            .iter()
            .fold(1u64, |acc, &v| acc.saturating_mul(self.card(v) as u64))
    }
}

/// Row-major strides for `scope`, last variable fastest.
pub fn strides(scope: &[VarId], cards: &[usize]) -> Vec<usize> {
    let mut s = vec![0; scope.len()];
    let mut acc = 1;
    for i in (0..scope.len()).rev() {
        s[i] = acc;
        acc *= cards[scope[i]];
    }
    s
}

/// Index of the assignment `values` (indexed by variable) in a table over
/// `scope` with the given strides.
#[inline]
pub fn table_index(scope: &[VarId], strides: &[usize], values: &[usize]) -> usize {
    scope
        .iter()
        .zip(strides)
        .map(|(&v, &s)| values[v] * s)
        .sum()
}

/// One decision rule: a choice for every configuration of `parents`, a
/// subset of the variables known when the decision is taken. The rule is
/// constant in the remaining predecessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRule {
    pub decision: VarId,
    pub parents: Vec<VarId>,
    pub choices: Vec<usize>,
}

impl DecisionRule {
    pub fn choose(&self, values: &[usize], strides: &[usize]) -> usize {
        self.choices[table_index(&self.parents, strides, values)]
    }
}

/// One rule per decision, in temporal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    pub rules: Vec<DecisionRule>,
}

impl Policy {
    pub fn rule(&self, decision: VarId) -> Option<&DecisionRule> {
        self.rules.iter().find(|r| r.decision == decision)
    }
}

/// Informational parents of each decision under the temporal order: every
/// variable that precedes it.
pub fn informational_parents(d: &InfluenceDiagram) -> Vec<Vec<VarId>> {
    (0..d.decisions().len())
        .map(|k| d.temporal.predecessors(k))
        .collect()
}

fn check_policy(d: &InfluenceDiagram, policy: &Policy) -> Result<(), ModelError> {
    let cards: Vec<usize> = d.variables.iter().map(Variable::card).collect();
    if policy.rules.len() != d.decisions().len() {
        return Err(ModelError::BadPolicy(format!(
            "{} rules for {} decisions",
            policy.rules.len(),
            d.decisions().len()
        )));
    }
    for (k, (rule, &dec)) in policy.rules.iter().zip(d.decisions()).enumerate() {
        if rule.decision != dec {
            return Err(ModelError::BadPolicy(format!(
                "rule {k} is not for decision {}",
                d.variables[dec].name
            )));
        }
        let preds: HashSet<VarId> = d.temporal.predecessors(k).into_iter().collect();
        let distinct: HashSet<VarId> = rule.parents.iter().copied().collect();
        if distinct.len() != rule.parents.len() || !distinct.is_subset(&preds) {
            return Err(ModelError::BadPolicy(format!(
                "rule for {} may only observe distinct temporal predecessors",
                d.variables[dec].name
            )));
        }
        let size: usize = rule.parents.iter().map(|&p| cards[p]).product();
        if rule.choices.len() != size || rule.choices.iter().any(|&c| c >= cards[dec]) {
            return Err(ModelError::BadPolicy(format!(
                "rule for {} is not total",
                d.variables[dec].name
            )));
        }
    }
    Ok(())
}

/// Expected utility of `policy` together with the total probability mass
/// visited (which is one for a well-formed diagram).
pub fn policy_expected_utility_with_mass(
    d: &InfluenceDiagram,
    policy: &Policy,
) -> Result<(UtilityVector, f64), ModelError> {
    check_policy(d, policy)?;
    let chance: Vec<VarId> = d.chance_vars().collect();
    let total = d.config_count(&chance);
    if total > MAX_ENUMERATED_CONFIGS {
        return Err(ModelError::TooLarge(total));
    }
    let cards: Vec<usize> = d.variables.iter().map(Variable::card).collect();
    let rule_strides: Vec<Vec<usize>> = policy
        .rules
        .iter()
        .map(|r| strides(&r.parents, &cards))
        .collect();
    let cpt_strides: Vec<(Vec<VarId>, Vec<usize>)> = d
        .cpts
        .iter()
        .map(|c| {
            let scope = c.scope();
            let s = strides(&scope, &cards);
            (scope, s)
        })
        .collect();
    let util_strides: Vec<Vec<usize>> = d
        .utilities
        .iter()
        .map(|u| strides(&u.scope, &cards))
        .collect();

    let p = d.num_objectives();
    let mut eu = vec![0.0; p];
    let mut mass = 0.0;
    let mut values = vec![0usize; d.num_vars()];
    for _ in 0..total {
        for (rule, s) in policy.rules.iter().zip(&rule_strides) {
            values[rule.decision] = rule.choose(&values, s);
        }
        let mut prob = 1.0;
        for (cpt, (scope, s)) in d.cpts.iter().zip(&cpt_strides) {
            prob *= cpt.values[table_index(scope, s, &values)];
            if prob == 0.0 {
                break;
            }
        }
        if prob != 0.0 {
            mass += prob;
            for (u, s) in d.utilities.iter().zip(&util_strides) {
                let vec = &u.values[table_index(&u.scope, s, &values)];
                for (acc, c) in eu.iter_mut().zip(vec.coords()) {
                    *acc += prob * c;
                }
            }
        }
        // advance the chance odometer, last chance variable fastest
        for &v in chance.iter().rev() {
            values[v] += 1;
            if values[v] < cards[v] {
                break;
            }
            values[v] = 0;
        }
    }
    let eu = UtilityVector::new(eu).map_err(|e| ModelError::BadPolicy(e.to_string()))?;
    Ok((eu, mass))
}

/// Exact expected utility vector of `policy` (internal senses).
pub fn policy_expected_utility(
    d: &InfluenceDiagram,
    policy: &Policy,
) -> Result<UtilityVector, ModelError> {
    Ok(policy_expected_utility_with_mass(d, policy)?.0)
}

// --- document format -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableDoc {
    id: String,
    kind: VarKind,
    domain: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parents: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CptDoc {
    target: String,
    #[serde(default)]
    parents: Vec<String>,
    table: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UtilityDoc {
    #[serde(default)]
    scope: Vec<String>,
    table: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BlockDoc {
    Chance(Vec<String>),
    Decision(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    name: String,
    objectives: Vec<Objective>,
    variables: Vec<VariableDoc>,
    cpts: Vec<CptDoc>,
    utilities: Vec<UtilityDoc>,
    temporal_order: Vec<BlockDoc>,
}

/// Validation switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Require every decision to see all earlier decisions and their parents.
    pub non_forgetting: bool,
}

/// Parses and validates a diagram document.
pub fn load_diagram(text: &str) -> Result<InfluenceDiagram, ModelError> {
    load_diagram_with(text, LoadOptions::default())
}

pub fn load_diagram_with(text: &str, options: LoadOptions) -> Result<InfluenceDiagram, ModelError> {
    let doc: DiagramDoc = serde_json::from_str(text)?;
    build(doc, options)
}

pub fn read_diagram(path: &Path) -> Result<InfluenceDiagram, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_diagram(&text)
}

pub fn write_diagram(path: &Path, d: &InfluenceDiagram) -> Result<(), ModelError> {
    std::fs::write(path, save_diagram(d)).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn build(doc: DiagramDoc, options: LoadOptions) -> Result<InfluenceDiagram, ModelError> {
    let mut issues = Vec::new();
    let p = doc.objectives.len();
    if p == 0 {
        issues.push("at least one objective is required".to_string());
    }
    let mask: Vec<bool> = doc
        .objectives
        .iter()
        .map(|o| o.sense == Sense::Min)
        .collect();

    let mut ids: HashMap<String, VarId> = HashMap::new();
    for (i, v) in doc.variables.iter().enumerate() {
        if ids.insert(v.id.clone(), i).is_some() {
            issues.push(format!("duplicate variable id `{}`", v.id));
        }
        if v.domain.is_empty() {
            issues.push(format!("variable `{}` has an empty domain", v.id));
        }
        if v.kind == VarKind::Chance && !v.parents.is_empty() {
            issues.push(format!(
                "chance variable `{}` declares parents outside its CPT",
                v.id
            ));
        }
    }
    let lookup = |name: &str, ctx: &str, issues: &mut Vec<String>| -> Option<VarId> {
        let id = ids.get(name).copied();
        if id.is_none() {
            issues.push(format!("{ctx}: unknown variable `{name}`"));
        }
        id
    };

    let mut variables = Vec::with_capacity(doc.variables.len());
    for v in &doc.variables {
        let parents = v
            .parents
            .iter()
            .filter_map(|p| lookup(p, &format!("parents of `{}`", v.id), &mut issues))
            .collect();
        variables.push(Variable {
            name: v.id.clone(),
            kind: v.kind,
            domain: v.domain.clone(),
            parents,
        });
    }
    let card = |v: VarId| variables[v].domain.len().max(1);

    let mut cpts = Vec::with_capacity(doc.cpts.len());
    let mut has_cpt = vec![false; variables.len()];
    for c in &doc.cpts {
        let ctx = format!("cpt for `{}`", c.target);
        let Some(target) = lookup(&c.target, &ctx, &mut issues) else {
            continue;
        };
        if variables[target].kind != VarKind::Chance {
            issues.push(format!("{ctx}: target is a decision"));
            continue;
        }
        if std::mem::replace(&mut has_cpt[target], true) {
            issues.push(format!("{ctx}: more than one table"));
            continue;
        }
        let parents: Vec<VarId> = c
            .parents
            .iter()
            .filter_map(|p| lookup(p, &ctx, &mut issues))
            .collect();
        if parents.len() != c.parents.len() {
            continue;
        }
        if parents.contains(&target)
            || parents.iter().collect::<HashSet<_>>().len() != parents.len()
        {
            issues.push(format!("{ctx}: repeated variable in scope"));
            continue;
        }
        let rows: usize = parents.iter().map(|&p| card(p)).product();
        let width = card(target);
        if c.table.len() != rows * width {
            issues.push(format!(
                "{ctx}: table has {} entries, expected {}",
                c.table.len(),
                rows * width
            ));
            continue;
        }
        if c.table
            .iter()
            .any(|x| !x.is_finite() || *x < 0.0 || *x > 1.0)
        {
            issues.push(format!("{ctx}: entries must lie in [0, 1]"));
        }
        let bad_rows: Vec<String> = c
            .table
            .chunks(width)
            .enumerate()
            .filter_map(|(r, row)| {
                let s: f64 = row.iter().sum();
                ((s - 1.0).abs() > NORMALIZATION_TOLERANCE)
                    .then(|| format!("row {r} sums to {}", (s * 1e12).round() / 1e12))
            })
            .collect();
        if !bad_rows.is_empty() {
            issues.push(format!("{ctx}: not normalized: {}", bad_rows.join(", ")));
        }
        cpts.push(ProbabilityTable {
            target,
            parents,
            values: c.table.clone(),
        });
    }
    for (i, v) in variables.iter().enumerate() {
        if v.kind == VarKind::Chance && !has_cpt[i] {
            issues.push(format!("chance variable `{}` has no cpt", v.name));
        }
    }

    let mut utilities = Vec::with_capacity(doc.utilities.len());
    for (j, u) in doc.utilities.iter().enumerate() {
        let ctx = format!("utility {j}");
        let scope: Vec<VarId> = u
            .scope
            .iter()
            .filter_map(|s| lookup(s, &ctx, &mut issues))
            .collect();
        if scope.len() != u.scope.len() {
            continue;
        }
        if scope.iter().collect::<HashSet<_>>().len() != scope.len() {
            issues.push(format!("{ctx}: repeated variable in scope"));
            continue;
        }
        let size: usize = scope.iter().map(|&v| card(v)).product();
        if u.table.len() != size {
            issues.push(format!(
                "{ctx}: table has {} entries, expected {size}",
                u.table.len()
            ));
            continue;
        }
        let mut values = Vec::with_capacity(size);
        for (r, entry) in u.table.iter().enumerate() {
            if entry.len() != p {
                issues.push(format!(
                    "{ctx}: entry {r} has {} objectives, expected {p}",
                    entry.len()
                ));
                continue;
            }
            match UtilityVector::new(entry.clone()) {
                Ok(v) => values.push(v.negate_where(&mask)),
                Err(e) => issues.push(format!("{ctx}: entry {r}: {e}")),
            }
        }
        utilities.push(UtilityFunction { scope, values });
    }

    // temporal order, normalized into alternating blocks
    let mut chance_blocks: Vec<Vec<VarId>> = vec![Vec::new()];
    let mut decisions = Vec::new();
    let mut seen = vec![0usize; variables.len()];
    for block in &doc.temporal_order {
        match block {
            BlockDoc::Chance(names) => {
                for n in names {
                    if let Some(v) = lookup(n, "temporal order", &mut issues) {
                        seen[v] += 1;
                        if variables[v].kind != VarKind::Chance {
                            issues.push(format!("temporal order: `{n}` listed in a chance block"));
                        }
                        chance_blocks.last_mut().unwrap().push(v);
                    }
                }
            }
            BlockDoc::Decision(n) => {
                if let Some(v) = lookup(n, "temporal order", &mut issues) {
                    seen[v] += 1;
                    if variables[v].kind != VarKind::Decision {
                        issues.push(format!("temporal order: `{n}` is not a decision"));
                    }
                    decisions.push(v);
                    chance_blocks.push(Vec::new());
                }
            }
        }
    }
    for (v, &count) in seen.iter().enumerate() {
        if count != 1 {
            issues.push(format!(
                "temporal order lists `{}` {count} times",
                variables[v].name
            ));
        }
    }
    let temporal = TemporalOrder {
        chance_blocks,
        decisions,
    };

    let d = InfluenceDiagram {
        name: doc.name,
        objectives: doc.objectives,
        variables,
        cpts,
        utilities,
        temporal,
    };
    if issues.is_empty() {
        structural_checks(&d, options, &mut issues);
    }
    if issues.is_empty() {
        Ok(d)
    } else {
        Err(ModelError::Invalid(issues))
    }
}

/// Graph-level checks run once every reference resolves.
fn structural_checks(d: &InfluenceDiagram, options: LoadOptions, issues: &mut Vec<String>) {
    let n = d.num_vars();
    let arcs = d.arcs();
    let mut children = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(a, b) in &arcs {
        children[a].push(b);
        indegree[b] += 1;
    }
    let mut stack: Vec<VarId> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut visited = 0;
    while let Some(v) = stack.pop() {
        visited += 1;
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                stack.push(c);
            }
        }
    }
    if visited != n {
        let cyclic: Vec<&str> = (0..n)
            .filter(|&v| indegree[v] > 0)
            .map(|v| d.variables[v].name.as_str())
            .collect();
        issues.push(format!(
            "graph has a directed cycle through {}",
            cyclic.join(", ")
        ));
    }

    let pos = d.temporal.block_positions(n);
    for &dec in d.decisions() {
        for &p in &d.variables[dec].parents {
            if pos[p] >= pos[dec] {
                issues.push(format!(
                    "parent `{}` of decision `{}` does not precede it in the temporal order",
                    d.variables[p].name, d.variables[dec].name
                ));
            }
        }
    }
    // a chance variable cannot be observed before a decision that influences it
    for cpt in &d.cpts {
        for &p in &cpt.parents {
            if d.variables[p].kind == VarKind::Decision && pos[cpt.target] < pos[p] {
                issues.push(format!(
                    "chance variable `{}` precedes its decision parent `{}` in the temporal order",
                    d.variables[cpt.target].name, d.variables[p].name
                ));
            }
        }
    }
    if options.non_forgetting {
        let decs = d.decisions();
        for k in 1..decs.len() {
            let have: HashSet<VarId> = d.variables[decs[k]].parents.iter().copied().collect();
            let prev = decs[k - 1];
            let mut need = d.variables[prev].parents.clone();
            need.push(prev);
            for v in need {
                if !have.contains(&v) {
                    issues.push(format!(
                        "non-forgetting: decision `{}` does not observe `{}`",
                        d.variables[decs[k]].name, d.variables[v].name
                    ));
                }
            }
        }
    }
}

/// Serializes a diagram; utilities are written in the declared senses.
pub fn save_diagram(d: &InfluenceDiagram) -> String {
    let name = |v: VarId| d.variables[v].name.clone();
    let mask = d.min_mask();
    let mut temporal_order = Vec::new();
    for (k, block) in d.temporal.chance_blocks.iter().enumerate() {
        if !block.is_empty() {
            temporal_order.push(BlockDoc::Chance(block.iter().map(|&v| name(v)).collect()));
        }
        if let Some(&dec) = d.temporal.decisions.get(k) {
            temporal_order.push(BlockDoc::Decision(name(dec)));
        }
    }
    let doc = DiagramDoc {
        name: d.name.clone(),
        objectives: d.objectives.clone(),
        variables: d
            .variables
            .iter()
            .map(|v| VariableDoc {
                id: v.name.clone(),
                kind: v.kind,
                domain: v.domain.clone(),
                parents: v.parents.iter().map(|&p| name(p)).collect(),
            })
            .collect(),
        cpts: d
            .cpts
            .iter()
            .map(|c| CptDoc {
                target: name(c.target),
                parents: c.parents.iter().map(|&p| name(p)).collect(),
                table: c.values.clone(),
            })
            .collect(),
        utilities: d
            .utilities
            .iter()
            .map(|u| UtilityDoc {
                scope: u.scope.iter().map(|&v| name(v)).collect(),
                table: u
                    .values
                    .iter()
                    .map(|x| x.negate_where(&mask).to_vec())
                    .collect(),
            })
            .collect(),
        temporal_order,
    };
    serde_json::to_string_pretty(&doc).expect("diagram document serializes")
}

impl fmt::Display for InfluenceDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} chance, {} decisions, {} utilities, {} objectives",
            self.name,
            self.chance_vars().count(),
            self.decisions().len(),
            self.utilities.len(),
            self.num_objectives()
        )
    }
}
