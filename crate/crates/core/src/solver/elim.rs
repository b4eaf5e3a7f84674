//! Bucket elimination over probability tables and set-valued utility
//! messages, with provenance kept for policy recovery.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::dominance::{covering_indices, tradeoff_maximal_indices, CoveringParams, TradeoffSet};
use crate::model::{strides, table_index, InfluenceDiagram, VarId, VarKind};
use crate::utility::{pareto_maximal_indices, UtilityVector};

use super::order::EliminationOrder;
use super::{LimitKind, SolveError, SolverLimits};

/// Relative tolerance on the constancy of a decision bucket's probability
/// message.
const PHI_CONSTANCY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) enum Pruning {
    Pareto,
    Tradeoff(Arc<TradeoffSet>),
    /// Pareto inside a bucket, one covering when a message is finalized.
    Covering(CoveringParams),
}

impl Pruning {
    fn intermediate(&self, points: &[UtilityVector]) -> Result<Vec<usize>, SolveError> {
        match self {
            Pruning::Pareto | Pruning::Covering(_) => Ok(pareto_maximal_indices(points)),
            Pruning::Tradeoff(theta) => Ok(tradeoff_maximal_indices(points, theta)?),
        }
    }

    fn finalize(&self, points: &[UtilityVector]) -> Result<Vec<usize>, SolveError> {
        match self {
            Pruning::Covering(params) => {
                let pareto = pareto_maximal_indices(points);
                let subset: Vec<UtilityVector> =
                    pareto.iter().map(|&i| points[i].clone()).collect();
                let kept = covering_indices(&subset, params)?;
                Ok(kept.into_iter().map(|i| pareto[i]).collect())
            }
            _ => self.intermediate(points),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PhiFactor {
    scope: Vec<VarId>,
    strides: Vec<usize>,
    values: Vec<f64>,
}

impl PhiFactor {
    fn new(scope: Vec<VarId>, values: Vec<f64>, cards: &[usize]) -> Self {
        let strides = strides(&scope, cards);
        Self {
            scope,
            strides,
            values,
        }
    }

    #[inline]
    fn at(&self, values: &[usize]) -> f64 {
        self.values[table_index(&self.scope, &self.strides, values)]
    }
}

/// One configuration of a utility message.
#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub points: Vec<UtilityVector>,
    /// Per point: for a chance owner, component point indices for each
    /// branch in turn; for a decision owner, the decision value followed by
    /// component point indices.
    pub prov: Vec<Vec<u32>>,
    /// Owner values with positive probability (chance owners).
    pub branches: Vec<u32>,
    pub reachable: bool,
}

impl Entry {
    fn leaf(point: UtilityVector) -> Self {
        Self {
            points: vec![point],
            prov: vec![Vec::new()],
            branches: Vec::new(),
            reachable: true,
        }
    }

    fn unreachable(dim: usize) -> Self {
        Self {
            points: vec![UtilityVector::zero(dim)],
            prov: vec![Vec::new()],
            branches: Vec::new(),
            reachable: false,
        }
    }

    fn bytes(&self) -> usize {
        let point = std::mem::size_of::<UtilityVector>() + std::mem::size_of::<Vec<u32>>();
        let dim = self.points.first().map_or(0, UtilityVector::dim);
        let spill = if dim > 4 { dim * 8 } else { 0 };
        self.points.len() * (point + spill) + self.prov.iter().map(|p| p.len() * 4).sum::<usize>()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Origin {
    pub var: VarId,
    pub components: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Message {
    pub scope: Vec<VarId>,
    pub strides: Vec<usize>,
    pub entries: Vec<Entry>,
    pub origin: Option<Origin>,
}

impl Message {
    #[inline]
    pub fn index(&self, values: &[usize]) -> usize {
        table_index(&self.scope, &self.strides, values)
    }
}

/// A root-level combination candidate.
#[derive(Debug, Clone)]
pub(crate) struct Cand {
    pub point: UtilityVector,
    pub prov: Vec<u32>,
}

/// Everything the top-down pass leaves behind.
#[derive(Debug)]
pub(crate) struct Elimination {
    pub messages: Vec<Message>,
    pub roots: Vec<usize>,
    pub root: Vec<Cand>,
    /// Message produced by each decision's bucket, indexed by variable.
    pub decision_messages: Vec<Option<usize>>,
    pub set_size_trace: Vec<usize>,
}

/// Points built per pruning round of a Minkowski sum.
const CHUNK_POINTS: usize = 1 << 14;

/// Minkowski sum of `acc` with `next`, pruned; `prov` grows by the index
/// into `next`. Large sums are built in chunks, each pruned together with
/// the survivors so far; `guard` sees the survivor count after every chunk.
fn extend(
    acc: Vec<Cand>,
    next: &[UtilityVector],
    pruning: &Pruning,
    guard: &dyn Fn(usize) -> Result<(), SolveError>,
) -> Result<Vec<Cand>, SolveError> {
    if next.len() == 1 {
        return Ok(acc
            .into_iter()
            .map(|mut c| {
                c.point.add_assign(&next[0]);
                c.prov.push(0);
                c
            })
            .collect());
    }
    let rows = (CHUNK_POINTS / next.len()).max(1);
    let mut kept: Vec<Cand> = Vec::new();
    for chunk in acc.chunks(rows) {
        let mut cands = std::mem::take(&mut kept);
        cands.reserve(chunk.len() * next.len());
        for c in chunk {
            for (j, n) in next.iter().enumerate() {
                let mut prov = Vec::with_capacity(c.prov.len() + 1);
                prov.extend_from_slice(&c.prov);
                prov.push(j as u32);
                cands.push(Cand {
                    point: c.point.add(n),
                    prov,
                });
            }
        }
        let points: Vec<UtilityVector> = cands.iter().map(|c| c.point.clone()).collect();
        let keep = pruning.intermediate(&points)?;
        let mut slots: Vec<Option<Cand>> = cands.into_iter().map(Some).collect();
        kept = keep.into_iter().filter_map(|k| slots[k].take()).collect();
        guard(kept.len())?;
    }
    Ok(kept)
}

fn seed_cands(dim: usize, prefix: Vec<u32>) -> Vec<Cand> {
    vec![Cand {
        point: UtilityVector::zero(dim),
        prov: prefix,
    }]
}

struct Bucket {
    phis: Vec<usize>,
    psis: Vec<usize>,
}

struct Engine<'a> {
    d: &'a InfluenceDiagram,
    cards: Vec<usize>,
    pos: Vec<usize>,
    dim: usize,
    pruning: Pruning,
    limits: &'a SolverLimits,
    start: Instant,
    phis: Vec<PhiFactor>,
    messages: Vec<Message>,
    buckets: Vec<Bucket>,
    roots: Vec<usize>,
    bytes: usize,
    trace: Vec<usize>,
    /// Chance variables observed before each decision, indexed by variable.
    observed: Vec<Vec<VarId>>,
}

impl<'a> Engine<'a> {
    fn extend(&self, acc: Vec<Cand>, next: &[UtilityVector]) -> Result<Vec<Cand>, SolveError> {
        extend(acc, next, &self.pruning, &|n| self.guard(n))
    }

    /// Time check plus a bound on the number of live candidate points.
    fn guard(&self, points: usize) -> Result<(), SolveError> {
        self.check_time()?;
        if points > self.point_cap() {
            return Err(self.limit(LimitKind::Memory));
        }
        Ok(())
    }

    fn point_cap(&self) -> usize {
        let per_point = std::mem::size_of::<UtilityVector>() + self.dim * 8 + 64;
        (self.limits.memory_limit / per_point as u64).min(usize::MAX as u64) as usize
    }

    fn check_time(&self) -> Result<(), SolveError> {
        if self.start.elapsed() > self.limits.time_limit {
            return Err(self.limit(LimitKind::Time));
        }
        Ok(())
    }

    fn limit(&self, kind: LimitKind) -> SolveError {
        SolveError::LimitExceeded {
            kind,
            elapsed: self.start.elapsed().as_secs_f64(),
            completed_buckets: self.trace.len(),
            set_size_trace: self.trace.clone(),
        }
    }

    fn bucket_of(&self, scope: &[VarId]) -> Option<usize> {
        scope.iter().map(|&v| self.pos[v]).min()
    }

    fn place_phi(&mut self, phi: PhiFactor) {
        if let Some(b) = self.bucket_of(&phi.scope) {
            self.buckets[b].phis.push(self.phis.len());
            self.phis.push(phi);
        }
    }

    fn place_message(&mut self, msg: Message) {
        let id = self.messages.len();
        match self.bucket_of(&msg.scope) {
            Some(b) => self.buckets[b].psis.push(id),
            None => self.roots.push(id),
        }
        self.bytes += msg.entries.iter().map(Entry::bytes).sum::<usize>();
        self.messages.push(msg);
    }

    /// Scope of the bucket's utility message. A decision's message also
    /// ranges over every chance variable observed before it, so that rules
    /// may condition on observations that do not affect its utility.
    fn union_scope(&self, var: VarId, bucket: &Bucket) -> Vec<VarId> {
        let mut scope: Vec<VarId> = bucket
            .phis
            .iter()
            .flat_map(|&i| self.phis[i].scope.iter().copied())
            .chain(
                bucket
                    .psis
                    .iter()
                    .flat_map(|&i| self.messages[i].scope.iter().copied()),
            )
            .chain(self.observed[var].iter().copied())
            .filter(|&v| v != var)
            .collect();
        scope.sort_unstable();
        scope.dedup();
        scope
    }

    fn phi_product(&self, phis: &[usize], values: &[usize]) -> f64 {
        let mut p = 1.0;
        for &i in phis {
            p *= self.phis[i].at(values);
            if p == 0.0 {
                break;
            }
        }
        p
    }

    /// Minkowski sum of the component sets at the current assignment.
    fn component_sum(
        &self,
        psis: &[usize],
        values: &[usize],
        prefix: Vec<u32>,
    ) -> Result<Vec<Cand>, SolveError> {
        let mut acc = seed_cands(self.dim, prefix);
        for &m in psis {
            let msg = &self.messages[m];
            acc = self.extend(acc, &msg.entries[msg.index(values)].points)?;
        }
        Ok(acc)
    }

    fn chance_entry(
        &self,
        var: VarId,
        bucket: &Bucket,
        values: &mut [usize],
    ) -> Result<Entry, SolveError> {
        let card = self.cards[var];
        let mut weights = Vec::with_capacity(card);
        for y in 0..card {
            values[var] = y;
            weights.push(self.phi_product(&bucket.phis, values));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Ok(Entry::unreachable(self.dim));
        }
        let mut branches = Vec::new();
        let mut branch_sets = Vec::new();
        for (y, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            values[var] = y;
            let scale = w / total;
            let mut set = self.component_sum(&bucket.psis, values, Vec::new())?;
            for c in &mut set {
                c.point = c.point.scale(scale);
            }
            branches.push(y as u32);
            branch_sets.push(set);
        }
        let mut acc = seed_cands(self.dim, Vec::new());
        for set in &branch_sets {
            let pts: Vec<UtilityVector> = set.iter().map(|c| c.point.clone()).collect();
            acc = self.extend(acc, &pts)?;
        }
        let pts: Vec<UtilityVector> = acc.iter().map(|c| c.point.clone()).collect();
        let keep = self.pruning.finalize(&pts)?;
        let mut points = Vec::with_capacity(keep.len());
        let mut prov = Vec::with_capacity(keep.len());
        for k in keep {
            let c = &acc[k];
            let flat: Vec<u32> = c
                .prov
                .iter()
                .zip(&branch_sets)
                .flat_map(|(&j, set)| set[j as usize].prov.iter().copied())
                .collect();
            points.push(c.point.clone());
            prov.push(flat);
        }
        Ok(Entry {
            points,
            prov,
            branches,
            reachable: true,
        })
    }

    fn decision_entry(
        &self,
        var: VarId,
        bucket: &Bucket,
        values: &mut [usize],
        rng: &mut ChaCha8Rng,
    ) -> Result<Entry, SolveError> {
        let card = self.cards[var];
        let mut cands = Vec::new();
        let mut phi0 = None;
        for dv in 0..card {
            values[var] = dv;
            let phi = self.phi_product(&bucket.phis, values);
            let reference = *phi0.get_or_insert(phi);
            if (phi - reference).abs() > PHI_CONSTANCY_TOLERANCE * reference.abs().max(1.0) {
                return Err(SolveError::Invariant(format!(
                    "probability message varies with decision {} ({reference} vs {phi})",
                    self.d.variables[var].name
                )));
            }
            if phi <= 0.0 {
                continue;
            }
            cands.extend(self.component_sum(&bucket.psis, values, vec![dv as u32])?);
        }
        if cands.is_empty() {
            return Ok(Entry::unreachable(self.dim));
        }
        cands.shuffle(rng);
        let pts: Vec<UtilityVector> = cands.iter().map(|c| c.point.clone()).collect();
        let keep = self.pruning.finalize(&pts)?;
        let mut points = Vec::with_capacity(keep.len());
        let mut prov = Vec::with_capacity(keep.len());
        for k in keep {
            points.push(cands[k].point.clone());
            prov.push(std::mem::take(&mut cands[k].prov));
        }
        Ok(Entry {
            points,
            prov,
            branches: Vec::new(),
            reachable: true,
        })
    }

    /// Probability message of the bucket, or `None` when its scope is empty.
    fn phi_message(&self, var: VarId, bucket: &Bucket) -> Option<PhiFactor> {
        let mut scope: Vec<VarId> = bucket
            .phis
            .iter()
            .flat_map(|&i| self.phis[i].scope.iter().copied())
            .filter(|&v| v != var)
            .collect();
        scope.sort_unstable();
        scope.dedup();
        if scope.is_empty() {
            return None;
        }
        let size: usize = scope.iter().map(|&v| self.cards[v]).product();
        let mut values = vec![0usize; self.cards.len()];
        let mut table = Vec::with_capacity(size);
        let chance = self.d.variables[var].kind == VarKind::Chance;
        for _ in 0..size {
            let p = if chance {
                (0..self.cards[var])
                    .map(|y| {
                        values[var] = y;
                        self.phi_product(&bucket.phis, &values)
                    })
                    .sum()
            } else {
                values[var] = 0;
                self.phi_product(&bucket.phis, &values)
            };
            table.push(p);
            advance(&scope, &self.cards, &mut values);
        }
        Some(PhiFactor::new(scope, table, &self.cards))
    }

    fn eliminate(
        &mut self,
        step: usize,
        var: VarId,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<usize>, SolveError> {
        self.check_time()?;
        let bucket = std::mem::replace(
            &mut self.buckets[step],
            Bucket {
                phis: Vec::new(),
                psis: Vec::new(),
            },
        );
        let phi_msg = self.phi_message(var, &bucket);
        let mut produced = None;
        let mut largest = 0;
        if !bucket.psis.is_empty() {
            let scope = self.union_scope(var, &bucket);
            let size: usize = scope.iter().map(|&v| self.cards[v]).product();
            let mut values = vec![0usize; self.cards.len()];
            let mut entries = Vec::with_capacity(size);
            let decision = self.d.variables[var].kind == VarKind::Decision;
            for i in 0..size {
                if i % 32 == 31 {
                    self.check_time()?;
                }
                let entry = if decision {
                    self.decision_entry(var, &bucket, &mut values, rng)?
                } else {
                    self.chance_entry(var, &bucket, &mut values)?
                };
                largest = largest.max(entry.points.len());
                entries.push(entry);
                advance(&scope, &self.cards, &mut values);
            }
            let strides = strides(&scope, &self.cards);
            produced = Some(self.messages.len());
            self.place_message(Message {
                scope,
                strides,
                entries,
                origin: Some(Origin {
                    var,
                    components: bucket.psis.clone(),
                }),
            });
        }
        if let Some(phi) = phi_msg {
            self.place_phi(phi);
        }
        self.trace.push(largest);
        if self.bytes as u64 > self.limits.memory_limit {
            return Err(self.limit(LimitKind::Memory));
        }
        Ok(produced)
    }
}

/// Steps the odometer over `scope`, last variable fastest.
#[inline]
pub(crate) fn advance(scope: &[VarId], cards: &[usize], values: &mut [usize]) {
    for &v in scope.iter().rev() {
        values[v] += 1;
        if values[v] < cards[v] {
            return;
        }
        values[v] = 0;
    }
}

pub(crate) fn run(
    d: &InfluenceDiagram,
    order: &EliminationOrder,
    pruning: Pruning,
    limits: &SolverLimits,
    rng: &mut ChaCha8Rng,
) -> Result<Elimination, SolveError> {
    let cards: Vec<usize> = d.variables.iter().map(|v| v.card()).collect();
    let pos = order.positions(d.num_vars());
    let dim = d.num_objectives();
    let mut engine = Engine {
        d,
        cards,
        pos,
        dim,
        pruning,
        limits,
        start: Instant::now(),
        phis: Vec::new(),
        messages: Vec::new(),
        buckets: (0..order.len())
            .map(|_| Bucket {
                phis: Vec::new(),
                psis: Vec::new(),
            })
            .collect(),
        roots: Vec::new(),
        bytes: 0,
        trace: Vec::with_capacity(order.len()),
        observed: vec![Vec::new(); d.num_vars()],
    };
    for (k, &dec) in d.decisions().iter().enumerate() {
        engine.observed[dec] = d
            .temporal
            .predecessors(k)
            .into_iter()
            .filter(|&v| d.variables[v].kind == VarKind::Chance)
            .collect();
    }
    for cpt in &d.cpts {
        let phi = PhiFactor::new(cpt.scope(), cpt.values.clone(), &engine.cards);
        engine.place_phi(phi);
    }
    for u in &d.utilities {
        let strides = strides(&u.scope, &engine.cards);
        engine.place_message(Message {
            scope: u.scope.clone(),
            strides,
            entries: u.values.iter().cloned().map(Entry::leaf).collect(),
            origin: None,
        });
    }

    let mut decision_messages = vec![None; d.num_vars()];
    for (step, &var) in order.sequence.iter().enumerate() {
        let produced = engine.eliminate(step, var, rng)?;
        if d.variables[var].kind == VarKind::Decision {
            decision_messages[var] = produced;
        }
    }
    engine.check_time()?;

    // empty-scope messages are summed at the root; covering is not applied
    // again here
    let mut root = seed_cands(dim, Vec::new());
    let root_pruning = match &engine.pruning {
        Pruning::Covering(_) => Pruning::Pareto,
        other => other.clone(),
    };
    for &r in &engine.roots {
        root = extend(
            root,
            &engine.messages[r].entries[0].points,
            &root_pruning,
            &|n| engine.guard(n),
        )?;
    }
    let pts: Vec<UtilityVector> = root.iter().map(|c| c.point.clone()).collect();
    let keep = root_pruning.intermediate(&pts)?;
    let root = keep.into_iter().map(|k| root[k].clone()).collect();

    Ok(Elimination {
        messages: engine.messages,
        roots: engine.roots,
        root,
        decision_messages,
        set_size_trace: engine.trace,
    })
}
