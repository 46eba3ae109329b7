//! Semi-naive derivation of relevant ground rule instances.
//!
//! Atoms are processed one at a time in FIFO order. When atom `a` is
//! processed, every positive body literal that `a` matches is joined
//! against the atoms processed so far (including `a`). An instance is thus
//! produced when its last body atom is processed; duplicates from atoms
//! occurring twice in one body are removed at insertion.

use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexSet;

use crate::model::{AtomId, AtomSet, AtomTable, ConditionalFact, ConstId, PredId};

use super::compile::{Binding, CAtom, CRule};

/// Processed atoms with per-predicate and per-argument indexes.
#[derive(Default)]
struct Store {
    by_pred: HashMap<PredId, Vec<AtomId>>,
    by_arg: HashMap<(PredId, usize, ConstId), Vec<AtomId>>,
}

impl Store {
    fn add(&mut self, table: &AtomTable, a: AtomId) {
        let p = table.pred_of(a);
        self.by_pred.entry(p).or_default().push(a);
        for (i, &c) in table.args_of(a).iter().enumerate() {
            self.by_arg.entry((p, i, c)).or_default().push(a);
        }
    }

    fn candidates(&self, lit: &CAtom, b: &Binding) -> &[AtomId] {
        let list = match lit.bound_arg(b) {
            Some((i, c)) => self.by_arg.get(&(lit.pred, i, c)),
            None => self.by_pred.get(&lit.pred),
        };
        list.map_or(&[], Vec::as_slice)
    }
}

/// Context of lower groups already evaluated.
pub(crate) struct Prior<'a> {
    pub facts: &'a AtomSet,
    pub heads: &'a AtomSet,
    /// Eager simplification: predicates defined in the current group. Atoms
    /// of other predicates are fully decided by `facts`/`heads`.
    pub simplify: Option<&'a HashSet<PredId>>,
}

struct Emitter<'a> {
    table: &'a mut AtomTable,
    prior: &'a Prior<'a>,
    out: IndexSet<ConditionalFact>,
    known: AtomSet,
    queue: VecDeque<AtomId>,
}

impl Emitter<'_> {
    fn emit(&mut self, rule: &CRule, b: &Binding) {
        let mut neg = Vec::with_capacity(rule.neg.len());
        for lit in &rule.neg {
            let a = lit.instantiate(b, self.table);
            if self.prior.facts.contains(a) {
                return;
            }
            let decided = self.prior.simplify.is_some_and(|g| !g.contains(&lit.pred));
            if !(decided && !self.prior.heads.contains(a)) {
                neg.push(a);
            }
        }
        let mut pos = Vec::with_capacity(rule.pos.len());
        for lit in &rule.pos {
            let a = lit.instantiate(b, self.table);
            if !(self.prior.simplify.is_some() && self.prior.facts.contains(a)) {
                pos.push(a);
            }
        }
        let head = rule.head.instantiate(b, self.table);
        if self.out.insert(ConditionalFact::new(head, pos, neg)) && self.known.insert(head) {
            self.queue.push_back(head);
        }
    }
}

/// `lfp` of the instance operator for `rules`, given lower-group context.
pub(crate) fn derive(rules: &[CRule], table: &mut AtomTable, prior: &Prior<'_>) -> Vec<ConditionalFact> {
    let mut watch: HashMap<PredId, Vec<(usize, usize)>> = HashMap::new();
    for (ri, r) in rules.iter().enumerate() {
        for (pi, lit) in r.pos.iter().enumerate() {
            watch.entry(lit.pred).or_default().push((ri, pi));
        }
    }
    let mut em = Emitter { table, prior, out: IndexSet::new(), known: AtomSet::new(), queue: VecDeque::new() };
    for a in prior.heads.iter() {
        em.known.insert(a);
        em.queue.push_back(a);
    }
    for r in rules.iter().filter(|r| r.pos.is_empty()) {
        em.emit(r, &vec![None; r.nvars]);
    }
    let mut store = Store::default();
    let mut trail = Vec::new();
    while let Some(a) = em.queue.pop_front() {
        store.add(em.table, a);
        let pred = em.table.pred_of(a);
        let Some(occ) = watch.get(&pred) else { continue };
        let args: Vec<ConstId> = em.table.args_of(a).to_vec();
        for &(ri, pi) in occ {
            let rule = &rules[ri];
            let mut b: Binding = vec![None; rule.nvars];
            trail.clear();
            if rule.pos[pi].unify(&args, &mut b, &mut trail) {
                join(rule, pi, 0, &mut b, &store, &mut em);
            }
        }
    }
    em.out.into_iter().collect()
}

fn join(rule: &CRule, skip: usize, j: usize, b: &mut Binding, store: &Store, em: &mut Emitter<'_>) {
    if j == rule.pos.len() {
        em.emit(rule, b);
        return;
    }
    if j == skip {
        return join(rule, skip, j + 1, b, store, em);
    }
    let lit = &rule.pos[j];
    let mut trail = Vec::new();
    for &c in store.candidates(lit, b) {
        if lit.unify(em.table.args_of(c), b, &mut trail) {
            join(rule, skip, j + 1, b, store, em);
        }
        for v in trail.drain(..) {
            b[v] = None;
        }
    }
}
