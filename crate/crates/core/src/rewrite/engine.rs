use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::model::{AtomId, AtomSet, AtomTable, ConditionalFact, GroundProgram, MagicTags};

use super::{EvalStats, Letter, Snapshot};

pub type RuleId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("monotonicity violation: {0}")]
    Invariant(String),
    #[error("strategy uses {0} but the program carries no magic annotation")]
    MissingMagicMeta(Letter),
}

#[derive(Clone, Debug)]
struct Slot {
    rule: ConditionalFact,
    alive: bool,
}

/// Incremental rewriting engine over one ground program.
#[derive(Clone, Debug)]
pub struct RewriteState {
    table: Arc<AtomTable>,
    tags: Option<Arc<MagicTags>>,
    slots: Vec<Slot>,
    index: HashMap<ConditionalFact, RuleId>,
    head_count: Vec<u32>,
    fact: Vec<bool>,
    pos_occ: Vec<Vec<RuleId>>,
    neg_occ: Vec<Vec<RuleId>>,
    queues: [VecDeque<(RuleId, AtomId)>; 7],
    literal_count: u64,
    version: u64,
    stats: EvalStats,
    derived_facts: Vec<AtomId>,
}

impl RewriteState {
    pub fn new(p: &GroundProgram) -> Self {
        let n = p.table().num_atoms();
        let mut s = RewriteState {
            table: p.table_arc().clone(),
            tags: p.tags().cloned(),
            slots: Vec::with_capacity(p.len()),
            index: HashMap::with_capacity(p.len()),
            head_count: vec![0; n],
            fact: vec![false; n],
            pos_occ: vec![Vec::new(); n],
            neg_occ: vec![Vec::new(); n],
            queues: Default::default(),
            literal_count: 0,
            version: 0,
            stats: EvalStats::default(),
            derived_facts: Vec::new(),
        };
        for (i, r) in p.rules().enumerate() {
            let id = i as RuleId;
            s.head_count[r.head as usize] += 1;
            if r.is_fact() {
                s.fact[r.head as usize] = true;
            }
            for &a in r.pos.iter() {
                s.pos_occ[a as usize].push(id);
            }
            for &a in r.neg.iter() {
                s.neg_occ[a as usize].push(id);
            }
            s.literal_count += r.size() as u64;
            s.index.insert(r.clone(), id);
            s.slots.push(Slot { rule: r.clone(), alive: true });
        }
        for id in 0..s.slots.len() as RuleId {
            let r = &s.slots[id as usize].rule;
            for &a in r.pos.iter() {
                if s.fact[a as usize] {
                    s.queues[Letter::S.index()].push_back((id, a));
                }
                if s.head_count[a as usize] == 0 {
                    s.queues[Letter::F.index()].push_back((id, a));
                }
                if s.tags.as_ref().is_some_and(|t| t.is_filter_for(&s.table, r.head, a)) {
                    s.queues[Letter::M.index()].push_back((id, a));
                }
            }
            for &a in r.neg.iter() {
                if s.head_count[a as usize] == 0 {
                    s.queues[Letter::P.index()].push_back((id, a));
                }
                if s.fact[a as usize] {
                    s.queues[Letter::N.index()].push_back((id, a));
                }
            }
            s.queue_if_restricted_shape(id);
        }
        s
    }

    pub fn table(&self) -> &AtomTable {
        &self.table
    }

    pub fn has_magic(&self) -> bool {
        self.tags.is_some()
    }

    pub fn stats(&self) -> &EvalStats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut EvalStats {
        &mut self.stats
    }

    /// Bumped on every change to the rule set.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn literal_count(&self) -> u64 {
        self.literal_count
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Atoms that became facts during this evaluation, in order.
    pub fn derived_facts(&self) -> &[AtomId] {
        &self.derived_facts
    }

    pub fn is_fact(&self, a: AtomId) -> bool {
        self.fact.get(a as usize).copied().unwrap_or(false)
    }

    pub fn is_head(&self, a: AtomId) -> bool {
        self.head_count.get(a as usize).is_some_and(|&c| c > 0)
    }

    pub fn facts(&self) -> AtomSet {
        (0..self.fact.len() as AtomId).filter(|&a| self.fact[a as usize]).collect()
    }

    pub fn heads(&self) -> AtomSet {
        (0..self.head_count.len() as AtomId).filter(|&a| self.head_count[a as usize] > 0).collect()
    }

    pub fn rules(&self) -> impl Iterator<Item = &ConditionalFact> {
        self.slots.iter().filter(|s| s.alive).map(|s| &s.rule)
    }

    /// The current rule set as a program.
    pub fn to_program(&self) -> GroundProgram {
        let mut p = GroundProgram::from_rules(self.table.clone(), self.rules().cloned());
        p.set_tags(self.tags.clone());
        p
    }

    pub fn snapshot(&mut self, label: impl Into<String>, with_sets: bool) {
        let facts = self.facts();
        let heads = self.heads();
        self.stats.snapshots.push(Snapshot {
            label: label.into(),
            facts: facts.len(),
            heads: heads.len(),
            sets: with_sets.then_some((facts, heads)),
        });
    }

    /// Runs one letter to its normal form (a single pass for `L`).
    pub fn normal_form(&mut self, l: Letter) -> Result<(), EngineError> {
        match l {
            Letter::L => {
                self.apply_l()?;
            }
            Letter::M | Letter::R if self.tags.is_none() => {
                log::warn!("{l} skipped: program carries no magic annotation");
            }
            _ => {
                while let Some((r, a)) = self.queues[l.index()].pop_front() {
                    if self.valid(l, r, a) {
                        self.apply(l, r, a)?;
                    }
                }
            }
        }
        if cfg!(debug_assertions) {
            self.check_caches()?;
        }
        Ok(())
    }

    /// One loop-detection pass: deletes every rule whose head lies outside
    /// `lfp(T_{P,∅})`. Returns the number of deleted rules.
    pub fn apply_l(&mut self) -> Result<usize, EngineError> {
        self.stats.applications[Letter::L.index()] += 1;
        self.stats.work_units += self.literal_count;
        let possible = self.possible();
        let before = self.literal_count;
        let mut deleted = 0;
        for id in 0..self.slots.len() {
            let slot = &self.slots[id];
            if slot.alive && !possible[slot.rule.head as usize] {
                self.kill(id as RuleId, false)?;
                deleted += 1;
            }
        }
        if deleted > 0 {
            self.version += 1;
            self.stats.l_deletions += deleted as u64;
            if self.literal_count >= before {
                return Err(EngineError::Invariant("loop detection did not shrink the program".into()));
            }
        }
        Ok(deleted)
    }

    /// Applies one randomly chosen P, S, N, F or L step. Returns the letter
    /// applied, or `None` when the program is irreducible for all five.
    pub fn step_random<G: Rng + ?Sized>(&mut self, rng: &mut G) -> Result<Option<Letter>, EngineError> {
        let mut letters = [Letter::P, Letter::S, Letter::N, Letter::F, Letter::L];
        letters.shuffle(rng);
        for l in letters {
            if l == Letter::L {
                let possible = self.possible();
                if self.rules().any(|r| !possible[r.head as usize]) {
                    self.apply_l()?;
                    return Ok(Some(l));
                }
                continue;
            }
            while !self.queues[l.index()].is_empty() {
                let q = &mut self.queues[l.index()];
                let i = rng.random_range(0..q.len());
                let (r, a) = q.swap_remove_back(i).expect("index in range");
                if self.valid(l, r, a) {
                    self.apply(l, r, a)?;
                    return Ok(Some(l));
                }
            }
        }
        Ok(None)
    }

    fn possible(&self) -> Vec<bool> {
        let mut missing: Vec<u32> = self.slots.iter().map(|s| s.rule.pos.len() as u32).collect();
        let mut possible = vec![false; self.head_count.len()];
        let mut stack = Vec::new();
        for s in &self.slots {
            if s.alive && s.rule.pos.is_empty() && !possible[s.rule.head as usize] {
                possible[s.rule.head as usize] = true;
                stack.push(s.rule.head);
            }
        }
        while let Some(a) = stack.pop() {
            for &r in &self.pos_occ[a as usize] {
                let s = &self.slots[r as usize];
                if !s.alive || s.rule.pos.binary_search(&a).is_err() {
                    continue;
                }
                missing[r as usize] -= 1;
                if missing[r as usize] == 0 && !possible[s.rule.head as usize] {
                    possible[s.rule.head as usize] = true;
                    stack.push(s.rule.head);
                }
            }
        }
        possible
    }

    fn valid(&self, l: Letter, r: RuleId, a: AtomId) -> bool {
        let s = &self.slots[r as usize];
        if !s.alive {
            return false;
        }
        let in_pos = || s.rule.pos.binary_search(&a).is_ok();
        let in_neg = || s.rule.neg.binary_search(&a).is_ok();
        let headless = self.head_count[a as usize] == 0;
        match l {
            Letter::P => headless && in_neg(),
            Letter::N => self.fact[a as usize] && in_neg(),
            Letter::S => self.fact[a as usize] && in_pos(),
            Letter::F => headless && in_pos(),
            Letter::M => !headless && in_pos(),
            Letter::R => !headless && s.rule.neg.is_empty() && *s.rule.pos == [a],
            Letter::L => false,
        }
    }

    fn apply(&mut self, l: Letter, r: RuleId, a: AtomId) -> Result<(), EngineError> {
        let before = self.literal_count;
        match l {
            Letter::P => self.remove_literal(r, a, true)?,
            Letter::S | Letter::M | Letter::R => self.remove_literal(r, a, false)?,
            Letter::N | Letter::F => self.kill(r, false)?,
            Letter::L => unreachable!("loop detection is a whole-program pass"),
        }
        self.stats.applications[l.index()] += 1;
        self.stats.work_units += 1;
        self.version += 1;
        if self.literal_count >= before {
            return Err(EngineError::Invariant(format!("{l} application did not shrink the program")));
        }
        Ok(())
    }

    fn remove_literal(&mut self, r: RuleId, a: AtomId, negated: bool) -> Result<(), EngineError> {
        let old = self.slots[r as usize].rule.clone();
        self.index.remove(&old);
        let strip = |v: &[AtomId]| v.iter().copied().filter(|&x| x != a).collect::<Box<[AtomId]>>();
        let new = if negated {
            ConditionalFact { head: old.head, pos: old.pos.clone(), neg: strip(&old.neg) }
        } else {
            ConditionalFact { head: old.head, pos: strip(&old.pos), neg: old.neg.clone() }
        };
        self.literal_count -= 1;
        let duplicate = self.index.contains_key(&new);
        self.slots[r as usize].rule = new.clone();
        if duplicate {
            // The shortened rule already exists: the two merge.
            return self.kill(r, true);
        }
        self.index.insert(new.clone(), r);
        if new.is_fact() {
            let h = new.head as usize;
            debug_assert!(!self.fact[h], "an existing fact would have been a duplicate");
            self.fact[h] = true;
            self.derived_facts.push(new.head);
            for &x in &self.pos_occ[h] {
                self.queues[Letter::S.index()].push_back((x, new.head));
            }
            for &x in &self.neg_occ[h] {
                self.queues[Letter::N.index()].push_back((x, new.head));
            }
        } else {
            self.queue_if_restricted_shape(r);
        }
        Ok(())
    }

    /// Deletes rule `r`. `merged` marks deletion of a duplicate, which leaves
    /// the rule set's facts untouched.
    fn kill(&mut self, r: RuleId, merged: bool) -> Result<(), EngineError> {
        let slot = &mut self.slots[r as usize];
        debug_assert!(slot.alive);
        slot.alive = false;
        let rule = slot.rule.clone();
        if !merged {
            self.index.remove(&rule);
            if rule.is_fact() {
                return Err(EngineError::Invariant(format!("fact {} deleted", self.table.display(rule.head))));
            }
        }
        self.literal_count -= rule.size() as u64;
        let h = rule.head as usize;
        self.head_count[h] -= 1;
        if self.head_count[h] == 0 {
            if self.fact[h] {
                return Err(EngineError::Invariant(format!("fact {} lost its rule", self.table.display(rule.head))));
            }
            for &x in &self.neg_occ[h] {
                self.queues[Letter::P.index()].push_back((x, rule.head));
            }
            for &x in &self.pos_occ[h] {
                self.queues[Letter::F.index()].push_back((x, rule.head));
            }
        }
        Ok(())
    }

    fn queue_if_restricted_shape(&mut self, r: RuleId) {
        let Some(tags) = &self.tags else { return };
        let rule = &self.slots[r as usize].rule;
        if rule.neg.is_empty() && rule.pos.len() == 1 && tags.is_filter_for(&self.table, rule.head, rule.pos[0]) {
            self.queues[Letter::R.index()].push_back((r, rule.pos[0]));
        }
    }

    /// Compares the incremental caches with a recomputation from scratch.
    pub fn check_caches(&self) -> Result<(), EngineError> {
        let mut counts = vec![0u32; self.head_count.len()];
        let mut facts = vec![false; self.fact.len()];
        let mut size = 0u64;
        let mut live = 0usize;
        for r in self.rules() {
            counts[r.head as usize] += 1;
            facts[r.head as usize] |= r.is_fact();
            size += r.size() as u64;
            live += 1;
        }
        if counts != self.head_count || facts != self.fact || size != self.literal_count || live != self.index.len() {
            return Err(EngineError::Invariant("cached facts/heads disagree with the rule set".into()));
        }
        Ok(())
    }
}
