use crate::model::AtomSet;

use super::Letter;

/// Facts and heads observed at an iteration boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub label: String,
    pub facts: usize,
    pub heads: usize,
    /// Full `(facts, heads)` sets when requested.
    pub sets: Option<(AtomSet, AtomSet)>,
}

/// Counters for one evaluation.
///
/// Work units: one per P/S/N/F/M/R application, the current literal count
/// per loop-detection pass, one per rule instance derived by grounding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub applications: [u64; 7],
    pub work_units: u64,
    pub ground_derivations: u64,
    /// Rules deleted by loop-detection passes.
    pub l_deletions: u64,
    pub snapshots: Vec<Snapshot>,
}

impl EvalStats {
    pub fn count(&self, l: Letter) -> u64 {
        self.applications[l.index()]
    }

    /// Adds grounding effort to the totals.
    pub fn add_grounding(&mut self, derived: u64) {
        self.ground_derivations += derived;
        self.work_units += derived;
    }

    pub fn merge(&mut self, other: &EvalStats) {
        for (a, b) in self.applications.iter_mut().zip(other.applications) {
            *a += b;
        }
        self.work_units += other.work_units;
        self.ground_derivations += other.ground_derivations;
        self.l_deletions += other.l_deletions;
    }
}
