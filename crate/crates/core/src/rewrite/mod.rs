//! The transformation calculus over ground programs.
//!
//! [`RewriteState`] holds a program together with watch lists and one work
//! queue per transformation letter. Queue entries are `(rule, atom)` pairs
//! pushed when an atom becomes a fact or loses its last rule; they are
//! revalidated on pop, so stale entries cost O(1).

mod engine;
mod letter;
mod possible;
mod stats;

pub use engine::{EngineError, RewriteState, RuleId};
pub use letter::Letter;
pub use possible::possible_atoms;
pub use stats::{EvalStats, Snapshot};

use crate::model::{ConditionalFact, GroundProgram, PartialInterpretation, Truth};
use crate::strategy::{self, StrategyName};

/// The unique normal form w.r.t. P, S, N, F and L, computed with `((PSNF)*L)*`.
pub fn remainder(p: &GroundProgram) -> GroundProgram {
    remainder_with_stats(p).0
}

pub fn remainder_with_stats(p: &GroundProgram) -> (GroundProgram, EvalStats) {
    let run = strategy::run(&StrategyName::Remainder.expr(), p).expect("the remainder strategy uses no magic letters");
    (run.final_program, run.stats)
}

/// Reduces `p` by a partial interpretation: rules with a body literal false
/// in `w` are deleted, body literals true in `w` are removed.
pub fn wred(p: &GroundProgram, w: &PartialInterpretation) -> GroundProgram {
    let mut out = GroundProgram::new(p.table_arc().clone());
    out.set_tags(p.tags().cloned());
    for r in p.rules() {
        let refuted =
            r.pos.iter().any(|&a| w.value(a) == Truth::False) || r.neg.iter().any(|&a| w.value(a) == Truth::True);
        if refuted {
            continue;
        }
        let pos = r.pos.iter().copied().filter(|&a| w.value(a) != Truth::True);
        let neg = r.neg.iter().copied().filter(|&a| w.value(a) != Truth::False);
        out.insert(ConditionalFact::new(r.head, pos, neg));
    }
    out
}
