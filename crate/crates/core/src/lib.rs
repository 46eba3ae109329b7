//! Well-founded semantics for normal logic programs computed by program
//! transformation.
//!
//! A program is grounded into conditional facts, then rewritten by
//! transformations (positive/negative reduction, success, failure, loop
//! detection, magic reductions) under a regular strategy expression. The
//! rewritten program encodes the well-founded model: its facts are true,
//! atoms without rules are false, everything else is undefined.
//!
//! ```
//! use wfs_core::{parser, ground, rewrite};
//!
//! let prog = parser::parse_program("p. q :- not p. q :- r. r :- q.").unwrap();
//! let gp = ground::intelligent_ground(&prog).unwrap();
//! let rem = rewrite::remainder(&gp);
//! assert_eq!(rem.to_string(), "p.\n");
//! ```

pub mod gen;
pub mod ground;
pub mod magic;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod rewrite;
pub mod strategy;

pub use model::{
    AtomId, AtomSet, AtomTable, ConditionalFact, GroundProgram, PartialInterpretation, Program, Rule, Truth,
};
pub use parser::{parse_program, parse_query, parse_strategy, Query, StrategyExpr};
pub use rewrite::{EvalStats, Letter, RewriteState};
pub use strategy::{run, StrategyName, StrategyRun};
