//! Domain model: terms, rules, programs, ground programs, interpretations.

mod atomset;
mod ground;
mod interp;
mod syntax;
mod table;

pub use atomset::AtomSet;
pub use ground::{complement, ConditionalFact, DisplayRule, GroundLiteral, GroundProgram, MagicTags, PropBuilder};
pub use interp::{PartialInterpretation, Truth};
pub use syntax::{Atom, Literal, Program, Rule, Term};
pub use table::{AtomId, AtomTable, ConstId, DisplayAtom, PredId};
