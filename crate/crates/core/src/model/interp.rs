//! Three-valued (partial) interpretations.

use std::collections::BTreeSet;
use std::fmt;

use super::atomset::AtomSet;
use super::table::{AtomId, AtomTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Undefined,
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Undefined => "undefined",
        })
    }
}

/// A consistent pair of true and false atom sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialInterpretation {
    true_atoms: AtomSet,
    false_atoms: AtomSet,
}

impl PartialInterpretation {
    /// Returns `None` when the sets overlap.
    pub fn new(true_atoms: AtomSet, false_atoms: AtomSet) -> Option<Self> {
        if true_atoms.iter().any(|a| false_atoms.contains(a)) {
            return None;
        }
        Some(PartialInterpretation { true_atoms, false_atoms })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn true_atoms(&self) -> &AtomSet {
        &self.true_atoms
    }

    pub fn false_atoms(&self) -> &AtomSet {
        &self.false_atoms
    }

    pub fn value(&self, a: AtomId) -> Truth {
        if self.true_atoms.contains(a) {
            Truth::True
        } else if self.false_atoms.contains(a) {
            Truth::False
        } else {
            Truth::Undefined
        }
    }

    /// Restriction to `scope`.
    pub fn restrict(&self, scope: &AtomSet) -> Self {
        PartialInterpretation {
            true_atoms: self.true_atoms.intersection(scope),
            false_atoms: self.false_atoms.intersection(scope),
        }
    }

    /// Atoms of `scope` that are neither true nor false.
    pub fn undefined_in(&self, scope: &AtomSet) -> AtomSet {
        scope.iter().filter(|&a| self.value(a) == Truth::Undefined).collect()
    }

    /// Named form: (true atoms, undefined atoms of `scope`). Every other
    /// atom, including atoms the table never saw, counts as false.
    pub fn named(&self, table: &AtomTable, scope: &AtomSet) -> (BTreeSet<String>, BTreeSet<String>) {
        let t = self.true_atoms.iter().filter(|&a| scope.contains(a)).map(|a| table.atom_string(a)).collect();
        let u = self.undefined_in(scope).iter().map(|a| table.atom_string(a)).collect();
        (t, u)
    }
}
