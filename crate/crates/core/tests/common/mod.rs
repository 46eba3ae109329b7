#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use wfs_core::model::PropBuilder;
use wfs_core::{GroundProgram, Truth};

/// Random propositional programs: `atoms` pool size, up to `rules` rules of
/// up to four body literals, each negative with probability 0.4.
pub fn ground_program(atoms: usize, rules: usize) -> impl Strategy<Value = GroundProgram> {
    (1..=atoms)
        .prop_flat_map(move |n| {
            let lit = (0..n, prop::bool::weighted(0.4));
            prop::collection::vec((0..n, prop::collection::vec(lit, 0..=4)), 0..=rules)
        })
        .prop_map(build)
}

pub fn build(rules: Vec<(usize, Vec<(usize, bool)>)>) -> GroundProgram {
    let mut b = PropBuilder::new();
    for (h, body) in rules {
        let name = |i: usize| format!("a{i}");
        let pos: Vec<String> = body.iter().filter(|l| !l.1).map(|l| name(l.0)).collect();
        let neg: Vec<String> = body.iter().filter(|l| l.1).map(|l| name(l.0)).collect();
        let pos: Vec<&str> = pos.iter().map(String::as_str).collect();
        let neg: Vec<&str> = neg.iter().map(String::as_str).collect();
        b.rule(&name(h), &pos, &neg);
    }
    b.build()
}

/// Truth value of the atom printed as `name` in a transformed program:
/// facts are true, atoms without rules (or never interned) false.
pub fn value_of(p: &GroundProgram, name: &str) -> Truth {
    match p.table().lookup_display(name) {
        Some(a) if p.is_fact(a) => Truth::True,
        Some(a) if p.is_head(a) => Truth::Undefined,
        _ => Truth::False,
    }
}

/// True and undefined atoms of a transformed program, by name.
pub fn model_names(p: &GroundProgram) -> (BTreeSet<String>, BTreeSet<String>) {
    p.known_all().named(p.table(), &p.scope())
}

pub fn names(p: &GroundProgram, atoms: impl IntoIterator<Item = u32>) -> BTreeSet<String> {
    atoms.into_iter().map(|a| p.table().atom_string(a)).collect()
}
