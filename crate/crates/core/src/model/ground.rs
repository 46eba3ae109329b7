//! Ground rules ("conditional facts") and ground programs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use super::atomset::AtomSet;
use super::interp::PartialInterpretation;
use super::table::{AtomId, AtomTable, PredId};

/// A ground literal: an atom or its default negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundLiteral {
    pub atom: AtomId,
    pub negated: bool,
}

impl GroundLiteral {
    pub fn pos(atom: AtomId) -> Self {
        GroundLiteral { atom, negated: false }
    }

    pub fn neg(atom: AtomId) -> Self {
        GroundLiteral { atom, negated: true }
    }
}

/// Flips the sign of a literal, keeping its atom.
pub fn complement(l: GroundLiteral) -> GroundLiteral {
    GroundLiteral { atom: l.atom, negated: !l.negated }
}

/// A ground rule `head ← pos ∧ not neg`. Bodies are kept sorted and free of
/// duplicates, so structural equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionalFact {
    pub head: AtomId,
    pub pos: Box<[AtomId]>,
    pub neg: Box<[AtomId]>,
}

impl ConditionalFact {
    pub fn new(head: AtomId, pos: impl IntoIterator<Item = AtomId>, neg: impl IntoIterator<Item = AtomId>) -> Self {
        ConditionalFact { head, pos: canonical(pos), neg: canonical(neg) }
    }

    pub fn fact(head: AtomId) -> Self {
        ConditionalFact { head, pos: Box::new([]), neg: Box::new([]) }
    }

    pub fn is_fact(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    /// Number of literal occurrences, head included.
    pub fn size(&self) -> usize {
        1 + self.pos.len() + self.neg.len()
    }

    pub fn body(&self) -> impl Iterator<Item = GroundLiteral> + '_ {
        let pos = self.pos.iter().map(|&a| GroundLiteral::pos(a));
        pos.chain(self.neg.iter().map(|&a| GroundLiteral::neg(a)))
    }

    pub fn display<'a>(&'a self, table: &'a AtomTable) -> DisplayRule<'a> {
        DisplayRule { rule: self, table }
    }
}

fn canonical(atoms: impl IntoIterator<Item = AtomId>) -> Box<[AtomId]> {
    let mut v: Vec<AtomId> = atoms.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v.into_boxed_slice()
}

/// Formats a ground rule in the textual program syntax.
pub struct DisplayRule<'a> {
    rule: &'a ConditionalFact,
    table: &'a AtomTable,
}

impl fmt::Display for DisplayRule<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.table.display(self.rule.head))?;
        let mut first = true;
        for l in self.rule.body() {
            f.write_str(if first { " :- " } else { ", " })?;
            first = false;
            if l.negated {
                f.write_str("not ")?;
            }
            write!(f, "{}", self.table.display(l.atom))?;
        }
        f.write_str(".")
    }
}

/// Per-predicate magic tags attached to a ground magic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicTags {
    /// Indexed by predicate id.
    pub is_magic: Vec<bool>,
    /// For a non-magic predicate `p`, the predicate of its magic filter.
    pub filter_of: Vec<Option<PredId>>,
}

impl MagicTags {
    pub fn is_magic_pred(&self, p: PredId) -> bool {
        self.is_magic.get(p as usize).copied().unwrap_or(false)
    }

    pub fn filter(&self, p: PredId) -> Option<PredId> {
        self.filter_of.get(p as usize).copied().flatten()
    }

    pub fn is_magic_atom(&self, table: &AtomTable, a: AtomId) -> bool {
        self.is_magic_pred(table.pred_of(a))
    }

    /// Whether `body` is the magic filter atom for rules headed by `head`.
    pub fn is_filter_for(&self, table: &AtomTable, head: AtomId, body: AtomId) -> bool {
        let hp = table.pred_of(head);
        !self.is_magic_pred(hp) && self.filter(hp) == Some(table.pred_of(body))
    }
}

/// A set of conditional facts over a shared atom table, with incrementally
/// maintained `facts` and per-atom head counts.
#[derive(Clone, Debug)]
pub struct GroundProgram {
    table: Arc<AtomTable>,
    rules: IndexSet<ConditionalFact>,
    facts: AtomSet,
    head_counts: Vec<u32>,
    tags: Option<Arc<MagicTags>>,
}

impl GroundProgram {
    pub fn new(table: Arc<AtomTable>) -> Self {
        GroundProgram { table, rules: IndexSet::new(), facts: AtomSet::new(), head_counts: Vec::new(), tags: None }
    }

    pub fn from_rules(table: Arc<AtomTable>, rules: impl IntoIterator<Item = ConditionalFact>) -> Self {
        let mut p = GroundProgram::new(table);
        for r in rules {
            p.insert(r);
        }
        p
    }

    /// Inserts a rule; inserting an existing rule is a no-op returning false.
    pub fn insert(&mut self, rule: ConditionalFact) -> bool {
        let head = rule.head;
        let is_fact = rule.is_fact();
        if !self.rules.insert(rule) {
            return false;
        }
        let h = head as usize;
        if h >= self.head_counts.len() {
            self.head_counts.resize(h + 1, 0);
        }
        self.head_counts[h] += 1;
        if is_fact {
            self.facts.insert(head);
        }
        true
    }

    pub fn remove(&mut self, rule: &ConditionalFact) -> bool {
        if !self.rules.swap_remove(rule) {
            return false;
        }
        self.head_counts[rule.head as usize] -= 1;
        if rule.is_fact() {
            self.facts.remove(rule.head);
        }
        true
    }

    pub fn contains(&self, rule: &ConditionalFact) -> bool {
        self.rules.contains(rule)
    }

    pub fn rules(&self) -> impl Iterator<Item = &ConditionalFact> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn table(&self) -> &AtomTable {
        &self.table
    }

    pub fn table_arc(&self) -> &Arc<AtomTable> {
        &self.table
    }

    pub fn tags(&self) -> Option<&Arc<MagicTags>> {
        self.tags.as_ref()
    }

    pub fn set_tags(&mut self, tags: Option<Arc<MagicTags>>) {
        self.tags = tags;
    }

    pub fn facts(&self) -> &AtomSet {
        &self.facts
    }

    pub fn is_fact(&self, a: AtomId) -> bool {
        self.facts.contains(a)
    }

    pub fn head_count(&self, a: AtomId) -> u32 {
        self.head_counts.get(a as usize).copied().unwrap_or(0)
    }

    pub fn is_head(&self, a: AtomId) -> bool {
        self.head_count(a) > 0
    }

    pub fn heads(&self) -> AtomSet {
        self.head_counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(a, _)| a as AtomId).collect()
    }

    /// Sum over rules of `1 + |pos| + |neg|`.
    pub fn literal_count(&self) -> usize {
        self.rules.iter().map(ConditionalFact::size).sum()
    }

    /// Every interned atom of the table.
    pub fn scope(&self) -> AtomSet {
        AtomSet::full(self.table.num_atoms())
    }

    /// `known_S(P)`: true = S ∩ facts, false = S − heads.
    pub fn known(&self, scope: &AtomSet) -> PartialInterpretation {
        let t = scope.iter().filter(|&a| self.is_fact(a)).collect();
        let f = scope.iter().filter(|&a| !self.is_head(a)).collect();
        PartialInterpretation::new(t, f).expect("a fact is always a head")
    }

    /// `known` over every interned atom.
    pub fn known_all(&self) -> PartialInterpretation {
        self.known(&self.scope())
    }

    /// Recomputes the cached facts and head counts from the rule set.
    pub fn caches_consistent(&self) -> bool {
        let mut counts = vec![0u32; self.head_counts.len()];
        let mut facts = AtomSet::new();
        for r in &self.rules {
            match counts.get_mut(r.head as usize) {
                Some(c) => *c += 1,
                None => return false,
            }
            if r.is_fact() {
                facts.insert(r.head);
            }
        }
        counts == self.head_counts && facts == self.facts
    }

    /// Rules sorted by head id, then body ids.
    pub fn sorted_rules(&self) -> Vec<&ConditionalFact> {
        let mut v: Vec<&ConditionalFact> = self.rules.iter().collect();
        v.sort();
        v
    }

    /// Table-independent form: every rule rendered as text, sorted.
    /// Body literals are ordered by name, positive before negative.
    pub fn canonical(&self) -> BTreeSet<String> {
        self.rules
            .iter()
            .map(|r| {
                let mut pos: Vec<String> = r.pos.iter().map(|&a| self.table.atom_string(a)).collect();
                let mut neg: Vec<String> = r.neg.iter().map(|&a| format!("not {}", self.table.display(a))).collect();
                pos.sort();
                neg.sort();
                let head = self.table.atom_string(r.head);
                if pos.is_empty() && neg.is_empty() {
                    format!("{head}.")
                } else {
                    pos.extend(neg);
                    format!("{head} :- {}.", pos.join(", "))
                }
            })
            .collect()
    }

    pub fn display_rule(&self, r: &ConditionalFact) -> String {
        r.display(&self.table).to_string()
    }

    pub fn into_parts(self) -> (Arc<AtomTable>, Vec<ConditionalFact>) {
        (self.table, self.rules.into_iter().collect())
    }
}

/// Programs are equal when they hold the same rule set.
impl PartialEq for GroundProgram {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for GroundProgram {}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.sorted_rules() {
            writeln!(f, "{}", r.display(&self.table))?;
        }
        Ok(())
    }
}

/// Builds small propositional programs in tests and generators.
#[derive(Debug, Default)]
pub struct PropBuilder {
    table: AtomTable,
    rules: Vec<ConditionalFact>,
}

impl PropBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(&mut self, name: &str) -> AtomId {
        self.table.intern_prop(name).expect("propositional names have arity 0")
    }

    /// Adds `head :- pos, not neg`.
    pub fn rule(&mut self, head: &str, pos: &[&str], neg: &[&str]) -> &mut Self {
        let h = self.atom(head);
        let p: Vec<AtomId> = pos.iter().map(|a| self.atom(a)).collect();
        let n: Vec<AtomId> = neg.iter().map(|a| self.atom(a)).collect();
        self.rules.push(ConditionalFact::new(h, p, n));
        self
    }

    pub fn fact(&mut self, head: &str) -> &mut Self {
        self.rule(head, &[], &[])
    }

    pub fn build(self) -> GroundProgram {
        GroundProgram::from_rules(Arc::new(self.table), self.rules)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_program() -> GroundProgram {
        let mut b = PropBuilder::new();
        b.fact("p").rule("q", &[], &["p"]).rule("q", &["r"], &[]).rule("r", &["q"], &[]);
        b.build()
    }

    #[test]
    fn complement_is_an_involution() {
        let l = GroundLiteral::neg(4);
        assert_eq!(complement(l), GroundLiteral::pos(4));
        assert_eq!(complement(complement(l)), l);
    }

    #[test]
    fn literal_count_counts_heads() {
        assert_eq!(loop_program().literal_count(), 7);
        assert_eq!(GroundProgram::new(Arc::default()).literal_count(), 0);
        let mut b = PropBuilder::new();
        b.fact("p");
        assert_eq!(b.build().literal_count(), 1);
    }

    #[test]
    fn set_semantics_and_caches() {
        let mut p = loop_program();
        let q = p.table().lookup_display("q").unwrap();
        let r = p.table().lookup_display("r").unwrap();
        assert!(!p.insert(ConditionalFact::new(q, [r], [])));
        assert_eq!(p.len(), 4);
        assert_eq!(p.head_count(q), 2);
        assert!(p.remove(&ConditionalFact::new(q, [r], [])));
        assert_eq!(p.head_count(q), 1);
        assert!(p.caches_consistent());
    }

    #[test]
    fn known_splits_facts_and_non_heads() {
        let mut b = PropBuilder::new();
        b.fact("p");
        let q = b.atom("q");
        let r = b.atom("r");
        let p = b.build();
        let k = p.known_all();
        assert_eq!(k.true_atoms().to_vec(), vec![0]);
        assert_eq!(k.false_atoms().to_vec(), vec![q, r]);

        let mut b = PropBuilder::new();
        b.rule("a", &[], &["b"]).rule("b", &[], &["a"]);
        let k = b.build().known_all();
        assert!(k.true_atoms().is_empty() && k.false_atoms().is_empty());

        let mut t = AtomTable::new();
        let a = t.intern_prop("a").unwrap();
        let empty = GroundProgram::new(Arc::new(t));
        let k = empty.known_all();
        assert_eq!(k.false_atoms().to_vec(), vec![a]);
    }
}
