//! Non-ground programs as written in source text.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Const(s) | Term::Var(s) => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_var)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter(|t| t.is_var()).map(Term::name)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(t.name())?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, negated: true }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        self.atom.fmt(f)
    }
}

/// A rule `head :- body`. The body keeps source order (the magic
/// transformation passes bindings left to right) but holds no duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Rule {
    /// Builds a rule, collapsing duplicate body literals.
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        let mut seen = BTreeSet::new();
        let body = body.into_iter().filter(|l| seen.insert(l.clone())).collect();
        Rule { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Rule { head, body: Vec::new() }
    }

    pub fn pos(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|l| !l.negated).map(|l| &l.atom)
    }

    pub fn neg(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|l| l.negated).map(|l| &l.atom)
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(|l| l.atom.is_ground())
    }

    /// Every variable of the head and of negative literals occurs in a positive literal.
    pub fn is_range_restricted(&self) -> bool {
        let bound: BTreeSet<&str> = self.pos().flat_map(Atom::vars).collect();
        self.head.vars().chain(self.neg().flat_map(Atom::vars)).all(|v| bound.contains(v))
    }

    /// Variables in order of first occurrence (head first, then body).
    pub fn vars(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let all = self.head.vars().chain(self.body.iter().flat_map(|l| l.atom.vars()));
        for v in all {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.head.fmt(f)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                l.fmt(f)?;
            }
        }
        f.write_str(".")
    }
}

/// A non-ground program with a consistent predicate/arity table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    /// Predicate arities in first-seen order; `Err(name)` on an arity clash.
    pub fn predicates(&self) -> Result<Vec<(String, usize)>, String> {
        let mut order = Vec::new();
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for r in &self.rules {
            for a in std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)) {
                match seen.get(a.predicate.as_str()) {
                    Some(&n) if n != a.arity() => return Err(a.predicate.clone()),
                    Some(_) => {}
                    None => {
                        seen.insert(&a.predicate, a.arity());
                        order.push((a.predicate.clone(), a.arity()));
                    }
                }
            }
        }
        Ok(order)
    }

    /// Constants in first-seen order.
    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for r in &self.rules {
            for a in std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)) {
                for t in &a.args {
                    if let Term::Const(c) = t {
                        if seen.insert(c.as_str()) {
                            out.push(c.clone());
                        }
                    }
                }
            }
        }
        out
    }

    pub fn arity_of(&self, pred: &str) -> Option<usize> {
        self.rules
            .iter()
            .flat_map(|r| std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)))
            .find(|a| a.predicate == pred)
            .map(Atom::arity)
    }

    pub fn is_range_restricted(&self) -> bool {
        self.rules.iter().all(Rule::is_range_restricted)
    }

    pub fn first_unrestricted(&self) -> Option<&Rule> {
        self.rules.iter().find(|r| !r.is_range_restricted())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::Var(s.into())
    }

    #[test]
    fn range_restriction() {
        let r = Rule::new(Atom::new("p", vec![v("X")]), vec![Literal::neg(Atom::new("q", vec![v("X")]))]);
        assert!(!r.is_range_restricted());
        let r = Rule::new(
            Atom::new("p", vec![v("X")]),
            vec![Literal::pos(Atom::new("r", vec![v("X")])), Literal::neg(Atom::new("q", vec![v("X")]))],
        );
        assert!(r.is_range_restricted());
    }

    #[test]
    fn duplicate_body_literals_collapse() {
        let q = Literal::pos(Atom::prop("q"));
        let r = Rule::new(Atom::prop("q"), vec![q.clone(), q]);
        assert_eq!(r.body.len(), 1);
        assert_eq!(r.to_string(), "q :- q.");
    }
}
