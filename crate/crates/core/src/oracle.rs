//! Reference fixpoint computations, deliberately naive: every least fixpoint
//! is recomputed from scratch by iterating the immediate-consequence
//! operator. Used to cross-check the rewriting engine, never by it.

use std::sync::Arc;

use thiserror::Error;

use crate::ground::{intelligent_ground, GroundError};
use crate::magic::{magic_tags, magic_transform, MagicError, MagicMeta};
use crate::model::{AtomSet, ConditionalFact, GroundProgram, MagicTags, PartialInterpretation, Program};
use crate::parser::Query;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

/// Heads of rules whose positive body lies in `i` and whose negative body
/// avoids `j`.
pub fn t_pj(p: &GroundProgram, i: &AtomSet, j: &AtomSet) -> AtomSet {
    t_pj_rules(p.rules(), i, j)
}

fn t_pj_rules<'a>(rules: impl Iterator<Item = &'a ConditionalFact>, i: &AtomSet, j: &AtomSet) -> AtomSet {
    rules
        .filter(|r| r.pos.iter().all(|&a| i.contains(a)) && r.neg.iter().all(|&a| !j.contains(a)))
        .map(|r| r.head)
        .collect()
}

/// Least fixpoint of `I ↦ t_pj(p, I, j)` plus the atoms in `extra`, which
/// are treated as additional facts.
pub fn lfp(p: &GroundProgram, j: &AtomSet, extra: &AtomSet) -> AtomSet {
    let mut cur = extra.clone();
    loop {
        let mut next = t_pj(p, &cur, j);
        next.union_with(extra);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// The alternating fixpoint sequence and the model it converges to.
#[derive(Clone, Debug)]
pub struct AfpTrace {
    pub k: Vec<AtomSet>,
    pub u: Vec<AtomSet>,
    pub w_star: PartialInterpretation,
}

impl AfpTrace {
    pub fn iterations(&self) -> usize {
        self.k.len()
    }

    /// K grows, U shrinks, K stays inside U.
    pub fn is_monotone(&self) -> bool {
        let grows = self.k.windows(2).all(|w| w[0].is_subset(&w[1]));
        let shrinks = self.u.windows(2).all(|w| w[1].is_subset(&w[0]));
        let inside = self.k.iter().zip(&self.u).all(|(k, u)| k.is_subset(u));
        grows && shrinks && inside
    }
}

fn interpretation(p: &GroundProgram, k: &AtomSet, u: &AtomSet) -> PartialInterpretation {
    let false_atoms = p.scope().difference(u);
    PartialInterpretation::new(k.clone(), false_atoms).expect("K is contained in U")
}

fn alternate(p: &GroundProgram, extra: impl Fn(Option<&AtomSet>) -> AtomSet) -> AfpTrace {
    let base = p.scope();
    let none = AtomSet::new();
    let mut k = vec![lfp(p, &base, &extra(None))];
    let mut u = vec![lfp(p, &k[0], &none)];
    loop {
        let last_u = u.last().unwrap();
        let nk = lfp(p, last_u, &extra(Some(last_u)));
        let nu = lfp(p, &nk, &none);
        if &nk == k.last().unwrap() && &nu == last_u {
            break;
        }
        k.push(nk);
        u.push(nu);
    }
    let w_star = interpretation(p, k.last().unwrap(), u.last().unwrap());
    AfpTrace { k, u, w_star }
}

/// Alternating fixpoint procedure: `K_0` from the definite rules, then
/// `U_i = lfp(T_{P,K_i})` and `K_{i+1} = lfp(T_{P,U_i})` until stationary.
pub fn afp(p: &GroundProgram) -> AfpTrace {
    alternate(p, |_| AtomSet::new())
}

/// Least fixpoint of the three-valued Fitting operator, starting from the
/// all-undefined interpretation.
pub fn fitting_lfp(p: &GroundProgram) -> PartialInterpretation {
    let scope = p.scope();
    let mut t = AtomSet::new();
    let mut f = AtomSet::new();
    loop {
        let mut nt = AtomSet::new();
        let mut has_open_rule = AtomSet::new();
        for r in p.rules() {
            let pos_true = r.pos.iter().all(|&a| t.contains(a));
            let neg_true = r.neg.iter().all(|&a| f.contains(a));
            if pos_true && neg_true {
                nt.insert(r.head);
            }
            let some_false = r.pos.iter().any(|&a| f.contains(a)) || r.neg.iter().any(|&a| t.contains(a));
            if !some_false {
                has_open_rule.insert(r.head);
            }
        }
        let nf = scope.difference(&has_open_rule);
        if nt == t && nf == f {
            return PartialInterpretation::new(t, f).expect("Fitting iterates stay consistent");
        }
        t = nt;
        f = nf;
    }
}

/// Outcome of the two-phase well-founded magic set method.
#[derive(Clone, Debug)]
pub struct WfMagic {
    /// The ground magic program, tagged.
    pub program: GroundProgram,
    pub meta: MagicMeta,
    /// True-or-undefined magic atoms after the first phase.
    pub magic: AtomSet,
    pub first: AfpTrace,
    pub second: AfpTrace,
}

impl WfMagic {
    pub fn w_star(&self) -> &PartialInterpretation {
        &self.second.w_star
    }

    pub fn iterations(&self) -> usize {
        self.first.iterations() + self.second.iterations()
    }
}

fn not_false_magic(p: &GroundProgram, tags: &MagicTags, w: &PartialInterpretation) -> AtomSet {
    p.scope().difference(w.false_atoms()).iter().filter(|&a| tags.is_magic_atom(p.table(), a)).collect()
}

/// Magic-transforms and grounds `p` for `q`, then runs [`wf_magic_ground`].
pub fn wf_magic(p: &Program, q: &Query) -> Result<WfMagic, OracleError> {
    let (mp, meta) = magic_transform(p, q)?;
    let gp = intelligent_ground(&mp)?;
    wf_magic_ground(&gp, &meta)
}

/// First phase: AFP over `mp` to find the magic atoms that are not false.
/// Second phase: AFP over `mp` with those atoms added as facts.
pub fn wf_magic_ground(mp: &GroundProgram, meta: &MagicMeta) -> Result<WfMagic, OracleError> {
    let tags = magic_tags(mp.table(), meta)?;
    let first = afp(mp);
    let magic = not_false_magic(mp, &tags, &first.w_star);
    let mut second_prog = mp.clone();
    for a in magic.iter() {
        second_prog.insert(ConditionalFact::fact(a));
    }
    let second = afp(&second_prog);
    let mut program = mp.clone();
    program.set_tags(Some(Arc::new(tags)));
    Ok(WfMagic { program, meta: meta.clone(), magic, first, second })
}

/// Magic alternating fixpoint: like [`afp`], but every `K_i` with `i > 0`
/// treats the magic atoms of `U_{i-1}` as facts.
pub fn magic_afp(mp: &GroundProgram, meta: &MagicMeta) -> Result<AfpTrace, OracleError> {
    let tags = magic_tags(mp.table(), meta)?;
    let table = mp.table();
    Ok(alternate(mp, |u| match u {
        None => AtomSet::new(),
        Some(u) => u.iter().filter(|&a| tags.is_magic_atom(table, a)).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PropBuilder, Truth};

    fn loop_program() -> GroundProgram {
        let mut b = PropBuilder::new();
        b.fact("p").rule("q", &[], &["p"]).rule("q", &["r"], &[]).rule("r", &["q"], &[]);
        b.build()
    }

    fn names(p: &GroundProgram, s: &AtomSet) -> Vec<String> {
        s.iter().map(|a| p.table().atom_string(a)).collect()
    }

    #[test]
    fn immediate_consequences() {
        let mut b = PropBuilder::new();
        b.fact("a").rule("b", &[], &["c"]);
        let c = b.atom("c");
        let p = b.build();
        assert_eq!(names(&p, &t_pj(&p, &AtomSet::new(), &AtomSet::new())), ["a", "b"]);
        let j: AtomSet = [c].into_iter().collect();
        assert_eq!(names(&p, &t_pj(&p, &AtomSet::new(), &j)), ["a"]);
    }

    #[test]
    fn loop_program_model() {
        let p = loop_program();
        let tr = afp(&p);
        assert!(tr.is_monotone());
        let v = |s: &str| tr.w_star.value(p.table().lookup_display(s).unwrap());
        assert_eq!((v("p"), v("q"), v("r")), (Truth::True, Truth::False, Truth::False));

        let fit = fitting_lfp(&p);
        let f = |s: &str| fit.value(p.table().lookup_display(s).unwrap());
        assert_eq!((f("p"), f("q"), f("r")), (Truth::True, Truth::Undefined, Truth::Undefined));
    }

    #[test]
    fn even_cycle_is_undefined() {
        let mut b = PropBuilder::new();
        b.rule("a", &[], &["b"]).rule("b", &[], &["a"]);
        let p = b.build();
        let w = afp(&p).w_star;
        assert!(w.true_atoms().is_empty() && w.false_atoms().is_empty());
        assert_eq!(fitting_lfp(&p), w);
    }

    #[test]
    fn single_fact() {
        let mut b = PropBuilder::new();
        b.fact("a");
        let p = b.build();
        assert_eq!(fitting_lfp(&p).true_atoms().len(), 1);
        assert_eq!(afp(&p).iterations(), 1);
    }
}
