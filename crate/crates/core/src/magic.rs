//! Query-directed magic-set rewriting with left-to-right binding passing.
//!
//! For a query `p(a)` the IDB predicates reachable from `p` are copied per
//! binding pattern (`p_b`), each copy guarded by a filter atom `m_p_b(…)`
//! holding the bound arguments. Magic rules derive filters for every IDB
//! body literal from the head's filter and the literals to its left.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Atom, AtomSet, AtomTable, GroundProgram, Literal, MagicTags, PredId, Program, Rule, Term};
use crate::parser::Query;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagicError {
    #[error("query over unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("generated predicate name `{0}` collides with a program predicate")]
    NameCollision(String),
    #[error("predicate `{0}` of the ground program is unknown to the magic metadata")]
    UnknownInProgram(String),
    #[error("magic metadata declares no magic predicates")]
    NoMagicPredicates,
}

/// A predicate together with a bound/free pattern over its arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Adornment {
    pub predicate: String,
    pub pattern: String,
}

impl Adornment {
    pub fn adorned_name(&self) -> String {
        format!("{}_{}", self.predicate, self.pattern)
    }

    pub fn magic_name(&self) -> String {
        format!("m_{}_{}", self.predicate, self.pattern)
    }

    fn bound_args(&self, args: &[Term]) -> Vec<Term> {
        args.iter().zip(self.pattern.chars()).filter(|(_, c)| *c == 'b').map(|(t, _)| t.clone()).collect()
    }
}

/// What the transformation produced, needed by the magic reductions and to
/// read answers back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicMeta {
    pub magic_predicates: BTreeSet<String>,
    /// Adorned predicate → its magic filter predicate.
    pub filter_of: BTreeMap<String, String>,
    /// Adorned predicate → source predicate.
    pub origin: BTreeMap<String, String>,
    pub edb: BTreeSet<String>,
    pub seed: Atom,
    /// The query goal over the transformed program's predicates.
    pub answer: Atom,
}

/// Predicates defined by rules with bodies or by non-ground clauses.
pub fn idb_predicates(p: &Program) -> BTreeSet<String> {
    p.rules.iter().filter(|r| !r.body.is_empty() || !r.is_ground()).map(|r| r.head.predicate.clone()).collect()
}

fn pattern_of(args: &[Term], bound: &BTreeSet<String>) -> String {
    args.iter()
        .map(|t| match t {
            Term::Const(_) => 'b',
            Term::Var(v) if bound.contains(v) => 'b',
            Term::Var(_) => 'f',
        })
        .collect()
}

/// One adorned rule with, per body position, the adornment of IDB literals
/// and the variables bound by the filter and positive literals to its left.
struct AdornedRule {
    head: Adornment,
    source: Rule,
    body: Vec<(Option<Adornment>, BTreeSet<String>)>,
}

fn adorn_rules(p: &Program, q: &Query) -> Result<(Vec<AdornedRule>, BTreeSet<String>), MagicError> {
    if p.arity_of(&q.goal.predicate).is_none() {
        return Err(MagicError::UnknownPredicate(q.goal.predicate.clone()));
    }
    let idb = idb_predicates(p);
    let mut out = Vec::new();
    if !idb.contains(&q.goal.predicate) {
        return Ok((out, idb));
    }
    let start = Adornment { predicate: q.goal.predicate.clone(), pattern: q.pattern() };
    let mut seen = HashSet::from([start.clone()]);
    let mut work = VecDeque::from([start]);
    while let Some(ad) = work.pop_front() {
        for rule in p.rules.iter().filter(|r| r.head.predicate == ad.predicate) {
            let mut bound: BTreeSet<String> =
                ad.bound_args(&rule.head.args).iter().filter(|t| t.is_var()).map(|t| t.name().to_string()).collect();
            let mut body = Vec::new();
            for lit in &rule.body {
                let a = idb.contains(&lit.atom.predicate).then(|| Adornment {
                    predicate: lit.atom.predicate.clone(),
                    pattern: pattern_of(&lit.atom.args, &bound),
                });
                if let Some(a) = &a {
                    if seen.insert(a.clone()) {
                        work.push_back(a.clone());
                    }
                }
                body.push((a, bound.clone()));
                if !lit.negated {
                    bound.extend(lit.atom.vars().map(String::from));
                }
            }
            out.push(AdornedRule { head: ad.clone(), source: rule.clone(), body });
        }
    }
    Ok((out, idb))
}

fn adorned_literal(lit: &Literal, a: &Option<Adornment>) -> Literal {
    match a {
        Some(a) => Literal { atom: Atom::new(a.adorned_name(), lit.atom.args.clone()), negated: lit.negated },
        None => lit.clone(),
    }
}

/// The adorned program without magic filters: rules for every reachable
/// (predicate, pattern) pair, IDB predicates renamed `p_pattern`.
pub fn adorn(p: &Program, q: &Query) -> Result<Program, MagicError> {
    let (rules, idb) = adorn_rules(p, q)?;
    let mut out: Vec<Rule> = p.rules.iter().filter(|r| !idb.contains(&r.head.predicate)).cloned().collect();
    for ar in &rules {
        let head = Atom::new(ar.head.adorned_name(), ar.source.head.args.clone());
        let body = ar.source.body.iter().zip(&ar.body).map(|(l, (a, _))| adorned_literal(l, a)).collect();
        out.push(Rule::new(head, body));
    }
    Ok(Program::new(out))
}

/// Generalized magic-set transformation.
///
/// Each adorned rule gets its filter prepended. Each IDB body literal,
/// positive or negative, gets a magic rule whose body is the head filter
/// followed by the literals to its left; a negative literal to the left is
/// kept only when the positive literals bind all its variables, so magic
/// rules stay range-restricted.
pub fn magic_transform(p: &Program, q: &Query) -> Result<(Program, MagicMeta), MagicError> {
    let (adorned, idb) = adorn_rules(p, q)?;
    let qad = Adornment { predicate: q.goal.predicate.clone(), pattern: q.pattern() };
    let seed = Atom::new(qad.magic_name(), qad.bound_args(&q.goal.args));
    let mut meta = MagicMeta {
        magic_predicates: BTreeSet::from([qad.magic_name()]),
        filter_of: BTreeMap::new(),
        origin: BTreeMap::new(),
        edb: p.predicates().unwrap_or_default().into_iter().map(|(n, _)| n).filter(|n| !idb.contains(n)).collect(),
        seed: seed.clone(),
        answer: q.goal.clone(),
    };
    if idb.contains(&q.goal.predicate) {
        meta.answer = Atom::new(qad.adorned_name(), q.goal.args.clone());
    }
    let mut out: Vec<Rule> = p.rules.iter().filter(|r| !idb.contains(&r.head.predicate)).cloned().collect();
    let mut seen: HashSet<Rule> = out.iter().cloned().collect();
    let mut push = |r: Rule, out: &mut Vec<Rule>| {
        if seen.insert(r.clone()) {
            out.push(r);
        }
    };
    push(Rule::fact(seed), &mut out);
    let mut magic_rules = Vec::new();
    for ar in &adorned {
        meta.magic_predicates.insert(ar.head.magic_name());
        meta.filter_of.insert(ar.head.adorned_name(), ar.head.magic_name());
        meta.origin.insert(ar.head.adorned_name(), ar.head.predicate.clone());
        let filter = Atom::new(ar.head.magic_name(), ar.head.bound_args(&ar.source.head.args));
        let mut body = vec![Literal::pos(filter.clone())];
        for (lit, (a, bound)) in ar.source.body.iter().zip(&ar.body) {
            if let Some(a) = a {
                let mut mbody = vec![Literal::pos(filter.clone())];
                for prev in &body[1..] {
                    let prev: &Literal = prev;
                    if !prev.negated || prev.atom.vars().all(|v| bound.contains(v)) {
                        mbody.push(prev.clone());
                    }
                }
                let mhead = Atom::new(a.magic_name(), a.bound_args(&lit.atom.args));
                magic_rules.push(Rule::new(mhead, mbody));
            }
            body.push(adorned_literal(lit, a));
        }
        push(Rule::new(Atom::new(ar.head.adorned_name(), ar.source.head.args.clone()), body), &mut out);
    }
    for r in magic_rules {
        push(r, &mut out);
    }
    let originals: BTreeSet<String> = p.predicates().unwrap_or_default().into_iter().map(|(n, _)| n).collect();
    for name in meta.magic_predicates.iter().chain(meta.filter_of.keys()) {
        if originals.contains(name) {
            return Err(MagicError::NameCollision(name.clone()));
        }
    }
    Ok((Program::new(out), meta))
}

/// Builds per-predicate tags for a ground program from `meta`.
pub fn magic_tags(table: &AtomTable, meta: &MagicMeta) -> Result<MagicTags, MagicError> {
    if meta.magic_predicates.is_empty() {
        return Err(MagicError::NoMagicPredicates);
    }
    let n = table.num_preds();
    let mut tags = MagicTags { is_magic: vec![false; n], filter_of: vec![None; n] };
    for p in 0..n as PredId {
        let name = table.pred_name(p);
        if meta.magic_predicates.contains(name) {
            tags.is_magic[p as usize] = true;
        } else if let Some(m) = meta.filter_of.get(name) {
            tags.filter_of[p as usize] = table.pred_id(m);
        } else if !meta.edb.contains(name) {
            return Err(MagicError::UnknownInProgram(name.to_string()));
        }
    }
    Ok(tags)
}

/// Attaches magic tags so that M and R can run.
pub fn annotate(gp: &GroundProgram, meta: &MagicMeta) -> Result<GroundProgram, MagicError> {
    let tags = magic_tags(gp.table(), meta)?;
    let mut out = gp.clone();
    out.set_tags(Some(Arc::new(tags)));
    Ok(out)
}

/// Interned atoms matching `goal` (constants fixed, variables free;
/// repeated variables must agree).
pub fn instances(table: &AtomTable, goal: &Atom) -> AtomSet {
    let Some(p) = table.pred_id(&goal.predicate) else { return AtomSet::new() };
    if table.pred_arity(p) != goal.arity() {
        return AtomSet::new();
    }
    table
        .atom_ids()
        .filter(|&a| table.pred_of(a) == p)
        .filter(|&a| {
            let args = table.args_of(a);
            let mut vars: BTreeMap<&str, u32> = BTreeMap::new();
            goal.args.iter().zip(args).all(|(t, &c)| match t {
                Term::Const(k) => table.const_name(c) == k,
                Term::Var(v) => *vars.entry(v).or_insert(c) == c,
            })
        })
        .collect()
}

/// The magic atoms among `set`.
pub fn magic_atoms(table: &AtomTable, tags: &MagicTags, set: &AtomSet) -> AtomSet {
    set.iter().filter(|&a| tags.is_magic_atom(table, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::intelligent_ground;
    use crate::parser::{parse_program, parse_query};

    fn rules(p: &Program) -> BTreeSet<String> {
        p.rules.iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn ancestor_gets_bound_free_adornment() {
        let p = parse_program("anc(X,Y) :- par(X,Y). anc(X,Y) :- par(X,Z), anc(Z,Y). par(a,b).").unwrap();
        let q = parse_query("?- anc(a,Y).").unwrap();
        let ad = adorn(&p, &q).unwrap();
        let preds: BTreeSet<String> = ad.predicates().unwrap().into_iter().map(|(n, _)| n).collect();
        assert_eq!(preds, BTreeSet::from(["anc_bf".to_string(), "par".to_string()]));
    }

    #[test]
    fn free_query_over_nonrecursive_rule() {
        let p = parse_program("p(X) :- e(X). e(a).").unwrap();
        let ad = adorn(&p, &parse_query("?- p(X).").unwrap()).unwrap();
        assert_eq!(rules(&ad), BTreeSet::from(["e(a).".to_string(), "p_f(X) :- e(X).".to_string()]));
    }

    #[test]
    fn edb_query_adds_only_the_seed() {
        let p = parse_program("e(a). p(X) :- e(X).").unwrap();
        let (mp, meta) = magic_transform(&p, &parse_query("?- e(a).").unwrap()).unwrap();
        let mut expected = rules(&p);
        expected.retain(|r| r.starts_with('e'));
        expected.insert("m_e_b(a).".into());
        assert_eq!(rules(&mp), expected);
        assert_eq!(meta.answer.to_string(), "e(a)");
    }

    #[test]
    fn unrestricted_rule_becomes_groundable() {
        let p = parse_program("p(X) :- not q(X). q(b).").unwrap();
        assert!(!p.is_range_restricted());
        let (mp, _) = magic_transform(&p, &parse_query("?- p(a).").unwrap()).unwrap();
        assert!(mp.is_range_restricted());
        assert!(intelligent_ground(&mp).is_ok());
    }

    #[test]
    fn unknown_query_predicate() {
        let p = parse_program("e(a).").unwrap();
        let err = magic_transform(&p, &parse_query("?- z(a).").unwrap()).unwrap_err();
        assert_eq!(err, MagicError::UnknownPredicate("z".into()));
    }

    #[test]
    fn name_collision_is_detected() {
        let p = parse_program("p(X) :- e(X), not m_p_b(X). e(a). m_p_b(a).").unwrap();
        let err = magic_transform(&p, &parse_query("?- p(a).").unwrap()).unwrap_err();
        assert_eq!(err, MagicError::NameCollision("m_p_b".into()));
    }

    #[test]
    fn annotation() {
        let p = parse_program("p(X) :- e(X). e(a).").unwrap();
        let (mp, meta) = magic_transform(&p, &parse_query("?- p(a).").unwrap()).unwrap();
        let gp = intelligent_ground(&mp).unwrap();
        let once = annotate(&gp, &meta).unwrap();
        let twice = annotate(&once, &meta).unwrap();
        assert_eq!(once.tags(), twice.tags());
        let t = once.tags().unwrap();
        let m = once.table().lookup_display("m_p_b(a)").unwrap();
        let pa = once.table().lookup_display("p_b(a)").unwrap();
        assert!(t.is_magic_atom(once.table(), m));
        assert!(t.is_filter_for(once.table(), pa, m));

        let plain = intelligent_ground(&p).unwrap();
        let empty = MagicMeta {
            magic_predicates: BTreeSet::new(),
            filter_of: BTreeMap::new(),
            origin: BTreeMap::new(),
            edb: BTreeSet::new(),
            seed: Atom::prop("s"),
            answer: Atom::prop("s"),
        };
        assert_eq!(annotate(&plain, &empty).unwrap_err(), MagicError::NoMagicPredicates);
        let mut partial = meta.clone();
        partial.edb.clear();
        assert_eq!(annotate(&gp, &partial).unwrap_err(), MagicError::UnknownInProgram("e".into()));
    }
}
