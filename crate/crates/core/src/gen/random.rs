use rand::seq::IndexedRandom;
use rand::Rng;

use crate::model::{Atom, GroundProgram, Literal, Program, PropBuilder, Rule, Term};
use crate::parser::Query;

/// Shape of random propositional programs: atoms `a0…` drawn from a pool,
/// bodies of up to `max_body` literals, each negative with probability
/// `neg_prob`.
#[derive(Clone, Copy, Debug)]
pub struct GroundConfig {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    pub neg_prob: f64,
    pub fact_prob: f64,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig { max_atoms: 30, max_rules: 60, max_body: 4, neg_prob: 0.4, fact_prob: 0.1 }
    }
}

pub fn random_ground_program<R: Rng + ?Sized>(rng: &mut R, cfg: &GroundConfig) -> GroundProgram {
    let atoms = rng.random_range(1..=cfg.max_atoms.max(1));
    let rules = rng.random_range(0..=cfg.max_rules);
    let name = |i: usize| format!("a{i}");
    let mut b = PropBuilder::new();
    for _ in 0..rules {
        let head = name(rng.random_range(0..atoms));
        let len = if rng.random_bool(cfg.fact_prob) { 0 } else { rng.random_range(1..=cfg.max_body.max(1)) };
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for _ in 0..len {
            let a = name(rng.random_range(0..atoms));
            if rng.random_bool(cfg.neg_prob) {
                neg.push(a);
            } else {
                pos.push(a);
            }
        }
        let pos: Vec<&str> = pos.iter().map(String::as_str).collect();
        let neg: Vec<&str> = neg.iter().map(String::as_str).collect();
        b.rule(&head, &pos, &neg);
    }
    b.build()
}

/// Shape of random range-restricted programs over EDB predicates `e0/1`,
/// `e1/2` and IDB predicates `q0/1`, `q1/2`, `q2/0`.
#[derive(Clone, Copy, Debug)]
pub struct ProgramConfig {
    pub max_consts: usize,
    pub max_rules: usize,
    pub fact_prob: f64,
    pub neg_prob: f64,
    pub const_prob: f64,
}

impl Default for ProgramConfig {
    fn default() -> Self {
        ProgramConfig { max_consts: 3, max_rules: 8, fact_prob: 0.6, neg_prob: 0.6, const_prob: 0.15 }
    }
}

const EDB: [(&str, usize); 2] = [("e0", 1), ("e1", 2)];
const IDB: [(&str, usize); 3] = [("q0", 1), ("q1", 2), ("q2", 0)];
const VARS: [&str; 3] = ["X", "Y", "Z"];

fn consts(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i}")).collect()
}

fn tuples(consts: &[String], arity: usize) -> Vec<Vec<String>> {
    (0..arity).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                consts.iter().map(move |c| {
                    let mut t = t.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect()
    })
}

fn ground_atom(pred: &str, args: &[String]) -> Atom {
    Atom::new(pred, args.iter().map(|c| Term::Const(c.clone())).collect())
}

pub fn random_program<R: Rng + ?Sized>(rng: &mut R, cfg: &ProgramConfig) -> Program {
    let cs = consts(rng.random_range(1..=cfg.max_consts.max(1)));
    let all: Vec<(&str, usize)> = EDB.iter().chain(IDB.iter()).copied().collect();
    let mut rules = Vec::new();
    for (p, k) in EDB {
        for t in tuples(&cs, k) {
            if rng.random_bool(cfg.fact_prob) {
                rules.push(Rule::fact(ground_atom(p, &t)));
            }
        }
    }
    let n = rng.random_range(cfg.max_rules.div_ceil(2).max(1)..=cfg.max_rules.max(1));
    for _ in 0..n {
        let mut body = Vec::new();
        let mut bound: Vec<&str> = Vec::new();
        for _ in 0..rng.random_range(1..=2) {
            let &(p, k) = all.choose(rng).unwrap();
            let args = (0..k)
                .map(|_| {
                    if rng.random_bool(cfg.const_prob) {
                        Term::Const(cs.choose(rng).unwrap().clone())
                    } else {
                        let v = *VARS.choose(rng).unwrap();
                        if !bound.contains(&v) {
                            bound.push(v);
                        }
                        Term::Var(v.to_string())
                    }
                })
                .collect();
            body.push(Literal::pos(Atom::new(p, args)));
        }
        let pick = |rng: &mut R| match bound.choose(rng) {
            Some(v) if !rng.random_bool(cfg.const_prob) => Term::Var(v.to_string()),
            _ => Term::Const(cs.choose(rng).unwrap().clone()),
        };
        for _ in 0..rng.random_range(0..=2) {
            if !rng.random_bool(cfg.neg_prob) {
                continue;
            }
            let &(p, k) = all.choose(rng).unwrap();
            let args = (0..k).map(|_| pick(rng)).collect();
            body.push(Literal::neg(Atom::new(p, args)));
        }
        let &(h, k) = IDB.choose(rng).unwrap();
        let args = (0..k).map(|_| pick(rng)).collect();
        rules.push(Rule::new(Atom::new(h, args), body));
    }
    Program::new(rules)
}

/// A ground query over a predicate that heads some rule of `p`, or over an
/// EDB predicate when nothing else does.
pub fn random_query<R: Rng + ?Sized>(rng: &mut R, p: &Program) -> Option<Query> {
    let mut heads: Vec<(String, usize)> = Vec::new();
    for r in &p.rules {
        let key = (r.head.predicate.clone(), r.head.arity());
        if !heads.contains(&key) {
            heads.push(key);
        }
    }
    let idb: Vec<_> = heads.iter().filter(|(n, _)| IDB.iter().any(|(i, _)| i == n)).cloned().collect();
    let (pred, k) = idb.choose(rng).or_else(|| heads.choose(rng))?.clone();
    let mut cs = p.constants();
    if cs.is_empty() {
        cs.push("c0".into());
    }
    let args: Vec<String> = (0..k).map(|_| cs.choose(rng).unwrap().clone()).collect();
    Some(Query::new(ground_atom(&pred, &args)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_programs_are_range_restricted() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_program(&mut rng, &ProgramConfig::default());
            assert!(p.is_range_restricted(), "{p}");
            assert!(p.predicates().is_ok());
            if let Some(q) = random_query(&mut rng, &p) {
                assert!(q.goal.is_ground());
                assert!(q.validate(&p).is_ok());
            }
        }
    }

    #[test]
    fn ground_programs_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = GroundConfig { max_atoms: 5, max_rules: 10, ..Default::default() };
        for _ in 0..100 {
            let p = random_ground_program(&mut rng, &cfg);
            assert!(p.len() <= 10);
            assert!(p.table().num_atoms() <= 5);
            assert!(p.rules().all(|r| r.pos.len() + r.neg.len() <= 4));
        }
    }
}
