//! Component-wise evaluation: ground one strongly connected component of
//! the predicate dependency graph at a time, then reduce it to a remainder
//! before moving on.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::model::{AtomSet, ConditionalFact, GroundProgram, PredId, Program, Rule};
use crate::parser::StrategyExpr;
use crate::rewrite::EvalStats;
use crate::strategy::{self, StrategyName};

use super::compile::compile;
use super::seminaive::{derive, Prior};
use super::{new_table, require_range_restricted, GroundError};

/// Rule groups in evaluation order. Group `i` only refers to predicates
/// defined in groups `≤ i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    pub groups: Vec<SccGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccGroup {
    /// Head predicates of this component.
    pub predicates: Vec<String>,
    pub rules: Vec<Rule>,
}

/// Condensation of the predicate dependency graph (edges from positive and
/// negative body occurrences), in dependency order.
pub fn scc_partition(p: &Program) -> SccPartition {
    let mut g: DiGraph<&str, ()> = DiGraph::new();
    let mut node = HashMap::new();
    for r in &p.rules {
        for a in std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)) {
            node.entry(a.predicate.as_str()).or_insert_with(|| g.add_node(a.predicate.as_str()));
        }
    }
    for r in &p.rules {
        // Edges point from a rule head to what it depends on, so Tarjan's
        // output order lists dependencies first.
        for l in &r.body {
            g.update_edge(node[r.head.predicate.as_str()], node[l.atom.predicate.as_str()], ());
        }
    }
    let heads: HashSet<&str> = p.rules.iter().map(|r| r.head.predicate.as_str()).collect();
    let mut groups = Vec::new();
    for comp in tarjan_scc(&g) {
        let mut comp = comp;
        comp.sort();
        let preds: Vec<&str> = comp.iter().map(|&n| g[n]).filter(|n| heads.contains(n)).collect();
        if preds.is_empty() {
            continue;
        }
        let rules = p.rules.iter().filter(|r| preds.contains(&r.head.predicate.as_str())).cloned().collect();
        groups.push(SccGroup { predicates: preds.into_iter().map(String::from).collect(), rules });
    }
    SccPartition { groups }
}

/// Predicates that lie on a cycle of positive dependencies and also depend
/// on themselves through negation. Component-wise evaluation of a program
/// without such predicates never needs loop detection to delete anything.
pub fn mixed_recursion(p: &Program) -> Vec<String> {
    let mut names: Vec<&str> = Vec::new();
    let mut node = HashMap::new();
    let mut all: DiGraph<(), bool> = DiGraph::new();
    let mut pos: DiGraph<(), ()> = DiGraph::new();
    for r in &p.rules {
        for a in std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)) {
            node.entry(a.predicate.as_str()).or_insert_with(|| {
                names.push(a.predicate.as_str());
                pos.add_node(());
                all.add_node(())
            });
        }
    }
    for r in &p.rules {
        let h = node[r.head.predicate.as_str()];
        for l in &r.body {
            let b = node[l.atom.predicate.as_str()];
            all.add_edge(h, b, l.negated);
            if !l.negated {
                pos.update_edge(h, b, ());
            }
        }
    }
    let comp_of = |g_comps: &[Vec<petgraph::graph::NodeIndex>]| {
        let mut c = vec![0; names.len()];
        for (i, comp) in g_comps.iter().enumerate() {
            for n in comp {
                c[n.index()] = i;
            }
        }
        c
    };
    let pos_comps = tarjan_scc(&pos);
    let pos_c = comp_of(&pos_comps);
    let on_pos_cycle = |n: petgraph::graph::NodeIndex| pos_comps[pos_c[n.index()]].len() > 1 || pos.contains_edge(n, n);
    let all_comps = tarjan_scc(&all);
    let all_c = comp_of(&all_comps);
    let mut neg_comp = vec![false; all_comps.len()];
    for e in all.edge_indices() {
        let (a, b) = all.edge_endpoints(e).unwrap();
        if all[e] && all_c[a.index()] == all_c[b.index()] {
            neg_comp[all_c[a.index()]] = true;
        }
    }
    let mut out: Vec<String> = (0..names.len())
        .map(petgraph::graph::NodeIndex::new)
        .filter(|&n| on_pos_cycle(n) && neg_comp[all_c[n.index()]])
        .map(|n| names[n.index()].to_string())
        .collect();
    out.sort();
    out
}

/// Relevant instances of `group` given the remainder `r_prev` of earlier
/// groups: positive atoms must be heads of `r_prev` or of instances derived
/// so far; instances with a negative atom among `facts(r_prev)` are dropped.
pub fn ground_scc(group: &[Rule], r_prev: &GroundProgram) -> Result<GroundProgram, GroundError> {
    require_range_restricted(group)?;
    let mut table = r_prev.table().clone();
    let compiled: Vec<_> = group.iter().map(|r| compile(r, &mut table)).collect::<Result<_, _>>()?;
    let heads = r_prev.heads();
    let prior = Prior { facts: r_prev.facts(), heads: &heads, simplify: None };
    let rules = derive(&compiled, &mut table, &prior);
    Ok(GroundProgram::from_rules(Arc::new(table), rules))
}

/// Outcome of component-wise evaluation.
#[derive(Clone, Debug)]
pub struct SccEvaluation {
    /// The remainder of the whole program.
    pub remainder: GroundProgram,
    /// Union of the per-component ground instances, before reduction.
    pub grounded: GroundProgram,
    pub stats: EvalStats,
    pub groups: usize,
}

/// Computes the remainder component by component with `((PSNF)*L)*`.
pub fn scc_evaluate(p: &Program, simplify: bool) -> Result<SccEvaluation, GroundError> {
    scc_evaluate_with(p, simplify, &StrategyName::Remainder.expr())
}

/// As [`scc_evaluate`] with a caller-chosen strategy per component. The
/// strategy must not use magic letters.
pub fn scc_evaluate_with(p: &Program, simplify: bool, expr: &StrategyExpr) -> Result<SccEvaluation, GroundError> {
    require_range_restricted(&p.rules)?;
    let partition = scc_partition(p);
    let mut table = new_table(p)?;
    let mut current: Vec<ConditionalFact> = Vec::new();
    let mut grounded: Vec<ConditionalFact> = Vec::new();
    let mut stats = EvalStats::default();
    for group in &partition.groups {
        let compiled: Vec<_> = group.rules.iter().map(|r| compile(r, &mut table)).collect::<Result<_, _>>()?;
        let preds: HashSet<PredId> = compiled.iter().map(|r| r.head.pred).collect();
        let (facts, heads) = facts_and_heads(&current);
        let prior = Prior { facts: &facts, heads: &heads, simplify: simplify.then_some(&preds) };
        let derived = derive(&compiled, &mut table, &prior);
        stats.add_grounding(derived.len() as u64);
        grounded.extend(derived.iter().cloned());
        current.extend(derived);
        let program = GroundProgram::from_rules(Arc::new(table), current);
        let run = strategy::run(expr, &program)?;
        stats.merge(&run.stats);
        drop(program);
        let final_program = run.final_program;
        drop(run.initial);
        let (arc, rules) = final_program.into_parts();
        table = Arc::try_unwrap(arc).unwrap_or_else(|shared| (*shared).clone());
        current = rules;
    }
    let table = Arc::new(table);
    Ok(SccEvaluation {
        remainder: GroundProgram::from_rules(table.clone(), current),
        grounded: GroundProgram::from_rules(table, grounded),
        stats,
        groups: partition.groups.len(),
    })
}

fn facts_and_heads(rules: &[ConditionalFact]) -> (AtomSet, AtomSet) {
    let mut facts = AtomSet::new();
    let mut heads = AtomSet::new();
    for r in rules {
        heads.insert(r.head);
        if r.is_fact() {
            facts.insert(r.head);
        }
    }
    (facts, heads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AtomTable;
    use crate::parser::parse_program;

    #[test]
    fn mixed_recursion_detection() {
        let p = parse_program("p(X) :- t(X,Y,Z), not p(Y), not p(Z). p(X) :- p0(X).").unwrap();
        assert!(mixed_recursion(&p).is_empty());
        let p = parse_program("p(X) :- t(X,Y,Z), not p(Y), not p(Z). p(X) :- p(X).").unwrap();
        assert_eq!(mixed_recursion(&p), ["p"]);
        let p = parse_program("a :- b. b :- a. c :- not a.").unwrap();
        assert!(mixed_recursion(&p).is_empty());
        let p = parse_program("a :- b. b :- a, not c. c :- not a.").unwrap();
        assert_eq!(mixed_recursion(&p), ["a", "b"]);
    }

    fn preds(p: &SccPartition) -> Vec<Vec<String>> {
        p.groups.iter().map(|g| g.predicates.clone()).collect()
    }

    #[test]
    fn partition_examples() {
        let p = parse_program("p :- q. q :- p. r :- q.").unwrap();
        assert_eq!(preds(&scc_partition(&p)), [vec!["p", "q"], vec!["r"]]);

        let p = parse_program("c :- b. b :- a. a.").unwrap();
        assert_eq!(preds(&scc_partition(&p)), [vec!["a"], vec!["b"], vec!["c"]]);

        let p = parse_program("p(X) :- e(X), not p(X). e(a).").unwrap();
        assert_eq!(preds(&scc_partition(&p)), [vec!["e"], vec!["p"]]);
    }

    #[test]
    fn empty_group_grounds_to_nothing() {
        let prev = GroundProgram::new(Arc::new(AtomTable::new()));
        assert!(ground_scc(&[], &prev).unwrap().is_empty());
    }

    #[test]
    fn stratified_program_is_fully_decided() {
        let p = parse_program("e(a). e(b). f(a). q(X) :- e(X), not f(X). r(X) :- e(X), not q(X).").unwrap();
        let ev = scc_evaluate(&p, true).unwrap();
        assert!(ev.remainder.rules().all(|r| r.is_fact()));
        let facts: Vec<String> = ev.remainder.canonical().into_iter().collect();
        assert_eq!(facts, ["e(a).", "e(b).", "f(a).", "q(b).", "r(a)."]);
        assert_eq!(ev.stats.l_deletions, 0);
    }
}
