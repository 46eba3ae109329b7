//! Grounding: Herbrand instantiation, relevant-instance derivation, and
//! evaluation component by component of the predicate dependency graph.

mod compile;
mod scc;
mod seminaive;

use std::sync::Arc;

use thiserror::Error;

use crate::model::{AtomSet, AtomTable, ConditionalFact, GroundProgram, Program, Rule};

pub use scc::{
    ground_scc, mixed_recursion, scc_evaluate, scc_evaluate_with, scc_partition, SccEvaluation, SccGroup, SccPartition,
};

/// Default refusal bound for Herbrand instantiation.
pub const HERBRAND_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroundError {
    #[error("rule is not range-restricted: {0}")]
    NotRangeRestricted(String),
    #[error("Herbrand instantiation needs {needed} rule instances, above the bound {bound}")]
    TooManyInstances { needed: u64, bound: u64 },
    #[error("predicate `{0}` used with inconsistent arity")]
    Arity(String),
    #[error(transparent)]
    Engine(#[from] crate::rewrite::EngineError),
}

fn new_table(p: &Program) -> Result<AtomTable, GroundError> {
    let mut table = AtomTable::new();
    for (name, arity) in p.predicates().map_err(GroundError::Arity)? {
        table.intern_pred(&name, arity);
    }
    for c in p.constants() {
        table.intern_const(&c);
    }
    Ok(table)
}

fn require_range_restricted(rules: &[Rule]) -> Result<(), GroundError> {
    match rules.iter().find(|r| !r.is_range_restricted()) {
        Some(r) => Err(GroundError::NotRangeRestricted(r.to_string())),
        None => Ok(()),
    }
}

/// Every rule instantiated with every substitution over the program's
/// constants. A ground program maps to itself.
pub fn herbrand_ground(p: &Program) -> Result<GroundProgram, GroundError> {
    herbrand_ground_bounded(p, HERBRAND_BOUND)
}

pub fn herbrand_ground_bounded(p: &Program, bound: u64) -> Result<GroundProgram, GroundError> {
    let mut table = new_table(p)?;
    let consts: Vec<u32> = (0..table.num_consts() as u32).collect();
    let compiled: Vec<_> = p.rules.iter().map(|r| compile::compile(r, &mut table)).collect::<Result<_, _>>()?;
    let needed =
        compiled.iter().fold(0u64, |acc, r| acc.saturating_add((consts.len() as u64).saturating_pow(r.nvars as u32)));
    if needed > bound {
        return Err(GroundError::TooManyInstances { needed, bound });
    }
    let mut rules = Vec::new();
    for r in &compiled {
        if r.nvars > 0 && consts.is_empty() {
            continue;
        }
        let mut idx = vec![0usize; r.nvars];
        loop {
            let b: compile::Binding = idx.iter().map(|&i| Some(consts[i])).collect();
            let head = r.head.instantiate(&b, &mut table);
            let pos: Vec<_> = r.pos.iter().map(|a| a.instantiate(&b, &mut table)).collect();
            let neg: Vec<_> = r.neg.iter().map(|a| a.instantiate(&b, &mut table)).collect();
            rules.push(ConditionalFact::new(head, pos, neg));
            // Odometer over constant indexes.
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < consts.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(GroundProgram::from_rules(Arc::new(table), rules))
}

/// `lfp(T̄_P)`: instances whose positive body atoms are heads of instances
/// derived earlier. Negative literals are instantiated passively.
pub fn intelligent_ground(p: &Program) -> Result<GroundProgram, GroundError> {
    Ok(intelligent_ground_counted(p)?.0)
}

/// As [`intelligent_ground`], also returning the number of derived instances.
pub fn intelligent_ground_counted(p: &Program) -> Result<(GroundProgram, u64), GroundError> {
    require_range_restricted(&p.rules)?;
    let mut table = new_table(p)?;
    let compiled: Vec<_> = p.rules.iter().map(|r| compile::compile(r, &mut table)).collect::<Result<_, _>>()?;
    let empty = AtomSet::new();
    let prior = seminaive::Prior { facts: &empty, heads: &empty, simplify: None };
    let rules = seminaive::derive(&compiled, &mut table, &prior);
    let n = rules.len() as u64;
    Ok((GroundProgram::from_rules(Arc::new(table), rules), n))
}
