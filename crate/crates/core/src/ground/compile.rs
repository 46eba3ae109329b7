//! Rules compiled against an atom table: predicates and constants become
//! ids, variables become slot numbers.

use crate::model::{Atom, AtomId, AtomTable, ConstId, PredId, Rule, Term};

use super::GroundError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CTerm {
    Const(ConstId),
    Var(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct CAtom {
    pub pred: PredId,
    pub args: Vec<CTerm>,
}

#[derive(Clone, Debug)]
pub(crate) struct CRule {
    pub head: CAtom,
    pub pos: Vec<CAtom>,
    pub neg: Vec<CAtom>,
    pub nvars: usize,
}

pub(crate) type Binding = Vec<Option<ConstId>>;

pub(crate) fn compile(rule: &Rule, table: &mut AtomTable) -> Result<CRule, GroundError> {
    let vars = rule.vars();
    let mut atom = |a: &Atom| -> Result<CAtom, GroundError> {
        let pred = table.intern_pred(&a.predicate, a.arity()).ok_or_else(|| GroundError::Arity(a.predicate.clone()))?;
        let args = a
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => CTerm::Const(table.intern_const(c)),
                Term::Var(v) => CTerm::Var(vars.iter().position(|x| x == v).expect("collected")),
            })
            .collect();
        Ok(CAtom { pred, args })
    };
    Ok(CRule {
        head: atom(&rule.head)?,
        pos: rule.pos().map(&mut atom).collect::<Result<_, _>>()?,
        neg: rule.neg().map(&mut atom).collect::<Result<_, _>>()?,
        nvars: vars.len(),
    })
}

impl CAtom {
    /// Interns the instance under a complete binding.
    pub fn instantiate(&self, b: &Binding, table: &mut AtomTable) -> AtomId {
        let args: Vec<ConstId> = self
            .args
            .iter()
            .map(|t| match *t {
                CTerm::Const(c) => c,
                CTerm::Var(v) => b[v].expect("binding covers every variable"),
            })
            .collect();
        table.intern_atom(self.pred, &args)
    }

    /// Extends `b` so this atom matches `args`; records newly bound slots in
    /// `trail`. Leaves `b` partially extended on failure (caller undoes).
    pub fn unify(&self, args: &[ConstId], b: &mut Binding, trail: &mut Vec<usize>) -> bool {
        for (t, &c) in self.args.iter().zip(args) {
            match *t {
                CTerm::Const(k) if k != c => return false,
                CTerm::Const(_) => {}
                CTerm::Var(v) => match b[v] {
                    Some(x) if x != c => return false,
                    Some(_) => {}
                    None => {
                        b[v] = Some(c);
                        trail.push(v);
                    }
                },
            }
        }
        true
    }

    /// The first argument position whose value is known under `b`.
    pub fn bound_arg(&self, b: &Binding) -> Option<(usize, ConstId)> {
        self.args.iter().enumerate().find_map(|(i, t)| match *t {
            CTerm::Const(c) => Some((i, c)),
            CTerm::Var(v) => b[v].map(|c| (i, c)),
        })
    }
}
