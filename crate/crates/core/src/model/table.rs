//! Interning of predicates, constants and ground atoms.

use std::collections::HashMap;
use std::fmt;

/// Dense id of a ground atom, assigned in first-seen order.
pub type AtomId = u32;
/// Dense id of a predicate.
pub type PredId = u32;
/// Dense id of a constant.
pub type ConstId = u32;

/// Bijective interning table for ground atoms.
///
/// Predicates are keyed by name; arity is fixed at first registration.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    preds: Vec<(String, usize)>,
    pred_index: HashMap<String, PredId>,
    consts: Vec<String>,
    const_index: HashMap<String, ConstId>,
    atoms: Vec<(PredId, Box<[ConstId]>)>,
    atom_index: HashMap<(PredId, Box<[ConstId]>), AtomId>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a predicate. Returns `None` if it already exists with another arity.
    pub fn intern_pred(&mut self, name: &str, arity: usize) -> Option<PredId> {
        if let Some(&id) = self.pred_index.get(name) {
            return (self.preds[id as usize].1 == arity).then_some(id);
        }
        let id = self.preds.len() as PredId;
        self.preds.push((name.to_string(), arity));
        self.pred_index.insert(name.to_string(), id);
        Some(id)
    }

    pub fn intern_const(&mut self, name: &str) -> ConstId {
        if let Some(&id) = self.const_index.get(name) {
            return id;
        }
        let id = self.consts.len() as ConstId;
        self.consts.push(name.to_string());
        self.const_index.insert(name.to_string(), id);
        id
    }

    pub fn intern_atom(&mut self, pred: PredId, args: &[ConstId]) -> AtomId {
        debug_assert_eq!(self.preds[pred as usize].1, args.len());
        let key = (pred, Box::<[ConstId]>::from(args));
        if let Some(&id) = self.atom_index.get(&key) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(key.clone());
        self.atom_index.insert(key, id);
        id
    }

    /// Interns a propositional atom, registering the predicate if needed.
    pub fn intern_prop(&mut self, name: &str) -> Option<AtomId> {
        let p = self.intern_pred(name, 0)?;
        Some(self.intern_atom(p, &[]))
    }

    pub fn pred_id(&self, name: &str) -> Option<PredId> {
        self.pred_index.get(name).copied()
    }

    pub fn const_id(&self, name: &str) -> Option<ConstId> {
        self.const_index.get(name).copied()
    }

    pub fn lookup(&self, pred: PredId, args: &[ConstId]) -> Option<AtomId> {
        self.atom_index.get(&(pred, Box::<[ConstId]>::from(args))).copied()
    }

    /// Looks an atom up by predicate name and constant names.
    pub fn lookup_named(&self, pred: &str, args: &[&str]) -> Option<AtomId> {
        let p = self.pred_id(pred)?;
        let args: Option<Vec<ConstId>> = args.iter().map(|a| self.const_id(a)).collect();
        self.lookup(p, &args?)
    }

    /// Parses a display string such as `p(a, b)` or `q` and looks it up.
    pub fn lookup_display(&self, text: &str) -> Option<AtomId> {
        let text = text.trim();
        match text.find('(') {
            None => self.lookup_named(text, &[]),
            Some(open) => {
                let inner = text[open + 1..].strip_suffix(')')?;
                let args: Vec<&str> = inner.split(',').map(str::trim).collect();
                self.lookup_named(text[..open].trim(), &args)
            }
        }
    }

    pub fn pred_of(&self, atom: AtomId) -> PredId {
        self.atoms[atom as usize].0
    }

    pub fn args_of(&self, atom: AtomId) -> &[ConstId] {
        &self.atoms[atom as usize].1
    }

    pub fn pred_name(&self, pred: PredId) -> &str {
        &self.preds[pred as usize].0
    }

    pub fn pred_arity(&self, pred: PredId) -> usize {
        self.preds[pred as usize].1
    }

    pub fn const_name(&self, c: ConstId) -> &str {
        &self.consts[c as usize]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_preds(&self) -> usize {
        self.preds.len()
    }

    pub fn num_consts(&self) -> usize {
        self.consts.len()
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = AtomId> {
        0..self.atoms.len() as AtomId
    }

    pub fn display(&self, atom: AtomId) -> DisplayAtom<'_> {
        DisplayAtom { table: self, atom }
    }

    pub fn atom_string(&self, atom: AtomId) -> String {
        self.display(atom).to_string()
    }
}

/// Formats an atom as `p(a, b)`, or `p` when nullary.
pub struct DisplayAtom<'a> {
    table: &'a AtomTable,
    atom: AtomId,
}

impl fmt::Display for DisplayAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (pred, args) = &self.table.atoms[self.atom as usize];
        f.write_str(self.table.pred_name(*pred))?;
        if !args.is_empty() {
            f.write_str("(")?;
            for (i, c) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(self.table.const_name(*c))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_round_trips_through_display() {
        let mut t = AtomTable::new();
        let p = t.intern_pred("p", 2).unwrap();
        let a = t.intern_const("a");
        let b = t.intern_const("b1");
        let x = t.intern_atom(p, &[a, b]);
        let q = t.intern_prop("q").unwrap();
        assert_eq!(t.atom_string(x), "p(a, b1)");
        assert_eq!(t.atom_string(q), "q");
        assert_eq!(t.lookup_display("p(a, b1)"), Some(x));
        assert_eq!(t.lookup_display("p(a,b1)"), Some(x));
        assert_eq!(t.lookup_display("q"), Some(q));
        assert_eq!(t.intern_atom(p, &[a, b]), x);
        assert_eq!(t.num_atoms(), 2);
    }

    #[test]
    fn arity_is_fixed() {
        let mut t = AtomTable::new();
        assert!(t.intern_pred("p", 1).is_some());
        assert!(t.intern_pred("p", 2).is_none());
    }
}
