use crate::model::{AtomSet, GroundProgram};

/// `lfp(T_{P,∅})`: atoms derivable when every negative literal is taken as
/// true. Counting propagation, linear in the program size.
pub fn possible_atoms(p: &GroundProgram) -> AtomSet {
    let n = p.table().num_atoms();
    let rules: Vec<_> = p.rules().collect();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut out = AtomSet::with_capacity(n);
    let mut stack = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        missing.push(r.pos.len());
        for &a in r.pos.iter() {
            watch[a as usize].push(i);
        }
        if r.pos.is_empty() && out.insert(r.head) {
            stack.push(r.head);
        }
    }
    while let Some(a) = stack.pop() {
        for &i in &watch[a as usize] {
            missing[i] -= 1;
            if missing[i] == 0 && out.insert(rules[i].head) {
                stack.push(rules[i].head);
            }
        }
    }
    out
}
