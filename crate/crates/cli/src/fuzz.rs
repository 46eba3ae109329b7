//! `wfs fuzz`: differential checks over seeded random programs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wfs_core::gen::{random_ground_program, random_program, random_query, GroundConfig, ProgramConfig};
use wfs_core::ground::intelligent_ground;
use wfs_core::magic::{annotate, magic_transform};
use wfs_core::rewrite::{remainder, wred};
use wfs_core::strategy::{named, StrategyName};
use wfs_core::{oracle, run as run_strategy, GroundProgram, Program, Query, RewriteState, Truth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Random maximal interleavings reach the same normal form.
    Confluence,
    /// Remainder and Fitting normal forms match the fixpoint oracles.
    Oracle,
    /// Magic strategies answer queries like the source program.
    Magic,
}

#[derive(Clone, Copy, Debug)]
pub struct FuzzArgs {
    pub seed: u64,
    pub count: usize,
    pub max_atoms: usize,
    pub max_rules: usize,
    pub mode: Mode,
}

impl Default for FuzzArgs {
    fn default() -> Self {
        FuzzArgs { seed: 1, count: 1000, max_atoms: 30, max_rules: 60, mode: Mode::Confluence }
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub case: usize,
    pub program: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub checked: usize,
    pub failure: Option<Counterexample>,
}

impl Report {
    pub fn render(&self) -> String {
        match &self.failure {
            None => "ok".into(),
            Some(c) => format!("counterexample (case {}):\n{}{}", c.case, c.program, c.detail),
        }
    }
}

pub const INTERLEAVINGS: usize = 5;

/// Runs `INTERLEAVINGS` random maximal P/S/N/F/L sequences and compares
/// each final program with the remainder.
pub fn confluence_check(p: &GroundProgram, seed: u64) -> Option<String> {
    let want = remainder(p).canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..INTERLEAVINGS {
        let mut s = RewriteState::new(p);
        loop {
            match s.step_random(&mut rng) {
                Ok(Some(_)) => {}
                Ok(None) => break,
                Err(e) => return Some(format!("interleaving {k}: {e}\n")),
            }
        }
        let got = s.to_program();
        if got.canonical() != want {
            return Some(format!("interleaving {k} ended in\n{got}remainder is\n{}", remainder(p)));
        }
    }
    None
}

/// Remainder vs alternating fixpoint, reduction by the well-founded model,
/// Fitting normal form vs Fitting operator.
pub fn oracle_check(p: &GroundProgram) -> Option<String> {
    let scope = p.scope();
    let w = oracle::afp(p).w_star;
    let rem = remainder(p);
    if rem.known(&scope) != w {
        return Some(format!(
            "remainder model {:?} differs from the alternating fixpoint {:?}\n",
            rem.known(&scope).named(p.table(), &scope),
            w.named(p.table(), &scope)
        ));
    }
    if wred(p, &w).canonical() != rem.canonical() {
        return Some("reduction by the well-founded model differs from the remainder\n".into());
    }
    let fit = match run_strategy(&named(StrategyName::Fitting), p) {
        Ok(r) => r.final_program,
        Err(e) => return Some(format!("{e}\n")),
    };
    let fl = oracle::fitting_lfp(p);
    if fit.known(&scope) != fl {
        return Some(format!(
            "Fitting normal form {:?} differs from the Fitting operator {:?}\n",
            fit.known(&scope).named(p.table(), &scope),
            fl.named(p.table(), &scope)
        ));
    }
    None
}

/// Truth of the ground query `q` in the well-founded model of `p`.
pub fn expected_answer(p: &Program, q: &Query) -> Result<Truth, String> {
    let g = intelligent_ground(p).map_err(|e| e.to_string())?;
    let w = oracle::afp(&g).w_star;
    Ok(g.table().lookup_display(&q.goal.to_string()).map_or(Truth::False, |a| w.value(a)))
}

/// Answers of every magic strategy for `q`, each paired with the strategy.
pub fn magic_answers(p: &Program, q: &Query) -> Result<Vec<(StrategyName, Truth)>, String> {
    let (mp, meta) = magic_transform(p, q).map_err(|e| e.to_string())?;
    let g = intelligent_ground(&mp).map_err(|e| e.to_string())?;
    let g = annotate(&g, &meta).map_err(|e| e.to_string())?;
    let answer = meta.answer.to_string();
    let mut out = Vec::new();
    for s in StrategyName::MAGIC {
        let r = run_strategy(&s.expr(), &g).map_err(|e| e.to_string())?.final_program;
        let v = match r.table().lookup_display(&answer) {
            Some(a) if r.is_fact(a) => Truth::True,
            Some(a) if r.is_head(a) => Truth::Undefined,
            _ => Truth::False,
        };
        out.push((s, v));
    }
    Ok(out)
}

pub fn magic_check(p: &Program, q: &Query) -> Option<String> {
    let want = match expected_answer(p, q) {
        Ok(v) => v,
        Err(e) => return Some(e),
    };
    let got = match magic_answers(p, q) {
        Ok(v) => v,
        Err(e) => return Some(e),
    };
    let bad: Vec<String> = got.iter().filter(|(_, v)| *v != want).map(|(s, v)| format!("{s}: {v:?}")).collect();
    (!bad.is_empty()).then(|| format!("query {}: oracle {want:?}, {}\n", q.goal, bad.join(", ")))
}

fn minimize_ground(p: GroundProgram, fails: impl Fn(&GroundProgram) -> bool) -> GroundProgram {
    let mut cur = p;
    'shrink: loop {
        let rules: Vec<_> = cur.rules().cloned().collect();
        for i in 0..rules.len() {
            let rest = rules.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone());
            let cand = GroundProgram::from_rules(cur.table_arc().clone(), rest);
            if fails(&cand) {
                cur = cand;
                continue 'shrink;
            }
        }
        return cur;
    }
}

fn minimize_program(p: Program, fails: impl Fn(&Program) -> bool) -> Program {
    let mut cur = p;
    'shrink: loop {
        for i in 0..cur.rules.len() {
            let mut rules = cur.rules.clone();
            rules.remove(i);
            let cand = Program::new(rules);
            if fails(&cand) {
                cur = cand;
                continue 'shrink;
            }
        }
        return cur;
    }
}

pub fn run(args: &FuzzArgs) -> Report {
    let mut master = ChaCha8Rng::seed_from_u64(args.seed);
    let gcfg = GroundConfig { max_atoms: args.max_atoms, max_rules: args.max_rules, ..GroundConfig::default() };
    let pcfg = ProgramConfig::default();
    for case in 0..args.count {
        let case_seed: u64 = master.random();
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
        let failure = match args.mode {
            Mode::Confluence | Mode::Oracle => {
                let p = random_ground_program(&mut rng, &gcfg);
                let check = |g: &GroundProgram| match args.mode {
                    Mode::Confluence => confluence_check(g, case_seed),
                    _ => oracle_check(g),
                };
                check(&p).map(|_| {
                    let small = minimize_ground(p, |g| check(g).is_some());
                    let detail = check(&small).unwrap_or_default();
                    Counterexample { case, program: small.to_string(), detail }
                })
            }
            Mode::Magic => {
                let p = random_program(&mut rng, &pcfg);
                let Some(q) = random_query(&mut rng, &p) else { continue };
                magic_check(&p, &q).map(|_| {
                    let fails = |c: &Program| q.validate(c).is_ok() && magic_check(c, &q).is_some();
                    let small = minimize_program(p, fails);
                    let detail = magic_check(&small, &q).unwrap_or_default();
                    Counterexample { case, program: small.to_string(), detail }
                })
            }
        };
        if failure.is_some() {
            return Report { checked: case + 1, failure };
        }
    }
    Report { checked: args.count, failure: None }
}
