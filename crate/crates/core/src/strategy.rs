//! Regular strategy expressions executed over a [`RewriteState`].

use std::fmt;
use std::str::FromStr;

use crate::model::{AtomSet, GroundProgram};
use crate::parser::{parse_strategy, ParseError, StrategyExpr};
use crate::rewrite::{EngineError, EvalStats, Letter, RewriteState};

/// The named strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyName {
    Fitting,
    Afp,
    Remainder,
    Wfmst,
    Wfrem,
    Mafp,
    Mrem,
}

impl StrategyName {
    pub const ALL: [StrategyName; 7] = [
        StrategyName::Fitting,
        StrategyName::Afp,
        StrategyName::Remainder,
        StrategyName::Wfmst,
        StrategyName::Wfrem,
        StrategyName::Mafp,
        StrategyName::Mrem,
    ];

    pub const MAGIC: [StrategyName; 4] =
        [StrategyName::Wfmst, StrategyName::Wfrem, StrategyName::Mafp, StrategyName::Mrem];

    pub fn text(self) -> &'static str {
        match self {
            StrategyName::Fitting => "(PSNF)*",
            StrategyName::Afp => "(PSNLF)*",
            StrategyName::Remainder => "((PSNF)*L)*",
            StrategyName::Wfmst => "(PSNLF)*M(PSNLF)*",
            StrategyName::Wfrem => "((PSNF)*L)*M((PSNF)*L)*",
            StrategyName::Mafp => "(P(SR)*NLF)*",
            StrategyName::Mrem => "(((PSNF)*R)*L)*",
        }
    }

    pub fn expr(self) -> StrategyExpr {
        parse_strategy(self.text()).expect("built-in strategies parse")
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyName::Fitting => "fitting",
            StrategyName::Afp => "afp",
            StrategyName::Remainder => "remainder",
            StrategyName::Wfmst => "wfmst",
            StrategyName::Wfrem => "wfrem",
            StrategyName::Mafp => "mafp",
            StrategyName::Mrem => "mrem",
        }
    }
}

impl fmt::Display for StrategyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyName {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        StrategyName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| ParseError::Strategy(format!("unknown strategy name `{s}`")))
    }
}

pub fn named(name: StrategyName) -> StrategyExpr {
    name.expr()
}

/// Accepts a strategy name or an expression.
pub fn resolve(text: &str) -> Result<StrategyExpr, ParseError> {
    match text.parse::<StrategyName>() {
        Ok(n) => Ok(n.expr()),
        Err(_) => parse_strategy(text),
    }
}

/// Result of executing a strategy.
#[derive(Clone, Debug)]
pub struct StrategyRun {
    pub expr: StrategyExpr,
    pub initial: GroundProgram,
    pub final_program: GroundProgram,
    pub stats: EvalStats,
    /// Atoms that became facts during the run, in order.
    pub derived_facts: Vec<u32>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Record full facts/heads sets at every outermost-star iteration.
    pub record_sets: bool,
}

pub fn run(expr: &StrategyExpr, p: &GroundProgram) -> Result<StrategyRun, EngineError> {
    run_with(expr, p, RunOptions::default())
}

pub fn run_with(expr: &StrategyExpr, p: &GroundProgram, opts: RunOptions) -> Result<StrategyRun, EngineError> {
    for l in [Letter::M, Letter::R] {
        if expr.contains(l) && p.tags().is_none() {
            return Err(EngineError::MissingMagicMeta(l));
        }
    }
    let mut state = RewriteState::new(p);
    execute(expr, &mut state, opts)?;
    Ok(StrategyRun {
        expr: expr.clone(),
        initial: p.clone(),
        final_program: state.to_program(),
        derived_facts: state.derived_facts().to_vec(),
        stats: state.stats().clone(),
    })
}

/// Executes `expr` on an existing state. Iterations of an outermost star
/// are recorded as snapshots.
pub fn execute(expr: &StrategyExpr, state: &mut RewriteState, opts: RunOptions) -> Result<(), EngineError> {
    match expr {
        StrategyExpr::Star(body) => star(body, state, Some(opts)),
        StrategyExpr::Seq(items) => items.iter().try_for_each(|e| eval(e, state)),
        StrategyExpr::Letter(l) => state.normal_form(*l),
    }
}

fn eval(expr: &StrategyExpr, state: &mut RewriteState) -> Result<(), EngineError> {
    match expr {
        StrategyExpr::Letter(l) => state.normal_form(*l),
        StrategyExpr::Seq(items) => items.iter().try_for_each(|e| eval(e, state)),
        StrategyExpr::Star(body) => star(body, state, None),
    }
}

/// Repeats `body` until one full execution leaves the rule set unchanged.
/// Every change bumps the state's version, so comparing versions is the
/// same as comparing rule sets.
fn star(body: &StrategyExpr, state: &mut RewriteState, record: Option<RunOptions>) -> Result<(), EngineError> {
    let mut i = 0;
    loop {
        let before = state.version();
        eval(body, state)?;
        if let Some(opts) = record {
            state.snapshot(format!("iteration {i}"), opts.record_sets);
        }
        i += 1;
        if state.version() == before {
            return Ok(());
        }
    }
}

/// Facts and heads at each half-iteration of the transformation-based
/// alternating fixpoint.
#[derive(Clone, Debug)]
pub struct AfpSnapshots {
    /// `facts(K̄_i)` for i = 0, 1, …
    pub k: Vec<AtomSet>,
    /// `heads(Ū_i)` for i = 0, 1, …
    pub u: Vec<AtomSet>,
    pub final_program: GroundProgram,
    pub stats: EvalStats,
    /// Whether every `(PS)` and `(NLF)` half-step was stable after one body execution.
    pub single_pass: bool,
}

/// K̄_0 = S-normal form of the LF-normal form of `p`; Ū_i = NLF-normal
/// form of K̄_i; K̄_{i+1} = PS-normal form of Ū_i; until a full round
/// changes nothing.
pub fn afp_snapshots(p: &GroundProgram) -> AfpSnapshots {
    use Letter::*;
    let mut s = RewriteState::new(p);
    let mut single_pass = true;
    let closure = |s: &mut RewriteState, letters: &[Letter]| -> bool {
        let mut passes = 0;
        loop {
            let before = s.version();
            for &l in letters {
                s.normal_form(l).expect("ground rewriting keeps its invariants");
            }
            passes += 1;
            if s.version() == before {
                return passes <= 2;
            }
        }
    };
    closure(&mut s, &[L, F]);
    closure(&mut s, &[S]);
    let mut k = vec![s.facts()];
    let mut u = Vec::new();
    loop {
        single_pass &= closure(&mut s, &[N, L, F]);
        u.push(s.heads());
        let before = s.version();
        single_pass &= closure(&mut s, &[P, S]);
        if s.version() == before {
            break;
        }
        k.push(s.facts());
    }
    AfpSnapshots { k, u, final_program: s.to_program(), stats: s.stats().clone(), single_pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PropBuilder;

    fn loop_program() -> GroundProgram {
        let mut b = PropBuilder::new();
        b.fact("p").rule("q", &[], &["p"]).rule("q", &["r"], &[]).rule("r", &["q"], &[]);
        b.build()
    }

    fn rules(p: &GroundProgram) -> Vec<String> {
        p.canonical().into_iter().collect()
    }

    #[test]
    fn fitting_keeps_positive_loop() {
        let r = run(&named(StrategyName::Fitting), &loop_program()).unwrap();
        assert_eq!(rules(&r.final_program), ["p.", "q :- r.", "r :- q."]);
    }

    #[test]
    fn remainder_removes_positive_loop() {
        let r = run(&named(StrategyName::Remainder), &loop_program()).unwrap();
        assert_eq!(rules(&r.final_program), ["p."]);
        assert_eq!(r.stats.count(Letter::N), 1);
    }

    #[test]
    fn named_shapes() {
        assert_eq!(named(StrategyName::Afp), StrategyExpr::star(StrategyExpr::letters("PSNLF")));
        let inner = StrategyExpr::star(StrategyExpr::letters("PSNF"));
        assert_eq!(named(StrategyName::Fitting), inner);
        let mrem = StrategyExpr::star(StrategyExpr::seq(vec![
            StrategyExpr::star(StrategyExpr::seq(vec![inner, StrategyExpr::letters("R")])),
            StrategyExpr::letters("L"),
        ]));
        assert_eq!(named(StrategyName::Mrem), mrem);
        assert!("nope".parse::<StrategyName>().is_err());
        assert_eq!(resolve("afp").unwrap(), resolve("(PSNLF)*").unwrap());
    }

    #[test]
    fn magic_letters_need_annotation() {
        let err = run(&named(StrategyName::Mafp), &loop_program()).unwrap_err();
        assert_eq!(err, EngineError::MissingMagicMeta(Letter::R));
    }

    #[test]
    fn afp_schedule_ends_in_remainder() {
        let snaps = afp_snapshots(&loop_program());
        assert_eq!(rules(&snaps.final_program), ["p."]);
        assert!(snaps.single_pass);
    }
}
