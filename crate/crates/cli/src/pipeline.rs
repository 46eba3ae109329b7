//! Program → ground program → strategy run, with optional magic rewriting.

use std::collections::BTreeMap;

use wfs_core::ground::{herbrand_ground, intelligent_ground, intelligent_ground_counted, scc_evaluate_with};
use wfs_core::magic::{annotate, instances, magic_transform, MagicMeta};
use wfs_core::model::Atom;
use wfs_core::{oracle, strategy, EvalStats, GroundProgram, Letter, Program, Query, StrategyExpr, Truth};

use crate::{input, CliResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GroundMode {
    /// Every instance over the program's constants.
    Naive,
    /// Instances whose positive body atoms are derivable.
    Intelligent,
    /// Component by component, reducing each before the next.
    Scc,
}

pub struct Setup<'a> {
    pub program: &'a Program,
    pub query: Option<&'a Query>,
    pub strategy: &'a StrategyExpr,
    pub magic: bool,
    pub ground: GroundMode,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    /// The program the strategy started from.
    pub grounded: GroundProgram,
    pub result: GroundProgram,
    /// Rewriting and grounding effort.
    pub stats: EvalStats,
    pub meta: Option<MagicMeta>,
    pub ground_used: GroundMode,
    /// Ground atoms written in the source program; reported as false when
    /// grounding never produced them.
    pub mentioned: Vec<String>,
}

fn value(p: &GroundProgram, a: u32) -> Truth {
    if p.is_fact(a) {
        Truth::True
    } else if p.is_head(a) {
        Truth::Undefined
    } else {
        Truth::False
    }
}

fn rename(a: &Atom, meta: &MagicMeta) -> String {
    match meta.origin.get(&a.predicate) {
        Some(p) => Atom::new(p.clone(), a.args.clone()).to_string(),
        None => a.to_string(),
    }
}

impl Outcome {
    /// Truth values of the query instances, or of every atom without a
    /// query, keyed by name in the source program's vocabulary.
    pub fn answers(&self, query: Option<&Query>) -> BTreeMap<String, Truth> {
        let p = &self.result;
        let table = p.table();
        let Some(q) = query else {
            let mut all: BTreeMap<String, Truth> =
                p.scope().iter().map(|a| (table.atom_string(a), value(p, a))).collect();
            for m in &self.mentioned {
                all.entry(m.clone()).or_insert(Truth::False);
            }
            return all;
        };
        let goal = self.meta.as_ref().map_or(&q.goal, |m| &m.answer);
        let mut out: BTreeMap<String, Truth> = instances(table, goal)
            .iter()
            .map(|a| {
                let name = table.atom_string(a);
                let name = match &self.meta {
                    Some(m) => rename(&parse_atom(&name), m),
                    None => name,
                };
                (name, value(p, a))
            })
            .collect();
        if out.is_empty() && q.goal.is_ground() {
            out.insert(q.goal.to_string(), Truth::False);
        }
        out
    }
}

fn parse_atom(text: &str) -> Atom {
    wfs_core::parse_query(text).map(|q| q.goal).unwrap_or_else(|_| Atom::prop(text))
}

pub fn uses_magic_letters(e: &StrategyExpr) -> bool {
    e.contains(Letter::M) || e.contains(Letter::R)
}

fn mentioned_atoms(p: &Program) -> Vec<String> {
    let mut v: Vec<String> = p
        .rules
        .iter()
        .flat_map(|r| std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)))
        .filter(|a| a.is_ground())
        .map(|a| a.to_string())
        .collect();
    v.sort();
    v.dedup();
    v
}

pub fn evaluate(s: &Setup) -> CliResult<Outcome> {
    let mut out = evaluate_inner(s)?;
    if out.meta.is_none() {
        out.mentioned = mentioned_atoms(s.program);
    }
    Ok(out)
}

fn evaluate_inner(s: &Setup) -> CliResult<Outcome> {
    if let Some(q) = s.query {
        q.validate(s.program).map_err(input)?;
    }
    if uses_magic_letters(s.strategy) && !s.magic {
        return Err(Failure::Input("strategy uses M or R, which need --magic".into()));
    }
    if s.magic {
        let q = s.query.ok_or_else(|| Failure::Input("--magic needs --query".into()))?;
        let (mp, meta) = magic_transform(s.program, q).map_err(input)?;
        let (gp, derived, used) = match s.ground {
            GroundMode::Naive => {
                let g = herbrand_ground(&mp).map_err(input)?;
                let n = g.len() as u64;
                (g, n, GroundMode::Naive)
            }
            mode => {
                if mode == GroundMode::Scc {
                    log::info!("component-wise grounding does not apply to magic programs; grounding intelligently");
                }
                let (g, n) = intelligent_ground_counted(&mp).map_err(input)?;
                (g, n, GroundMode::Intelligent)
            }
        };
        let gp = annotate(&gp, &meta).map_err(input)?;
        return finish(gp, derived, used, Some(meta), s.strategy);
    }
    if let Some(r) = s.program.first_unrestricted() {
        return Err(Failure::Input(format!("rule `{r}` is not range-restricted; use --magic with a query")));
    }
    match s.ground {
        GroundMode::Naive => {
            let g = herbrand_ground(s.program).map_err(input)?;
            let n = g.len() as u64;
            finish(g, n, GroundMode::Naive, None, s.strategy)
        }
        GroundMode::Intelligent => {
            let (g, n) = intelligent_ground_counted(s.program).map_err(input)?;
            finish(g, n, GroundMode::Intelligent, None, s.strategy)
        }
        GroundMode::Scc => {
            let ev = scc_evaluate_with(s.program, true, s.strategy).map_err(|e| match e {
                wfs_core::ground::GroundError::Engine(e) => Failure::from(e),
                e => input(e),
            })?;
            Ok(Outcome {
                grounded: ev.grounded,
                result: ev.remainder,
                stats: ev.stats,
                meta: None,
                ground_used: GroundMode::Scc,
                mentioned: Vec::new(),
            })
        }
    }
}

fn finish(
    gp: GroundProgram,
    derived: u64,
    used: GroundMode,
    meta: Option<MagicMeta>,
    expr: &StrategyExpr,
) -> CliResult<Outcome> {
    let run = strategy::run(expr, &gp)?;
    let mut stats = run.stats;
    stats.add_grounding(derived);
    Ok(Outcome { grounded: gp, result: run.final_program, stats, meta, ground_used: used, mentioned: Vec::new() })
}

/// The same answers computed by the alternating fixpoint oracle: over the
/// source program when it can be grounded, otherwise by the magic
/// alternating fixpoint over the magic program.
pub fn oracle_answers(s: &Setup, out: &Outcome) -> CliResult<BTreeMap<String, Truth>> {
    let wanted = out.answers(s.query);
    if s.program.is_range_restricted() {
        let g = intelligent_ground(s.program).map_err(input)?;
        let w = oracle::afp(&g).w_star;
        let lookup = |name: &str| g.table().lookup_display(name).map_or(Truth::False, |a| w.value(a));
        let mut res: BTreeMap<String, Truth> = wanted.keys().map(|n| (n.clone(), lookup(n))).collect();
        if s.query.is_none() {
            for a in g.scope().iter() {
                res.entry(g.table().atom_string(a)).or_insert(w.value(a));
            }
        }
        return Ok(res);
    }
    let meta = out.meta.as_ref().ok_or_else(|| Failure::Input("oracle needs a range-restricted program".into()))?;
    let tr = oracle::magic_afp(&out.grounded, meta).map_err(input)?;
    let q = s.query.expect("magic runs have a query");
    let table = out.grounded.table();
    let mut res = BTreeMap::new();
    for a in instances(table, &meta.answer).iter() {
        res.insert(rename(&parse_atom(&table.atom_string(a)), meta), tr.w_star.value(a));
    }
    if res.is_empty() && q.goal.is_ground() {
        res.insert(q.goal.to_string(), Truth::False);
    }
    Ok(res)
}

/// Lines describing every atom on which the two answer maps differ.
pub fn diff(got: &BTreeMap<String, Truth>, want: &BTreeMap<String, Truth>) -> Vec<String> {
    let mut keys: Vec<&String> = got.keys().chain(want.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let g = got.get(k).copied().unwrap_or(Truth::False);
            let w = want.get(k).copied().unwrap_or(Truth::False);
            (g != w).then(|| format!("{k}: strategy {g:?}, oracle {w:?}"))
        })
        .collect()
}
