//! `wfs eval`: evaluate a program file and print its model or remainder.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use wfs_core::parser::{parse_query, serialize_program};
use wfs_core::{parse_program, strategy, Truth};

use crate::bench::{write_rows, BenchRow};
use crate::pipeline::{diff, evaluate, oracle_answers, GroundMode, Setup};
use crate::{input, CliResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputKind {
    Model,
    Remainder,
    Both,
}

#[derive(Clone, Debug)]
pub struct EvalArgs {
    pub program_text: String,
    pub program_name: String,
    pub query: Option<String>,
    pub strategy: String,
    pub magic: bool,
    pub ground: GroundMode,
    pub output: OutputKind,
    pub check_oracle: bool,
    pub stats: Option<std::path::PathBuf>,
}

/// Renders answers as `true: …`, `false: …`, `undefined: …` lines.
pub fn format_model(answers: &BTreeMap<String, Truth>) -> String {
    let pick =
        |t: Truth| answers.iter().filter(|(_, v)| **v == t).map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    writeln!(s, "true: {}", pick(Truth::True)).unwrap();
    writeln!(s, "false: {}", pick(Truth::False)).unwrap();
    writeln!(s, "undefined: {}", pick(Truth::Undefined)).unwrap();
    s
}

/// Runs the command and returns what it prints on success.
pub fn run(args: &EvalArgs) -> CliResult<String> {
    let program = parse_program(&args.program_text).map_err(input)?;
    let query = args.query.as_deref().map(parse_query).transpose().map_err(input)?;
    let expr = strategy::resolve(&args.strategy).map_err(input)?;
    let setup =
        Setup { program: &program, query: query.as_ref(), strategy: &expr, magic: args.magic, ground: args.ground };
    let started = std::time::Instant::now();
    let out = evaluate(&setup)?;
    let wall = started.elapsed();
    let answers = out.answers(query.as_ref());

    let mut text = String::new();
    if matches!(args.output, OutputKind::Model | OutputKind::Both) {
        text.push_str(&format_model(&answers));
    }
    if matches!(args.output, OutputKind::Remainder | OutputKind::Both) {
        text.push_str(&serialize_program(&out.result));
    }
    if let Some(path) = &args.stats {
        let row = BenchRow::new(&args.program_name, 0, &args.strategy, &out.stats, &out.result, wall);
        write_rows(Path::new(path), &[row])?;
    }
    if args.check_oracle {
        let want = oracle_answers(&setup, &out)?;
        let d = diff(&answers, &want);
        if !d.is_empty() {
            return Err(Failure::Mismatch(format!("{text}{}", d.join("\n"))));
        }
    }
    Ok(text)
}
