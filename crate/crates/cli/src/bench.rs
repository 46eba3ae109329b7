//! `wfs bench`: work counts of strategies over the built-in families.

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use wfs_core::gen::Family;
use wfs_core::{strategy, EvalStats, GroundProgram, Letter};

use crate::pipeline::{evaluate, uses_magic_letters, GroundMode, Setup};
use crate::{input, CliResult, Failure};

/// One CSV line: `family,n,strategy,work_units,P,S,N,F,L,M,R,true,undef,wall_ms`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub strategy: String,
    pub work_units: u64,
    #[serde(rename = "P")]
    pub p: u64,
    #[serde(rename = "S")]
    pub s: u64,
    #[serde(rename = "N")]
    pub n_red: u64,
    #[serde(rename = "F")]
    pub f: u64,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "R")]
    pub r: u64,
    /// Facts of the final program.
    #[serde(rename = "true")]
    pub true_count: usize,
    /// Heads of the final program that are not facts.
    pub undef: usize,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn new(
        family: &str,
        n: usize,
        strategy: &str,
        stats: &EvalStats,
        result: &GroundProgram,
        wall: Duration,
    ) -> Self {
        let c = |l: Letter| stats.count(l);
        let heads = result.heads();
        BenchRow {
            family: family.into(),
            n,
            strategy: strategy.into(),
            work_units: stats.work_units,
            p: c(Letter::P),
            s: c(Letter::S),
            n_red: c(Letter::N),
            f: c(Letter::F),
            l: c(Letter::L),
            m: c(Letter::M),
            r: c(Letter::R),
            true_count: result.facts().len(),
            undef: heads.len() - heads.intersection(result.facts()).len(),
            wall_ms: wall.as_secs_f64() * 1000.0,
        }
    }
}

/// Grounds the family member intelligently (magic-transformed for `p(a)`
/// when the strategy uses M or R) and runs the strategy.
pub fn bench_one(family: Family, n: usize, strategy_text: &str) -> CliResult<BenchRow> {
    let expr = strategy::resolve(strategy_text).map_err(input)?;
    let inst = family.instance(n);
    let started = Instant::now();
    let setup = Setup {
        program: &inst.program,
        query: Some(&inst.query),
        strategy: &expr,
        magic: uses_magic_letters(&expr),
        ground: GroundMode::Intelligent,
    };
    let out = evaluate(&setup)?;
    Ok(BenchRow::new(family.name(), n, strategy_text, &out.stats, &out.result, started.elapsed()))
}

/// All combinations, computed in parallel, in input order.
pub fn run(families: &[Family], ns: &[usize], strategies: &[String]) -> CliResult<Vec<BenchRow>> {
    for s in strategies {
        strategy::resolve(s).map_err(input)?;
    }
    let combos: Vec<(Family, usize, &str)> = families
        .iter()
        .flat_map(|&f| ns.iter().flat_map(move |&n| strategies.iter().map(move |s| (f, n, s.as_str()))))
        .collect();
    combos.par_iter().map(|&(f, n, s)| bench_one(f, n, s)).collect()
}

pub fn write_rows(path: &Path, rows: &[BenchRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(input)?;
    write_all(&mut w, rows)
}

pub fn to_csv(rows: &[BenchRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_all(&mut w, rows)?;
    let bytes = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn write_all<W: std::io::Write>(w: &mut csv::Writer<W>, rows: &[BenchRow]) -> CliResult<()> {
    for r in rows {
        w.serialize(r).map_err(input)?;
    }
    w.flush().map_err(input)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_order() {
        let rows = run(&[Family::ExA5], &[4, 8], &["afp".into(), "remainder".into()]).unwrap();
        let keys: Vec<(usize, &str)> = rows.iter().map(|r| (r.n, r.strategy.as_str())).collect();
        assert_eq!(keys, [(4, "afp"), (4, "remainder"), (8, "afp"), (8, "remainder")]);
        let csv = to_csv(&rows).unwrap();
        assert!(csv.starts_with("family,n,strategy,work_units,P,S,N,F,L,M,R,true,undef,wall_ms\n"));
        assert!(rows.iter().all(|r| r.work_units > 0));
    }

    #[test]
    fn magic_strategies_get_magic_programs() {
        let row = bench_one(Family::ExA71, 16, "mrem").unwrap();
        assert!(row.r > 0);
        assert!(run(&[Family::ExA5], &[4], &["bogus".into()]).is_err());
    }

    #[test]
    fn family_work_relations() {
        for n in [8, 16, 32] {
            let afp = bench_one(Family::ExA5, n, "afp").unwrap().work_units;
            let rem = bench_one(Family::ExA5, n, "remainder").unwrap().work_units;
            assert!(rem <= afp);
            let mafp = bench_one(Family::ExA5Loop, n, "mafp").unwrap().work_units as f64;
            let mrem = bench_one(Family::ExA5Loop, n, "mrem").unwrap().work_units as f64;
            assert!((mafp - mrem).abs() <= 0.05 * mafp.max(mrem));
        }
    }

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((log_log_slope(&pts) - 2.0).abs() < 1e-12);
    }
}
