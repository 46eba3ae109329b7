mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfs_core::gen::{random_program, random_query, Family, ProgramConfig};
use wfs_core::ground::intelligent_ground;
use wfs_core::magic::{annotate, magic_transform};
use wfs_core::strategy::StrategyName;
use wfs_core::{oracle, run, GroundProgram, PartialInterpretation, Program, Query, Truth};

fn case(seed: u64) -> Option<(Program, Query)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_program(&mut rng, &ProgramConfig::default());
    let q = random_query(&mut rng, &p)?;
    Some((p, q))
}

fn truth(w: &PartialInterpretation, g: &GroundProgram, name: &str) -> Truth {
    g.table().lookup_display(name).map_or(Truth::False, |a| w.value(a))
}

fn expected(p: &Program, q: &Query) -> Truth {
    let g = intelligent_ground(p).unwrap();
    truth(&oracle::afp(&g).w_star, &g, &q.goal.to_string())
}

fn check(p: &Program, q: &Query) -> Result<(), TestCaseError> {
    let want = expected(p, q);
    let (mp, meta) = magic_transform(p, q).unwrap();
    let gmp = intelligent_ground(&mp).unwrap();
    let ann = annotate(&gmp, &meta).unwrap();
    let answer = meta.answer.to_string();
    for s in StrategyName::MAGIC {
        let out = run(&s.expr(), &ann).unwrap().final_program;
        prop_assert_eq!(common::value_of(&out, &answer), want, "{} on {}\n{}", s, q.goal, p);
    }
    let wfm = oracle::wf_magic_ground(&gmp, &meta).unwrap();
    let mafp = oracle::magic_afp(&gmp, &meta).unwrap();
    prop_assert_eq!(truth(wfm.w_star(), &gmp, &answer), want);
    prop_assert_eq!(truth(&mafp.w_star, &gmp, &answer), want);
    prop_assert!(mafp.iterations() <= wfm.iterations());
    let tags = ann.tags().unwrap();
    let last_u = mafp.u.last().unwrap();
    let magic_u: Vec<u32> = last_u.iter().filter(|&a| tags.is_magic_atom(gmp.table(), a)).collect();
    prop_assert!(magic_u.iter().all(|&a| wfm.magic.contains(a)));

    // The staged strategy matches the two-phase method on every original
    // atom, and its first stage leaves exactly the first phase's magic
    // atoms non-false.
    let stage1 = run(&StrategyName::Afp.expr(), &ann).unwrap().final_program.known(&gmp.scope());
    let wfmst = run(&StrategyName::Wfmst.expr(), &ann).unwrap().final_program.known(&gmp.scope());
    for a in gmp.scope().iter() {
        if tags.is_magic_atom(gmp.table(), a) {
            prop_assert_eq!(stage1.value(a) != Truth::False, wfm.magic.contains(a));
        } else {
            prop_assert_eq!(wfmst.value(a), wfm.w_star().value(a), "{}", gmp.table().display(a));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 250, ..ProptestConfig::default() })]

    #[test]
    fn magic_strategies_answer_like_the_original_program(seed in any::<u64>()) {
        if let Some((p, q)) = case(seed) {
            check(&p, &q)?;
        }
    }
}

#[test]
fn chain_query_agrees_with_full_evaluation() {
    for n in [8, 12, 16, 20] {
        for f in [Family::ExA71, Family::ExA5Loop, Family::ExA5] {
            let i = f.instance(n);
            check(&i.program, &i.query).unwrap();
        }
    }
}

#[test]
fn query_over_base_facts_only() {
    let p = wfs_core::parse_program("e(a). e(b). q(X) :- e(X), not r(X). r(b).").unwrap();
    for (goal, want) in [("e(a)", Truth::True), ("e(c)", Truth::False)] {
        let q = wfs_core::parse_query(goal).unwrap();
        assert_eq!(expected(&p, &q), want);
        check(&p, &q).unwrap();
    }
}

#[test]
fn unrestricted_rule_answered_through_magic() {
    let p = wfs_core::parse_program("p(X) :- not q(X). q(b).").unwrap();
    let q = wfs_core::parse_query("p(a)").unwrap();
    let (mp, meta) = magic_transform(&p, &q).unwrap();
    let ann = annotate(&intelligent_ground(&mp).unwrap(), &meta).unwrap();
    let out = run(&StrategyName::Mrem.expr(), &ann).unwrap().final_program;
    assert_eq!(common::value_of(&out, "p_b(a)"), Truth::True);
}
