mod common;

use common::ground_program;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfs_core::ground::herbrand_ground;
use wfs_core::parser::serialize_program;
use wfs_core::rewrite::{possible_atoms, remainder, wred};
use wfs_core::strategy::{afp_snapshots, named, StrategyName};
use wfs_core::{oracle, parse_program, run, AtomSet, RewriteState};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn remainder_encodes_the_alternating_fixpoint(p in ground_program(12, 20)) {
        let trace = oracle::afp(&p);
        prop_assert!(trace.is_monotone());
        let rem = remainder(&p);
        prop_assert_eq!(rem.known(&p.scope()), trace.w_star.clone());
        prop_assert_eq!(wred(&p, &trace.w_star).canonical(), rem.canonical());
    }

    #[test]
    fn fitting_strategy_matches_fitting_operator(p in ground_program(12, 20)) {
        let fit = run(&named(StrategyName::Fitting), &p).unwrap().final_program;
        prop_assert_eq!(fit.known(&p.scope()), oracle::fitting_lfp(&p));
    }

    #[test]
    fn every_strategy_without_magic_reaches_the_remainder(p in ground_program(10, 16)) {
        let rem = remainder(&p).canonical();
        for s in [StrategyName::Afp, StrategyName::Remainder] {
            prop_assert_eq!(run(&s.expr(), &p).unwrap().final_program.canonical(), rem.clone());
        }
    }

    #[test]
    fn random_interleavings_are_confluent(p in ground_program(10, 20), seed in any::<u64>()) {
        let rem = remainder(&p).canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let mut s = RewriteState::new(&p);
            let (mut facts, mut heads, mut lits) = (s.facts(), s.heads(), s.literal_count());
            while s.step_random(&mut rng).unwrap().is_some() {
                let (f, h, l) = (s.facts(), s.heads(), s.literal_count());
                prop_assert!(facts.is_subset(&f));
                prop_assert!(h.is_subset(&heads));
                prop_assert!(l < lits);
                (facts, heads, lits) = (f, h, l);
            }
            prop_assert_eq!(s.to_program().canonical(), rem.clone());
        }
    }

    #[test]
    fn transformation_trace_follows_the_alternating_fixpoint(p in ground_program(12, 20)) {
        let trace = oracle::afp(&p);
        let snaps = afp_snapshots(&p);
        prop_assert!(snaps.single_pass);
        let at = |v: &Vec<AtomSet>, i: usize| v[i.min(v.len() - 1)].clone();
        for i in 0..trace.k.len().max(snaps.k.len()) {
            prop_assert_eq!(at(&snaps.k, i), at(&trace.k, i), "K at {}", i);
            prop_assert_eq!(at(&snaps.u, i), at(&trace.u, i), "U at {}", i);
        }
        prop_assert_eq!(snaps.final_program.canonical(), remainder(&p).canonical());
    }

    #[test]
    fn loop_detection_keeps_exactly_the_possible_heads(p in ground_program(12, 20)) {
        let j = AtomSet::new();
        let possible = possible_atoms(&p);
        prop_assert_eq!(possible.clone(), oracle::lfp(&p, &j, &AtomSet::new()));
        let after = run(&wfs_core::parse_strategy("L").unwrap(), &p).unwrap().final_program;
        prop_assert!(after.heads().is_subset(&possible));
        prop_assert!(p.facts().is_subset(after.facts()));
    }

    #[test]
    fn serialized_programs_read_back(p in ground_program(8, 12)) {
        let text = serialize_program(&p);
        let back = herbrand_ground(&parse_program(&text).unwrap()).unwrap();
        prop_assert_eq!(back.canonical(), p.canonical());
    }

    #[test]
    fn remainder_is_a_normal_form(p in ground_program(10, 16)) {
        let rem = remainder(&p);
        let again = run(&named(StrategyName::Remainder), &rem).unwrap();
        prop_assert_eq!(again.final_program.canonical(), rem.canonical());
        prop_assert_eq!(again.stats.work_units, rem.literal_count() as u64);
        prop_assert!(rem.literal_count() <= p.literal_count());
    }
}
