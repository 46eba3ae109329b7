mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfs_core::gen::{random_program, ProgramConfig};
use wfs_core::ground::{herbrand_ground, intelligent_ground, mixed_recursion, scc_evaluate, scc_partition};
use wfs_core::rewrite::remainder;
use wfs_core::{oracle, AtomSet, Program};

fn program(seed: u64) -> Program {
    random_program(&mut ChaCha8Rng::seed_from_u64(seed), &ProgramConfig::default())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 250, ..ProptestConfig::default() })]

    #[test]
    fn intelligent_heads_are_the_possible_atoms_of_the_herbrand_instance(seed in any::<u64>()) {
        let p = program(seed);
        let h = herbrand_ground(&p).unwrap();
        let g = intelligent_ground(&p).unwrap();
        let lfp = oracle::lfp(&h, &AtomSet::new(), &AtomSet::new());
        prop_assert_eq!(common::names(&g, g.heads().iter()), common::names(&h, lfp.iter()));
    }

    #[test]
    fn all_groundings_share_one_remainder(seed in any::<u64>()) {
        let p = program(seed);
        let h = remainder(&herbrand_ground(&p).unwrap()).canonical();
        let g = remainder(&intelligent_ground(&p).unwrap()).canonical();
        prop_assert_eq!(&h, &g, "{}", p);
        for simplify in [false, true] {
            let ev = scc_evaluate(&p, simplify).unwrap();
            prop_assert_eq!(&ev.remainder.canonical(), &h, "{}", p);
            prop_assert_eq!(ev.groups, scc_partition(&p).groups.len());
        }
    }

    #[test]
    fn loop_detection_is_idle_without_mixed_recursion(seed in any::<u64>()) {
        let p = program(seed);
        if mixed_recursion(&p).is_empty() {
            prop_assert_eq!(scc_evaluate(&p, true).unwrap().stats.l_deletions, 0, "{}", p);
        }
    }

    #[test]
    fn partition_lists_dependencies_first(seed in any::<u64>()) {
        let p = program(seed);
        let part = scc_partition(&p);
        let mut seen: Vec<&str> = Vec::new();
        for g in &part.groups {
            for r in &g.rules {
                for l in &r.body {
                    let pred = l.atom.predicate.as_str();
                    let defined_later = part.groups.iter().any(|h| h.predicates.iter().any(|x| x == pred))
                        && !seen.contains(&pred)
                        && !g.predicates.iter().any(|x| x == pred);
                    prop_assert!(!defined_later, "{} used before its group", pred);
                }
            }
            seen.extend(g.predicates.iter().map(String::as_str));
        }
    }
}
