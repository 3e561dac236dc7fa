mod common;

use std::collections::BTreeSet;

use common::{brute_maximal, oracle_level, recipe};
use epinet::{Epinet, Formula, Level, NeighborhoodKind};
use proptest::prelude::*;

fn pairs_and_triples(ids: &[epinet::AgentId]) -> Vec<BTreeSet<epinet::AgentId>> {
    let mut out = Vec::new();
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate().skip(i + 1) {
            out.push(BTreeSet::from([a, b]));
            for &c in &ids[j + 1..] {
                out.push(BTreeSet::from([a, b, c]));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn level_matches_chain_enumeration(r in recipe(5, 6)) {
        let b = r.build();
        for g in pairs_and_triples(&b.ids) {
            for p in [&b.p, &b.q] {
                let got = b.net.commonality_level(&g, p).unwrap().level;
                prop_assert_eq!(got, oracle_level(&b.net, &g, p), "group {:?} prop {}", g, p);
            }
        }
    }

    #[test]
    fn neighborhoods_match_brute_force(r in recipe(6, 6)) {
        let b = r.build();
        let kinds = [
            NeighborhoodKind::Distributed,
            NeighborhoodKind::Mutual,
            NeighborhoodKind::Level(3),
            NeighborhoodKind::Level(4),
            NeighborhoodKind::Common,
        ];
        for p in [&b.p, &b.q] {
            for kind in kinds {
                let got: Vec<BTreeSet<_>> = b
                    .net
                    .find_neighborhoods(p, kind)
                    .unwrap()
                    .into_iter()
                    .map(|n| n.members)
                    .collect();
                let want = match kind {
                    NeighborhoodKind::Distributed => {
                        brute_maximal(&b.ids, 1, |s| s.iter().all(|&a| b.net.knows(a, p)))
                    }
                    NeighborhoodKind::Common => {
                        brute_maximal(&b.ids, 2, |s| oracle_level(&b.net, s, p) == Level::Infinite)
                    }
                    NeighborhoodKind::Mutual => brute_maximal(&b.ids, 2, |s| oracle_level(&b.net, s, p).at_least(2)),
                    NeighborhoodKind::Level(n) => {
                        brute_maximal(&b.ids, 2, |s| oracle_level(&b.net, s, p).at_least(n))
                    }
                    NeighborhoodKind::Covert => unreachable!(),
                };
                prop_assert_eq!(got, want, "{} on {}", kind, p);
            }
        }
    }

    #[test]
    fn adding_facts_never_lowers_a_level(r in recipe(4, 4), extra in recipe(4, 4)) {
        let b = r.build();
        let mut grown = b.net.clone();
        for f in extra.build().net.facts() {
            // The second recipe's agents and props carry the same ids.
            if grown.validate_formula(f).is_ok() {
                let _ = grown.assert_fact(f.clone());
            }
        }
        for g in pairs_and_triples(&b.ids) {
            let before = b.net.commonality_level(&g, &b.p).unwrap().level;
            let after = grown.commonality_level(&g, &b.p).unwrap().level;
            prop_assert!(after >= before, "{:?}: {} then {}", g, before, after);
        }
    }

    #[test]
    fn levels_nest(r in recipe(5, 6)) {
        let b = r.build();
        let level = |n: u32| -> Vec<BTreeSet<_>> {
            let kind = if n == 2 { NeighborhoodKind::Mutual } else { NeighborhoodKind::Level(n) };
            b.net.find_neighborhoods(&b.p, kind).unwrap().into_iter().map(|x| x.members).collect()
        };
        for n in 2..6 {
            let lower = level(n);
            for s in level(n + 1) {
                prop_assert!(lower.iter().any(|t| s.is_subset(t)), "{:?} at level {}", s, n + 1);
            }
        }
    }

    #[test]
    fn covert_means_nobody_outside_knows(r in recipe(5, 4), split in 1usize..4) {
        let b = r.build();
        let g: BTreeSet<_> = b.ids.iter().copied().collect();
        let sg: BTreeSet<_> = b.ids.iter().copied().take(split.min(b.ids.len() - 1)).collect();
        if b.net.covert(&b.p, &sg, &g).unwrap() {
            let rest: BTreeSet<_> = g.difference(&sg).copied().collect();
            prop_assert_eq!(b.net.distribution(&b.p, &rest).unwrap(), (0, 0.0));
        }
    }

    #[test]
    fn listings_are_deterministic(r in recipe(5, 5)) {
        let b = r.build();
        let again = Epinet::load(&b.net.snapshot()).unwrap();
        for kind in [NeighborhoodKind::Distributed, NeighborhoodKind::Mutual, NeighborhoodKind::Common] {
            let x = serde_json::to_vec(&b.net.find_neighborhoods(&b.p, kind).unwrap()).unwrap();
            let y = serde_json::to_vec(&again.find_neighborhoods(&b.p, kind).unwrap()).unwrap();
            prop_assert_eq!(x, y);
        }
    }
}

#[test]
fn overlapping_mutual_pairs() {
    let mut net = Epinet::new();
    let [a, b, c] = ["A", "B", "C"].map(|n| net.add_agent(n).unwrap());
    let p = net.add_prop("p", "").unwrap();
    net.set_world_truth(&p, true).unwrap();
    let k = |x, f| Formula::knows(x, f);
    for x in [a, b, c] {
        net.assert_fact(k(x, Formula::atom("p"))).unwrap();
    }
    for (x, y) in [(a, b), (b, a), (b, c), (c, b)] {
        net.assert_fact(k(x, k(y, Formula::atom("p")))).unwrap();
    }
    let got: Vec<_> = net
        .find_neighborhoods(&p, NeighborhoodKind::Mutual)
        .unwrap()
        .into_iter()
        .map(|n| n.members)
        .collect();
    assert_eq!(got, vec![BTreeSet::from([a, b]), BTreeSet::from([b, c])]);
}
