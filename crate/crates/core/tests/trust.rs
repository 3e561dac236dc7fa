mod common;

use std::collections::BTreeSet;

use common::{brute_maximal, chains};
use epinet::trust::group_status_prop;
use epinet::{AgentId, ConduitKind, Directionality, Epinet, Formula, InfoClass, Level, TrustKind};
use proptest::prelude::*;

fn agents(net: &mut Epinet, n: usize) -> Vec<AgentId> {
    (0..n)
        .map(|i| net.add_agent(&format!("t{i}")).unwrap())
        .collect()
}

fn edges(max: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..n * 3)))
}

/// Reachability closure by Warshall over an adjacency matrix.
fn warshall(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(x, y) in pairs {
        if x != y {
            m[x][y] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    m
}

/// Shortest, then lexicographically smallest, simple path where every
/// successor fully trusts its predecessor.
fn brute_path(net: &Epinet, from: AgentId, to: AgentId, corridor: bool) -> Option<Vec<AgentId>> {
    fn go(
        net: &Epinet,
        path: &mut Vec<AgentId>,
        to: AgentId,
        corridor: bool,
        best: &mut Option<Vec<AgentId>>,
    ) {
        let cur = *path.last().unwrap();
        if cur == to {
            let better = match best {
                None => true,
                Some(b) => (path.len(), &*path) < (b.len(), &*b),
            };
            if better {
                *best = Some(path.clone());
            }
            return;
        }
        for y in net.agent_ids() {
            if !path.contains(&y)
                && net.trusts_fully(y, cur)
                && (!corridor || net.trusts_fully(cur, y))
            {
                path.push(y);
                go(net, path, to, corridor, best);
                path.pop();
            }
        }
    }
    let mut best = None;
    go(net, &mut vec![from], to, corridor, &mut best);
    best
}

proptest! {
    #[test]
    fn closure_is_reachability((n, pairs) in edges(12)) {
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for &(x, y) in &pairs {
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::Full).unwrap();
            }
        }
        net.trust_closure().unwrap();
        let m = warshall(n, &pairs);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert_eq!(net.trusts_fully(ids[i], ids[j]), m[i][j], "{} -> {}", i, j);
                }
            }
        }
        let once = net.snapshot();
        prop_assert_eq!(net.trust_closure().unwrap(), 0);
        prop_assert_eq!(net.snapshot(), once);
        prop_assert!(net.invariant_violations().is_empty());
    }

    #[test]
    fn weak_edges_never_compose((n, pairs) in edges(8)) {
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for &(x, y) in &pairs {
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::IntegrityWeak).unwrap();
                net.set_trust(ids[x], ids[y], TrustKind::Competence).unwrap();
            }
        }
        let before = net.trust().len();
        prop_assert_eq!(net.trust_closure().unwrap(), 0);
        prop_assert_eq!(net.trust().len(), before);
    }

    #[test]
    fn trust_neighborhoods_match_subsets(n in 2usize..=8, raw in prop::collection::vec((0usize..8, 0usize..8, 0u8..4), 0..60)) {
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for (x, y, k) in raw {
            let (x, y) = (x % n, y % n);
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::ALL[k as usize]).unwrap();
            }
        }
        let linked = |x: AgentId, y: AgentId| {
            (net.trusts(x, y, TrustKind::IntegrityWeak) || net.trusts(x, y, TrustKind::IntegrityStrong))
                && net.trusts(x, y, TrustKind::Competence)
        };
        let want = brute_maximal(&ids, 2, |s| {
            s.iter().all(|&x| s.iter().all(|&y| x == y || linked(x, y)))
        });
        prop_assert_eq!(net.trust_neighborhoods(), want);
    }

    #[test]
    fn security_cliques_are_common_knowledge(n in 2usize..=7, size in 2usize..=5, noise in prop::collection::vec((0usize..7, 0usize..7), 0..12)) {
        let size = size.min(n);
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for (x, y) in noise {
            let (x, y) = (x % n, y % n);
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::Competence).unwrap();
            }
        }
        let clique: BTreeSet<AgentId> = ids[..size].iter().copied().collect();
        for &x in &clique {
            for &y in &clique {
                if x != y {
                    net.set_trust(x, y, TrustKind::Full).unwrap();
                }
            }
        }
        let status = net.derive_security_ck(&clique).unwrap();
        prop_assert_eq!(&status, &group_status_prop(&clique));
        prop_assert_eq!(net.commonality_level(&clique, &status).unwrap().level, Level::Infinite);
        let members: Vec<AgentId> = clique.iter().copied().collect();
        for d in 1..=6 {
            for c in chains(&members, d) {
                prop_assert!(net.holds(&Formula::knows_chain(&c, &status)));
            }
        }
        for (group, prop) in net.security_neighborhoods() {
            prop_assert_eq!(net.commonality_level(&group, &prop).unwrap().level, Level::Infinite);
        }
        prop_assert!(net.security_neighborhoods().iter().any(|(g, _)| clique.is_subset(g)));
    }

    #[test]
    fn conduits_are_shortest_lexmin_paths((n, pairs) in edges(8), back in any::<bool>()) {
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for &(x, y) in &pairs {
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::Full).unwrap();
                if back {
                    let _ = net.set_trust(ids[y], ids[x], TrustKind::Full);
                }
            }
        }
        for &from in &ids {
            for &to in &ids {
                if from == to {
                    continue;
                }
                for (dir, corridor) in [(Directionality::OneWay, false), (Directionality::Corridor, true)] {
                    let got = net.find_conduit(from, to, ConduitKind::Trust, dir).unwrap().map(|c| c.path);
                    prop_assert_eq!(got, brute_path(&net, from, to, corridor));
                }
            }
        }
    }

    #[test]
    fn security_conduits_carry_their_record((n, pairs) in edges(6)) {
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for &(x, y) in &pairs {
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::Full).unwrap();
            }
        }
        let (from, to) = (ids[0], ids[n - 1]);
        if let Some(c) = net.find_conduit(from, to, ConduitKind::Trust, Directionality::OneWay).unwrap() {
            prop_assert!(net.find_conduit(from, to, ConduitKind::Security, Directionality::OneWay).unwrap().is_none());
            net.establish_conduit_ck(&c).unwrap();
            let s = net.find_conduit(from, to, ConduitKind::Security, Directionality::OneWay).unwrap().unwrap();
            let members: BTreeSet<AgentId> = s.path.iter().copied().collect();
            prop_assert!(net.group_ck().any(|r| members.is_subset(&r.group)));
            for w in s.path.windows(2) {
                prop_assert!(net.trusts_fully(w[1], w[0]));
            }
        }
    }

    #[test]
    fn propagated_information_is_fact((n, pairs) in edges(10)) {
        let mut net = Epinet::new();
        let ids = agents(&mut net, n);
        for &(x, y) in &pairs {
            if x != y {
                net.set_trust(ids[x], ids[y], TrustKind::Full).unwrap();
            }
        }
        let p = net.add_prop("p", "").unwrap();
        net.set_world_truth(&p, true).unwrap();
        net.assert_fact(Formula::knows(ids[0], Formula::atom("p"))).unwrap();
        let audience: BTreeSet<AgentId> = ids.iter().copied().collect();
        let reached = net.propagate_assertion(ids[0], &p, &audience).unwrap();
        prop_assert_eq!(net.classify_information(ids[0], &p).unwrap(), InfoClass::Origin);
        for &y in &reached {
            prop_assert_eq!(net.classify_information(y, &p).unwrap(), InfoClass::Fact);
        }
        // Reached agents are exactly those reachable backwards along trust.
        let m = warshall(n, &pairs.iter().map(|&(x, y)| (y, x)).collect::<Vec<_>>());
        let want: BTreeSet<AgentId> = (1..n).filter(|&j| m[0][j]).map(|j| ids[j]).collect();
        prop_assert_eq!(reached.iter().copied().collect::<BTreeSet<_>>(), want);
    }
}

#[test]
fn one_sided_trust_stays_one_sided() {
    let mut net = Epinet::new();
    let ids = agents(&mut net, 3);
    net.set_trust(ids[0], ids[1], TrustKind::Full).unwrap();
    net.set_trust(ids[1], ids[2], TrustKind::Full).unwrap();
    net.trust_closure().unwrap();
    let p = net.add_prop("p", "").unwrap();
    net.set_world_truth(&p, true).unwrap();
    net.assert_fact(Formula::knows(ids[2], Formula::atom("p")))
        .unwrap();
    net.propagate_assertion(ids[2], &p, &ids.iter().copied().collect())
        .unwrap();
    assert!(net.invariant_violations().is_empty());
    for (x, y) in [(1, 0), (2, 1), (2, 0)] {
        for k in TrustKind::ALL {
            assert!(!net.trusts(ids[x], ids[y], k));
        }
    }
}
