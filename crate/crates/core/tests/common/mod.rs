#![allow(dead_code)]

use std::collections::BTreeSet;

use epinet::{AgentId, Epinet, Formula, Level, PropId};
use proptest::prelude::*;

/// A random net described by data, so failing cases shrink and print.
#[derive(Clone, Debug)]
pub struct Recipe {
    pub agents: usize,
    pub q_true: bool,
    /// Agent indices read outermost first; the innermost one knows the prop.
    pub chains: Vec<(bool, Vec<usize>)>,
    pub negatives: Vec<(usize, usize)>,
    pub beliefs: Vec<(usize, usize)>,
    pub cks: Vec<Vec<usize>>,
}

pub fn recipe(max_agents: usize, max_depth: usize) -> impl Strategy<Value = Recipe> {
    (2..=max_agents).prop_flat_map(move |n| {
        let idx = 0..n;
        (
            Just(n),
            any::<bool>(),
            prop::collection::vec(
                (
                    any::<bool>(),
                    prop::collection::vec(idx.clone(), 1..=max_depth),
                ),
                0..14,
            ),
            prop::collection::vec((idx.clone(), idx.clone()), 0..3),
            prop::collection::vec((idx.clone(), idx.clone()), 0..3),
            prop::collection::vec(prop::collection::btree_set(idx, 2..=3.min(n)), 0..2),
        )
            .prop_map(|(agents, q_true, chains, negatives, beliefs, cks)| Recipe {
                agents,
                q_true,
                chains,
                negatives,
                beliefs,
                cks: cks.into_iter().map(|s| s.into_iter().collect()).collect(),
            })
    })
}

pub struct Built {
    pub net: Epinet,
    pub ids: Vec<AgentId>,
    pub p: PropId,
    pub q: PropId,
}

impl Recipe {
    /// Builds the net, skipping facts the store rejects.
    pub fn build(&self) -> Built {
        let mut net = Epinet::new();
        let ids: Vec<AgentId> = (0..self.agents)
            .map(|i| net.add_agent(&format!("g{i}")).unwrap())
            .collect();
        let p = net.add_prop("p", "").unwrap();
        let q = net.add_prop("q", "").unwrap();
        net.set_world_truth(&p, true).unwrap();
        net.set_world_truth(&q, self.q_true).unwrap();
        for (use_q, chain) in &self.chains {
            let prop = if *use_q { &q } else { &p };
            let agents: Vec<AgentId> = chain.iter().map(|&i| ids[i]).collect();
            // Suffixes first, so each link is grounded by the one below it.
            for start in (0..agents.len()).rev() {
                let _ = net.assert_fact(Formula::knows_chain(&agents[start..], prop));
            }
        }
        for &(x, y) in &self.negatives {
            let f = Formula::knows(
                ids[x],
                Formula::not(Formula::knows(ids[y], Formula::atom("p"))),
            );
            let _ = net.assert_fact(f);
        }
        for &(x, y) in &self.beliefs {
            let f = Formula::believes(ids[x], Formula::knows(ids[y], Formula::atom("q")));
            let _ = net.assert_fact(f);
        }
        for group in &self.cks {
            let _ = net.add_common_knowledge(group.iter().map(|&i| ids[i]).collect(), &p);
        }
        Built { net, ids, p, q }
    }
}

/// Every K-chain of exactly `depth` over `group` with adjacent agents
/// distinct, listed outermost first.
pub fn chains(group: &[AgentId], depth: usize) -> Vec<Vec<AgentId>> {
    let mut out: Vec<Vec<AgentId>> = vec![Vec::new()];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|c| {
                group
                    .iter()
                    .filter(|&&a| c.last() != Some(&a))
                    .map(|&a| {
                        let mut c = c.clone();
                        c.push(a);
                        c
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// Commonality level by direct enumeration: CK records are read off the
/// store, finite levels by checking every chain at each depth.
pub fn oracle_level(net: &Epinet, group: &BTreeSet<AgentId>, p: &PropId) -> Level {
    if net
        .group_ck()
        .any(|r| &r.prop == p && group.is_subset(&r.group))
    {
        return Level::Infinite;
    }
    let members: Vec<AgentId> = group.iter().copied().collect();
    let bound = net.config().max_depth as usize + group.len() + 2;
    for d in 1..=bound {
        if !chains(&members, d)
            .iter()
            .all(|c| net.holds(&Formula::knows_chain(c, p)))
        {
            return Level::Finite(d as u32 - 1);
        }
    }
    panic!("chains of every depth hold without a CK record");
}

/// All maximal subsets of `universe` with at least `min` members that
/// satisfy `ok`, by exhaustive enumeration.
pub fn brute_maximal<F>(universe: &[AgentId], min: usize, ok: F) -> Vec<BTreeSet<AgentId>>
where
    F: Fn(&BTreeSet<AgentId>) -> bool,
{
    let n = universe.len();
    let good: Vec<BTreeSet<AgentId>> = (0u32..1 << n)
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| universe[i])
                .collect::<BTreeSet<_>>()
        })
        .filter(|s| s.len() >= min && ok(s))
        .collect();
    let mut out: Vec<BTreeSet<AgentId>> = good
        .iter()
        .filter(|s| !good.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.iter().cmp(b.iter()));
    out
}
