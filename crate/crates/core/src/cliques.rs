//! Maximal-set enumeration over agents.
//!
//! Bron–Kerbosch without pivoting, generalised from adjacency to any
//! hereditary family: `extends(r, v)` must answer whether `r ∪ {v}` is in
//! the family, given that `r` is. Heredity (every subset of a member is a
//! member) is what makes the P/X bookkeeping sound, so the same routine
//! serves pairwise cliques and the knowledge-regime families whose
//! membership depends on the whole set.

use std::collections::BTreeSet;

use crate::AgentId;

pub fn maximal_sets<F>(universe: &BTreeSet<AgentId>, mut extends: F) -> Vec<BTreeSet<AgentId>>
where
    F: FnMut(&BTreeSet<AgentId>, AgentId) -> bool,
{
    let empty = BTreeSet::new();
    let candidates: Vec<AgentId> = universe
        .iter()
        .copied()
        .filter(|&v| extends(&empty, v))
        .collect();
    let mut out = Vec::new();
    expand(
        &mut BTreeSet::new(),
        candidates,
        Vec::new(),
        &mut extends,
        &mut out,
    );
    out.sort_by(|a, b| a.iter().cmp(b.iter()));
    out
}

fn expand<F>(
    r: &mut BTreeSet<AgentId>,
    mut p: Vec<AgentId>,
    mut x: Vec<AgentId>,
    extends: &mut F,
    out: &mut Vec<BTreeSet<AgentId>>,
) where
    F: FnMut(&BTreeSet<AgentId>, AgentId) -> bool,
{
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    while let Some(v) = p.first().copied() {
        p.remove(0);
        r.insert(v);
        let next_p: Vec<AgentId> = p.iter().copied().filter(|&w| extends(r, w)).collect();
        let next_x: Vec<AgentId> = x.iter().copied().filter(|&w| extends(r, w)).collect();
        expand(r, next_p, next_x, extends, out);
        r.remove(&v);
        x.push(v);
    }
}

/// Maximal cliques of the undirected graph given by a symmetric `adjacent`.
pub fn maximal_cliques<F>(universe: &BTreeSet<AgentId>, adjacent: F) -> Vec<BTreeSet<AgentId>>
where
    F: Fn(AgentId, AgentId) -> bool,
{
    maximal_sets(universe, |r, v| r.iter().all(|&u| adjacent(u, v)))
}
