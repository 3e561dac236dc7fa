//! Knowledge regimes over an epinet: distribution, level-n commonality,
//! covertness, knowledge neighborhoods and the mobilization check.
//!
//! All queries are read-only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::cliques::maximal_sets;
use crate::{AgentId, Epinet, Error, Formula, PropId, Result};

/// A commonality level: a finite depth or common knowledge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Level::Finite(d) => d >= n,
            Level::Infinite => true,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(d) => write!(f, "{d}"),
            Level::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Level::Finite(d) => serializer.serialize_u32(*d),
            Level::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommonalityReport {
    pub group: BTreeSet<AgentId>,
    pub prop: PropId,
    pub level: Level,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborhoodKind {
    Distributed,
    /// Level-2 commonality.
    Mutual,
    /// Level-n commonality, n >= 3 (`level_2` parses as `Mutual`).
    Level(u32),
    Common,
    Covert,
}

impl NeighborhoodKind {
    pub fn min_level(self) -> Option<Level> {
        match self {
            NeighborhoodKind::Distributed => Some(Level::Finite(1)),
            NeighborhoodKind::Mutual => Some(Level::Finite(2)),
            NeighborhoodKind::Level(n) => Some(Level::Finite(n)),
            NeighborhoodKind::Common => Some(Level::Infinite),
            NeighborhoodKind::Covert => None,
        }
    }
}

impl fmt::Display for NeighborhoodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeighborhoodKind::Distributed => f.write_str("distributed"),
            NeighborhoodKind::Mutual => f.write_str("mutual"),
            NeighborhoodKind::Level(n) => write!(f, "level_{n}"),
            NeighborhoodKind::Common => f.write_str("common"),
            NeighborhoodKind::Covert => f.write_str("covert"),
        }
    }
}

impl FromStr for NeighborhoodKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distributed" => Ok(NeighborhoodKind::Distributed),
            "mutual" => Ok(NeighborhoodKind::Mutual),
            "common" => Ok(NeighborhoodKind::Common),
            "covert" => Ok(NeighborhoodKind::Covert),
            _ => match s.strip_prefix("level_").and_then(|n| n.parse::<u32>().ok()) {
                Some(2) => Ok(NeighborhoodKind::Mutual),
                Some(n) if n > 2 => Ok(NeighborhoodKind::Level(n)),
                _ => Err(format!(
                    "unknown neighborhood kind `{s}`, expected distributed, mutual, level_<n> (n >= 2) or common"
                )),
            },
        }
    }
}

impl Serialize for NeighborhoodKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Neighborhood {
    pub members: BTreeSet<AgentId>,
    pub prop: PropId,
    pub kind: NeighborhoodKind,
    /// Commonality level of the members (1 for a lone knower).
    pub level: Level,
}

impl Epinet {
    /// How many agents of `scope` know `p`, absolutely and relatively.
    pub fn distribution(&self, p: &PropId, scope: &BTreeSet<AgentId>) -> Result<(usize, f64)> {
        if scope.is_empty() {
            return Err(Error::EmptyScope);
        }
        self.require_prop(p)?;
        for &a in scope {
            self.require_agent(a)?;
        }
        let count = scope.iter().filter(|&&a| self.knows(a, p)).count();
        Ok((count, count as f64 / scope.len() as f64))
    }

    /// Largest `d` such that every `K`-chain of depth `d` over `group`, with
    /// adjacent agents distinct and ending in `p`, holds.
    pub fn commonality_level(
        &self,
        group: &BTreeSet<AgentId>,
        p: &PropId,
    ) -> Result<CommonalityReport> {
        if group.len() < 2 {
            return Err(Error::GroupTooSmall(group.len()));
        }
        self.require_prop(p)?;
        for &a in group {
            self.require_agent(a)?;
        }
        Ok(CommonalityReport {
            group: group.clone(),
            prop: p.clone(),
            level: self.level_of(group, p),
        })
    }

    pub(crate) fn level_of(&self, group: &BTreeSet<AgentId>, p: &PropId) -> Level {
        if self.ck_covers(group, p) {
            return Level::Infinite;
        }
        // Chains of depth d are suffix-closed under stripping, so the answer
        // is one less than the first depth with a failing chain. Without a
        // covering CK record a failure exists by depth max_depth + 1 or
        // |group|, whichever is larger.
        let mut d = 1;
        loop {
            if !self.all_chains_hold(group, p, d) {
                return Level::Finite(d - 1);
            }
            d += 1;
        }
    }

    fn all_chains_hold(&self, group: &BTreeSet<AgentId>, p: &PropId, depth: u32) -> bool {
        fn go(
            net: &Epinet,
            group: &BTreeSet<AgentId>,
            inner: Formula,
            root: Option<AgentId>,
            left: u32,
        ) -> bool {
            if left == 0 {
                return net.holds(&inner);
            }
            group.iter().filter(|&&a| Some(a) != root).all(|&a| {
                let f = Formula::knows(a, inner.clone());
                (left == 1 || net.holds(&f)) && go(net, group, f, Some(a), left - 1)
            })
        }
        go(self, group, Formula::atom(p.clone()), None, depth)
    }

    /// `p` is fully distributed in `sg` and everyone else in `g` is
    /// oblivious of it.
    pub fn covert(
        &self,
        p: &PropId,
        sg: &BTreeSet<AgentId>,
        g: &BTreeSet<AgentId>,
    ) -> Result<bool> {
        if sg.is_empty() {
            return Err(Error::BadScope("the subgroup is empty".into()));
        }
        if !sg.is_subset(g) || sg.len() == g.len() {
            return Err(Error::BadScope(
                "the subgroup must be a strict subset of the group".into(),
            ));
        }
        let (_, ratio) = self.distribution(p, sg)?;
        for &a in g {
            self.require_agent(a)?;
        }
        Ok(ratio == 1.0 && g.difference(sg).all(|&a| self.is_oblivious(a, p)))
    }

    fn qualifies(&self, members: &BTreeSet<AgentId>, p: &PropId, kind: NeighborhoodKind) -> bool {
        match kind {
            NeighborhoodKind::Distributed => members.iter().all(|&a| self.knows(a, p)),
            NeighborhoodKind::Common if members.len() == 1 => {
                let a = members.iter().next().expect("one member");
                self.group_ck
                    .iter()
                    .any(|r| &r.prop == p && r.group.contains(a))
            }
            _ if members.len() <= 1 => members.iter().all(|&a| self.knows(a, p)),
            k => {
                let need = k.min_level().expect("knowledge kind");
                let have = self.level_of(members, p);
                match need {
                    Level::Infinite => have == Level::Infinite,
                    Level::Finite(n) => have.at_least(n),
                }
            }
        }
    }

    /// All maximal agent sets satisfying `kind` for `p`, sorted by member
    /// list. Distributed neighborhoods may be single agents; the others have
    /// at least two members.
    pub fn find_neighborhoods(
        &self,
        p: &PropId,
        kind: NeighborhoodKind,
    ) -> Result<Vec<Neighborhood>> {
        self.require_prop(p)?;
        if kind == NeighborhoodKind::Covert {
            return Err(Error::BadScope(
                "covert neighborhoods are relative to a host group; use the covert query".into(),
            ));
        }
        let min = if kind == NeighborhoodKind::Distributed {
            1
        } else {
            2
        };
        let sets = maximal_sets(&self.agent_ids(), |r, v| {
            let mut s = r.clone();
            s.insert(v);
            self.qualifies(&s, p, kind)
        });
        Ok(sets
            .into_iter()
            .filter(|s| s.len() >= min)
            .map(|members| {
                let level = if members.len() >= 2 {
                    self.level_of(&members, p)
                } else {
                    Level::Finite(1)
                };
                Neighborhood {
                    members,
                    prop: p.clone(),
                    kind,
                    level,
                }
            })
            .collect())
    }

    /// Every member knows every other member's commitment prop.
    pub fn mobilization_possible(
        &self,
        group: &BTreeSet<AgentId>,
        commitments: &BTreeMap<AgentId, PropId>,
    ) -> Result<bool> {
        let missing: Vec<AgentId> = group
            .iter()
            .copied()
            .filter(|a| !commitments.contains_key(a))
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteCommitments(missing));
        }
        for &a in group {
            self.require_agent(a)?;
            self.require_prop(&commitments[&a])?;
        }
        Ok(group.iter().all(|&x| {
            group
                .iter()
                .all(|&y| x == y || self.knows(x, &commitments[&y]))
        }))
    }
}
