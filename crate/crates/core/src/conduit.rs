//! Conduits, assertion propagation and fact/rumor classification.
//!
//! Information moves from X to Y credibly when Y fully trusts X, so a
//! conduit from `from` to `to` is a path on which every successor trusts its
//! predecessor. A corridor needs full trust both ways on every hop. A
//! security conduit additionally lies inside a group whose trust or conduit
//! status is common knowledge.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::net::Revision;
use crate::trust::group_status_prop;
use crate::{AgentId, CkRecord, Epinet, Error, EventId, Formula, PropId, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConduitKind {
    Trust,
    Security,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Directionality {
    OneWay,
    Corridor,
}

impl ConduitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConduitKind::Trust => "trust",
            ConduitKind::Security => "security",
        }
    }
}

impl std::str::FromStr for ConduitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trust" => Ok(ConduitKind::Trust),
            "security" => Ok(ConduitKind::Security),
            _ => Err(format!(
                "unknown conduit kind `{s}`, expected trust or security"
            )),
        }
    }
}

impl Directionality {
    pub fn as_str(self) -> &'static str {
        match self {
            Directionality::OneWay => "one_way",
            Directionality::Corridor => "corridor",
        }
    }
}

impl std::str::FromStr for Directionality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one_way" => Ok(Directionality::OneWay),
            "corridor" => Ok(Directionality::Corridor),
            _ => Err(format!(
                "unknown directionality `{s}`, expected one_way or corridor"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conduit {
    pub path: Vec<AgentId>,
    pub kind: ConduitKind,
    pub directionality: Directionality,
}

impl Conduit {
    /// The path as a JSON array of agent ids.
    pub fn path_json(&self) -> String {
        serde_json::to_string(&self.path).expect("ids serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfoClass {
    Fact,
    Rumor,
    Origin,
}

/// `conduit:<a>+<b>+...` for a path's member set.
pub fn conduit_status_prop(members: &BTreeSet<AgentId>) -> PropId {
    let ids: Vec<String> = members.iter().map(ToString::to_string).collect();
    PropId::new(format!("conduit:{}", ids.join("+")))
}

impl Epinet {
    fn hop_ok(&self, x: AgentId, y: AgentId, dir: Directionality) -> bool {
        self.trusts_fully(y, x) && (dir == Directionality::OneWay || self.trusts_fully(x, y))
    }

    /// Shortest path inside `allowed`; ties go to the lexicographically
    /// smallest id sequence.
    fn shortest_path(
        &self,
        from: AgentId,
        to: AgentId,
        dir: Directionality,
        allowed: &BTreeSet<AgentId>,
    ) -> Option<Vec<AgentId>> {
        if !allowed.contains(&from) || !allowed.contains(&to) {
            return None;
        }
        // Distances from the target, walking hops backwards, then a greedy
        // forward walk picking the smallest neighbour that stays on a
        // shortest path.
        let mut dist: BTreeMap<AgentId, usize> = BTreeMap::from([(to, 0)]);
        let mut queue = VecDeque::from([to]);
        while let Some(y) = queue.pop_front() {
            let d = dist[&y];
            for &x in allowed {
                if !dist.contains_key(&x) && self.hop_ok(x, y, dir) {
                    dist.insert(x, d + 1);
                    queue.push_back(x);
                }
            }
        }
        let mut d = *dist.get(&from)?;
        let mut path = vec![from];
        let mut cur = from;
        while d > 0 {
            let next = allowed
                .iter()
                .copied()
                .find(|&y| dist.get(&y) == Some(&(d - 1)) && self.hop_ok(cur, y, dir))
                .expect("a shortest path continues");
            path.push(next);
            cur = next;
            d -= 1;
        }
        Some(path)
    }

    /// Groups whose trust or conduit status is common knowledge among them.
    fn security_groups(&self) -> Vec<&BTreeSet<AgentId>> {
        self.group_ck
            .iter()
            .filter(|r| {
                r.prop == group_status_prop(&r.group) || r.prop == conduit_status_prop(&r.group)
            })
            .map(|r| &r.group)
            .collect()
    }

    pub fn find_conduit(
        &self,
        from: AgentId,
        to: AgentId,
        kind: ConduitKind,
        dir: Directionality,
    ) -> Result<Option<Conduit>> {
        self.require_agent(from)?;
        self.require_agent(to)?;
        if from == to {
            return Ok(None);
        }
        let path = match kind {
            ConduitKind::Trust => self.shortest_path(from, to, dir, &self.agent_ids()),
            ConduitKind::Security => self
                .security_groups()
                .into_iter()
                .filter_map(|g| self.shortest_path(from, to, dir, g))
                .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))),
        };
        Ok(path.map(|path| Conduit {
            path,
            kind,
            directionality: dir,
        }))
    }

    /// Makes a conduit's membership common knowledge among its members,
    /// turning it into a security conduit.
    pub fn establish_conduit_ck(&mut self, conduit: &Conduit) -> Result<PropId> {
        for w in conduit.path.windows(2) {
            if !self.hop_ok(w[0], w[1], conduit.directionality) {
                return Err(Error::NotSecurityEligible(format!(
                    "hop {} -> {} is not fully trusted",
                    w[0], w[1]
                )));
            }
        }
        let members: BTreeSet<AgentId> = conduit.path.iter().copied().collect();
        if members.len() < 2 {
            return Err(Error::GroupTooSmall(members.len()));
        }
        let prop = conduit_status_prop(&members);
        let path_text = conduit.path_json();
        self.ensure_prop(prop.as_str(), || format!("conduit {path_text} exists"));
        self.set_world_truth(&prop, true)?;
        self.commit(
            Vec::new(),
            vec![CkRecord {
                group: members,
                prop: prop.clone(),
            }],
            Revision::Strict,
        )?;
        Ok(prop)
    }

    /// Breadth-first assertion of `p` from `origin` along full-trust edges,
    /// limited to `audience`. Each receiver Y of sender X gains `K(Y, p)` and
    /// `K(Y, K(X, p))`. Returns the agents reached in BFS order.
    pub fn propagate_assertion(
        &mut self,
        origin: AgentId,
        p: &PropId,
        audience: &BTreeSet<AgentId>,
    ) -> Result<Vec<AgentId>> {
        self.require_agent(origin)?;
        self.require_prop(p)?;
        for &a in audience {
            self.require_agent(a)?;
        }
        if !self.knows(origin, p) {
            return Err(Error::OriginIgnorant {
                agent: origin,
                prop: p.clone(),
            });
        }
        let mut seen = BTreeSet::from([origin]);
        let mut queue = VecDeque::from([origin]);
        let mut tree = Vec::new();
        while let Some(x) = queue.pop_front() {
            for &y in audience {
                if !seen.contains(&y) && self.trusts_fully(y, x) {
                    seen.insert(y);
                    queue.push_back(y);
                    tree.push((x, y));
                }
            }
        }
        if tree.is_empty() {
            return Ok(Vec::new());
        }
        let atom = Formula::atom(p.clone());
        let facts = tree
            .iter()
            .flat_map(|&(x, y)| {
                [
                    Formula::knows(y, atom.clone()),
                    Formula::knows(y, Formula::knows(x, atom.clone())),
                ]
            })
            .collect();
        self.commit(facts, Vec::new(), Revision::Supersede)?;
        let event = self.next_event_id();
        self.mark_origin(origin, p);
        for &(x, y) in &tree {
            self.record_hop(y, p, x, event, true);
        }
        Ok(tree.into_iter().map(|(_, y)| y).collect())
    }

    pub fn classify_information(&self, holder: AgentId, p: &PropId) -> Result<InfoClass> {
        self.require_agent(holder)?;
        self.require_prop(p)?;
        let atom = Formula::atom(p.clone());
        let informed = self.holds(&Formula::knows(holder, atom.clone()))
            || self.holds(&Formula::believes(holder, atom));
        if !informed {
            return Err(Error::NoInformation {
                agent: holder,
                prop: p.clone(),
            });
        }
        let hops = self.chain_of(holder, p);
        Ok(if hops.is_empty() {
            InfoClass::Origin
        } else if hops.iter().all(|h| h.trusted) {
            InfoClass::Fact
        } else {
            InfoClass::Rumor
        })
    }

    /// `leaker` discloses `p` to `outsider`, and the breach becomes known
    /// inside `sg`. Returns the breach prop.
    pub fn record_breach(
        &mut self,
        leaker: AgentId,
        outsider: AgentId,
        p: &PropId,
        sg: &BTreeSet<AgentId>,
    ) -> Result<PropId> {
        self.breach(leaker, outsider, p, sg).map(|(b, _)| b)
    }

    pub(crate) fn breach(
        &mut self,
        leaker: AgentId,
        outsider: AgentId,
        p: &PropId,
        sg: &BTreeSet<AgentId>,
    ) -> Result<(PropId, EventId)> {
        self.require_agent(leaker)?;
        self.require_agent(outsider)?;
        self.require_prop(p)?;
        if !sg.contains(&leaker) {
            return Err(Error::NotAMember {
                agent: leaker,
                role: "leaker",
            });
        }
        if sg.contains(&outsider) {
            return Err(Error::NotAMember {
                agent: outsider,
                role: "outsider",
            });
        }
        if !self.knows(leaker, p) {
            return Err(Error::OriginIgnorant {
                agent: leaker,
                prop: p.clone(),
            });
        }
        let atom = Formula::atom(p.clone());
        let trusted = self.trusts_fully(outsider, leaker);
        let mut facts = if trusted {
            vec![
                Formula::knows(outsider, atom.clone()),
                Formula::knows(outsider, Formula::knows(leaker, atom)),
            ]
        } else {
            vec![Formula::believes(outsider, atom)]
        };
        let (lname, pname) = (self.name_of(leaker), p.to_string());
        let breach = self.ensure_prop(&format!("breach:{leaker}:{p}"), || {
            format!("{lname} disclosed {pname} outside the group")
        });
        let old_truth = self.is_true(&breach);
        self.set_world_truth(&breach, true)?;
        facts.extend(
            sg.iter()
                .map(|&m| Formula::knows(m, Formula::atom(breach.clone()))),
        );
        if let Err(e) = self.commit(facts, Vec::new(), Revision::Supersede) {
            if !old_truth {
                let _ = self.set_world_truth(&breach, false);
            }
            return Err(e);
        }
        let event = self.next_event_id();
        self.record_hop(outsider, p, leaker, event, trusted);
        Ok((breach, event))
    }
}
