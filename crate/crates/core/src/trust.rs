//! Trust edges and their algebra.
//!
//! `A → B` means A trusts B. Integrity trust comes in a weak and a strong
//! form; full trust is strong integrity plus competence and is kept in sync
//! automatically. Only full trust is transitive, and nothing here ever
//! symmetrises an edge.
//!
//! Every materialised edge registers a true trust-status prop named
//! `trust:<from>><to>:<kind>` so CK records can quote it. A clique whose
//! status is common knowledge is a security neighborhood; its status prop
//! is `trust:<a>+<b>+...:secure`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cliques::{maximal_cliques, maximal_sets};
use crate::{AgentId, Epinet, Error, PropId, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrustKind {
    IntegrityWeak,
    IntegrityStrong,
    Competence,
    Full,
}

impl TrustKind {
    pub const ALL: [TrustKind; 4] = [
        TrustKind::IntegrityWeak,
        TrustKind::IntegrityStrong,
        TrustKind::Competence,
        TrustKind::Full,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TrustKind::IntegrityWeak => "integrity_weak",
            TrustKind::IntegrityStrong => "integrity_strong",
            TrustKind::Competence => "competence",
            TrustKind::Full => "full",
        }
    }

    fn status_suffix(self) -> &'static str {
        match self {
            TrustKind::IntegrityWeak => "weak",
            TrustKind::IntegrityStrong => "strong",
            TrustKind::Competence => "competence",
            TrustKind::Full => "full",
        }
    }
}

impl fmt::Display for TrustKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrustKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TrustKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                format!("unknown trust kind `{s}`, expected one of integrity_weak, integrity_strong, competence, full")
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeOrigin {
    Declared,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrustEdge {
    pub from: AgentId,
    pub to: AgentId,
    pub kind: TrustKind,
    pub origin: EdgeOrigin,
}

/// Edge set keyed by `(from, to, kind)`; presence is the relation, so an
/// edge can never be both asserted and denied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrustStore {
    edges: BTreeMap<(AgentId, AgentId, TrustKind), EdgeOrigin>,
}

impl TrustStore {
    pub fn contains(&self, from: AgentId, to: AgentId, kind: TrustKind) -> bool {
        self.edges.contains_key(&(from, to, kind))
    }

    pub fn origin(&self, from: AgentId, to: AgentId, kind: TrustKind) -> Option<EdgeOrigin> {
        self.edges.get(&(from, to, kind)).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = TrustEdge> + '_ {
        self.edges
            .iter()
            .map(|(&(from, to, kind), &origin)| TrustEdge {
                from,
                to,
                kind,
                origin,
            })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Inserts, upgrading a derived edge to declared. Returns true if new.
    fn insert(&mut self, from: AgentId, to: AgentId, kind: TrustKind, origin: EdgeOrigin) -> bool {
        match self.edges.get_mut(&(from, to, kind)) {
            Some(o) => {
                if origin == EdgeOrigin::Declared {
                    *o = EdgeOrigin::Declared;
                }
                false
            }
            None => {
                self.edges.insert((from, to, kind), origin);
                true
            }
        }
    }

    pub(crate) fn from_edges(edges: impl IntoIterator<Item = TrustEdge>) -> Self {
        TrustStore {
            edges: edges
                .into_iter()
                .map(|e| ((e.from, e.to, e.kind), e.origin))
                .collect(),
        }
    }

    pub(crate) fn violations(&self, net: &Epinet) -> Vec<String> {
        let mut out = Vec::new();
        for e in self.edges() {
            if e.from == e.to {
                out.push(format!("reflexive trust edge on {}", e.from));
            }
            if !net.has_agent(e.from) || !net.has_agent(e.to) {
                out.push(format!(
                    "trust edge {}->{} references unknown agents",
                    e.from, e.to
                ));
            }
        }
        let pairs: BTreeSet<(AgentId, AgentId)> =
            self.edges.keys().map(|&(f, t, _)| (f, t)).collect();
        for (f, t) in pairs {
            let both = self.contains(f, t, TrustKind::IntegrityStrong)
                && self.contains(f, t, TrustKind::Competence);
            if both != self.contains(f, t, TrustKind::Full) {
                out.push(format!(
                    "full trust {f}->{t} out of sync with its components"
                ));
            }
        }
        out
    }
}

/// `trust:<from>><to>:<kind>`.
pub fn edge_status_prop(from: AgentId, to: AgentId, kind: TrustKind) -> PropId {
    PropId::new(format!("trust:{from}>{to}:{}", kind.status_suffix()))
}

/// `trust:<a>+<b>+...:secure` for a clique.
pub fn group_status_prop(group: &BTreeSet<AgentId>) -> PropId {
    let members: Vec<String> = group.iter().map(ToString::to_string).collect();
    PropId::new(format!("trust:{}:secure", members.join("+")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Authentication {
    Insider,
    Outsider,
}

impl Epinet {
    pub fn trust(&self) -> &TrustStore {
        &self.trust
    }

    pub fn trusts(&self, from: AgentId, to: AgentId, kind: TrustKind) -> bool {
        self.trust.contains(from, to, kind)
    }

    pub fn trusts_fully(&self, from: AgentId, to: AgentId) -> bool {
        self.trust.contains(from, to, TrustKind::Full)
    }

    fn materialise(
        &mut self,
        from: AgentId,
        to: AgentId,
        kind: TrustKind,
        origin: EdgeOrigin,
    ) -> Result<()> {
        self.trust.insert(from, to, kind, origin);
        let (fname, tname) = (self.name_of(from), self.name_of(to));
        let id = edge_status_prop(from, to, kind);
        self.ensure_prop(id.as_str(), || format!("{fname} trusts {tname} ({kind})"));
        self.set_world_truth(&id, true)
    }

    pub fn set_trust(&mut self, from: AgentId, to: AgentId, kind: TrustKind) -> Result<()> {
        self.require_agent(from)?;
        self.require_agent(to)?;
        if from == to {
            return Err(Error::SelfTrust(from));
        }
        match kind {
            TrustKind::Full => {
                self.materialise(from, to, TrustKind::IntegrityStrong, EdgeOrigin::Declared)?;
                self.materialise(from, to, TrustKind::Competence, EdgeOrigin::Declared)?;
                self.materialise(from, to, TrustKind::Full, EdgeOrigin::Declared)?;
            }
            k => {
                self.materialise(from, to, k, EdgeOrigin::Declared)?;
                if self.trusts(from, to, TrustKind::IntegrityStrong)
                    && self.trusts(from, to, TrustKind::Competence)
                {
                    let both_declared = [TrustKind::IntegrityStrong, TrustKind::Competence]
                        .iter()
                        .all(|&k| self.trust.origin(from, to, k) == Some(EdgeOrigin::Declared));
                    let origin = if both_declared {
                        EdgeOrigin::Declared
                    } else {
                        EdgeOrigin::Derived
                    };
                    self.materialise(from, to, TrustKind::Full, origin)?;
                }
            }
        }
        Ok(())
    }

    /// Closes full trust under transitivity; added edges are `Derived`.
    /// Returns the number of new full edges.
    pub fn trust_closure(&mut self) -> Result<usize> {
        let mut succ: BTreeMap<AgentId, Vec<AgentId>> = BTreeMap::new();
        for e in self.trust.edges().filter(|e| e.kind == TrustKind::Full) {
            succ.entry(e.from).or_default().push(e.to);
        }
        let mut new_edges = Vec::new();
        for &src in succ.keys() {
            let mut seen = BTreeSet::from([src]);
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                for &y in succ.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                    if seen.insert(y) {
                        queue.push_back(y);
                        if !self.trusts_fully(src, y) {
                            new_edges.push((src, y));
                        }
                    }
                }
            }
        }
        for &(f, t) in &new_edges {
            for k in [
                TrustKind::IntegrityStrong,
                TrustKind::Competence,
                TrustKind::Full,
            ] {
                self.materialise(f, t, k, EdgeOrigin::Derived)?;
            }
        }
        Ok(new_edges.len())
    }

    fn weak_form_mutual(&self, a: AgentId, b: AgentId) -> bool {
        let one_way = |x, y| {
            (self.trusts(x, y, TrustKind::IntegrityWeak)
                || self.trusts(x, y, TrustKind::IntegrityStrong))
                && self.trusts(x, y, TrustKind::Competence)
        };
        one_way(a, b) && one_way(b, a)
    }

    pub(crate) fn strong_mutual(&self, a: AgentId, b: AgentId) -> bool {
        let one_way = |x, y| {
            self.trusts(x, y, TrustKind::IntegrityStrong)
                && self.trusts(x, y, TrustKind::Competence)
        };
        one_way(a, b) && one_way(b, a)
    }

    /// Maximal cliques (size >= 2) with mutual integrity + competence trust.
    pub fn trust_neighborhoods(&self) -> Vec<BTreeSet<AgentId>> {
        maximal_cliques(&self.agent_ids(), |a, b| self.weak_form_mutual(a, b))
            .into_iter()
            .filter(|c| c.len() >= 2)
            .collect()
    }

    /// CK records that certify a group's trust status.
    pub(crate) fn status_records(&self) -> impl Iterator<Item = &BTreeSet<AgentId>> {
        self.group_ck
            .iter()
            .filter(|r| r.prop == group_status_prop(&r.group))
            .map(|r| &r.group)
    }

    /// Strong clique whose status is common knowledge among its members.
    pub fn is_security_group(&self, group: &BTreeSet<AgentId>) -> bool {
        group.len() >= 2
            && group
                .iter()
                .all(|&a| group.iter().all(|&b| a == b || self.strong_mutual(a, b)))
            && self.status_records().any(|g| group.is_subset(g))
    }

    /// Maximal security neighborhoods, each with the status prop that is
    /// common knowledge among its members.
    pub fn security_neighborhoods(&self) -> Vec<(BTreeSet<AgentId>, PropId)> {
        let records: Vec<&BTreeSet<AgentId>> = self.status_records().collect();
        maximal_sets(&self.agent_ids(), |r, v| {
            r.iter().all(|&u| self.strong_mutual(u, v))
                && (r.is_empty() || records.iter().any(|g| g.contains(&v) && r.is_subset(g)))
        })
        .into_iter()
        .filter(|s| s.len() >= 2)
        .map(|s| {
            let prop = records
                .iter()
                .filter(|g| s.is_subset(g))
                .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())))
                .map(|g| group_status_prop(g))
                .expect("covered by construction");
            (s, prop)
        })
        .collect()
    }

    /// Establishes common knowledge of a strong clique's trust status.
    ///
    /// Each status prop P is true and, by strong integrity, asserted by each
    /// member to the others; if some level n of `(xk yk)ⁿ P` failed, the
    /// true level n-1 statement together with the mutual trust would produce
    /// it, so no level fails and P is common knowledge. The result is
    /// recorded as CK of the group status prop and of every pairwise edge
    /// status prop.
    pub fn derive_security_ck(&mut self, clique: &BTreeSet<AgentId>) -> Result<PropId> {
        if clique.len() < 2 {
            return Err(Error::NotSecurityEligible(format!(
                "a clique needs at least 2 members, got {}",
                clique.len()
            )));
        }
        for &a in clique {
            self.require_agent(a)?;
        }
        let mut edge_props = Vec::new();
        for &a in clique {
            for &b in clique {
                if a == b {
                    continue;
                }
                if !self.strong_mutual(a, b) {
                    return Err(Error::NotSecurityEligible(format!(
                        "{a} and {b} do not share strong integrity and competence trust"
                    )));
                }
                for k in [TrustKind::IntegrityStrong, TrustKind::Competence] {
                    let p = edge_status_prop(a, b, k);
                    if !self.has_prop(&p) || !self.is_true(&p) {
                        return Err(Error::NotSecurityEligible(format!(
                            "status prop {p} is not established"
                        )));
                    }
                    edge_props.push(p);
                }
            }
        }
        let names: Vec<String> = clique.iter().map(|&a| self.name_of(a)).collect();
        let status = group_status_prop(clique);
        self.ensure_prop(status.as_str(), || {
            format!("{} form a strong-trust clique", names.join(", "))
        });
        self.set_world_truth(&status, true)?;
        let mut records = vec![crate::CkRecord {
            group: clique.clone(),
            prop: status.clone(),
        }];
        records.extend(edge_props.into_iter().map(|prop| crate::CkRecord {
            group: clique.clone(),
            prop,
        }));
        self.commit(Vec::new(), records, crate::net::Revision::Strict)?;
        Ok(status)
    }

    /// Insider iff `claimant` belongs to the security group.
    pub fn authenticate(
        &self,
        clique: &BTreeSet<AgentId>,
        claimant: AgentId,
    ) -> Result<Authentication> {
        self.require_agent(claimant)?;
        if !self.is_security_group(clique) {
            return Err(Error::NotAuthenticatable);
        }
        Ok(if clique.contains(&claimant) {
            Authentication::Insider
        } else {
            Authentication::Outsider
        })
    }

    /// Imports `from,to,kind` lines. Agents may be ids or unique names;
    /// blank lines, `#` comments and a `from,to,kind` header are skipped.
    pub fn import_trust_csv(&mut self, text: &str) -> Result<usize> {
        let mut n = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.replace(' ', "") == "from,to,kind" {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let err = |column: usize, message: String| Error::Parse {
                line: i + 1,
                column,
                message,
            };
            if fields.len() != 3 {
                return Err(err(
                    1,
                    format!("expected `from,to,kind`, got {} field(s)", fields.len()),
                ));
            }
            let from = self
                .resolve_agent(fields[0])
                .map_err(|e| err(1, e.to_string()))?;
            let to = self
                .resolve_agent(fields[1])
                .map_err(|e| err(fields[0].len() + 2, e.to_string()))?;
            let kind: TrustKind = fields[2]
                .parse()
                .map_err(|e: String| err(fields[0].len() + fields[1].len() + 3, e))?;
            self.set_trust(from, to, kind)
                .map_err(|e| err(1, e.to_string()))?;
            n += 1;
        }
        Ok(n)
    }
}
