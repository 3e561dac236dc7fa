//! The epinet store: agents, props, world truths, held facts, common
//! knowledge records and the provenance ledger.
//!
//! Knowledge is binary and closed-world: [`Epinet::holds`] answers `true`
//! only for formulas that are stored, obtained from a stored fact by
//! stripping outer `K` operators, or entailed by a common-knowledge record.
//! Nothing else is derived. In particular `K(a, p)` never yields
//! `K(a, K(a, p))`.
//!
//! With factivity enforced (the default) every stored `K(x, φ)` must be
//! grounded: `φ` has to evaluate true from the world, the CK records and
//! other grounded facts, never from the fact itself.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::trust::TrustStore;
use crate::{AgentId, Error, EventId, Formula, PropId, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agent {
    pub id: AgentId,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop {
    pub id: PropId,
    pub statement: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub max_depth: u32,
    pub factivity_enforced: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_depth: 12,
            factivity_enforced: true,
        }
    }
}

/// `prop` is common knowledge among `group`: every finite `K`-chain over
/// members ending in `prop` holds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CkRecord {
    pub group: BTreeSet<AgentId>,
    pub prop: PropId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub sender: AgentId,
    pub event: EventId,
    /// Whether the receiver fully trusted the sender when the hop happened.
    pub trusted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub hops: Vec<Hop>,
    pub stale: bool,
}

/// Labels returned by [`Epinet::epistemic_state`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateLabel {
    Knows,
    /// Knows p, knows she knows p, ... to the given level (>= 2).
    Aware(u32),
    Believes,
    Ignorant,
    Oblivious,
    Confident,
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Knows => f.write_str("knows"),
            StateLabel::Aware(n) => write!(f, "aware_{n}"),
            StateLabel::Believes => f.write_str("believes"),
            StateLabel::Ignorant => f.write_str("ignorant"),
            StateLabel::Oblivious => f.write_str("oblivious"),
            StateLabel::Confident => f.write_str("confident"),
        }
    }
}

impl Serialize for StateLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// How a batch update treats previously stored facts it invalidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Revision {
    /// Reject the whole update.
    Strict,
    /// Drop the invalidated facts (an event changed what is true).
    Supersede,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Epinet {
    pub(crate) agents: BTreeMap<AgentId, Agent>,
    pub(crate) props: BTreeMap<PropId, Prop>,
    pub(crate) world: BTreeSet<PropId>,
    pub(crate) facts: BTreeSet<Formula>,
    pub(crate) group_ck: BTreeSet<CkRecord>,
    pub(crate) provenance: BTreeMap<(AgentId, PropId), Provenance>,
    pub(crate) trust: TrustStore,
    pub(crate) config: Config,
    pub(crate) next_agent: u32,
    pub(crate) next_event: u64,
    /// Multiplicity of every formula reachable from a fact by stripping `K`.
    derived: HashMap<Formula, u32>,
}

impl Default for Epinet {
    fn default() -> Self {
        Epinet::with_config(Config::default())
    }
}

impl Epinet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_config(config: Config) -> Self {
        Epinet {
            agents: BTreeMap::new(),
            props: BTreeMap::new(),
            world: BTreeSet::new(),
            facts: BTreeSet::new(),
            group_ck: BTreeSet::new(),
            provenance: BTreeMap::new(),
            trust: TrustStore::default(),
            config,
            next_agent: 1,
            next_event: 1,
            derived: HashMap::new(),
        }
    }

    pub fn config(&self) -> Config {
        self.config
    }

    // ---- agents and props -------------------------------------------------

    pub fn add_agent(&mut self, name: &str) -> Result<AgentId> {
        if name.trim().is_empty() {
            return Err(Error::EmptyName);
        }
        let id = AgentId::new(self.next_agent);
        self.next_agent += 1;
        self.agents.insert(
            id,
            Agent {
                id,
                name: name.to_owned(),
            },
        );
        Ok(id)
    }

    pub fn agent(&self, id: AgentId) -> Option<&Agent> {
        self.agents.get(&id)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.agents.values()
    }

    pub fn agent_ids(&self) -> BTreeSet<AgentId> {
        self.agents.keys().copied().collect()
    }

    pub fn has_agent(&self, id: AgentId) -> bool {
        self.agents.contains_key(&id)
    }

    /// Display name, falling back to the id for unknown agents.
    pub fn name_of(&self, id: AgentId) -> String {
        self.agents
            .get(&id)
            .map(|a| a.name.clone())
            .unwrap_or_else(|| id.to_string())
    }

    /// Resolves `a<n>` ids first, then a unique display name.
    pub fn resolve_agent(&self, token: &str) -> Result<AgentId> {
        if let Ok(id) = token.parse::<AgentId>() {
            if self.has_agent(id) {
                return Ok(id);
            }
        }
        let mut hits = self.agents.values().filter(|a| a.name == token);
        match (hits.next(), hits.next()) {
            (Some(a), None) => Ok(a.id),
            _ => Err(Error::UnknownAgent(token.to_owned())),
        }
    }

    pub fn add_prop(&mut self, id: impl Into<PropId>, statement: &str) -> Result<PropId> {
        let id = id.into();
        if id.as_str().is_empty() {
            return Err(Error::EmptyName);
        }
        if self.props.contains_key(&id) {
            return Err(Error::DuplicateProp(id));
        }
        self.props.insert(
            id.clone(),
            Prop {
                id: id.clone(),
                statement: statement.to_owned(),
            },
        );
        Ok(id)
    }

    /// Registers `id` if absent; returns it either way.
    pub(crate) fn ensure_prop(&mut self, id: &str, statement: impl FnOnce() -> String) -> PropId {
        let id = PropId::new(id);
        if !self.props.contains_key(&id) {
            self.props.insert(
                id.clone(),
                Prop {
                    id: id.clone(),
                    statement: statement(),
                },
            );
        }
        id
    }

    pub fn prop(&self, id: &PropId) -> Option<&Prop> {
        self.props.get(id)
    }

    pub fn props(&self) -> impl Iterator<Item = &Prop> {
        self.props.values()
    }

    pub fn has_prop(&self, id: &PropId) -> bool {
        self.props.contains_key(id)
    }

    pub(crate) fn require_agent(&self, id: AgentId) -> Result<()> {
        if self.has_agent(id) {
            Ok(())
        } else {
            Err(Error::UnknownAgent(id.to_string()))
        }
    }

    pub(crate) fn require_prop(&self, id: &PropId) -> Result<()> {
        if self.has_prop(id) {
            Ok(())
        } else {
            Err(Error::UnknownProp(id.to_string()))
        }
    }

    // ---- world ------------------------------------------------------------

    pub fn is_true(&self, p: &PropId) -> bool {
        self.world.contains(p)
    }

    pub fn world(&self) -> &BTreeSet<PropId> {
        &self.world
    }

    pub fn set_world_truth(&mut self, p: &PropId, value: bool) -> Result<()> {
        self.require_prop(p)?;
        let was = self.world.contains(p);
        if was == value {
            return Ok(());
        }
        if value {
            self.world.insert(p.clone());
        } else {
            self.world.remove(p);
        }
        if self.config.factivity_enforced {
            let mut bad = self.ungrounded();
            bad.extend(self.false_ck_records());
            if !bad.is_empty() {
                if was {
                    self.world.insert(p.clone());
                } else {
                    self.world.remove(p);
                }
                return Err(Error::FactivityViolation(bad));
            }
        }
        Ok(())
    }

    // ---- facts ------------------------------------------------------------

    pub fn facts(&self) -> impl Iterator<Item = &Formula> {
        self.facts.iter()
    }

    pub fn fact_count(&self) -> usize {
        self.facts.len()
    }

    pub fn contains_fact(&self, f: &Formula) -> bool {
        self.facts.contains(f)
    }

    /// Stored facts whose outermost operator belongs to `agent`.
    pub fn facts_of(&self, agent: AgentId) -> impl Iterator<Item = &Formula> {
        self.facts
            .iter()
            .filter(move |f| f.root_agent() == Some(agent))
    }

    /// Checks references, shape and depth of a formula meant for the store.
    pub fn validate_formula(&self, f: &Formula) -> Result<()> {
        f.check_shape()?;
        let depth = f.depth();
        if depth > self.config.max_depth {
            return Err(Error::DepthExceeded {
                depth,
                max: self.config.max_depth,
            });
        }
        for a in f.agents() {
            self.require_agent(a)?;
        }
        for p in f.props() {
            self.require_prop(p)?;
        }
        Ok(())
    }

    fn validate_fact(&self, f: &Formula) -> Result<()> {
        self.validate_formula(f)?;
        match f {
            Formula::Knows { .. } | Formula::Believes { .. } | Formula::WouldKnowIfTrue { .. } => {
                Ok(())
            }
            _ => Err(Error::MalformedFormula(format!(
                "a held fact must be rooted at an agent, found `{f}`"
            ))),
        }
    }

    pub fn assert_fact(&mut self, f: Formula) -> Result<()> {
        self.assert_facts(vec![f])
    }

    /// Adds a batch atomically; on any violation nothing changes.
    pub fn assert_facts(&mut self, fs: Vec<Formula>) -> Result<()> {
        let originals: Vec<Formula> = fs.clone();
        self.commit(fs, Vec::new(), Revision::Strict)?;
        for f in &originals {
            self.note_origin(f);
        }
        Ok(())
    }

    /// Direct assertion of `K/B(a, p)` makes `a` an origin of `p`.
    fn note_origin(&mut self, f: &Formula) {
        if let Formula::Knows { agent, inner } | Formula::Believes { agent, inner } = f {
            if let Formula::Atom { prop } = inner.as_ref() {
                let key = (*agent, prop.clone());
                match self.provenance.get(&key) {
                    Some(p) if !p.stale => {}
                    _ => {
                        self.provenance.insert(key, Provenance::default());
                    }
                }
            }
        }
    }

    pub fn retract_fact(&mut self, f: &Formula) -> Result<()> {
        self.retract_facts(std::slice::from_ref(f))
    }

    /// Removes a batch atomically; fails if a remaining fact loses its grounding.
    pub fn retract_facts(&mut self, fs: &[Formula]) -> Result<()> {
        for f in fs {
            if !self.facts.contains(f) {
                return Err(Error::NoSuchFact(f.clone()));
            }
        }
        let mut removed = Vec::new();
        for f in fs {
            if self.facts.remove(f) {
                self.unindex(f);
                removed.push(f.clone());
            }
        }
        if self.config.factivity_enforced {
            let bad = self.ungrounded();
            if !bad.is_empty() {
                for f in removed {
                    self.index(&f);
                    self.facts.insert(f);
                }
                return Err(Error::FactivityViolation(bad));
            }
        }
        for f in &removed {
            self.mark_stale(f);
        }
        Ok(())
    }

    fn mark_stale(&mut self, f: &Formula) {
        if let Formula::Knows { agent, inner } | Formula::Believes { agent, inner } = f {
            if let Formula::Atom { prop } = inner.as_ref() {
                let still = self.holds(&Formula::knows(*agent, Formula::atom(prop.clone())))
                    || self.holds(&Formula::believes(*agent, Formula::atom(prop.clone())));
                if !still {
                    if let Some(entry) = self.provenance.get_mut(&(*agent, prop.clone())) {
                        entry.stale = true;
                    }
                }
            }
        }
    }

    // ---- common knowledge -------------------------------------------------

    pub fn group_ck(&self) -> impl Iterator<Item = &CkRecord> {
        self.group_ck.iter()
    }

    pub fn add_common_knowledge(&mut self, group: BTreeSet<AgentId>, p: &PropId) -> Result<()> {
        self.commit(
            Vec::new(),
            vec![CkRecord {
                group,
                prop: p.clone(),
            }],
            Revision::Strict,
        )
        .map(|_| ())
    }

    /// Widens every CK record on `p` to include `agent`.
    pub fn join_common_knowledge(&mut self, p: &PropId, agent: AgentId) -> Result<()> {
        self.require_agent(agent)?;
        let recs: Vec<CkRecord> = self
            .group_ck
            .iter()
            .filter(|r| &r.prop == p && !r.group.contains(&agent))
            .cloned()
            .collect();
        for mut r in recs {
            self.group_ck.remove(&r);
            r.group.insert(agent);
            self.group_ck.insert(r);
        }
        Ok(())
    }

    fn ck_entails(&self, f: &Formula) -> bool {
        match f.as_knows_chain() {
            Some((agents, p)) => self
                .group_ck
                .iter()
                .any(|r| &r.prop == p && agents.iter().all(|a| r.group.contains(a))),
            None => false,
        }
    }

    /// True if some CK record on `p` covers every agent of `group`.
    pub fn ck_covers(&self, group: &BTreeSet<AgentId>, p: &PropId) -> bool {
        self.group_ck
            .iter()
            .any(|r| &r.prop == p && group.is_subset(&r.group))
    }

    fn false_ck_records(&self) -> Vec<Formula> {
        self.group_ck
            .iter()
            .filter(|r| !self.world.contains(&r.prop))
            .filter_map(|r| {
                r.group
                    .iter()
                    .next()
                    .map(|&a| Formula::knows(a, Formula::atom(r.prop.clone())))
            })
            .collect()
    }

    // ---- evaluation -------------------------------------------------------

    /// Closed-world evaluation. Total and read-only.
    pub fn holds(&self, f: &Formula) -> bool {
        match f {
            Formula::Atom { prop } => self.world.contains(prop),
            Formula::Not { inner } => !self.holds(inner),
            Formula::Knows { .. } => self.derived.contains_key(f) || self.ck_entails(f),
            Formula::Believes { .. } => self.derived.contains_key(f),
            Formula::WouldKnowIfTrue { agent, prop } => {
                self.derived.contains_key(f)
                    || !self.world.contains(prop)
                    || self.holds(&Formula::knows(*agent, Formula::atom(prop.clone())))
            }
        }
    }

    fn index(&mut self, f: &Formula) {
        let mut cur = f;
        loop {
            *self.derived.entry(cur.clone()).or_insert(0) += 1;
            match cur {
                Formula::Knows { inner, .. } => match inner.as_ref() {
                    Formula::Atom { .. } | Formula::Not { .. } => break,
                    next => cur = next,
                },
                _ => break,
            }
        }
    }

    fn unindex(&mut self, f: &Formula) {
        let mut cur = f;
        loop {
            if let Some(n) = self.derived.get_mut(cur) {
                *n -= 1;
                if *n == 0 {
                    self.derived.remove(cur);
                }
            }
            match cur {
                Formula::Knows { inner, .. } => match inner.as_ref() {
                    Formula::Atom { .. } | Formula::Not { .. } => break,
                    next => cur = next,
                },
                _ => break,
            }
        }
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.derived.clear();
        let facts: Vec<Formula> = self.facts.iter().cloned().collect();
        for f in &facts {
            self.index(f);
        }
    }

    /// Facts whose `K`-unfoldings cannot be established without themselves.
    ///
    /// Least fixpoint: start from the world and CK records, admit any fact
    /// whose inner formula evaluates true from what is already admitted.
    pub(crate) fn ungrounded(&self) -> Vec<Formula> {
        let mut admitted: HashSet<&Formula> = HashSet::new();
        let mut pending: Vec<&Formula> = Vec::new();
        for f in &self.facts {
            match f {
                Formula::Knows { .. } => pending.push(f),
                _ => {
                    admitted.insert(f);
                }
            }
        }
        loop {
            let mut newly = Vec::new();
            pending.retain(|f| {
                let Formula::Knows { inner, .. } = f else {
                    unreachable!()
                };
                if self.grounded(inner, &admitted) {
                    newly.push(*f);
                    false
                } else {
                    true
                }
            });
            if newly.is_empty() {
                break;
            }
            for f in newly {
                let mut cur = f;
                loop {
                    admitted.insert(cur);
                    match cur {
                        Formula::Knows { inner, .. } => cur = inner,
                        _ => break,
                    }
                }
            }
        }
        pending.into_iter().cloned().collect()
    }

    fn grounded(&self, f: &Formula, admitted: &HashSet<&Formula>) -> bool {
        match f {
            Formula::Atom { prop } => self.world.contains(prop),
            Formula::Not { inner } => !self.holds(inner),
            Formula::Knows { .. } => admitted.contains(f) || self.ck_entails(f),
            Formula::Believes { .. } => admitted.contains(f),
            Formula::WouldKnowIfTrue { agent, prop } => {
                admitted.contains(f)
                    || !self.world.contains(prop)
                    || self.grounded(
                        &Formula::knows(*agent, Formula::atom(prop.clone())),
                        admitted,
                    )
            }
        }
    }

    /// Applies a batch of new facts and CK records.
    ///
    /// Returns the previously stored facts dropped under
    /// [`Revision::Supersede`]. New items that are themselves ungrounded
    /// always reject the batch.
    pub(crate) fn commit(
        &mut self,
        facts: Vec<Formula>,
        cks: Vec<CkRecord>,
        mode: Revision,
    ) -> Result<Vec<Formula>> {
        for f in &facts {
            self.validate_fact(f)?;
        }
        for r in &cks {
            if r.group.len() < 2 {
                return Err(Error::GroupTooSmall(r.group.len()));
            }
            for &a in &r.group {
                self.require_agent(a)?;
            }
            self.require_prop(&r.prop)?;
            if self.config.factivity_enforced && !self.world.contains(&r.prop) {
                let a = *r.group.iter().next().expect("non-empty group");
                return Err(Error::FactivityViolation(vec![Formula::knows(
                    a,
                    Formula::atom(r.prop.clone()),
                )]));
            }
        }
        let mut inserted = Vec::new();
        for f in facts {
            if !self.facts.contains(&f) {
                self.index(&f);
                self.facts.insert(f.clone());
                inserted.push(f);
            }
        }
        let mut inserted_ck = Vec::new();
        for r in cks {
            if self.group_ck.insert(r.clone()) {
                inserted_ck.push(r);
            }
        }
        if !self.config.factivity_enforced {
            return Ok(Vec::new());
        }
        let bad = self.ungrounded();
        if bad.is_empty() {
            return Ok(Vec::new());
        }
        let fresh: HashSet<&Formula> = inserted.iter().collect();
        let (bad_new, bad_old): (Vec<Formula>, Vec<Formula>) =
            bad.into_iter().partition(|f| fresh.contains(f));
        if !bad_new.is_empty() || mode == Revision::Strict {
            for f in &inserted {
                self.facts.remove(f);
                self.unindex(f);
            }
            for r in &inserted_ck {
                self.group_ck.remove(r);
            }
            return Err(Error::FactivityViolation(if bad_new.is_empty() {
                bad_old
            } else {
                bad_new
            }));
        }
        let mut dropped = Vec::new();
        let mut round = bad_old;
        while !round.is_empty() {
            for f in &round {
                self.facts.remove(f);
                self.unindex(f);
            }
            dropped.extend(round);
            round = self.ungrounded();
        }
        for f in &dropped {
            self.mark_stale(f);
        }
        Ok(dropped)
    }

    // ---- provenance -------------------------------------------------------

    pub fn provenance(&self, agent: AgentId, p: &PropId) -> Option<&Provenance> {
        self.provenance.get(&(agent, p.clone()))
    }

    pub fn provenance_entries(&self) -> impl Iterator<Item = (&(AgentId, PropId), &Provenance)> {
        self.provenance.iter()
    }

    /// Live hops by which `agent` came to hold `p`; empty for origins.
    pub fn chain_of(&self, agent: AgentId, p: &PropId) -> Vec<Hop> {
        match self.provenance.get(&(agent, p.clone())) {
            Some(e) if !e.stale => e.hops.clone(),
            _ => Vec::new(),
        }
    }

    /// Records that `holder` received `p` from `sender` in `event`.
    ///
    /// An origin entry is never overwritten; a rumor chain is replaced by a
    /// fully trusted one; otherwise the earliest chain is kept.
    pub(crate) fn record_hop(
        &mut self,
        holder: AgentId,
        p: &PropId,
        sender: AgentId,
        event: EventId,
        trusted: bool,
    ) {
        let mut hops = self.chain_of(sender, p);
        hops.push(Hop {
            sender,
            event,
            trusted,
        });
        let key = (holder, p.clone());
        let replace = match self.provenance.get(&key) {
            None => true,
            Some(e) if e.stale => true,
            Some(e) if e.hops.is_empty() => false,
            Some(e) => !e.hops.iter().all(|h| h.trusted) && hops.iter().all(|h| h.trusted),
        };
        if replace {
            self.provenance
                .insert(key, Provenance { hops, stale: false });
        }
    }

    /// Marks `agent` as an origin of `p` unless it already has a live entry.
    pub(crate) fn mark_origin(&mut self, agent: AgentId, p: &PropId) {
        let key = (agent, p.clone());
        match self.provenance.get(&key) {
            Some(e) if !e.stale => {}
            _ => {
                self.provenance.insert(key, Provenance::default());
            }
        }
    }

    pub(crate) fn next_event_id(&mut self) -> EventId {
        let id = EventId::new(self.next_event);
        self.next_event += 1;
        id
    }

    // ---- states -----------------------------------------------------------

    pub fn knows(&self, a: AgentId, p: &PropId) -> bool {
        self.holds(&Formula::knows(a, Formula::atom(p.clone())))
    }

    pub fn epistemic_state(&self, a: AgentId, p: &PropId) -> BTreeSet<StateLabel> {
        let mut labels = BTreeSet::new();
        let kp = Formula::knows(a, Formula::atom(p.clone()));
        let knows = self.holds(&kp);
        if knows {
            labels.insert(StateLabel::Knows);
            let mut level = 1;
            let mut f = kp.clone();
            while level < self.config.max_depth {
                f = Formula::knows(a, f);
                if !self.holds(&f) {
                    break;
                }
                level += 1;
            }
            if level >= 2 {
                labels.insert(StateLabel::Aware(level));
            }
        } else {
            if self.holds(&Formula::knows(a, Formula::not(kp.clone()))) {
                return BTreeSet::from([StateLabel::Ignorant]);
            }
            let mentioned = self.facts_of(a).any(|f| f.mentions_prop(p))
                || self
                    .group_ck
                    .iter()
                    .any(|r| &r.prop == p && r.group.contains(&a));
            if !mentioned {
                return BTreeSet::from([StateLabel::Oblivious]);
            }
            if self.holds(&Formula::believes(a, Formula::atom(p.clone()))) {
                labels.insert(StateLabel::Believes);
            }
        }
        if self.holds(&Formula::knows(a, Formula::would_know(a, p.clone()))) {
            labels.insert(StateLabel::Confident);
        }
        labels
    }

    pub fn is_oblivious(&self, a: AgentId, p: &PropId) -> bool {
        self.epistemic_state(a, p).contains(&StateLabel::Oblivious)
    }

    // ---- invariants -------------------------------------------------------

    /// Every store invariant that does not hold, as readable messages.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in &self.facts {
            if let Err(e) = self.validate_fact(f) {
                out.push(format!("fact {f}: {e}"));
            }
        }
        for r in &self.group_ck {
            if r.group.len() < 2 {
                out.push(format!(
                    "common-knowledge group on {} has {} member(s)",
                    r.prop,
                    r.group.len()
                ));
            }
            if r.group.iter().any(|a| !self.has_agent(*a)) || !self.has_prop(&r.prop) {
                out.push(format!(
                    "common-knowledge record on {} references unknown names",
                    r.prop
                ));
            }
        }
        if self.config.factivity_enforced {
            for f in self.ungrounded() {
                out.push(format!("fact {f} is not grounded"));
            }
            for r in &self.group_ck {
                if !self.world.contains(&r.prop) {
                    out.push(format!("common knowledge of false prop {}", r.prop));
                }
            }
        }
        for p in &self.world {
            if !self.has_prop(p) {
                out.push(format!("world truth for unknown prop {p}"));
            }
        }
        for (a, p) in self.provenance.keys() {
            if !self.has_agent(*a) || !self.has_prop(p) {
                out.push(format!(
                    "provenance entry ({a}, {p}) references unknown names"
                ));
            }
        }
        out.extend(self.trust.violations(self));
        out
    }
}
