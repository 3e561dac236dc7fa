//! Platform events as epinet transformations.
//!
//! A [`Platform`] wraps an [`Epinet`] with the side state events need:
//! channels, conversation threads, petitions and the record of who is
//! concealed from whom by blind copies. Events apply atomically and in
//! order; a rejected event leaves everything as it was.

mod event;
mod preset;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::Value;

pub use event::{Event, EventKind, Flags};
pub use preset::Preset;

use crate::net::Revision;
use crate::{AgentId, CkRecord, Epinet, Error, EventId, Formula, PropId, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Channel {
    pub id: String,
    pub members: BTreeSet<AgentId>,
    /// The organization the channel lives in.
    pub host: BTreeSet<AgentId>,
    pub covert: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub event: EventId,
    pub sender: AgentId,
    pub visible: BTreeSet<AgentId>,
    pub hidden: BTreeSet<AgentId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thread {
    pub id: String,
    pub payload: PropId,
    pub messages: Vec<Message>,
}

impl Thread {
    pub fn participants(&self) -> BTreeSet<AgentId> {
        self.messages
            .iter()
            .flat_map(|m| {
                std::iter::once(m.sender)
                    .chain(m.visible.iter().copied())
                    .chain(m.hidden.iter().copied())
            })
            .collect()
    }

    fn delivered(&self, from: AgentId, to: AgentId) -> bool {
        self.messages
            .iter()
            .any(|m| m.sender == from && (m.visible.contains(&to) || m.hidden.contains(&to)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Petition {
    pub id: String,
    pub initiator: AgentId,
    pub signers: Vec<AgentId>,
    pub supports: Vec<PropId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventOutcome {
    pub event: EventId,
    /// Facts the event stored.
    pub added: Vec<Formula>,
    /// Previously stored facts the event made false and removed.
    pub superseded: Vec<Formula>,
}

#[derive(Clone, Debug)]
pub struct Platform {
    net: Epinet,
    channels: BTreeMap<String, Channel>,
    threads: BTreeMap<String, Thread>,
    petitions: BTreeMap<String, Petition>,
    /// `(viewer, hidden)`: `viewer` must not learn of `hidden`'s involvement.
    concealed: BTreeSet<(AgentId, AgentId)>,
    log: Vec<Event>,
    presets: BTreeMap<String, Preset>,
}

impl Default for Platform {
    fn default() -> Self {
        Platform::new(Epinet::new())
    }
}

/// `premium:<agent>`, true while the agent has a premium account.
pub fn premium_prop(agent: AgentId) -> PropId {
    PropId::new(format!("premium:{agent}"))
}

impl Platform {
    pub fn new(net: Epinet) -> Self {
        Platform {
            net,
            channels: BTreeMap::new(),
            threads: BTreeMap::new(),
            petitions: BTreeMap::new(),
            concealed: BTreeSet::new(),
            log: Vec::new(),
            presets: preset::builtin(),
        }
    }

    pub fn net(&self) -> &Epinet {
        &self.net
    }

    pub fn net_mut(&mut self) -> &mut Epinet {
        &mut self.net
    }

    pub fn into_net(self) -> Epinet {
        self.net
    }

    pub fn channel(&self, id: &str) -> Option<&Channel> {
        self.channels.get(id)
    }

    pub fn thread(&self, id: &str) -> Option<&Thread> {
        self.threads.get(id)
    }

    pub fn threads(&self) -> impl Iterator<Item = &Thread> {
        self.threads.values()
    }

    pub fn petition(&self, id: &str) -> Option<&Petition> {
        self.petitions.get(id)
    }

    /// Applied events, with ids filled in.
    pub fn log(&self) -> &[Event] {
        &self.log
    }

    pub fn is_concealed(&self, viewer: AgentId, hidden: AgentId) -> bool {
        self.concealed.contains(&(viewer, hidden))
    }

    pub fn concealed_pairs(&self) -> impl Iterator<Item = &(AgentId, AgentId)> {
        self.concealed.iter()
    }

    pub fn add_channel(
        &mut self,
        id: &str,
        members: BTreeSet<AgentId>,
        host: BTreeSet<AgentId>,
        covert: bool,
    ) -> Result<()> {
        if id.is_empty() {
            return Err(Error::EmptyName);
        }
        for &a in members.iter().chain(&host) {
            self.net.require_agent(a)?;
        }
        if members.len() < 2 {
            return Err(Error::GroupTooSmall(members.len()));
        }
        if !members.is_subset(&host) {
            return Err(Error::BadScope(format!(
                "channel `{id}` has members outside its host group"
            )));
        }
        if covert && members.len() == host.len() {
            return Err(Error::BadScope(format!(
                "covert channel `{id}` must leave part of its host group out"
            )));
        }
        self.channels.insert(
            id.to_owned(),
            Channel {
                id: id.to_owned(),
                members,
                host,
                covert,
            },
        );
        Ok(())
    }

    pub fn set_premium(&mut self, agent: AgentId, value: bool) -> Result<()> {
        self.net.require_agent(agent)?;
        let name = self.net.name_of(agent);
        let p = self.net.ensure_prop(premium_prop(agent).as_str(), || {
            format!("{name} has a premium account")
        });
        self.net.set_world_truth(&p, value)
    }

    // ---- events -----------------------------------------------------------

    /// Builds an event from JSON whose agent fields may be ids or names.
    pub fn event_from_value(&self, mut v: Value) -> Result<Event> {
        preset::resolve_agents(&self.net, &mut v)?;
        serde_json::from_value(v).map_err(|e| Error::MalformedEvent(e.to_string()))
    }

    /// Parses one JSON event per line; blank lines and `#` comments are skipped.
    pub fn parse_event_log(&self, text: &str) -> Result<Vec<Event>> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse {
                line: i + 1,
                column: e.column(),
                message: e.to_string(),
            })?;
            let e = self.event_from_value(v).map_err(|e| Error::Parse {
                line: i + 1,
                column: 1,
                message: e.to_string(),
            })?;
            out.push(e);
        }
        Ok(out)
    }

    pub fn apply_event(&mut self, e: Event) -> Result<EventOutcome> {
        let saved = self.clone();
        let r = self.apply_inner(e);
        match r {
            Ok((id, event)) => {
                self.log.push(event);
                Ok(self.outcome(id, &saved.net))
            }
            Err(err) => {
                *self = saved;
                Err(err)
            }
        }
    }

    /// Replies in an existing conversation; the receiver absorbs the
    /// replier's facts about the thread.
    pub fn reply_in_thread(
        &mut self,
        thread: &str,
        from: AgentId,
        to: AgentId,
        p: &PropId,
    ) -> Result<EventOutcome> {
        let t = self
            .threads
            .get(thread)
            .ok_or_else(|| Error::NoSuchThread(thread.to_owned()))?;
        if !t.participants().contains(&from) {
            return Err(Error::NoSuchThread(thread.to_owned()));
        }
        if &t.payload != p {
            return Err(Error::MalformedEvent(format!(
                "thread `{thread}` is about {}, not {p}",
                t.payload
            )));
        }
        self.apply_event(
            Event::new(EventKind::DirectMessage, from, p.clone())
                .to([to])
                .in_thread(thread),
        )
    }

    fn outcome(&self, event: EventId, before: &Epinet) -> EventOutcome {
        EventOutcome {
            event,
            added: self.net.facts.difference(&before.facts).cloned().collect(),
            superseded: before.facts.difference(&self.net.facts).cloned().collect(),
        }
    }

    fn apply_inner(&mut self, mut e: Event) -> Result<(EventId, Event)> {
        self.net.require_agent(e.sender)?;
        self.net.require_prop(&e.payload)?;
        for &a in e
            .visible
            .iter()
            .chain(&e.hidden)
            .chain(e.scope.iter().flatten())
        {
            self.net.require_agent(a)?;
        }
        if e.visible.contains(&e.sender) || e.hidden.contains(&e.sender) {
            return Err(Error::MalformedEvent(format!(
                "{} cannot be its own recipient",
                e.sender
            )));
        }
        if !e.visible.is_disjoint(&e.hidden) {
            return Err(Error::MalformedEvent(
                "visible and hidden recipients overlap".into(),
            ));
        }
        if e.kind != EventKind::DirectMessage
            && e.kind != EventKind::Recording
            && !e.hidden.is_empty()
        {
            return Err(Error::MalformedEvent(format!(
                "{} has no hidden recipients",
                e.kind
            )));
        }
        let id = if e.kind == EventKind::Leak {
            self.leak(&e)?
        } else {
            let id = self.net.next_event_id();
            match e.kind {
                EventKind::DirectMessage => self.direct_message(&mut e, id)?,
                EventKind::AckRead => self.ack_read(&e, id)?,
                EventKind::Broadcast => self.broadcast(&e, id)?,
                EventKind::Reaction => self.reaction(&e, id)?,
                EventKind::CoPresence => self.co_presence(&e, id)?,
                EventKind::ChannelPost => self.channel_post(&e, id)?,
                EventKind::Recording => self.recording(&e, id)?,
                EventKind::ProfileView => self.profile_view(&e, id)?,
                EventKind::PetitionSign => self.petition_sign(&e, id)?,
                EventKind::Leak => unreachable!(),
            }
            id
        };
        e.id = Some(id);
        Ok((id, e))
    }

    fn commit(&mut self, facts: Vec<Formula>, cks: Vec<CkRecord>) -> Result<()> {
        self.net.commit(facts, cks, Revision::Supersede).map(|_| ())
    }

    fn single_target(e: &Event) -> Result<AgentId> {
        let mut it = e.visible.iter();
        match (it.next(), it.next()) {
            (Some(&a), None) => Ok(a),
            _ => Err(Error::MalformedEvent(format!(
                "{} needs exactly one visible target",
                e.kind
            ))),
        }
    }

    /// What a receiver gets from `sender` about `p`: knowledge if the sender
    /// knows it, belief otherwise.
    fn delivery(&self, sender: AgentId, receiver: AgentId, p: &PropId) -> Formula {
        let atom = Formula::atom(p.clone());
        if self.net.knows(sender, p) {
            Formula::knows(receiver, atom)
        } else {
            Formula::believes(receiver, atom)
        }
    }

    fn hop(&mut self, receiver: AgentId, p: &PropId, sender: AgentId, event: EventId) {
        let trusted = self.net.trusts_fully(receiver, sender);
        self.net.record_hop(receiver, p, sender, event, trusted);
    }

    fn note_sender(&mut self, sender: AgentId, p: &PropId) {
        let atom = Formula::atom(p.clone());
        let informed = self.net.holds(&Formula::knows(sender, atom.clone()))
            || self.net.holds(&Formula::believes(sender, atom));
        if informed && self.net.provenance(sender, p).is_none() {
            self.net.mark_origin(sender, p);
        }
    }

    fn reveal(&mut self, group: &BTreeSet<AgentId>) {
        self.concealed
            .retain(|(v, h)| !(group.contains(v) && group.contains(h)));
    }

    fn hidden_from(&self, viewer: AgentId, f: &Formula) -> bool {
        self.concealed
            .iter()
            .any(|&(v, h)| v == viewer && f.mentions_agent(h))
    }

    /// Wraps each context fact in `K(receiver, ·)`, dropping facts the
    /// receiver must not see and those that would exceed the depth bound.
    fn absorb(&self, receiver: AgentId, context: &[Formula]) -> Vec<Formula> {
        let max = self.net.config().max_depth;
        context
            .iter()
            .filter(|f| f.depth() < max && !self.hidden_from(receiver, f))
            .map(|f| Formula::knows(receiver, f.clone()))
            .collect()
    }

    fn direct_message(&mut self, e: &mut Event, id: EventId) -> Result<()> {
        let (s, p) = (e.sender, e.payload.clone());
        let recipients: BTreeSet<AgentId> = e.visible.union(&e.hidden).copied().collect();
        if recipients.is_empty() {
            return Err(Error::MalformedEvent(
                "a direct message needs a recipient".into(),
            ));
        }
        let tid = e.thread.clone().unwrap_or_else(|| id.to_string());
        e.thread = Some(tid.clone());
        let mut participants = BTreeSet::from([s]);
        participants.extend(&recipients);
        if let Some(t) = self.threads.get(&tid) {
            if t.payload != p {
                return Err(Error::MalformedEvent(format!(
                    "thread `{tid}` is about {}, not {p}",
                    t.payload
                )));
            }
            participants.extend(t.participants());
        }

        // Everyone on the message sees the sender and the visible list, and
        // the sender sees everyone.
        self.concealed.retain(|&(v, h)| {
            let on = v == s || recipients.contains(&v);
            let seen = h == s || e.visible.contains(&h) || v == s && recipients.contains(&h);
            !(on && seen)
        });
        for &h in &e.hidden {
            for &v in &e.visible {
                self.concealed.insert((v, h));
            }
            for &h2 in &e.hidden {
                if h != h2 {
                    self.concealed.insert((h2, h));
                }
            }
        }

        // Thread context: the sender's facts about p among participants,
        // as they stood before this message.
        let context: Vec<Formula> = self
            .net
            .facts_of(s)
            .filter(|f| f.mentions_prop(&p) && f.agents().iter().all(|a| participants.contains(a)))
            .cloned()
            .collect();
        let (chains, context): (Vec<Formula>, Vec<Formula>) = context
            .into_iter()
            .partition(|f| f.as_knows_chain().is_some());
        let sender_knows = self.net.knows(s, &p);
        let ks = Formula::knows(s, Formula::atom(p.clone()));

        let mut facts = Vec::new();
        for &r in &recipients {
            let got = self.delivery(s, r, &p);
            facts.push(got.clone());
            facts.extend(self.absorb(r, &chains));
            facts.push(Formula::believes(s, got));
        }
        for &h in &e.hidden {
            if sender_knows {
                facts.push(Formula::knows(h, ks.clone()));
            }
            let hp = self.delivery(s, h, &p);
            for &v in &e.visible {
                let unseen = Formula::not(Formula::knows(v, hp.clone()));
                facts.push(Formula::knows(h, self.delivery(s, v, &p)));
                facts.push(Formula::knows(h, unseen.clone()));
                facts.push(Formula::knows(s, unseen.clone()));
                facts.push(Formula::knows(h, Formula::knows(s, unseen)));
            }
        }
        self.commit(facts, Vec::new())?;
        // Other context waits until the positive chains are in: whatever the
        // message made false (a bcc recipient now writing openly, say) has
        // been superseded by then and is not passed on.
        let context: Vec<Formula> = context
            .into_iter()
            .filter(|f| self.net.contains_fact(f))
            .collect();
        let mut absorbed = Vec::new();
        for &r in &recipients {
            absorbed.extend(self.absorb(r, &context));
        }
        self.commit(absorbed, Vec::new())?;

        self.note_sender(s, &p);
        for &r in &recipients {
            self.hop(r, &p, s, id);
        }
        self.threads
            .entry(tid.clone())
            .or_insert_with(|| Thread {
                id: tid,
                payload: p.clone(),
                messages: Vec::new(),
            })
            .messages
            .push(Message {
                event: id,
                sender: s,
                visible: e.visible.clone(),
                hidden: e.hidden.clone(),
            });

        if e.flags.acknowledged {
            let mut acks = Vec::new();
            for &r in &recipients {
                acks.extend(self.ack_facts(r, s, &p)?);
            }
            self.commit(acks, Vec::new())?;
        }
        Ok(())
    }

    fn ack_facts(&self, reader: AgentId, sender: AgentId, p: &PropId) -> Result<Vec<Formula>> {
        let atom = Formula::atom(p.clone());
        let got = if self.net.holds(&Formula::knows(reader, atom.clone())) {
            Formula::knows(reader, atom)
        } else if self.net.holds(&Formula::believes(reader, atom.clone())) {
            Formula::believes(reader, atom)
        } else {
            return Err(Error::NotDelivered {
                reader,
                prop: p.clone(),
            });
        };
        let seen = Formula::knows(sender, got);
        Ok(vec![seen.clone(), Formula::knows(reader, seen)])
    }

    fn ack_read(&mut self, e: &Event, _id: EventId) -> Result<()> {
        let reader = e.sender;
        let sender = Self::single_target(e)?;
        let p = &e.payload;
        let delivered = match &e.thread {
            Some(tid) => {
                let t = self
                    .threads
                    .get(tid)
                    .ok_or_else(|| Error::NoSuchThread(tid.clone()))?;
                &t.payload == p && t.delivered(sender, reader)
            }
            None => self
                .threads
                .values()
                .any(|t| &t.payload == p && t.delivered(sender, reader)),
        };
        if !delivered {
            return Err(Error::NotDelivered {
                reader,
                prop: p.clone(),
            });
        }
        let facts = self.ack_facts(reader, sender, p)?;
        self.reveal(&BTreeSet::from([reader, sender]));
        self.commit(facts, Vec::new())
    }

    fn broadcast(&mut self, e: &Event, id: EventId) -> Result<()> {
        let (s, p) = (e.sender, &e.payload);
        let audience: BTreeSet<AgentId> = if e.visible.is_empty() {
            self.net
                .agent_ids()
                .into_iter()
                .filter(|&a| a != s)
                .collect()
        } else {
            e.visible.clone()
        };
        let atom = Formula::atom(p.clone());
        let sender_view = if self.net.knows(s, p) {
            Some(Formula::knows(s, atom.clone()))
        } else if self.net.holds(&Formula::believes(s, atom.clone())) {
            Some(Formula::believes(s, atom))
        } else {
            None
        };
        let mut facts = Vec::new();
        for &x in &audience {
            facts.push(self.delivery(s, x, p));
            if let Some(v) = &sender_view {
                facts.push(Formula::knows(x, v.clone()));
            }
            self.reveal(&BTreeSet::from([x, s]));
        }
        self.commit(facts, Vec::new())?;
        self.note_sender(s, p);
        for &x in &audience {
            self.hop(x, p, s, id);
        }
        Ok(())
    }

    fn reaction(&mut self, e: &Event, _id: EventId) -> Result<()> {
        let u = e.sender;
        let author = Self::single_target(e)?;
        let p = &e.payload;
        if !self.net.knows(u, p) {
            return Err(Error::NotDelivered {
                reader: u,
                prop: p.clone(),
            });
        }
        self.reveal(&BTreeSet::from([u, author]));
        let seen = Formula::knows(author, Formula::knows(u, Formula::atom(p.clone())));
        self.commit(vec![seen.clone(), Formula::knows(u, seen)], Vec::new())
    }

    fn co_presence(&mut self, e: &Event, id: EventId) -> Result<()> {
        let mut attendees = e.visible.clone();
        attendees.insert(e.sender);
        self.reveal(&attendees);
        self.commit(
            Vec::new(),
            vec![CkRecord {
                group: attendees.clone(),
                prop: e.payload.clone(),
            }],
        )?;
        self.note_sender(e.sender, &e.payload);
        for &a in &e.visible {
            self.hop(a, &e.payload, e.sender, id);
        }
        Ok(())
    }

    fn channel_post(&mut self, e: &Event, id: EventId) -> Result<()> {
        let cid = e
            .channel
            .as_deref()
            .ok_or_else(|| Error::MalformedEvent("channel_post needs a channel".into()))?;
        let ch = self
            .channels
            .get(cid)
            .ok_or_else(|| Error::NoSuchChannel(cid.to_owned()))?
            .clone();
        if !ch.members.contains(&e.sender) {
            return Err(Error::NotAMember {
                agent: e.sender,
                role: "sender",
            });
        }
        if e.flags.covert && !ch.covert {
            return Err(Error::MalformedEvent(format!(
                "channel `{cid}` is not covert"
            )));
        }
        if !e.visible.is_empty() {
            return Err(Error::MalformedEvent(
                "channel posts reach the channel members only".into(),
            ));
        }
        self.reveal(&ch.members);
        self.commit(
            Vec::new(),
            vec![CkRecord {
                group: ch.members.clone(),
                prop: e.payload.clone(),
            }],
        )?;
        self.note_sender(e.sender, &e.payload);
        for &m in &ch.members {
            if m != e.sender {
                self.hop(m, &e.payload, e.sender, id);
            }
        }
        Ok(())
    }

    fn recording(&mut self, e: &Event, id: EventId) -> Result<()> {
        let mut attendees = e.visible.clone();
        attendees.insert(e.sender);
        let p = &e.payload;
        let seen = |v: AgentId, net: &Epinet| {
            if net.is_true(p) {
                Formula::knows(v, Formula::atom(p.clone()))
            } else {
                Formula::believes(v, Formula::atom(p.clone()))
            }
        };
        let mut facts: Vec<Formula> = e.hidden.iter().map(|&v| seen(v, &self.net)).collect();
        if e.flags.consent {
            let rec = self.net.ensure_prop(&format!("recording:{id}"), || {
                format!("meeting recording {id} exists")
            });
            self.net.set_world_truth(&rec, true)?;
            facts.extend(
                attendees
                    .iter()
                    .chain(&e.hidden)
                    .map(|&a| Formula::knows(a, Formula::atom(rec.clone()))),
            );
        }
        for &a in &attendees {
            for &v in &e.hidden {
                self.concealed.insert((a, v));
            }
        }
        self.commit(facts, Vec::new())?;
        for &v in &e.hidden {
            self.hop(v, p, e.sender, id);
        }
        Ok(())
    }

    fn profile_view(&mut self, e: &Event, _id: EventId) -> Result<()> {
        let v = e.sender;
        let owner = Self::single_target(e)?;
        let p = &e.payload;
        let atom = Formula::atom(p.clone());
        let mut facts = Vec::new();
        if self.net.is_true(p) {
            let vk = Formula::knows(v, atom);
            facts.push(vk.clone());
            let premium = premium_prop(owner);
            if self.net.has_prop(&premium) && self.net.is_true(&premium) {
                let ok = Formula::knows(owner, vk);
                facts.push(ok.clone());
                if self.net.knows(v, &premium) {
                    facts.push(Formula::knows(v, ok));
                }
            }
        } else {
            facts.push(Formula::believes(v, atom));
        }
        self.reveal(&BTreeSet::from([v, owner]));
        self.commit(facts, Vec::new())
    }

    fn petition_sign(&mut self, e: &Event, _id: EventId) -> Result<()> {
        let tid = e
            .thread
            .clone()
            .ok_or_else(|| Error::MalformedEvent("petition_sign needs a petition thread".into()))?;
        let signer = e.sender;
        let mut pet = match self.petitions.get(&tid) {
            Some(p) => p.clone(),
            None => {
                let initiator = match e.visible.len() {
                    0 => signer,
                    1 => Self::single_target(e)?,
                    _ => return Err(Error::MalformedEvent("a petition has one initiator".into())),
                };
                Petition {
                    id: tid.clone(),
                    initiator,
                    signers: Vec::new(),
                    supports: Vec::new(),
                }
            }
        };
        if pet.signers.contains(&signer) {
            return Err(Error::MalformedEvent(format!(
                "{signer} already signed `{tid}`"
            )));
        }
        self.net.set_world_truth(&e.payload, true)?;
        pet.signers.push(signer);
        if !pet.supports.contains(&e.payload) {
            pet.supports.push(e.payload.clone());
        }
        let mut group: BTreeSet<AgentId> = pet.signers.iter().copied().collect();
        group.insert(pet.initiator);
        self.reveal(&group);
        let mut facts = Vec::new();
        for s in &pet.supports {
            let atom = Formula::atom(s.clone());
            for &x in &group {
                facts.push(Formula::knows(x, atom.clone()));
                for &y in &group {
                    if x != y {
                        facts.push(Formula::knows(x, Formula::knows(y, atom.clone())));
                    }
                }
            }
        }
        self.commit(facts, Vec::new())?;
        self.petitions.insert(tid, pet);
        Ok(())
    }

    fn leak(&mut self, e: &Event) -> Result<EventId> {
        let outsider = Self::single_target(e)?;
        let sg = if let Some(s) = &e.scope {
            s.clone()
        } else if let Some(cid) = &e.channel {
            self.channels
                .get(cid)
                .ok_or_else(|| Error::NoSuchChannel(cid.clone()))?
                .members
                .clone()
        } else if let Some(tid) = &e.thread {
            self.threads
                .get(tid)
                .ok_or_else(|| Error::NoSuchThread(tid.clone()))?
                .participants()
        } else {
            return Err(Error::MalformedEvent(
                "a leak needs a scope, channel or thread".into(),
            ));
        };
        let (_, id) = self.net.breach(e.sender, outsider, &e.payload, &sg)?;
        Ok(id)
    }
}
