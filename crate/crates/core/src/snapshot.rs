//! Canonical JSON snapshots.
//!
//! Objects are written with sorted keys and collections in id order, so
//! identical nets produce identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::net::{Agent, Prop};
use crate::trust::{TrustEdge, TrustStore};
use crate::{AgentId, CkRecord, Config, Epinet, Error, Formula, Hop, PropId, Provenance, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    agents: Vec<Agent>,
    props: Vec<Prop>,
    world: Vec<PropId>,
    facts: Vec<Formula>,
    group_ck: Vec<CkRecord>,
    provenance: Vec<ProvenanceEntry>,
    trust: Vec<TrustEdge>,
    config: Config,
    counters: Counters,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceEntry {
    agent: AgentId,
    prop: PropId,
    hops: Vec<Hop>,
    stale: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Counters {
    next_agent: u32,
    next_event: u64,
}

impl Epinet {
    pub fn snapshot(&self) -> Vec<u8> {
        let doc = Doc {
            agents: self.agents.values().cloned().collect(),
            props: self.props.values().cloned().collect(),
            world: self.world.iter().cloned().collect(),
            facts: self.facts.iter().cloned().collect(),
            group_ck: self.group_ck.iter().cloned().collect(),
            provenance: self
                .provenance
                .iter()
                .map(|((agent, prop), p)| ProvenanceEntry {
                    agent: *agent,
                    prop: prop.clone(),
                    hops: p.hops.clone(),
                    stale: p.stale,
                })
                .collect(),
            trust: self.trust.edges().collect(),
            config: self.config,
            counters: Counters {
                next_agent: self.next_agent,
                next_event: self.next_event,
            },
        };
        // Going through `Value` sorts object keys.
        let value = serde_json::to_value(&doc).expect("snapshot serializes");
        let mut out = serde_json::to_vec_pretty(&value).expect("snapshot serializes");
        out.push(b'\n');
        out
    }

    pub fn load(bytes: &[u8]) -> Result<Epinet> {
        let doc: Doc = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut net = Epinet::with_config(doc.config);
        let mut problems = Vec::new();
        for a in doc.agents {
            if a.id.index() == 0 || a.id.index() >= doc.counters.next_agent {
                problems.push(format!("agent id {} is outside the allocated range", a.id));
            }
            if net.agents.insert(a.id, a.clone()).is_some() {
                problems.push(format!("duplicate agent {}", a.id));
            }
        }
        for p in doc.props {
            if net.props.insert(p.id.clone(), p.clone()).is_some() {
                problems.push(format!("duplicate prop {}", p.id));
            }
        }
        net.world = doc.world.into_iter().collect();
        net.facts = doc.facts.into_iter().collect();
        net.group_ck = doc.group_ck.into_iter().collect();
        let mut prov = BTreeMap::new();
        for e in doc.provenance {
            let key = (e.agent, e.prop);
            if prov
                .insert(
                    key.clone(),
                    Provenance {
                        hops: e.hops,
                        stale: e.stale,
                    },
                )
                .is_some()
            {
                problems.push(format!("duplicate provenance entry ({}, {})", key.0, key.1));
            }
        }
        net.provenance = prov;
        let keys: BTreeSet<_> = doc.trust.iter().map(|e| (e.from, e.to, e.kind)).collect();
        if keys.len() != doc.trust.len() {
            problems.push("duplicate trust edge".into());
        }
        net.trust = TrustStore::from_edges(doc.trust);
        net.next_agent = doc.counters.next_agent;
        net.next_event = doc.counters.next_event;
        if net.next_agent == 0 || net.next_event == 0 {
            problems.push("counters start at 1".into());
        }
        net.rebuild_index();
        problems.extend(net.invariant_violations());
        if problems.is_empty() {
            Ok(net)
        } else {
            Err(Error::InvalidSnapshot(problems.join("; ")))
        }
    }
}
