//! Scenario execution and reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::path::{Path, PathBuf};

use epinet::platform::Platform;
use epinet::{AgentId, ConduitKind, Epinet, Error};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ast::{Apply, Query, Scenario, Stmt};
use crate::error::RunError;
use crate::print::{query_text, Names};

#[derive(Clone, Debug, Serialize)]
pub struct AgentEntry {
    pub id: AgentId,
    pub name: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryResult {
    pub line: usize,
    pub query: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<usize>,
    pub result: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub agents: Vec<AgentEntry>,
    /// Event statements run (`event`, `event reply`, `event_log`, `action`).
    pub events: usize,
    pub results: Vec<QueryResult>,
    /// SHA-256 of the final snapshot.
    pub digest: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One row per query, agents shown by name.
    pub fn to_table(&self) -> String {
        let names: BTreeMap<String, &str> = self
            .agents
            .iter()
            .map(|a| (a.id.to_string(), a.name.as_str()))
            .collect();
        let rows: Vec<(String, String, String)> = self
            .results
            .iter()
            .map(|r| {
                let q = match r.at {
                    Some(k) => format!("@{k} {}", r.query),
                    None => r.query.clone(),
                };
                (r.line.to_string(), q, render(&r.result, &names))
            })
            .collect();
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(4);
        let w1 = rows
            .iter()
            .map(|r| r.1.chars().count())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = format!("{:<w0$}  {:<w1$}  result\n", "line", "query");
        for (l, q, v) in rows {
            let mut lines = v.lines();
            writeln!(out, "{l:<w0$}  {q:<w1$}  {}", lines.next().unwrap_or("")).unwrap();
            for more in lines {
                writeln!(out, "{:<w0$}  {:<w1$}  {more}", "", "").unwrap();
            }
        }
        writeln!(
            out,
            "\n{} agents, {} events, {}",
            self.agents.len(),
            self.events,
            self.digest
        )
        .unwrap();
        out
    }
}

/// Compact text for a result, with agent ids replaced by names.
fn render(v: &Value, names: &BTreeMap<String, &str>) -> String {
    match v {
        Value::String(s) => names.get(s).map_or_else(|| s.clone(), |n| (*n).to_owned()),
        Value::Array(xs) => format!(
            "[{}]",
            xs.iter()
                .map(|x| render(x, names))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Value::Object(m) => format!(
            "{{{}}}",
            m.iter()
                .map(|(k, x)| format!("{k}: {}", render(x, names)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

pub struct Run {
    pub platform: Platform,
    pub report: Report,
}

pub fn digest(snapshot: &[u8]) -> String {
    let hash = Sha256::digest(snapshot);
    let mut s = String::from("sha256:");
    for b in hash {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

fn read(base: &Path, path: &str, line: usize) -> Result<String, RunError> {
    let full: PathBuf = base.join(path);
    std::fs::read_to_string(&full).map_err(|source| RunError::Io {
        line,
        path: full,
        source,
    })
}

/// Runs every statement in order; paths are resolved against `base_dir`.
pub fn run(scenario: &Scenario, base_dir: &Path) -> Result<Run, RunError> {
    let mut pl = Platform::new(Epinet::new());
    let mut names = Names::default();
    let mut agents = Vec::new();
    let mut events = 0;
    // States seen just before each event statement, for `query@k`.
    let mut states: Vec<Epinet> = Vec::new();
    let mut pending: Vec<(usize, usize, usize, &Query)> = Vec::new();
    let mut results: Vec<Option<QueryResult>> = Vec::new();

    for s in &scenario.statements {
        let line = s.line;
        let engine = |source: Error| RunError::Engine { line, source };
        if s.stmt.is_event() {
            states.push(pl.net().clone());
            events += 1;
        }
        match &s.stmt {
            Stmt::Agent { name } => {
                let id = pl.net_mut().add_agent(name).map_err(engine)?;
                names.insert(id, name.clone());
                agents.push(AgentEntry {
                    id,
                    name: name.clone(),
                });
            }
            Stmt::Prop { name, statement } => {
                pl.net_mut()
                    .add_prop(name.as_str(), statement)
                    .map_err(engine)?;
            }
            Stmt::Truth { prop, value } => {
                pl.net_mut().set_world_truth(prop, *value).map_err(engine)?
            }
            Stmt::Fact(f) => pl.net_mut().assert_fact(f.clone()).map_err(engine)?,
            Stmt::Retract(f) => pl.net_mut().retract_fact(f).map_err(engine)?,
            Stmt::Trust { from, to, kind } => {
                pl.net_mut().set_trust(*from, *to, *kind).map_err(engine)?
            }
            Stmt::TrustCsv { path } => {
                let text = read(base_dir, path, line)?;
                pl.net_mut().import_trust_csv(&text).map_err(engine)?;
            }
            Stmt::Channel {
                id,
                members,
                host,
                covert,
            } => pl
                .add_channel(id, members.clone(), host.clone(), *covert)
                .map_err(engine)?,
            Stmt::Preset(p) => pl.add_preset(p.clone()).map_err(engine)?,
            Stmt::Event(e) => {
                pl.apply_event(e.clone()).map_err(engine)?;
            }
            Stmt::Reply {
                thread,
                from,
                to,
                payload,
            } => {
                pl.reply_in_thread(thread, *from, *to, payload)
                    .map_err(engine)?;
            }
            Stmt::EventLog { path } => {
                let text = read(base_dir, path, line)?;
                let log = pl.parse_event_log(&text).map_err(engine)?;
                for e in log {
                    pl.apply_event(e).map_err(engine)?;
                }
            }
            Stmt::Action {
                preset,
                action,
                args,
            } => {
                pl.run_preset_action(preset, action, args).map_err(engine)?;
            }
            Stmt::Apply(a) => apply(pl.net_mut(), a).map_err(engine)?,
            Stmt::Query { at: None, query } => {
                let result = eval_query(pl.net(), query).map_err(engine)?;
                results.push(Some(QueryResult {
                    line,
                    query: query_text(query, &names),
                    at: None,
                    result,
                }));
            }
            Stmt::Query { at: Some(k), query } => {
                pending.push((results.len(), line, *k, query));
                results.push(None);
            }
        }
    }
    states.push(pl.net().clone());

    for (slot, line, k, query) in pending {
        let Some(net) = states.get(k) else {
            return Err(RunError::NoSuchStep {
                line,
                at: k,
                events,
            });
        };
        let result = eval_query(net, query).map_err(|source| RunError::Engine { line, source })?;
        results[slot] = Some(QueryResult {
            line,
            query: query_text(query, &names),
            at: Some(k),
            result,
        });
    }

    let report = Report {
        agents,
        events,
        results: results
            .into_iter()
            .map(|r| r.expect("every query slot filled"))
            .collect(),
        digest: digest(&pl.net().snapshot()),
    };
    Ok(Run {
        platform: pl,
        report,
    })
}

fn apply(net: &mut Epinet, a: &Apply) -> epinet::Result<()> {
    match a {
        Apply::Closure => {
            net.trust_closure()?;
        }
        Apply::Propagate {
            origin,
            prop,
            audience,
        } => {
            let audience = audience.clone().unwrap_or_else(|| net.agent_ids());
            net.propagate_assertion(*origin, prop, &audience)?;
        }
        Apply::DeriveSecurityCk { members } => {
            net.derive_security_ck(members)?;
        }
        Apply::EstablishConduit {
            from,
            to,
            directionality,
        } => {
            let conduit = net
                .find_conduit(*from, *to, ConduitKind::Trust, *directionality)?
                .ok_or_else(|| {
                    Error::NotSecurityEligible(format!("no fully trusted path from {from} to {to}"))
                })?;
            net.establish_conduit_ck(&conduit)?;
        }
    }
    Ok(())
}

fn to_value<T: Serialize>(x: T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// Answers one query against `net`.
pub fn eval_query(net: &Epinet, q: &Query) -> epinet::Result<Value> {
    Ok(match q {
        Query::Holds(f) => {
            net.validate_formula(f)?;
            Value::Bool(net.holds(f))
        }
        Query::State { agent, prop } => {
            if !net.has_agent(*agent) {
                return Err(Error::UnknownAgent(agent.to_string()));
            }
            if !net.has_prop(prop) {
                return Err(Error::UnknownProp(prop.to_string()));
            }
            to_value(net.epistemic_state(*agent, prop))
        }
        Query::Distribution { prop, scope } => {
            let scope = scope.clone().unwrap_or_else(|| net.agent_ids());
            let (count, fraction) = net.distribution(prop, &scope)?;
            json!({ "count": count, "fraction": fraction })
        }
        Query::Level { prop, group } => to_value(net.commonality_level(group, prop)?.level),
        Query::Covert { prop, sg, g } => Value::Bool(net.covert(prop, sg, g)?),
        Query::Neighborhoods { prop, kind } => to_value(net.find_neighborhoods(prop, *kind)?),
        Query::Mobilization { commitments } => {
            let group: BTreeSet<AgentId> = commitments.keys().copied().collect();
            Value::Bool(net.mobilization_possible(&group, commitments)?)
        }
        Query::TrustNeighborhoods => to_value(net.trust_neighborhoods()),
        Query::SecurityNeighborhoods => Value::Array(
            net.security_neighborhoods()
                .into_iter()
                .map(|(members, status)| json!({ "members": members, "status": status }))
                .collect(),
        ),
        Query::Conduit {
            from,
            to,
            kind,
            directionality,
        } => to_value(net.find_conduit(*from, *to, *kind, *directionality)?),
        Query::Classify { agent, prop } => to_value(net.classify_information(*agent, prop)?),
        Query::Authenticate { claimant, group } => to_value(net.authenticate(group, *claimant)?),
        Query::Graph(mode) => Value::String(net.export_graph(mode)?),
    })
}
