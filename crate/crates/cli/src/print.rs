//! Canonical scenario text. Parsing the output gives back the same tree.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Display, Formatter, Write};

use epinet::platform::Event;
use epinet::{AgentId, Directionality, Formula};

use crate::ast::{Apply, Query, Scenario, Stmt};

/// Agent names by id, filled in as `agent` lines go by.
#[derive(Clone, Debug, Default)]
pub struct Names(HashMap<AgentId, String>);

impl Names {
    pub fn new(pairs: impl IntoIterator<Item = (AgentId, String)>) -> Self {
        Names(pairs.into_iter().collect())
    }

    pub fn insert(&mut self, id: AgentId, name: String) {
        self.0.insert(id, name);
    }

    pub fn get(&self, id: AgentId) -> String {
        self.0.get(&id).cloned().unwrap_or_else(|| id.to_string())
    }

    fn set(&self, ids: &BTreeSet<AgentId>) -> String {
        ids.iter()
            .map(|&a| self.get(a))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn formula<'a>(&'a self, f: &'a Formula) -> impl Display + 'a {
        f.display_with(move |a| self.get(a))
    }
}

/// `s` as a scenario string literal.
pub fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A bare token when it survives re-reading as one, a literal otherwise.
fn token(s: &str) -> String {
    if s.is_empty() || s.starts_with('"') || s.contains(|c: char| c.is_whitespace() || c == ',') {
        quote(s)
    } else {
        s.to_owned()
    }
}

impl Display for Scenario {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut names = Names::default();
        let mut next = 1;
        for s in &self.statements {
            if let Stmt::Agent { name } = &s.stmt {
                names.insert(AgentId::new(next), name.clone());
                next += 1;
            }
            writeln!(f, "{}", stmt_text(&s.stmt, &names))?;
        }
        Ok(())
    }
}

pub fn stmt_text(stmt: &Stmt, n: &Names) -> String {
    match stmt {
        Stmt::Agent { name } => format!("agent {name}"),
        Stmt::Prop { name, statement } if statement.is_empty() => format!("prop {name}"),
        Stmt::Prop { name, statement } => format!("prop {name} {}", quote(statement)),
        Stmt::Truth { prop, value } => format!("truth {prop} {value}"),
        Stmt::Fact(x) => format!("fact {}", n.formula(x)),
        Stmt::Retract(x) => format!("retract {}", n.formula(x)),
        Stmt::Trust { from, to, kind } => format!("trust {} {} {kind}", n.get(*from), n.get(*to)),
        Stmt::TrustCsv { path } => format!("trust_csv {}", quote(path)),
        Stmt::Channel {
            id,
            members,
            host,
            covert,
        } => {
            let mut s = format!("channel {} members={}", token(id), n.set(members));
            if !host.is_empty() {
                write!(s, " host={}", n.set(host)).unwrap();
            }
            if *covert {
                s.push_str(" covert=true");
            }
            s
        }
        Stmt::Preset(p) => format!(
            "preset {}",
            serde_json::to_string(p).expect("presets serialize")
        ),
        Stmt::Event(e) => event_text(e, n),
        Stmt::Reply {
            thread,
            from,
            to,
            payload,
        } => format!(
            "event reply thread={} sender={} visible={} payload={payload}",
            token(thread),
            n.get(*from),
            n.get(*to)
        ),
        Stmt::EventLog { path } => format!("event_log {}", quote(path)),
        Stmt::Action {
            preset,
            action,
            args,
        } => {
            let mut s = format!("action {preset} {action}");
            for (k, vs) in args {
                let v = match vs.as_slice() {
                    [one] => token(one),
                    many => many.join(","),
                };
                write!(s, " {k}={v}").unwrap();
            }
            s
        }
        Stmt::Apply(a) => apply_text(a, n),
        Stmt::Query { at: None, query } => format!("query {}", query_text(query, n)),
        Stmt::Query { at: Some(k), query } => format!("query@{k} {}", query_text(query, n)),
    }
}

fn event_text(e: &Event, n: &Names) -> String {
    let mut s = format!(
        "event {} sender={} payload={}",
        e.kind,
        n.get(e.sender),
        e.payload
    );
    if !e.visible.is_empty() {
        write!(s, " visible={}", n.set(&e.visible)).unwrap();
    }
    if !e.hidden.is_empty() {
        write!(s, " hidden={}", n.set(&e.hidden)).unwrap();
    }
    if let Some(t) = &e.thread {
        write!(s, " thread={}", token(t)).unwrap();
    }
    if let Some(c) = &e.channel {
        write!(s, " channel={}", token(c)).unwrap();
    }
    if let Some(sc) = &e.scope {
        write!(s, " scope={}", n.set(sc)).unwrap();
    }
    let flags: Vec<&str> = [
        (e.flags.covert, "covert"),
        (e.flags.acknowledged, "acknowledged"),
        (e.flags.consent, "consent"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    if !flags.is_empty() {
        write!(s, " flags={}", flags.join(",")).unwrap();
    }
    s
}

fn apply_text(a: &Apply, n: &Names) -> String {
    match a {
        Apply::Closure => "apply closure".into(),
        Apply::Propagate {
            origin,
            prop,
            audience,
        } => {
            let mut s = format!("apply propagate {} {prop}", n.get(*origin));
            if let Some(aud) = audience {
                write!(s, " audience={}", n.set(aud)).unwrap();
            }
            s
        }
        Apply::DeriveSecurityCk { members } => {
            format!("apply derive_security_ck members={}", n.set(members))
        }
        Apply::EstablishConduit {
            from,
            to,
            directionality,
        } => {
            let mut s = format!("apply establish_conduit {} {}", n.get(*from), n.get(*to));
            if *directionality != Directionality::OneWay {
                write!(s, " dir={}", directionality.as_str()).unwrap();
            }
            s
        }
    }
}

/// The query as written after `query`.
pub fn query_text(q: &Query, n: &Names) -> String {
    match q {
        Query::Holds(x) => format!("holds {}", n.formula(x)),
        Query::State { agent, prop } => format!("state {} {prop}", n.get(*agent)),
        Query::Distribution { prop, scope: None } => format!("distribution {prop}"),
        Query::Distribution {
            prop,
            scope: Some(s),
        } => format!("distribution {prop} scope={}", n.set(s)),
        Query::Level { prop, group } => format!("level {prop} group={}", n.set(group)),
        Query::Covert { prop, sg, g } => format!("covert {prop} sg={} g={}", n.set(sg), n.set(g)),
        Query::Neighborhoods { prop, kind } => format!("neighborhoods {prop} {kind}"),
        Query::Mobilization { commitments } => {
            let pairs: Vec<String> = commitments
                .iter()
                .map(|(a, p)| format!("{}={p}", n.get(*a)))
                .collect();
            format!("mobilization {}", pairs.join(" "))
        }
        Query::TrustNeighborhoods => "trust_neighborhoods".into(),
        Query::SecurityNeighborhoods => "security_neighborhoods".into(),
        Query::Conduit {
            from,
            to,
            kind,
            directionality,
        } => format!(
            "conduit {} {} kind={} dir={}",
            n.get(*from),
            n.get(*to),
            kind.as_str(),
            directionality.as_str()
        ),
        Query::Classify { agent, prop } => format!("classify {} {prop}", n.get(*agent)),
        Query::Authenticate { claimant, group } => {
            format!("authenticate {} group={}", n.get(*claimant), n.set(group))
        }
        Query::Graph(mode) => format!("graph {mode}"),
    }
}
