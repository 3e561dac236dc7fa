//! Scenario syntax trees.
//!
//! Agents are stored by the id the runner will allocate for them (the n-th
//! `agent` line becomes `a<n>`), so formulas and events can be built at
//! parse time and compared structurally.

use std::collections::{BTreeMap, BTreeSet};

use epinet::platform::{Event, Preset};
use epinet::{
    AgentId, ConduitKind, Directionality, DotMode, Formula, NeighborhoodKind, PropId, TrustKind,
};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scenario {
    pub statements: Vec<Statement>,
}

/// A statement and the line it came from. Equality ignores the line.
#[derive(Clone, Debug)]
pub struct Statement {
    pub line: usize,
    pub stmt: Stmt,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.stmt == other.stmt
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Agent {
        name: String,
    },
    Prop {
        name: String,
        statement: String,
    },
    Truth {
        prop: PropId,
        value: bool,
    },
    Fact(Formula),
    Retract(Formula),
    Trust {
        from: AgentId,
        to: AgentId,
        kind: TrustKind,
    },
    /// `from,to,kind` lines, read relative to the scenario file.
    TrustCsv {
        path: String,
    },
    Channel {
        id: String,
        members: BTreeSet<AgentId>,
        host: BTreeSet<AgentId>,
        covert: bool,
    },
    Preset(Preset),
    Event(Event),
    Reply {
        thread: String,
        from: AgentId,
        to: AgentId,
        payload: PropId,
    },
    /// One JSON event per line, read relative to the scenario file.
    EventLog {
        path: String,
    },
    Action {
        preset: String,
        action: String,
        args: BTreeMap<String, Vec<String>>,
    },
    Apply(Apply),
    Query {
        at: Option<usize>,
        query: Query,
    },
}

impl Stmt {
    /// Statements that advance the event counter used by `query@k`.
    pub fn is_event(&self) -> bool {
        matches!(
            self,
            Stmt::Event(_) | Stmt::Reply { .. } | Stmt::EventLog { .. } | Stmt::Action { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Apply {
    Closure,
    Propagate {
        origin: AgentId,
        prop: PropId,
        audience: Option<BTreeSet<AgentId>>,
    },
    DeriveSecurityCk {
        members: BTreeSet<AgentId>,
    },
    EstablishConduit {
        from: AgentId,
        to: AgentId,
        directionality: Directionality,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Holds(Formula),
    State {
        agent: AgentId,
        prop: PropId,
    },
    Distribution {
        prop: PropId,
        scope: Option<BTreeSet<AgentId>>,
    },
    Level {
        prop: PropId,
        group: BTreeSet<AgentId>,
    },
    Covert {
        prop: PropId,
        sg: BTreeSet<AgentId>,
        g: BTreeSet<AgentId>,
    },
    Neighborhoods {
        prop: PropId,
        kind: NeighborhoodKind,
    },
    Mobilization {
        commitments: BTreeMap<AgentId, PropId>,
    },
    TrustNeighborhoods,
    SecurityNeighborhoods,
    Conduit {
        from: AgentId,
        to: AgentId,
        kind: ConduitKind,
        directionality: Directionality,
    },
    Classify {
        agent: AgentId,
        prop: PropId,
    },
    Authenticate {
        claimant: AgentId,
        group: BTreeSet<AgentId>,
    },
    Graph(DotMode),
}
