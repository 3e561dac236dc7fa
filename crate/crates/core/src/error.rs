use thiserror::Error;

use crate::{AgentId, Formula, PropId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn list(fs: &[Formula]) -> String {
    fs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn agents(xs: &[AgentId]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("agent name must not be empty")]
    EmptyName,
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown prop `{0}`")]
    UnknownProp(String),
    #[error("prop `{0}` is already registered")]
    DuplicateProp(PropId),
    #[error("formula depth {depth} exceeds the configured maximum {max}")]
    DepthExceeded { depth: u32, max: u32 },
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("formula syntax error at column {column}: expected {expected}")]
    FormulaSyntax { column: usize, expected: String },
    #[error("knowledge must be true; violating facts: {}", list(.0))]
    FactivityViolation(Vec<Formula>),
    #[error("no such fact `{0}`")]
    NoSuchFact(Formula),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid snapshot: {0}")]
    InvalidSnapshot(String),

    #[error("scope must not be empty")]
    EmptyScope,
    #[error("a group needs at least 2 members, got {0}")]
    GroupTooSmall(usize),
    #[error("bad scope: {0}")]
    BadScope(String),
    #[error("missing commitment props for {}", agents(.0))]
    IncompleteCommitments(Vec<AgentId>),

    #[error("agent {0} cannot trust itself")]
    SelfTrust(AgentId),
    #[error("not eligible for security derivation: {0}")]
    NotSecurityEligible(String),
    #[error("{agent} does not know {prop}")]
    OriginIgnorant { agent: AgentId, prop: PropId },
    #[error("{agent} holds no information about {prop}")]
    NoInformation { agent: AgentId, prop: PropId },
    #[error("the group is not a security neighborhood, so it cannot authenticate")]
    NotAuthenticatable,
    #[error("{role} {agent} is on the wrong side of the scope")]
    NotAMember { agent: AgentId, role: &'static str },

    #[error("no such channel `{0}`")]
    NoSuchChannel(String),
    #[error("no such thread `{0}`")]
    NoSuchThread(String),
    #[error("malformed event: {0}")]
    MalformedEvent(String),
    #[error("{reader} has not received {prop}")]
    NotDelivered { reader: AgentId, prop: PropId },
    #[error("no such preset `{0}`")]
    NoSuchPreset(String),
    #[error("preset `{preset}` has no action `{action}`")]
    NoSuchAction { preset: String, action: String },
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
}
