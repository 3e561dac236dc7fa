//! Identifier newtypes shared by every layer of the engine.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Opaque agent identifier, rendered as `a<n>`.
///
/// Ids are allocated sequentially by [`Epinet::add_agent`](crate::Epinet::add_agent)
/// and ordered by allocation index, which is the order used for every
/// deterministic tie-break in the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(u32);

impl AgentId {
    pub const fn new(index: u32) -> Self {
        AgentId(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl FromStr for AgentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('a')
            .filter(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
            .filter(|n| n.len() == 1 || !n.starts_with('0'))
            .and_then(|n| n.parse::<u32>().ok())
            .map(AgentId)
            .ok_or_else(|| format!("not an agent id: {s:?}"))
    }
}

impl Serialize for AgentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AgentId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Proposition identifier. Props are atomic; the id is the key callers use
/// to refer to them (scenario names, canonical trust-status names, ...).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PropId(String);

impl PropId {
    pub fn new(id: impl Into<String>) -> Self {
        PropId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PropId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PropId {
    fn from(s: &str) -> Self {
        PropId(s.to_owned())
    }
}

/// Identifier of an applied event, rendered as `e<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(u64);

impl EventId {
    pub const fn new(n: u64) -> Self {
        EventId(n)
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl Serialize for EventId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EventId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.strip_prefix('e')
            .and_then(|n| n.parse::<u64>().ok())
            .map(EventId)
            .ok_or_else(|| serde::de::Error::custom(format!("not an event id: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agent_id_text_round_trip() {
        let id = AgentId::new(17);
        assert_eq!(id.to_string(), "a17");
        assert_eq!("a17".parse::<AgentId>().unwrap(), id);
        assert!("b1".parse::<AgentId>().is_err());
        assert!("a".parse::<AgentId>().is_err());
        assert!("a+1".parse::<AgentId>().is_err());
    }

    #[test]
    fn agent_ids_order_numerically() {
        assert!(AgentId::new(2) < AgentId::new(10));
    }
}
