//! Nested epistemic statements.
//!
//! A [`Formula`] is an atomic proposition wrapped in knowledge, belief and
//! negation operators rooted at agents. `K(a1, K(a2, p))` reads "a1 knows
//! that a2 knows p". The text form accepted by [`parse`] is also what
//! [`Formula`]'s `Display` prints, so formulas round-trip through text.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{AgentId, Error, PropId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Formula {
    #[serde(rename = "atom")]
    Atom { prop: PropId },
    #[serde(rename = "K")]
    Knows { agent: AgentId, inner: Box<Formula> },
    #[serde(rename = "B")]
    Believes { agent: AgentId, inner: Box<Formula> },
    #[serde(rename = "not")]
    Not { inner: Box<Formula> },
    /// "were `prop` true, `agent` would know it". Quotes an atomic prop only.
    #[serde(rename = "WK")]
    WouldKnowIfTrue { agent: AgentId, prop: PropId },
}

impl Formula {
    pub fn atom(prop: impl Into<PropId>) -> Self {
        Formula::Atom { prop: prop.into() }
    }

    pub fn knows(agent: AgentId, inner: Formula) -> Self {
        Formula::Knows {
            agent,
            inner: Box::new(inner),
        }
    }

    pub fn believes(agent: AgentId, inner: Formula) -> Self {
        Formula::Believes {
            agent,
            inner: Box::new(inner),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not {
            inner: Box::new(inner),
        }
    }

    pub fn would_know(agent: AgentId, prop: impl Into<PropId>) -> Self {
        Formula::WouldKnowIfTrue {
            agent,
            prop: prop.into(),
        }
    }

    /// `K(agents[0], K(agents[1], ... K(agents[n-1], p)))`.
    pub fn knows_chain(agents: &[AgentId], prop: &PropId) -> Self {
        agents
            .iter()
            .rev()
            .fold(Formula::atom(prop.clone()), |inner, &a| {
                Formula::knows(a, inner)
            })
    }

    /// Number of epistemic operators on the nesting path. `WouldKnowIfTrue`
    /// counts as one since it quotes a knowledge state.
    pub fn depth(&self) -> u32 {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Knows { inner, .. } | Formula::Believes { inner, .. } => 1 + inner.depth(),
            Formula::Not { inner } => inner.depth(),
            Formula::WouldKnowIfTrue { .. } => 1,
        }
    }

    /// The agent whose operator is outermost, if any (negation is looked through).
    pub fn root_agent(&self) -> Option<AgentId> {
        match self {
            Formula::Knows { agent, .. }
            | Formula::Believes { agent, .. }
            | Formula::WouldKnowIfTrue { agent, .. } => Some(*agent),
            Formula::Not { inner } => inner.root_agent(),
            Formula::Atom { .. } => None,
        }
    }

    pub fn mentions_prop(&self, p: &PropId) -> bool {
        match self {
            Formula::Atom { prop } | Formula::WouldKnowIfTrue { prop, .. } => prop == p,
            Formula::Knows { inner, .. }
            | Formula::Believes { inner, .. }
            | Formula::Not { inner } => inner.mentions_prop(p),
        }
    }

    pub fn mentions_agent(&self, a: AgentId) -> bool {
        match self {
            Formula::Atom { .. } => false,
            Formula::WouldKnowIfTrue { agent, .. } => *agent == a,
            Formula::Knows { agent, inner } | Formula::Believes { agent, inner } => {
                *agent == a || inner.mentions_agent(a)
            }
            Formula::Not { inner } => inner.mentions_agent(a),
        }
    }

    pub fn agents(&self) -> Vec<AgentId> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Formula::Atom { .. } => break,
                Formula::WouldKnowIfTrue { agent, .. } => {
                    out.push(*agent);
                    break;
                }
                Formula::Knows { agent, inner } | Formula::Believes { agent, inner } => {
                    out.push(*agent);
                    cur = inner;
                }
                Formula::Not { inner } => cur = inner,
            }
        }
        out
    }

    pub fn props(&self) -> Vec<&PropId> {
        match self {
            Formula::Atom { prop } | Formula::WouldKnowIfTrue { prop, .. } => vec![prop],
            Formula::Knows { inner, .. }
            | Formula::Believes { inner, .. }
            | Formula::Not { inner } => inner.props(),
        }
    }

    /// If this is a pure `K(x1, K(x2, ... Atom(p)))` chain of depth >= 1,
    /// returns the agents outermost-first and the prop.
    pub fn as_knows_chain(&self) -> Option<(Vec<AgentId>, &PropId)> {
        let mut agents = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Formula::Knows { agent, inner } => {
                    agents.push(*agent);
                    cur = inner;
                }
                Formula::Atom { prop } if !agents.is_empty() => return Some((agents, prop)),
                _ => return None,
            }
        }
    }

    /// Structural check for the negation-normal restriction: `Not` wraps
    /// only `Knows`, `Believes` or `Atom`.
    pub fn check_shape(&self) -> Result<(), Error> {
        match self {
            Formula::Atom { .. } | Formula::WouldKnowIfTrue { .. } => Ok(()),
            Formula::Knows { inner, .. } | Formula::Believes { inner, .. } => inner.check_shape(),
            Formula::Not { inner } => match inner.as_ref() {
                Formula::Knows { .. } | Formula::Believes { .. } | Formula::Atom { .. } => {
                    inner.check_shape()
                }
                other => Err(Error::MalformedFormula(format!(
                    "negation may only wrap K, B or an atom, found `{other}`"
                ))),
            },
        }
    }

    /// Renders with caller-supplied agent names (ids are used by `Display`).
    pub fn display_with<'a, F>(&'a self, name: F) -> impl fmt::Display + 'a
    where
        F: Fn(AgentId) -> String + 'a,
    {
        Named {
            formula: self,
            name,
        }
    }
}

struct Named<'a, F> {
    formula: &'a Formula,
    name: F,
}

impl<F: Fn(AgentId) -> String> fmt::Display for Named<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.formula, &self.name)
    }
}

fn write_formula(
    f: &mut fmt::Formatter<'_>,
    formula: &Formula,
    name: &dyn Fn(AgentId) -> String,
) -> fmt::Result {
    match formula {
        Formula::Atom { prop } => write!(f, "{prop}"),
        Formula::Knows { agent, inner } => {
            write!(f, "K({}, ", name(*agent))?;
            write_formula(f, inner, name)?;
            f.write_str(")")
        }
        Formula::Believes { agent, inner } => {
            write!(f, "B({}, ", name(*agent))?;
            write_formula(f, inner, name)?;
            f.write_str(")")
        }
        Formula::Not { inner } => {
            f.write_str("~")?;
            write_formula(f, inner, name)
        }
        Formula::WouldKnowIfTrue { agent, prop } => write!(f, "W({}, {prop})", name(*agent)),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, &|a: AgentId| a.to_string())
    }
}

/// Characters allowed in agent and prop names in formula text.
pub fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '>' | '+' | '@' | '/')
}

/// Parses formula text. Agent names are mapped through `agent`; prop names
/// are taken verbatim (`prop` may reject unknown ones).
///
/// Grammar:
///
/// ```text
/// formula := '~' formula | '!' formula | '(' formula ')'
///          | 'K' '(' agent ',' formula ')' | 'B' '(' agent ',' formula ')'
///          | 'W' '(' agent ',' prop ')' | prop
/// ```
pub fn parse<A, P>(text: &str, agent: A, prop: P) -> Result<Formula, Error>
where
    A: Fn(&str) -> Option<AgentId>,
    P: Fn(&str) -> Option<PropId>,
{
    let mut parser = Parser {
        src: text,
        pos: 0,
        agent: &agent,
        prop: &prop,
    };
    let f = parser.formula()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("end of formula"));
    }
    Ok(f)
}

struct Parser<'s, 'r> {
    src: &'s str,
    pos: usize,
    agent: &'r dyn Fn(&str) -> Option<AgentId>,
    prop: &'r dyn Fn(&str) -> Option<PropId>,
}

impl Parser<'_, '_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn error(&self, expected: &str) -> Error {
        Error::FormulaSyntax {
            column: self.src[..self.pos].chars().count() + 1,
            expected: expected.to_owned(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn name(&mut self) -> Result<&str, Error> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("a name"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn agent_ref(&mut self) -> Result<AgentId, Error> {
        let start = self.pos;
        let name = self.name()?.to_owned();
        (self.agent)(&name).ok_or_else(|| {
            self.pos = start;
            Error::UnknownAgent(name)
        })
    }

    fn prop_ref(&mut self, name: &str) -> Result<PropId, Error> {
        (self.prop)(name).ok_or_else(|| Error::UnknownProp(name.to_owned()))
    }

    fn formula(&mut self) -> Result<Formula, Error> {
        self.skip_ws();
        match self.peek() {
            Some('~') | Some('!') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some('(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(')')?;
                Ok(f)
            }
            Some(_) => {
                let name = self.name()?.to_owned();
                let save = self.pos;
                self.skip_ws();
                let op = if self.peek() == Some('(') {
                    name.as_str()
                } else {
                    self.pos = save;
                    ""
                };
                match op {
                    "K" | "B" => {
                        self.expect('(')?;
                        let agent = self.agent_ref()?;
                        self.expect(',')?;
                        let inner = self.formula()?;
                        self.expect(')')?;
                        Ok(if op == "K" {
                            Formula::knows(agent, inner)
                        } else {
                            Formula::believes(agent, inner)
                        })
                    }
                    "W" => {
                        self.expect('(')?;
                        let agent = self.agent_ref()?;
                        self.expect(',')?;
                        let pname = self.name()?.to_owned();
                        let prop = self.prop_ref(&pname)?;
                        self.expect(')')?;
                        Ok(Formula::would_know(agent, prop))
                    }
                    "" => Ok(Formula::Atom {
                        prop: self.prop_ref(&name)?,
                    }),
                    _ => Err(self.error("one of `K(`, `B(`, `W(`")),
                }
            }
            None => Err(self.error("a formula")),
        }
    }
}
