//! Presets: named platforms as data.
//!
//! A preset maps user actions to lists of steps. Step templates are JSON
//! objects whose strings may hold placeholders: `"$x"` takes the argument
//! `x` (a string for one value, an array for several), `"$x?"` is dropped
//! when `x` is not given, and `$x` inside a longer string is replaced by the
//! argument's single value. Agent fields accept names or ids.
//!
//! Steps:
//!
//! | key        | fields                                  |
//! |------------|-----------------------------------------|
//! | `event`    | an [`Event`](super::Event) template      |
//! | `reply`    | `thread`, `from`, `to`, `payload`       |
//! | `trust`    | `from`, `to`, `kind`                    |
//! | `ck`       | `group`, `prop`                         |
//! | `ck_join`  | `prop`, `agent`                         |
//! | `prop`     | `id`, `statement`                       |
//! | `truth`    | `prop`, `value`                         |
//! | `premium`  | `agent`, optional `value`               |
//! | `for_each` | list, `as`, `do` (nested steps)         |

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{EventKind, EventOutcome, Platform};
use crate::trust::TrustKind;
use crate::{AgentId, Epinet, Error, PropId, Result};

const BUILTIN: &str = include_str!("presets.json");

const AGENT_KEYS: [&str; 7] = [
    "sender", "visible", "hidden", "scope", "from", "to", "agent",
];
const STEP_KEYS: [&str; 8] = [
    "event", "reply", "trust", "ck", "ck_join", "prop", "truth", "premium",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub actions: BTreeMap<String, Vec<Value>>,
}

impl Preset {
    pub fn from_json(text: &str) -> Result<Preset> {
        let p: Preset = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        p.validate()?;
        Ok(p)
    }

    /// Checks that every step is a known primitive.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidPreset("a preset needs a name".into()));
        }
        for (action, steps) in &self.actions {
            for s in steps {
                validate_step(s)
                    .map_err(|m| Error::InvalidPreset(format!("{}.{action}: {m}", self.name)))?;
            }
        }
        Ok(())
    }
}

fn validate_step(step: &Value) -> std::result::Result<(), String> {
    let obj = step.as_object().ok_or("a step must be an object")?;
    if obj.contains_key("for_each") {
        for k in obj.keys() {
            if !["for_each", "as", "do"].contains(&k.as_str()) {
                return Err(format!("unexpected key `{k}` in for_each"));
            }
        }
        if !obj.get("as").is_some_and(Value::is_string) {
            return Err("for_each needs a string `as`".into());
        }
        let body = obj
            .get("do")
            .and_then(Value::as_array)
            .ok_or("for_each needs a `do` list")?;
        return body.iter().try_for_each(validate_step);
    }
    if obj.len() != 1 {
        return Err("a step has exactly one key".into());
    }
    let (key, body) = obj.iter().next().expect("one key");
    if !STEP_KEYS.contains(&key.as_str()) {
        return Err(format!(
            "unknown step `{key}`, expected one of {} or for_each",
            STEP_KEYS.join(", ")
        ));
    }
    if !body.is_object() {
        return Err(format!("step `{key}` takes an object"));
    }
    if key == "event" {
        match body.get("kind").and_then(Value::as_str) {
            Some(k) if k.starts_with('$') => {}
            Some(k) => {
                k.parse::<EventKind>()?;
            }
            None => return Err("event step needs a kind".into()),
        }
    }
    if key == "trust" {
        if let Some(k) = body.get("kind").and_then(Value::as_str) {
            if !k.starts_with('$') {
                k.parse::<TrustKind>()?;
            }
        }
    }
    Ok(())
}

pub(super) fn builtin() -> BTreeMap<String, Preset> {
    let all: Vec<Preset> = serde_json::from_str(BUILTIN).expect("built-in presets parse");
    all.into_iter()
        .map(|p| {
            p.validate().expect("built-in presets are valid");
            (p.name.clone(), p)
        })
        .collect()
}

type Bindings = BTreeMap<String, Vec<String>>;

fn placeholder(s: &str) -> Option<(&str, bool)> {
    let rest = s.strip_prefix('$')?;
    let (name, optional) = match rest.strip_suffix('?') {
        Some(n) => (n, true),
        None => (rest, false),
    };
    (!name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
        .then_some((name, optional))
}

fn missing(name: &str) -> Error {
    Error::MalformedEvent(format!("missing argument `{name}`"))
}

fn interpolate(s: &str, b: &Bindings) -> Result<String> {
    let mut out = String::new();
    let mut rest = s;
    while let Some(i) = rest.find('$') {
        out.push_str(&rest[..i]);
        let tail = &rest[i + 1..];
        let len = tail
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(tail.len());
        if len == 0 {
            out.push('$');
            rest = tail;
            continue;
        }
        let name = &tail[..len];
        match b.get(name).map(Vec::as_slice) {
            Some([v]) => out.push_str(v),
            Some(_) => {
                return Err(Error::MalformedEvent(format!(
                    "argument `{name}` must have a single value here"
                )))
            }
            None => return Err(missing(name)),
        }
        rest = &tail[len..];
    }
    out.push_str(rest);
    Ok(out)
}

fn subst(v: &Value, b: &Bindings) -> Result<Value> {
    Ok(match v {
        Value::String(s) => match placeholder(s) {
            Some((name, optional)) => match b.get(name) {
                Some(vals) if vals.len() == 1 => Value::String(vals[0].clone()),
                Some(vals) => Value::Array(vals.iter().cloned().map(Value::String).collect()),
                None if optional => Value::Null,
                None => return Err(missing(name)),
            },
            None if s.contains('$') => Value::String(interpolate(s, b)?),
            None => v.clone(),
        },
        Value::Array(items) => {
            let mut out = Vec::new();
            for it in items {
                match subst(it, b)? {
                    Value::Null => {}
                    Value::Array(inner) => out.extend(inner),
                    x => out.push(x),
                }
            }
            Value::Array(out)
        }
        Value::Object(m) => {
            let mut out = Map::new();
            for (k, x) in m {
                let y = subst(x, b)?;
                if !y.is_null() {
                    out.insert(k.clone(), y);
                }
            }
            Value::Object(out)
        }
        other => other.clone(),
    })
}

/// Rewrites agent names to ids in the agent-valued fields of `v`.
pub(super) fn resolve_agents(net: &Epinet, v: &mut Value) -> Result<()> {
    let Value::Object(m) = v else {
        return Err(Error::MalformedEvent("expected a JSON object".into()));
    };
    for key in AGENT_KEYS {
        match m.get_mut(key) {
            Some(Value::String(s)) => *s = net.resolve_agent(s)?.to_string(),
            Some(Value::Array(items)) => {
                for it in items {
                    if let Value::String(s) = it {
                        *s = net.resolve_agent(s)?.to_string();
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn strings(v: Option<&Value>, field: &str) -> Result<Vec<String>> {
    match v {
        Some(Value::String(s)) => Ok(vec![s.clone()]),
        Some(Value::Array(items)) => items
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| Error::MalformedEvent(format!("`{field}` must hold strings")))
            })
            .collect(),
        None => Err(Error::MalformedEvent(format!("missing field `{field}`"))),
        Some(_) => Err(Error::MalformedEvent(format!(
            "`{field}` must be a string or list"
        ))),
    }
}

fn one(v: &Map<String, Value>, field: &str) -> Result<String> {
    let mut xs = strings(v.get(field), field)?;
    if xs.len() != 1 {
        return Err(Error::MalformedEvent(format!("`{field}` takes one value")));
    }
    Ok(xs.remove(0))
}

impl Platform {
    pub fn presets(&self) -> impl Iterator<Item = &Preset> {
        self.presets.values()
    }

    pub fn preset(&self, name: &str) -> Option<&Preset> {
        self.presets.get(name)
    }

    /// Registers or replaces a preset.
    pub fn add_preset(&mut self, preset: Preset) -> Result<()> {
        preset.validate()?;
        self.presets.insert(preset.name.clone(), preset);
        Ok(())
    }

    /// Expands a preset action into primitive steps and applies them as one
    /// atomic unit. Returns the outcome of every primitive event.
    pub fn run_preset_action(
        &mut self,
        preset: &str,
        action: &str,
        args: &BTreeMap<String, Vec<String>>,
    ) -> Result<Vec<EventOutcome>> {
        let p = self
            .presets
            .get(preset)
            .ok_or_else(|| Error::NoSuchPreset(preset.to_owned()))?;
        let steps = p
            .actions
            .get(action)
            .ok_or_else(|| Error::NoSuchAction {
                preset: preset.to_owned(),
                action: action.to_owned(),
            })?
            .clone();
        let saved = self.clone();
        let mut out = Vec::new();
        match self.run_steps(&steps, args, &mut out) {
            Ok(()) => Ok(out),
            Err(e) => {
                *self = saved;
                Err(e)
            }
        }
    }

    fn run_steps(
        &mut self,
        steps: &[Value],
        b: &Bindings,
        out: &mut Vec<EventOutcome>,
    ) -> Result<()> {
        for step in steps {
            let obj = step.as_object().expect("validated");
            if let Some(list) = obj.get("for_each") {
                let items = strings(Some(&subst(list, b)?), "for_each")?;
                let var = obj["as"].as_str().expect("validated");
                let body = obj["do"].as_array().expect("validated");
                for item in items {
                    let mut inner = b.clone();
                    inner.insert(var.to_owned(), vec![item]);
                    self.run_steps(body, &inner, out)?;
                }
                continue;
            }
            let (key, body) = obj.iter().next().expect("validated");
            let mut v = subst(body, b)?;
            resolve_agents(&self.net, &mut v)?;
            let m = v.as_object().expect("objects stay objects");
            match key.as_str() {
                "event" => {
                    let e = serde_json::from_value(v.clone())
                        .map_err(|e| Error::MalformedEvent(e.to_string()))?;
                    out.push(self.apply_event(e)?);
                }
                "reply" => {
                    let from = self.agent(&one(m, "from")?)?;
                    let to = self.agent(&one(m, "to")?)?;
                    let p = PropId::new(one(m, "payload")?);
                    out.push(self.reply_in_thread(&one(m, "thread")?, from, to, &p)?);
                }
                "trust" => {
                    let kind: TrustKind = one(m, "kind")?.parse().map_err(Error::MalformedEvent)?;
                    let from = self.agent(&one(m, "from")?)?;
                    for to in strings(m.get("to"), "to")? {
                        let to = self.agent(&to)?;
                        self.net.set_trust(from, to, kind)?;
                    }
                }
                "ck" => {
                    let group = strings(m.get("group"), "group")?
                        .iter()
                        .map(|a| self.net.resolve_agent(a))
                        .collect::<Result<BTreeSet<AgentId>>>()?;
                    self.net
                        .add_common_knowledge(group, &PropId::new(one(m, "prop")?))?;
                }
                "ck_join" => {
                    let p = PropId::new(one(m, "prop")?);
                    for a in strings(m.get("agent"), "agent")? {
                        let a = self.agent(&a)?;
                        self.net.join_common_knowledge(&p, a)?;
                    }
                }
                "prop" => {
                    let statement = m
                        .get("statement")
                        .and_then(Value::as_str)
                        .unwrap_or("")
                        .to_owned();
                    self.net.ensure_prop(&one(m, "id")?, || statement);
                }
                "truth" => {
                    let value = m.get("value").and_then(Value::as_bool).ok_or_else(|| {
                        Error::MalformedEvent("truth needs a boolean `value`".into())
                    })?;
                    self.net
                        .set_world_truth(&PropId::new(one(m, "prop")?), value)?;
                }
                "premium" => {
                    let value = m.get("value").and_then(Value::as_bool).unwrap_or(true);
                    let a = self.agent(&one(m, "agent")?)?;
                    self.set_premium(a, value)?;
                }
                _ => unreachable!("validated"),
            }
        }
        Ok(())
    }

    fn agent(&self, token: &str) -> Result<AgentId> {
        self.net.resolve_agent(token)
    }
}
