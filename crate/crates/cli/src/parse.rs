//! Line-oriented scenario parser.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use epinet::formula::{self, is_name_char};
use epinet::platform::{Event, EventKind, Flags, Platform, Preset};
use epinet::{
    AgentId, ConduitKind, Directionality, DotMode, Epinet, Error, Formula, NeighborhoodKind,
    PropId, TrustKind,
};

use crate::ast::{Apply, Query, Scenario, Statement, Stmt};
use crate::error::ParseError;

pub const STATEMENTS: [&str; 14] = [
    "agent",
    "prop",
    "truth",
    "fact",
    "retract",
    "trust",
    "trust_csv",
    "channel",
    "preset",
    "event",
    "event_log",
    "action",
    "apply",
    "query",
];

pub const QUERIES: [&str; 13] = [
    "holds",
    "state",
    "distribution",
    "level",
    "covert",
    "neighborhoods",
    "mobilization",
    "trust_neighborhoods",
    "security_neighborhoods",
    "conduit",
    "classify",
    "authenticate",
    "graph",
];

pub const APPLIES: [&str; 4] = [
    "closure",
    "propagate",
    "derive_security_ck",
    "establish_conduit",
];

const EVENT_KEYS: [&str; 8] = [
    "sender", "visible", "hidden", "payload", "thread", "channel", "scope", "flags",
];

type PResult<T> = Result<T, ParseError>;

/// Names a line may refer to.
#[derive(Clone, Debug)]
pub struct Symbols {
    agents: HashMap<String, AgentId>,
    ids: BTreeSet<AgentId>,
    next: u32,
    props: BTreeSet<String>,
    presets: BTreeMap<String, BTreeSet<String>>,
    /// `None` when channels are not tracked (queries against a snapshot).
    channels: Option<BTreeSet<String>>,
}

impl Default for Symbols {
    fn default() -> Self {
        Symbols::new()
    }
}

impl Symbols {
    /// An empty scenario: no agents or props, the built-in presets.
    pub fn new() -> Self {
        let presets = Platform::default()
            .presets()
            .map(|p| (p.name.clone(), p.actions.keys().cloned().collect()))
            .collect();
        Symbols {
            agents: HashMap::new(),
            ids: BTreeSet::new(),
            next: 1,
            props: BTreeSet::new(),
            presets,
            channels: Some(BTreeSet::new()),
        }
    }

    /// Everything registered in `net`.
    pub fn from_net(net: &Epinet) -> Self {
        let mut s = Symbols::new();
        for a in net.agents() {
            s.agents.insert(a.name.clone(), a.id);
            s.ids.insert(a.id);
        }
        s.props = net.props().map(|p| p.id.as_str().to_owned()).collect();
        s.channels = None;
        s
    }

    /// Declared names first, then `a<n>` ids.
    pub fn agent(&self, token: &str) -> Option<AgentId> {
        self.agents
            .get(token)
            .copied()
            .or_else(|| token.parse().ok().filter(|id| self.ids.contains(id)))
    }

    /// Declared props, plus any name containing `:`; those are the
    /// canonical names the engine registers itself (`trust:a1>a2:full`,
    /// `breach:a2:p`, ...).
    pub fn prop(&self, token: &str) -> Option<PropId> {
        (self.props.contains(token) || token.contains(':')).then(|| PropId::new(token))
    }
}

pub fn parse_scenario(text: &str) -> PResult<Scenario> {
    let mut syms = Symbols::new();
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let stmt = parse_line(raw, i + 1, &mut syms)?;
        statements.push(Statement { line: i + 1, stmt });
    }
    Ok(Scenario { statements })
}

/// Parses the words after `query` (or `query@k`) against `syms`.
pub fn parse_query(text: &str, syms: &Symbols) -> PResult<Query> {
    let mut c = Cursor::new(text, 1);
    let q = query_body(&mut c, syms)?;
    Ok(q)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

#[derive(Clone, Debug)]
struct Word<'a> {
    col: usize,
    text: &'a str,
}

#[derive(Clone, Debug)]
struct Arg<'a> {
    col: usize,
    /// Column of the value.
    vcol: usize,
    key: Option<&'a str>,
    value: String,
    quoted: bool,
}

fn syntax<S: Into<String>>(
    line: usize,
    column: usize,
    expected: impl IntoIterator<Item = S>,
    found: &str,
) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        expected: expected.into_iter().map(Into::into).collect(),
        found: if found.is_empty() {
            "end of line".to_owned()
        } else {
            format!("`{found}`")
        },
    }
}

fn kind_names<T: Copy>(all: &[T], name: impl Fn(T) -> String) -> Vec<String> {
    all.iter().map(|&k| name(k)).collect()
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn col_at(&self, pos: usize) -> usize {
        self.text[..pos].chars().count() + 1
    }

    fn col(&self) -> usize {
        self.col_at(self.pos)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn peek_word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        &rest[..end]
    }

    fn word(&mut self) -> Option<Word<'a>> {
        let w = self.peek_word();
        if w.is_empty() {
            return None;
        }
        let col = self.col();
        self.pos += w.len();
        Some(Word { col, text: w })
    }

    fn expect_word<S: Into<String>>(
        &mut self,
        expected: impl IntoIterator<Item = S>,
    ) -> PResult<Word<'a>> {
        match self.word() {
            Some(w) => Ok(w),
            None => Err(syntax(self.line, self.col(), expected, "")),
        }
    }

    fn rest(&mut self) -> Word<'a> {
        self.skip_ws();
        let col = self.col();
        let text = self.text[self.pos..].trim_end();
        self.pos = self.text.len();
        Word { col, text }
    }

    /// A `"..."` string with `\"`, `\\` and `\n` escapes.
    fn quoted(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.col();
        let mut chars = self.text[self.pos..].char_indices();
        if !matches!(chars.next(), Some((_, '"'))) {
            let found = self.peek_word();
            return Err(syntax(self.line, start, ["a quoted string"], found));
        }
        let mut out = String::new();
        let mut escaped = false;
        for (i, c) in chars {
            if escaped {
                out.push(match c {
                    'n' => '\n',
                    c => c,
                });
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                self.pos += i + 1;
                return Ok(out);
            } else {
                out.push(c);
            }
        }
        Err(syntax(
            self.line,
            self.col_at(self.text.len()),
            ["a closing `\"`"],
            "",
        ))
    }

    fn end(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            let col = self.col();
            Err(syntax(self.line, col, ["end of line"], self.peek_word()))
        }
    }

    /// The remaining words as positional values and `key=value` pairs.
    fn args(&mut self) -> PResult<Args<'a>> {
        let mut items = Vec::new();
        while !self.at_end() {
            let col = self.col();
            let rest = &self.text[self.pos..];
            let word_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let key = rest[..word_end]
                .find('=')
                .map(|eq| &rest[..eq])
                .filter(|k| !k.is_empty() && k.chars().all(is_name_char));
            let key = match key {
                Some(k) => {
                    self.pos += k.len() + 1;
                    Some(k)
                }
                None => None,
            };
            let vcol = self.col();
            if self.text[self.pos..].starts_with('"') {
                let value = self.quoted()?;
                items.push(Arg {
                    col,
                    vcol,
                    key,
                    value,
                    quoted: true,
                });
            } else {
                let rest = &self.text[self.pos..];
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                items.push(Arg {
                    col,
                    vcol,
                    key,
                    value: rest[..end].to_owned(),
                    quoted: false,
                });
                self.pos += end;
            }
        }
        Ok(Args {
            line: self.line,
            end: self.col(),
            items,
        })
    }
}

struct Args<'a> {
    line: usize,
    end: usize,
    items: Vec<Arg<'a>>,
}

impl<'a> Args<'a> {
    fn positional(&mut self, what: &str) -> PResult<Arg<'a>> {
        match self.items.iter().position(|a| a.key.is_none()) {
            Some(i) => Ok(self.items.remove(i)),
            None => {
                let (col, found) = match self.items.first() {
                    Some(a) => (a.col, a.key.unwrap_or_default()),
                    None => (self.end, ""),
                };
                Err(syntax(self.line, col, [what], found))
            }
        }
    }

    fn key(&mut self, key: &str) -> Option<Arg<'a>> {
        let i = self.items.iter().position(|a| a.key == Some(key))?;
        Some(self.items.remove(i))
    }

    fn required(&mut self, key: &str) -> PResult<Arg<'a>> {
        self.key(key)
            .ok_or_else(|| syntax(self.line, self.end, [format!("`{key}=`")], ""))
    }

    fn finish(self, allowed: &[&str]) -> PResult<()> {
        match self.items.into_iter().next() {
            None => Ok(()),
            Some(a) => {
                let found = match a.key {
                    Some(k) => format!("{k}="),
                    None => a.value,
                };
                let expected: Vec<String> = if allowed.is_empty() {
                    vec!["end of line".into()]
                } else {
                    allowed.iter().map(|k| format!("`{k}=`")).collect()
                };
                Err(syntax(self.line, a.col, expected, &found))
            }
        }
    }
}

impl Arg<'_> {
    /// Comma-separated values with their columns; a quoted value is one item.
    fn items(&self) -> Vec<(usize, String)> {
        if self.quoted {
            return vec![(self.vcol, self.value.clone())];
        }
        let mut out = Vec::new();
        let mut col = self.vcol;
        for part in self.value.split(',') {
            out.push((col, part.to_owned()));
            col += part.chars().count() + 1;
        }
        out
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_name_char)
}

struct Ctx<'s> {
    line: usize,
    syms: &'s Symbols,
}

impl Ctx<'_> {
    fn agent(&self, col: usize, name: &str) -> PResult<AgentId> {
        if name.is_empty() {
            return Err(syntax(self.line, col, ["an agent name"], ""));
        }
        self.syms
            .agent(name)
            .ok_or_else(|| ParseError::UndeclaredName {
                line: self.line,
                column: col,
                name: name.to_owned(),
            })
    }

    fn agent_arg(&self, a: &Arg) -> PResult<AgentId> {
        self.agent(a.vcol, &a.value)
    }

    fn agents(&self, a: &Arg) -> PResult<BTreeSet<AgentId>> {
        a.items()
            .into_iter()
            .map(|(col, n)| self.agent(col, &n))
            .collect()
    }

    fn prop(&self, col: usize, name: &str) -> PResult<PropId> {
        if name.is_empty() {
            return Err(syntax(self.line, col, ["a prop name"], ""));
        }
        self.syms
            .prop(name)
            .ok_or_else(|| ParseError::UndeclaredName {
                line: self.line,
                column: col,
                name: name.to_owned(),
            })
    }

    fn prop_arg(&self, a: &Arg) -> PResult<PropId> {
        self.prop(a.vcol, &a.value)
    }

    fn token(&self, a: &Arg, what: &str) -> PResult<String> {
        if a.value.is_empty() {
            Err(syntax(self.line, a.vcol, [what], ""))
        } else {
            Ok(a.value.clone())
        }
    }

    fn parsed<T: FromStr>(&self, a: &Arg, expected: Vec<String>) -> PResult<T> {
        a.value
            .parse()
            .map_err(|_| syntax(self.line, a.vcol, expected, &a.value))
    }

    fn bool(&self, a: &Arg) -> PResult<bool> {
        match a.value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            v => Err(syntax(self.line, a.vcol, ["true", "false"], v)),
        }
    }

    fn formula(&self, w: &Word) -> PResult<Formula> {
        let r = formula::parse(w.text, |n| self.syms.agent(n), |n| self.syms.prop(n));
        let locate = |name: &str| {
            // Columns of a name inside the formula text.
            let at = w
                .text
                .match_indices(name)
                .find(|(i, _)| {
                    let before = w.text[..*i].chars().last();
                    let after = w.text[i + name.len()..].chars().next();
                    !before.is_some_and(is_name_char) && !after.is_some_and(is_name_char)
                })
                .map_or(0, |(i, _)| w.text[..i].chars().count());
            w.col + at
        };
        r.map_err(|e| match e {
            Error::FormulaSyntax { column, expected } => {
                let at: String = w
                    .text
                    .chars()
                    .skip(column - 1)
                    .take_while(|c| !c.is_whitespace())
                    .collect();
                syntax(self.line, w.col + column - 1, [expected], &at)
            }
            Error::UnknownAgent(name) | Error::UnknownProp(name) => ParseError::UndeclaredName {
                line: self.line,
                column: locate(&name),
                name,
            },
            other => syntax(self.line, w.col, ["a formula"], &other.to_string()),
        })
    }
}

fn parse_line(text: &str, line: usize, syms: &mut Symbols) -> PResult<Stmt> {
    let mut c = Cursor::new(text, line);
    let head = c.expect_word(STATEMENTS)?;
    let (keyword, at) = match head.text.split_once('@') {
        Some(("query", k)) => {
            let at = k
                .parse::<usize>()
                .map_err(|_| syntax(line, head.col + 6, ["an event count after `query@`"], k))?;
            ("query", Some(at))
        }
        _ => (head.text, None),
    };
    let ctx = Ctx { line, syms };
    let stmt = match keyword {
        "agent" => {
            let w = c.expect_word(["an agent name"])?;
            if !valid_name(w.text) || w.text.contains(':') || w.text.parse::<AgentId>().is_ok() {
                return Err(syntax(
                    line,
                    w.col,
                    ["an agent name without `:` that is not an id"],
                    w.text,
                ));
            }
            if syms.agents.contains_key(w.text) {
                return Err(syntax(line, w.col, ["a new agent name"], w.text));
            }
            c.end()?;
            let id = AgentId::new(syms.next);
            syms.next += 1;
            syms.agents.insert(w.text.to_owned(), id);
            syms.ids.insert(id);
            return Ok(Stmt::Agent {
                name: w.text.to_owned(),
            });
        }
        "prop" => {
            let w = c.expect_word(["a prop name"])?;
            if !valid_name(w.text) {
                return Err(syntax(line, w.col, ["a prop name"], w.text));
            }
            if syms.props.contains(w.text) {
                return Err(syntax(line, w.col, ["a new prop name"], w.text));
            }
            let statement = if c.at_end() {
                String::new()
            } else {
                c.quoted()?
            };
            c.end()?;
            syms.props.insert(w.text.to_owned());
            return Ok(Stmt::Prop {
                name: w.text.to_owned(),
                statement,
            });
        }
        "truth" => {
            let mut a = c.args()?;
            let p = a.positional("a prop name")?;
            let v = a.positional("true or false")?;
            let s = Stmt::Truth {
                prop: ctx.prop_arg(&p)?,
                value: ctx.bool(&v)?,
            };
            a.finish(&[])?;
            s
        }
        "fact" | "retract" => {
            let w = c.rest();
            if w.text.is_empty() {
                return Err(syntax(line, w.col, ["a formula"], ""));
            }
            let f = ctx.formula(&w)?;
            if keyword == "fact" {
                Stmt::Fact(f)
            } else {
                Stmt::Retract(f)
            }
        }
        "trust" => {
            let mut a = c.args()?;
            let from = a.positional("the trusting agent")?;
            let to = a.positional("the trusted agent")?;
            let kind = a.positional("a trust kind")?;
            let kinds = kind_names(&TrustKind::ALL, |k| k.as_str().to_owned());
            let s = Stmt::Trust {
                from: ctx.agent_arg(&from)?,
                to: ctx.agent_arg(&to)?,
                kind: ctx.parsed(&kind, kinds)?,
            };
            a.finish(&[])?;
            s
        }
        "trust_csv" | "event_log" => {
            let path = c.quoted()?;
            c.end()?;
            if keyword == "trust_csv" {
                Stmt::TrustCsv { path }
            } else {
                Stmt::EventLog { path }
            }
        }
        "channel" => {
            let mut a = c.args()?;
            let id = a.positional("a channel name")?;
            let members = ctx.agents(&a.required("members")?)?;
            let host = match a.key("host") {
                Some(h) => ctx.agents(&h)?,
                None => syms.ids.clone(),
            };
            let covert = match a.key("covert") {
                Some(v) => ctx.bool(&v)?,
                None => false,
            };
            a.finish(&["members", "host", "covert"])?;
            let id = ctx.token(&id, "a channel name")?;
            if let Some(ch) = syms.channels.as_mut() {
                ch.insert(id.clone());
            }
            return Ok(Stmt::Channel {
                id,
                members,
                host,
                covert,
            });
        }
        "preset" => {
            let w = c.rest();
            let preset = Preset::from_json(w.text).map_err(|e| match e {
                Error::Parse {
                    column, message, ..
                } => syntax(
                    line,
                    w.col + column.saturating_sub(1),
                    ["a preset JSON object"],
                    &message,
                ),
                other => syntax(line, w.col, ["a valid preset"], &other.to_string()),
            })?;
            syms.presets.insert(
                preset.name.clone(),
                preset.actions.keys().cloned().collect(),
            );
            return Ok(Stmt::Preset(preset));
        }
        "event" => event(&mut c, &ctx)?,
        "action" => {
            let p = c.expect_word(["a preset name"])?;
            let Some(actions) = syms.presets.get(p.text) else {
                return Err(ParseError::UndeclaredName {
                    line,
                    column: p.col,
                    name: p.text.to_owned(),
                });
            };
            let act = c.expect_word(actions.iter().cloned())?;
            if !actions.contains(act.text) {
                return Err(syntax(line, act.col, actions.iter().cloned(), act.text));
            }
            let a = c.args()?;
            let mut args = BTreeMap::new();
            for arg in a.items {
                let Some(k) = arg.key else {
                    return Err(syntax(line, arg.col, ["`name=value`"], &arg.value));
                };
                let values = arg.items().into_iter().map(|(_, v)| v).collect();
                if args.insert(k.to_owned(), values).is_some() {
                    return Err(syntax(line, arg.col, ["each argument once"], k));
                }
            }
            Stmt::Action {
                preset: p.text.to_owned(),
                action: act.text.to_owned(),
                args,
            }
        }
        "apply" => apply(&mut c, &ctx)?,
        "query" => Stmt::Query {
            at,
            query: query_body(&mut c, syms)?,
        },
        other => return Err(syntax(line, head.col, STATEMENTS, other)),
    };
    c.end()?;
    Ok(stmt)
}

fn event(c: &mut Cursor, ctx: &Ctx) -> PResult<Stmt> {
    let line = ctx.line;
    let mut expected: Vec<String> = EventKind::ALL
        .iter()
        .map(|k| k.as_str().to_owned())
        .collect();
    expected.push("reply".into());
    let kw = c.expect_word(expected.clone())?;
    let mut a = c.args()?;
    if kw.text == "reply" {
        let s = Stmt::Reply {
            thread: ctx.token(&a.required("thread")?, "a thread name")?,
            from: ctx.agent_arg(&a.required("sender")?)?,
            to: ctx.agent_arg(&a.required("visible")?)?,
            payload: ctx.prop_arg(&a.required("payload")?)?,
        };
        a.finish(&["thread", "sender", "visible", "payload"])?;
        return Ok(s);
    }
    let kind: EventKind = kw
        .text
        .parse()
        .map_err(|_| syntax(line, kw.col, expected, kw.text))?;
    let sender = ctx.agent_arg(&a.required("sender")?)?;
    let payload = ctx.prop_arg(&a.required("payload")?)?;
    let mut e = Event::new(kind, sender, payload);
    if let Some(v) = a.key("visible") {
        e.visible = ctx.agents(&v)?;
    }
    if let Some(v) = a.key("hidden") {
        e.hidden = ctx.agents(&v)?;
    }
    if let Some(v) = a.key("thread") {
        e.thread = Some(ctx.token(&v, "a thread name")?);
    }
    if let Some(v) = a.key("channel") {
        let id = ctx.token(&v, "a channel name")?;
        if let Some(known) = &ctx.syms.channels {
            if !known.contains(&id) {
                return Err(ParseError::UndeclaredName {
                    line,
                    column: v.vcol,
                    name: id,
                });
            }
        }
        e.channel = Some(id);
    }
    if let Some(v) = a.key("scope") {
        e.scope = Some(ctx.agents(&v)?);
    }
    if let Some(v) = a.key("flags") {
        let mut flags = Flags::default();
        for (col, f) in v.items() {
            match f.as_str() {
                "covert" => flags.covert = true,
                "acknowledged" => flags.acknowledged = true,
                "consent" => flags.consent = true,
                other => {
                    return Err(syntax(
                        line,
                        col,
                        ["covert", "acknowledged", "consent"],
                        other,
                    ))
                }
            }
        }
        e.flags = flags;
    }
    a.finish(&EVENT_KEYS)?;
    Ok(Stmt::Event(e))
}

fn apply(c: &mut Cursor, ctx: &Ctx) -> PResult<Stmt> {
    let line = ctx.line;
    let kw = c.expect_word(APPLIES)?;
    let mut a = c.args()?;
    let op = match kw.text {
        "closure" => {
            a.finish(&[])?;
            Apply::Closure
        }
        "propagate" => {
            let origin = ctx.agent_arg(&a.positional("the origin agent")?)?;
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            let audience = a.key("audience").map(|v| ctx.agents(&v)).transpose()?;
            a.finish(&["audience"])?;
            Apply::Propagate {
                origin,
                prop,
                audience,
            }
        }
        "derive_security_ck" => {
            let members = ctx.agents(&a.required("members")?)?;
            a.finish(&["members"])?;
            Apply::DeriveSecurityCk { members }
        }
        "establish_conduit" => {
            let from = ctx.agent_arg(&a.positional("the first agent")?)?;
            let to = ctx.agent_arg(&a.positional("the last agent")?)?;
            let directionality = match a.key("dir") {
                Some(v) => ctx.parsed(&v, vec!["one_way".into(), "corridor".into()])?,
                None => Directionality::OneWay,
            };
            a.finish(&["dir"])?;
            Apply::EstablishConduit {
                from,
                to,
                directionality,
            }
        }
        other => return Err(syntax(line, kw.col, APPLIES, other)),
    };
    Ok(Stmt::Apply(op))
}

fn query_body(c: &mut Cursor, syms: &Symbols) -> PResult<Query> {
    let ctx = Ctx { line: c.line, syms };
    let line = c.line;
    let kw = c.expect_word(QUERIES)?;
    if kw.text == "holds" {
        let w = c.rest();
        if w.text.is_empty() {
            return Err(syntax(line, w.col, ["a formula"], ""));
        }
        return Ok(Query::Holds(ctx.formula(&w)?));
    }
    if kw.text == "graph" {
        let w = c.expect_word([
            "agents_trust",
            "knowledge_p(<prop>)",
            "neighborhoods(<prop>)",
        ])?;
        let mode: DotMode = w.text.parse().map_err(|_| {
            syntax(
                line,
                w.col,
                [
                    "agents_trust",
                    "knowledge_p(<prop>)",
                    "neighborhoods(<prop>)",
                ],
                w.text,
            )
        })?;
        if let DotMode::Knowledge(p) | DotMode::Neighborhoods(p) = &mode {
            let start = w.text.find(p.as_str()).unwrap_or(0);
            ctx.prop(w.col + w.text[..start].chars().count(), p.as_str())?;
        }
        c.end()?;
        return Ok(Query::Graph(mode));
    }
    let mut a = c.args()?;
    let q = match kw.text {
        "state" => {
            let agent = ctx.agent_arg(&a.positional("an agent name")?)?;
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            a.finish(&[])?;
            Query::State { agent, prop }
        }
        "distribution" => {
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            let scope = a.key("scope").map(|v| ctx.agents(&v)).transpose()?;
            a.finish(&["scope"])?;
            Query::Distribution { prop, scope }
        }
        "level" => {
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            let group = ctx.agents(&a.required("group")?)?;
            a.finish(&["group"])?;
            Query::Level { prop, group }
        }
        "covert" => {
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            let sg = ctx.agents(&a.required("sg")?)?;
            let g = ctx.agents(&a.required("g")?)?;
            a.finish(&["sg", "g"])?;
            Query::Covert { prop, sg, g }
        }
        "neighborhoods" => {
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            let k = a.positional("a neighborhood kind")?;
            let kinds = vec![
                "distributed".into(),
                "mutual".into(),
                "level_<n>".into(),
                "common".into(),
            ];
            let kind: NeighborhoodKind = ctx.parsed(&k, kinds.clone())?;
            if kind == NeighborhoodKind::Covert {
                return Err(syntax(line, k.vcol, kinds, &k.value));
            }
            a.finish(&[])?;
            Query::Neighborhoods { prop, kind }
        }
        "mobilization" => {
            let mut commitments = BTreeMap::new();
            for arg in std::mem::take(&mut a.items) {
                let Some(k) = arg.key else {
                    return Err(syntax(
                        line,
                        arg.col,
                        ["`agent=commitment-prop`"],
                        &arg.value,
                    ));
                };
                let agent = ctx.agent(arg.col, k)?;
                commitments.insert(agent, ctx.prop_arg(&arg)?);
            }
            if commitments.is_empty() {
                return Err(syntax(line, a.end, ["`agent=commitment-prop`"], ""));
            }
            Query::Mobilization { commitments }
        }
        "trust_neighborhoods" => {
            a.finish(&[])?;
            Query::TrustNeighborhoods
        }
        "security_neighborhoods" => {
            a.finish(&[])?;
            Query::SecurityNeighborhoods
        }
        "conduit" => {
            let from = ctx.agent_arg(&a.positional("the first agent")?)?;
            let to = ctx.agent_arg(&a.positional("the last agent")?)?;
            let kind = match a.key("kind") {
                Some(v) => ctx.parsed(&v, vec!["trust".into(), "security".into()])?,
                None => ConduitKind::Trust,
            };
            let directionality = match a.key("dir") {
                Some(v) => ctx.parsed(&v, vec!["one_way".into(), "corridor".into()])?,
                None => Directionality::OneWay,
            };
            a.finish(&["kind", "dir"])?;
            Query::Conduit {
                from,
                to,
                kind,
                directionality,
            }
        }
        "classify" => {
            let agent = ctx.agent_arg(&a.positional("an agent name")?)?;
            let prop = ctx.prop_arg(&a.positional("a prop name")?)?;
            a.finish(&[])?;
            Query::Classify { agent, prop }
        }
        "authenticate" => {
            let claimant = ctx.agent_arg(&a.positional("the claimant")?)?;
            let group = ctx.agents(&a.required("group")?)?;
            a.finish(&["group"])?;
            Query::Authenticate { claimant, group }
        }
        other => return Err(syntax(line, kw.col, QUERIES, other)),
    };
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse_scenario(text).unwrap_err()
    }

    #[test]
    fn three_lines_one_event() {
        let s = parse_scenario(
            "agent Alan\nprop p \"the memo\"\nevent broadcast sender=Alan payload=p\n",
        )
        .unwrap();
        assert_eq!(s.statements.len(), 3);
        assert_eq!(s.statements.iter().filter(|s| s.stmt.is_event()).count(), 1);
        assert_eq!(s.statements[2].line, 3);
    }

    #[test]
    fn misspelled_event_kind_lists_the_kinds() {
        match err("agent A\nprop p\nevent direct_mesage sender=A payload=p") {
            ParseError::Syntax {
                line: 3,
                column: 7,
                expected,
                ..
            } => {
                assert!(expected.contains(&"direct_message".to_string()));
                assert_eq!(expected.len(), 11);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn forward_references_are_rejected() {
        assert_eq!(
            err("agent A\nfact K(Betty, p)"),
            ParseError::UndeclaredName {
                line: 2,
                column: 8,
                name: "Betty".into()
            }
        );
        assert_eq!(
            err("agent A\nquery level p group=A"),
            ParseError::UndeclaredName {
                line: 2,
                column: 13,
                name: "p".into()
            }
        );
        // Engine-named props are exempt.
        assert!(parse_scenario("agent A\nagent B\nquery holds K(A, trust:a1>a2:full)").is_ok());
    }

    #[test]
    fn positions_point_at_the_problem() {
        match err("agent A\nprop p\nevent broadcast sender=A payload=p flags=loud") {
            ParseError::Syntax { column, found, .. } => {
                assert_eq!(column, 42);
                assert_eq!(found, "`loud`");
            }
            other => panic!("{other:?}"),
        }
        match err("agent A\nprop p\nfact K(A p)") {
            ParseError::Syntax {
                line: 3,
                column: 10,
                ..
            } => {}
            other => panic!("{other:?}"),
        }
        match err("frobnicate") {
            ParseError::Syntax { expected, .. } => assert_eq!(expected.len(), STATEMENTS.len()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn agent_names_may_not_look_like_ids() {
        assert!(matches!(err("agent a1"), ParseError::Syntax { .. }));
        assert!(matches!(err("agent A\nagent A"), ParseError::Syntax { .. }));
    }

    #[test]
    fn query_steps() {
        let s = parse_scenario("agent A\nagent B\nprop p\nquery@3 level p group=A,B").unwrap();
        assert!(matches!(
            s.statements[3].stmt,
            Stmt::Query { at: Some(3), .. }
        ));
        assert!(matches!(
            err("query@x trust_neighborhoods"),
            ParseError::Syntax { column: 7, .. }
        ));
    }

    #[test]
    fn unknown_presets_and_actions() {
        assert!(matches!(
            err("action myspace post"),
            ParseError::UndeclaredName { .. }
        ));
        match err("action email fax") {
            ParseError::Syntax { expected, .. } => assert_eq!(expected, vec!["reply", "send"]),
            other => panic!("{other:?}"),
        }
        let ok = "preset {\"name\":\"fax\",\"actions\":{\"send\":[]}}\naction fax send";
        assert!(parse_scenario(ok).is_ok());
    }

    #[test]
    fn channels_must_be_declared() {
        let text = "agent A\nagent B\nprop p\nevent channel_post sender=A payload=p channel=ops";
        assert!(matches!(err(text), ParseError::UndeclaredName { .. }));
    }
}
