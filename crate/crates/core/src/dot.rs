//! Graphviz export. Node and edge order follow agent ids, so output is
//! stable.

use std::fmt::Write;

use crate::conduit::Conduit;
use crate::regimes::NeighborhoodKind;
use crate::trust::TrustKind;
use crate::{AgentId, Epinet, Formula, PropId, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DotMode {
    /// One edge per trusting pair, labelled with the trust kinds.
    AgentsTrust,
    /// Agents labelled with their states on the prop; an edge `x -> y`
    /// when x knows that y knows it.
    Knowledge(PropId),
    /// One cluster per maximal distributed, mutual and common neighborhood.
    Neighborhoods(PropId),
}

impl std::str::FromStr for DotMode {
    type Err = String;

    /// `agents_trust`, `knowledge_p(<prop>)` or `neighborhoods(<prop>)`;
    /// `knowledge:<prop>` and `neighborhoods:<prop>` also work.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let arg = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| {
                    r.strip_prefix('(')
                        .and_then(|r| r.strip_suffix(')'))
                        .or_else(|| r.strip_prefix(':'))
                })
                .filter(|r| !r.is_empty())
                .map(PropId::new)
        };
        if s == "agents_trust" {
            Ok(DotMode::AgentsTrust)
        } else if let Some(p) = arg("knowledge_p").or_else(|| arg("knowledge")) {
            Ok(DotMode::Knowledge(p))
        } else if let Some(p) = arg("neighborhoods") {
            Ok(DotMode::Neighborhoods(p))
        } else {
            Err(format!(
                "unknown graph mode `{s}`, expected agents_trust, knowledge_p(<prop>) or neighborhoods(<prop>)"
            ))
        }
    }
}

impl std::fmt::Display for DotMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DotMode::AgentsTrust => f.write_str("agents_trust"),
            DotMode::Knowledge(p) => write!(f, "knowledge_p({p})"),
            DotMode::Neighborhoods(p) => write!(f, "neighborhoods({p})"),
        }
    }
}

fn quote(s: &str) -> String {
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

impl Epinet {
    fn dot_nodes(&self, out: &mut String, label: impl Fn(AgentId, &str) -> String) {
        for a in self.agents() {
            writeln!(out, "  {} [label={}];", a.id, quote(&label(a.id, &a.name))).unwrap();
        }
    }

    fn dot_trust_edges(&self, out: &mut String, highlight: &[(AgentId, AgentId)]) {
        let mut pairs: Vec<(AgentId, AgentId)> =
            self.trust().edges().map(|e| (e.from, e.to)).collect();
        pairs.dedup();
        for (f, t) in pairs {
            let kinds: Vec<&str> = TrustKind::ALL
                .iter()
                .filter(|&&k| self.trusts(f, t, k))
                .map(|k| k.as_str())
                .collect();
            let extra = if highlight.contains(&(t, f)) {
                ", color=red, penwidth=2"
            } else {
                ""
            };
            writeln!(
                out,
                "  {f} -> {t} [label={}{extra}];",
                quote(&kinds.join(","))
            )
            .unwrap();
        }
    }

    pub fn export_graph(&self, mode: &DotMode) -> Result<String> {
        let mut out = String::from("digraph epinet {\n");
        match mode {
            DotMode::AgentsTrust => {
                self.dot_nodes(&mut out, |_, name| name.to_owned());
                self.dot_trust_edges(&mut out, &[]);
            }
            DotMode::Knowledge(p) => {
                self.require_prop(p)?;
                self.dot_nodes(&mut out, |a, name| {
                    let labels: Vec<String> = self
                        .epistemic_state(a, p)
                        .iter()
                        .map(ToString::to_string)
                        .collect();
                    format!("{name}\n{}", labels.join(", "))
                });
                let ids = self.agent_ids();
                for &x in &ids {
                    for &y in &ids {
                        if x != y
                            && self.holds(&Formula::knows(
                                x,
                                Formula::knows(y, Formula::atom(p.clone())),
                            ))
                        {
                            writeln!(out, "  {x} -> {y};").unwrap();
                        }
                    }
                }
            }
            DotMode::Neighborhoods(p) => {
                self.require_prop(p)?;
                self.dot_nodes(&mut out, |_, name| name.to_owned());
                let mut i = 0;
                for (kind, color) in [
                    (NeighborhoodKind::Distributed, "lightblue"),
                    (NeighborhoodKind::Mutual, "gold"),
                    (NeighborhoodKind::Common, "salmon"),
                ] {
                    for n in self.find_neighborhoods(p, kind)? {
                        writeln!(out, "  subgraph cluster_{i} {{").unwrap();
                        writeln!(
                            out,
                            "    label={};",
                            quote(&format!("{kind} ({})", n.level))
                        )
                        .unwrap();
                        writeln!(out, "    style=filled; color={color};").unwrap();
                        let ids: Vec<String> = n.members.iter().map(ToString::to_string).collect();
                        writeln!(out, "    {};", ids.join("; ")).unwrap();
                        out.push_str("  }\n");
                        i += 1;
                    }
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }

    /// The trust graph with the conduit's hops highlighted.
    pub fn export_conduit(&self, conduit: &Conduit) -> String {
        let mut out = String::from("digraph epinet {\n");
        self.dot_nodes(&mut out, |_, name| name.to_owned());
        let hops: Vec<(AgentId, AgentId)> = conduit.path.windows(2).map(|w| (w[0], w[1])).collect();
        self.dot_trust_edges(&mut out, &hops);
        out.push_str("}\n");
        out
    }
}
