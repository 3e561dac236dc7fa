use std::collections::{BTreeMap, BTreeSet};

use epinet::platform::{Event, EventKind, Flags, Preset};
use epinet::{
    AgentId, ConduitKind, Directionality, DotMode, Formula, NeighborhoodKind, PropId, TrustKind,
};
use epinet_cli::ast::{Apply, Query, Scenario, Statement, Stmt};
use epinet_cli::parse_scenario;
use proptest::prelude::*;

const NAMES: [&str; 5] = ["Ann", "Bob", "Cid_2", "dee-x", "Émile"];
const PROPS: [&str; 3] = ["p", "q.memo", "r2"];
const CHANNELS: [&str; 2] = ["ops", "all hands"];

fn agent(n: usize) -> impl Strategy<Value = AgentId> {
    (1..=n as u32).prop_map(AgentId::new)
}

fn agents(n: usize) -> impl Strategy<Value = BTreeSet<AgentId>> {
    prop::collection::btree_set(agent(n), 1..=n)
}

fn prop_id() -> impl Strategy<Value = PropId> {
    prop_oneof![
        prop::sample::select(&PROPS[..]).prop_map(PropId::new),
        // Engine-named props need no declaration.
        Just(PropId::new("trust:a1>a2:full")),
    ]
}

fn formula(n: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop_id().prop_map(Formula::atom),
        (agent(n), prop_id()).prop_map(|(a, p)| Formula::would_know(a, p)),
    ];
    leaf.prop_recursive(6, 24, 1, move |inner| {
        prop_oneof![
            (agent(n), inner.clone()).prop_map(|(a, f)| Formula::knows(a, f)),
            (agent(n), inner.clone()).prop_map(|(a, f)| Formula::believes(a, f)),
            inner.prop_map(Formula::not),
        ]
    })
}

fn text() -> impl Strategy<Value = String> {
    "[ -~]{0,10}|[a-zé\\n\"\\\\ ]{0,6}"
}

fn thread() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,4}|[a-z, ]{1,5}|\"[a-z]{1,3}"
}

fn event(n: usize) -> impl Strategy<Value = Event> {
    (
        prop::sample::select(&EventKind::ALL[..]),
        agent(n),
        prop_id(),
        prop::option::of(agents(n)),
        prop::option::of(agents(n)),
        prop::option::of(thread()),
        prop::option::of(prop::sample::select(&CHANNELS[..])),
        prop::option::of(agents(n)),
        any::<(bool, bool, bool)>(),
    )
        .prop_map(
            |(
                kind,
                sender,
                payload,
                visible,
                hidden,
                thread,
                channel,
                scope,
                (covert, acknowledged, consent),
            )| {
                let mut e = Event::new(kind, sender, payload);
                e.visible = visible.unwrap_or_default();
                e.hidden = hidden.unwrap_or_default();
                e.thread = thread;
                e.channel = channel.map(str::to_owned);
                e.scope = scope;
                e.flags = Flags {
                    covert,
                    acknowledged,
                    consent,
                };
                e
            },
        )
}

fn neighborhood_kind() -> impl Strategy<Value = NeighborhoodKind> {
    prop_oneof![
        Just(NeighborhoodKind::Distributed),
        Just(NeighborhoodKind::Mutual),
        (3u32..9).prop_map(NeighborhoodKind::Level),
        Just(NeighborhoodKind::Common),
    ]
}

fn dir() -> impl Strategy<Value = Directionality> {
    prop_oneof![Just(Directionality::OneWay), Just(Directionality::Corridor)]
}

fn query(n: usize) -> impl Strategy<Value = Query> {
    prop_oneof![
        formula(n).prop_map(Query::Holds),
        (agent(n), prop_id()).prop_map(|(agent, prop)| Query::State { agent, prop }),
        (prop_id(), prop::option::of(agents(n)))
            .prop_map(|(prop, scope)| Query::Distribution { prop, scope }),
        (prop_id(), agents(n)).prop_map(|(prop, group)| Query::Level { prop, group }),
        (prop_id(), agents(n), agents(n)).prop_map(|(prop, sg, g)| Query::Covert { prop, sg, g }),
        (prop_id(), neighborhood_kind())
            .prop_map(|(prop, kind)| Query::Neighborhoods { prop, kind }),
        prop::collection::btree_map(agent(n), prop_id(), 1..=n)
            .prop_map(|commitments| Query::Mobilization { commitments }),
        Just(Query::TrustNeighborhoods),
        Just(Query::SecurityNeighborhoods),
        (
            agent(n),
            agent(n),
            prop_oneof![Just(ConduitKind::Trust), Just(ConduitKind::Security)],
            dir()
        )
            .prop_map(|(from, to, kind, directionality)| Query::Conduit {
                from,
                to,
                kind,
                directionality
            }),
        (agent(n), prop_id()).prop_map(|(agent, prop)| Query::Classify { agent, prop }),
        (agent(n), agents(n)).prop_map(|(claimant, group)| Query::Authenticate { claimant, group }),
        prop_oneof![
            Just(DotMode::AgentsTrust),
            prop_id().prop_map(DotMode::Knowledge),
            prop_id().prop_map(DotMode::Neighborhoods),
        ]
        .prop_map(Query::Graph),
    ]
}

fn apply(n: usize) -> impl Strategy<Value = Apply> {
    prop_oneof![
        Just(Apply::Closure),
        (agent(n), prop_id(), prop::option::of(agents(n))).prop_map(|(origin, prop, audience)| {
            Apply::Propagate {
                origin,
                prop,
                audience,
            }
        }),
        agents(n).prop_map(|members| Apply::DeriveSecurityCk { members }),
        (agent(n), agent(n), dir()).prop_map(|(from, to, directionality)| {
            Apply::EstablishConduit {
                from,
                to,
                directionality,
            }
        }),
    ]
}

fn action_args(n: usize) -> impl Strategy<Value = BTreeMap<String, Vec<String>>> {
    let value = prop_oneof![
        prop::sample::select(&NAMES[..n]).prop_map(str::to_owned),
        "[a-z ]{1,6}",
    ];
    let values = prop_oneof![
        value.clone().prop_map(|v| vec![v]),
        prop::collection::vec(
            prop::sample::select(&NAMES[..n]).prop_map(str::to_owned),
            2..4
        ),
    ];
    prop::collection::btree_map("[a-z_]{1,6}", values, 0..4)
}

fn body(n: usize) -> impl Strategy<Value = Stmt> {
    prop_oneof![
        (prop_id(), any::<bool>()).prop_map(|(prop, value)| Stmt::Truth { prop, value }),
        formula(n).prop_map(Stmt::Fact),
        formula(n).prop_map(Stmt::Retract),
        (
            agent(n),
            agent(n),
            prop::sample::select(&TrustKind::ALL[..])
        )
            .prop_map(|(from, to, kind)| Stmt::Trust { from, to, kind }),
        text().prop_map(|path| Stmt::TrustCsv { path }),
        event(n).prop_map(Stmt::Event),
        (thread(), agent(n), agent(n), prop_id()).prop_map(|(thread, from, to, payload)| {
            Stmt::Reply {
                thread,
                from,
                to,
                payload,
            }
        }),
        text().prop_map(|path| Stmt::EventLog { path }),
        (
            prop_oneof![
                Just(("email", "send")),
                Just(("zoom", "meet")),
                Just(("fax", "send"))
            ],
            action_args(n)
        )
            .prop_map(|((p, a), args)| Stmt::Action {
                preset: p.into(),
                action: a.into(),
                args
            }),
        apply(n).prop_map(Stmt::Apply),
        (prop::option::of(0usize..20), query(n)).prop_map(|(at, query)| Stmt::Query { at, query }),
    ]
}

/// Declarations first, then anything that refers to them.
fn scenario() -> impl Strategy<Value = Scenario> {
    (2usize..=NAMES.len()).prop_flat_map(|n| {
        (
            prop::collection::vec(text(), PROPS.len()),
            prop::collection::vec((agents(n), agents(n), any::<bool>()), CHANNELS.len()),
            prop::collection::vec(body(n), 0..24),
        )
            .prop_map(move |(statements, channels, rest)| {
                let mut stmts: Vec<Stmt> = NAMES[..n].iter().map(|&name| Stmt::Agent { name: name.into() }).collect();
                stmts.extend(PROPS.iter().zip(statements).map(|(&name, statement)| Stmt::Prop {
                    name: name.into(),
                    statement,
                }));
                let fax = r#"{"name":"fax","description":"a \"fax\"","actions":{"send":[{"event":{"kind":"broadcast","sender":"$from","payload":"$p"}}]}}"#;
                stmts.push(Stmt::Preset(Preset::from_json(fax).unwrap()));
                for (id, (members, extra, covert)) in CHANNELS.iter().zip(channels) {
                    stmts.push(Stmt::Channel {
                        id: (*id).into(),
                        host: members.union(&extra).copied().collect(),
                        members,
                        covert,
                    });
                }
                stmts.extend(rest);
                Scenario {
                    statements: stmts
                        .into_iter()
                        .enumerate()
                        .map(|(i, stmt)| Statement { line: i + 1, stmt })
                        .collect(),
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(s in scenario()) {
        let text = s.to_string();
        let back = parse_scenario(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_string(), text);
    }
}
