use std::collections::{BTreeMap, BTreeSet};

use epinet::platform::{Event, EventKind, Flags, Platform};
use epinet::{AgentId, Epinet, Formula, Level, PropId};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Op {
    Dm {
        from: usize,
        to: Vec<usize>,
        bcc: Vec<usize>,
        thread: Option<u8>,
    },
    Ack {
        reader: usize,
        sender: usize,
    },
    Broadcast {
        from: usize,
    },
    React {
        who: usize,
        to: usize,
    },
    Meet {
        who: Vec<usize>,
    },
    Post {
        from: usize,
    },
}

fn op(n: usize) -> impl Strategy<Value = Op> {
    let a = 0..n;
    let few = prop::collection::vec(0..n, 0..3);
    prop_oneof![
        4 => (a.clone(), few.clone(), few.clone(), prop::option::of(0u8..2))
            .prop_map(|(from, to, bcc, thread)| Op::Dm { from, to, bcc, thread }),
        1 => (a.clone(), a.clone()).prop_map(|(reader, sender)| Op::Ack { reader, sender }),
        1 => a.clone().prop_map(|from| Op::Broadcast { from }),
        1 => (a.clone(), a.clone()).prop_map(|(who, to)| Op::React { who, to }),
        1 => few.prop_map(|who| Op::Meet { who }),
        1 => a.prop_map(|from| Op::Post { from }),
    ]
}

fn setup(n: usize) -> (Platform, Vec<AgentId>) {
    let mut net = Epinet::new();
    let ids: Vec<AgentId> = (0..n)
        .map(|i| net.add_agent(&format!("u{i}")).unwrap())
        .collect();
    let p = net.add_prop("p", "").unwrap();
    net.set_world_truth(&p, true).unwrap();
    net.assert_fact(Formula::knows(ids[0], Formula::atom("p")))
        .unwrap();
    let mut pl = Platform::new(net);
    if n > 2 {
        let org: BTreeSet<AgentId> = ids.iter().copied().collect();
        let inner: BTreeSet<AgentId> = ids[..2].iter().copied().collect();
        pl.add_channel("inner", inner, org, true).unwrap();
    }
    (pl, ids)
}

fn event(ids: &[AgentId], op: &Op) -> Event {
    let set = |xs: &[usize]| xs.iter().map(|&i| ids[i]).collect::<BTreeSet<_>>();
    match op {
        Op::Dm {
            from,
            to,
            bcc,
            thread,
        } => {
            let mut e = Event::new(EventKind::DirectMessage, ids[*from], "p")
                .to(set(to))
                .bcc(set(bcc));
            if let Some(t) = thread {
                e = e.in_thread(&format!("t{t}"));
            }
            e
        }
        Op::Ack { reader, sender } => {
            Event::new(EventKind::AckRead, ids[*reader], "p").to([ids[*sender]])
        }
        Op::Broadcast { from } => Event::new(EventKind::Broadcast, ids[*from], "p"),
        Op::React { who, to } => Event::new(EventKind::Reaction, ids[*who], "p").to([ids[*to]]),
        Op::Meet { who } => {
            let mut rest = set(who);
            let host = rest.pop_first().unwrap_or(ids[0]);
            Event::new(EventKind::CoPresence, host, "p").to(rest)
        }
        Op::Post { from } => Event::new(EventKind::ChannelPost, ids[*from], "p")
            .in_channel("inner")
            .with_flags(Flags {
                covert: true,
                ..Flags::default()
            }),
    }
}

fn ops() -> impl Strategy<Value = (usize, Vec<Op>)> {
    (3usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(op(n), 1..12)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn concealed_agents_stay_unmentioned((n, ops) in ops()) {
        let (mut pl, ids) = setup(n);
        for o in &ops {
            let before: BTreeSet<Formula> = pl.net().facts().cloned().collect();
            // Invalid events are rejected whole; the rest must keep the store sound.
            let _ = pl.apply_event(event(&ids, o));
            prop_assert!(pl.net().invariant_violations().is_empty());
            // What a viewer knew before the concealment began is theirs to keep;
            // nothing gained while it lasts may mention the hidden agent.
            for &(viewer, hidden) in pl.concealed_pairs() {
                for f in pl.net().facts_of(viewer).filter(|f| !before.contains(*f)) {
                    prop_assert!(!f.mentions_agent(hidden), "{} gained {} about {}", viewer, f, hidden);
                }
            }
        }
    }

    #[test]
    fn same_events_same_bytes((n, ops) in ops()) {
        let run = || {
            let (mut pl, ids) = setup(n);
            let results: Vec<bool> = ops.iter().map(|o| pl.apply_event(event(&ids, o)).is_ok()).collect();
            (results, pl.net().snapshot())
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn covert_posts_reach_members_only((n, ops) in ops()) {
        let (mut pl, ids) = setup(n);
        let p = PropId::new("p");
        let org: BTreeSet<AgentId> = ids.iter().copied().collect();
        let inner: BTreeSet<AgentId> = ids[..2].iter().copied().collect();
        let mut posted = false;
        for o in ops.iter().filter(|o| matches!(o, Op::Post { .. })) {
            let outside_before: Vec<usize> = ids[2..].iter().map(|&x| pl.net().facts_of(x).count()).collect();
            // Posts by non-members are refused.
            posted |= pl.apply_event(event(&ids, o)).is_ok();
            let outside_after: Vec<usize> = ids[2..].iter().map(|&x| pl.net().facts_of(x).count()).collect();
            prop_assert_eq!(outside_before, outside_after);
        }
        if posted {
            prop_assert!(pl.net().covert(&p, &inner, &org).unwrap());
        }
    }

    #[test]
    fn acknowledged_messages_are_mutual(n in 2usize..=4, to in 1usize..4) {
        let (mut pl, ids) = setup(n.max(2));
        let r = ids[to % ids.len()].max(ids[1]);
        pl.apply_event(Event::new(EventKind::DirectMessage, ids[0], "p").to([r])).unwrap();
        let g = BTreeSet::from([ids[0], r]);
        let p = PropId::new("p");
        prop_assert_eq!(pl.net().commonality_level(&g, &p).unwrap().level, Level::Finite(1));
        prop_assert!(pl.net().holds(&Formula::believes(ids[0], Formula::knows(r, Formula::atom("p")))));
        pl.apply_event(Event::new(EventKind::AckRead, r, "p").to([ids[0]])).unwrap();
        prop_assert!(pl.net().commonality_level(&g, &p).unwrap().level.at_least(2));
    }
}

/// The level the message rule should produce after `n` messages, replayed
/// independently: message k from s to r adds K(r, F) for every fact F of s
/// about p, plus K(r, p).
fn replayed_level(n: usize) -> u32 {
    let mut facts: BTreeMap<u8, BTreeSet<Vec<u8>>> = BTreeMap::new();
    facts.entry(0).or_default().insert(vec![0]);
    let (mut s, mut r) = (0u8, 1u8);
    for _ in 0..n {
        let mut gained: BTreeSet<Vec<u8>> = facts[&s]
            .iter()
            .map(|c| [vec![r], c.clone()].concat())
            .collect();
        gained.insert(vec![r]);
        facts.entry(r).or_default().extend(gained);
        std::mem::swap(&mut s, &mut r);
    }
    let all: BTreeSet<Vec<u8>> = facts
        .values()
        .flat_map(|fs| fs.iter().cloned())
        .flat_map(|c| (0..c.len()).map(move |i| c[i..].to_vec()))
        .collect();
    let mut d = 1;
    loop {
        let want = |start: u8| (0..d).map(|i| (start + i as u8) % 2).collect::<Vec<u8>>();
        if !(all.contains(&want(0)) && all.contains(&want(1))) {
            return d as u32 - 1;
        }
        d += 1;
    }
}

#[test]
fn reply_levels_follow_the_replay() {
    let (mut pl, ids) = setup(2);
    let g = BTreeSet::from([ids[0], ids[1]]);
    let p = PropId::new("p");
    pl.apply_event(
        Event::new(EventKind::DirectMessage, ids[0], "p")
            .to([ids[1]])
            .in_thread("t"),
    )
    .unwrap();
    for n in 1..=10 {
        let level = pl.net().commonality_level(&g, &p).unwrap().level;
        assert_eq!(
            level,
            Level::Finite(replayed_level(n)),
            "after {n} messages"
        );
        assert_eq!(level, Level::Finite(n as u32));
        let (from, to) = if n % 2 == 1 {
            (ids[1], ids[0])
        } else {
            (ids[0], ids[1])
        };
        pl.reply_in_thread("t", from, to, &p).unwrap();
    }
}

#[test]
fn meetings_answer_every_chain_within_the_bound() {
    let (mut pl, ids) = setup(3);
    pl.apply_event(Event::new(EventKind::CoPresence, ids[0], "p").to([ids[1], ids[2]]))
        .unwrap();
    let max = pl.net().config().max_depth as usize;
    let mut chain = Vec::new();
    for i in 0..max {
        chain.push(ids[(i * 7 + i / 3) % 3]);
        chain.dedup();
    }
    let p = PropId::new("p");
    assert!(pl.net().holds(&Formula::knows_chain(&chain, &p)));
    let g: BTreeSet<AgentId> = ids.iter().copied().collect();
    assert_eq!(
        pl.net().commonality_level(&g, &p).unwrap().level,
        Level::Infinite
    );
}
