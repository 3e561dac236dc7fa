use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::{AgentId, EventId, PropId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    DirectMessage,
    AckRead,
    Broadcast,
    Reaction,
    CoPresence,
    ChannelPost,
    Recording,
    ProfileView,
    PetitionSign,
    Leak,
}

impl EventKind {
    pub const ALL: [EventKind; 10] = [
        EventKind::DirectMessage,
        EventKind::AckRead,
        EventKind::Broadcast,
        EventKind::Reaction,
        EventKind::CoPresence,
        EventKind::ChannelPost,
        EventKind::Recording,
        EventKind::ProfileView,
        EventKind::PetitionSign,
        EventKind::Leak,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::DirectMessage => "direct_message",
            EventKind::AckRead => "ack_read",
            EventKind::Broadcast => "broadcast",
            EventKind::Reaction => "reaction",
            EventKind::CoPresence => "co_presence",
            EventKind::ChannelPost => "channel_post",
            EventKind::Recording => "recording",
            EventKind::ProfileView => "profile_view",
            EventKind::PetitionSign => "petition_sign",
            EventKind::Leak => "leak",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = EventKind::ALL.iter().map(|k| k.as_str()).collect();
                format!(
                    "unknown event kind `{s}`, expected one of {}",
                    names.join(", ")
                )
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flags {
    pub covert: bool,
    pub acknowledged: bool,
    pub consent: bool,
}

impl Flags {
    fn is_default(&self) -> bool {
        *self == Flags::default()
    }
}

/// A platform communication primitive.
///
/// Field use by kind:
///
/// * `direct_message`: `visible` and `hidden` (bcc) recipients; `thread`
///   names the conversation (a new one is opened under the event id if
///   absent); `flags.acknowledged` adds read receipts.
/// * `ack_read`: `sender` is the reader, `visible` the original sender.
/// * `broadcast`: `visible` is the audience, everyone else if empty.
/// * `reaction`: `sender` reacts to `visible`'s post of `payload`.
/// * `co_presence`: attendees are `sender` and `visible`.
/// * `channel_post`: `channel` is required.
/// * `recording`: attendees are `sender` and `visible`, viewers `hidden`.
/// * `profile_view`: `sender` views `visible`'s profile `payload`.
/// * `petition_sign`: `thread` names the petition, `payload` is the
///   signer's support prop; `visible` may name the initiator on the first
///   signature.
/// * `leak`: `sender` discloses to `visible`; the group left behind is
///   `scope`, else the channel members, else the thread participants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<EventId>,
    pub kind: EventKind,
    pub sender: AgentId,
    #[serde(
        default,
        deserialize_with = "one_or_many",
        skip_serializing_if = "BTreeSet::is_empty"
    )]
    pub visible: BTreeSet<AgentId>,
    #[serde(
        default,
        deserialize_with = "one_or_many",
        skip_serializing_if = "BTreeSet::is_empty"
    )]
    pub hidden: BTreeSet<AgentId>,
    pub payload: PropId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thread: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    #[serde(
        default,
        deserialize_with = "opt_one_or_many",
        skip_serializing_if = "Option::is_none"
    )]
    pub scope: Option<BTreeSet<AgentId>>,
    #[serde(default, skip_serializing_if = "Flags::is_default")]
    pub flags: Flags,
}

impl Event {
    pub fn new(kind: EventKind, sender: AgentId, payload: impl Into<PropId>) -> Self {
        Event {
            id: None,
            kind,
            sender,
            visible: BTreeSet::new(),
            hidden: BTreeSet::new(),
            payload: payload.into(),
            thread: None,
            channel: None,
            scope: None,
            flags: Flags::default(),
        }
    }

    pub fn to(mut self, agents: impl IntoIterator<Item = AgentId>) -> Self {
        self.visible.extend(agents);
        self
    }

    pub fn bcc(mut self, agents: impl IntoIterator<Item = AgentId>) -> Self {
        self.hidden.extend(agents);
        self
    }

    pub fn in_thread(mut self, thread: &str) -> Self {
        self.thread = Some(thread.to_owned());
        self
    }

    pub fn in_channel(mut self, channel: &str) -> Self {
        self.channel = Some(channel.to_owned());
        self
    }

    pub fn within(mut self, scope: impl IntoIterator<Item = AgentId>) -> Self {
        self.scope = Some(scope.into_iter().collect());
        self
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(AgentId),
    Many(BTreeSet<AgentId>),
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<AgentId>, D::Error> {
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(a) => BTreeSet::from([a]),
        OneOrMany::Many(s) => s,
    })
}

fn opt_one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BTreeSet<AgentId>>, D::Error> {
    one_or_many(d).map(Some)
}
