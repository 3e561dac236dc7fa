//! Epistemic networks.
//!
//! An [`Epinet`] records what agents know and believe, including what they
//! know about each other's knowledge, together with the world's truths,
//! common-knowledge records, trust edges and where each agent's information
//! came from. On top of the store sit regime queries (distribution,
//! level-n commonality, covertness, neighborhoods), the trust calculus
//! (closure, security neighborhoods, conduits) and platform events that
//! turn messages, broadcasts, meetings and channels into epinet updates.
//!
//! ```
//! use epinet::{Epinet, Formula};
//! use epinet::platform::{Event, EventKind, Platform};
//!
//! let mut net = Epinet::new();
//! let alan = net.add_agent("Alan")?;
//! let betty = net.add_agent("Betty")?;
//! let p = net.add_prop("p", "the quarterly numbers are in")?;
//! net.set_world_truth(&p, true)?;
//! net.assert_fact(Formula::knows(alan, Formula::atom("p")))?;
//!
//! let mut platform = Platform::new(net);
//! platform.apply_event(Event::new(EventKind::DirectMessage, alan, "p").to([betty]))?;
//!
//! let net = platform.net();
//! assert!(net.holds(&Formula::knows(betty, Formula::knows(alan, Formula::atom("p")))));
//! assert!(!net.holds(&Formula::knows(alan, Formula::knows(betty, Formula::atom("p")))));
//! # Ok::<(), epinet::Error>(())
//! ```

mod cliques;
pub mod conduit;
pub mod dot;
mod error;
pub mod formula;
mod ids;
mod net;
pub mod platform;
pub mod regimes;
mod snapshot;
pub mod trust;

pub use cliques::{maximal_cliques, maximal_sets};
pub use conduit::{Conduit, ConduitKind, Directionality, InfoClass};
pub use dot::DotMode;
pub use error::{Error, Result};
pub use formula::Formula;
pub use ids::{AgentId, EventId, PropId};
pub use net::{Agent, CkRecord, Config, Epinet, Hop, Prop, Provenance, StateLabel};
pub use regimes::{CommonalityReport, Level, Neighborhood, NeighborhoodKind};
pub use trust::{Authentication, TrustEdge, TrustKind};
