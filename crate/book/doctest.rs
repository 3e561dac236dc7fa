// mdbook cannot run listings that depend on workspace crates, so each
// chapter is pulled in as the doc comment of an empty module and the
// listings run as ordinary doctests under `cargo test`.

#[cfg(doctest)]
#[doc = include_str!("src/introduction.md")]
mod introduction {}
#[cfg(doctest)]
#[doc = include_str!("src/knowledge.md")]
mod knowledge {}
#[cfg(doctest)]
#[doc = include_str!("src/regimes.md")]
mod regimes {}
#[cfg(doctest)]
#[doc = include_str!("src/trust.md")]
mod trust {}
#[cfg(doctest)]
#[doc = include_str!("src/platforms.md")]
mod platforms {}
#[cfg(doctest)]
#[doc = include_str!("src/scenarios.md")]
mod scenarios {}
#[cfg(doctest)]
#[doc = include_str!("src/snapshots.md")]
mod snapshots {}
