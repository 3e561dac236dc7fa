//! Scenario files for epinet.
//!
//! A scenario is a line-oriented script: declarations (`agent`, `prop`,
//! `truth`, `trust`, `channel`, ...), event statements that drive a
//! [`Platform`](epinet::platform::Platform), and queries whose answers end
//! up in a JSON [`Report`].
//!
//! ```
//! let text = "agent Alan\nagent Betty\nprop p\ntruth p true\nfact K(Alan, p)\n\
//!             event direct_message sender=Alan visible=Betty payload=p\n\
//!             query level p group=Alan,Betty\n";
//! let scenario = epinet_cli::parse_scenario(text)?;
//! let run = epinet_cli::run(&scenario, std::path::Path::new("."))?;
//! assert_eq!(run.report.results[0].result, serde_json::json!(1));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod ast;
mod cmd;
mod error;
mod parse;
mod print;
mod run;

pub use cmd::{main_with, Cli};
pub use error::{ParseError, RunError};
pub use parse::{parse_query, parse_scenario, Symbols, APPLIES, QUERIES, STATEMENTS};
pub use print::{query_text, quote, stmt_text, Names};
pub use run::{digest, eval_query, run, AgentEntry, QueryResult, Report, Run};
