//! The `epinet` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use epinet::{DotMode, Epinet};

use crate::error::{ParseError, RunError};
use crate::parse::{parse_query, parse_scenario, Symbols};
use crate::run::{eval_query, run};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_ENGINE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "epinet", version, about = "Run epistemic network scenarios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and print its report as JSON on stdout.
    Run {
        file: PathBuf,
        /// Also print a table on stderr.
        #[arg(long)]
        pretty: bool,
        /// Write the final snapshot here.
        #[arg(long, value_name = "PATH")]
        snapshot: Option<PathBuf>,
        /// `dot:<mode>:<path>`, e.g. `dot:knowledge_p(p):out.dot`.
        #[arg(long, value_name = "SPEC")]
        export: Vec<String>,
    },
    /// Answer one query against a snapshot.
    Query {
        snapshot: PathBuf,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        query: Vec<String>,
    },
    /// Parse a scenario without running it.
    Check { file: PathBuf },
}

enum Failure {
    Parse(String),
    Engine(String),
    Io(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Engine(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// `dot:<mode>:<path>`. The mode may itself contain `:` (`knowledge:p`), so
/// the path is everything after the last one.
fn export_spec(spec: &str) -> Result<(DotMode, PathBuf), Failure> {
    let bad = || Failure::Parse(format!("--export {spec}: expected dot:<mode>:<path>"));
    let rest = spec.strip_prefix("dot:").ok_or_else(bad)?;
    let (mode, path) = rest.rsplit_once(':').ok_or_else(bad)?;
    let mode: DotMode = mode
        .parse()
        .map_err(|e: String| Failure::Parse(format!("--export {spec}: {e}")))?;
    Ok((mode, PathBuf::from(path)))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match cli.command {
        Command::Check { file } => {
            let scenario = parse_scenario(&text(&file)?)?;
            writeln!(
                out,
                "{}: {} statements",
                file.display(),
                scenario.statements.len()
            )
            .map_err(io)?;
        }
        Command::Run {
            file,
            pretty,
            snapshot,
            export,
        } => {
            let exports = export
                .iter()
                .map(|s| export_spec(s))
                .collect::<Result<Vec<_>, _>>()?;
            let scenario = parse_scenario(&text(&file)?)?;
            let base = file.parent().unwrap_or(Path::new(""));
            let r = run(&scenario, base)?;
            let net = r.platform.net();
            for (mode, path) in exports {
                let dot = net
                    .export_graph(&mode)
                    .map_err(|e| Failure::Engine(e.to_string()))?;
                write(&path, dot.as_bytes())?;
            }
            if let Some(path) = snapshot {
                write(&path, &net.snapshot())?;
            }
            out.write_all(r.report.to_json().as_bytes()).map_err(io)?;
            if pretty {
                err.write_all(r.report.to_table().as_bytes()).map_err(io)?;
            }
        }
        Command::Query { snapshot, query } => {
            let net = Epinet::load(&read(&snapshot)?)
                .map_err(|e| Failure::Parse(format!("{}: {e}", snapshot.display())))?;
            let q = parse_query(&query.join(" "), &Symbols::from_net(&net))?;
            let v = eval_query(&net, &q).map_err(|e| Failure::Engine(e.to_string()))?;
            let mut s = serde_json::to_string_pretty(&v).expect("results serialize");
            s.push('\n');
            out.write_all(s.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

/// Runs the command line and returns the exit code: 0 on success, 1 for
/// parse errors, 2 for engine errors, 3 for I/O errors.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Parse(m) => (EXIT_PARSE, m),
                Failure::Engine(m) => (EXIT_ENGINE, m),
                Failure::Io(m) => (EXIT_IO, m),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
