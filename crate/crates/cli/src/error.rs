use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("line {line}, column {column}: `{name}` is used before it is declared")]
    UndeclaredName {
        line: usize,
        column: usize,
        name: String,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::UndeclaredName { line, .. } => *line,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("line {line}: {source}")]
    Engine { line: usize, source: epinet::Error },
    #[error(
        "line {line}: query@{at} asks for a state after {at} events, but the scenario has {events}"
    )]
    NoSuchStep {
        line: usize,
        at: usize,
        events: usize,
    },
    #[error("line {line}: {}: {source}", path.display())]
    Io {
        line: usize,
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn line(&self) -> usize {
        match self {
            RunError::Engine { line, .. }
            | RunError::NoSuchStep { line, .. }
            | RunError::Io { line, .. } => *line,
        }
    }
}
