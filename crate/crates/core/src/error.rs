use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("cost vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("path step {step}: {from} -> {to} is not an edge of the graph")]
    MalformedPath { step: usize, from: Vertex, to: Vertex },
    #[error("labels belong to different search states")]
    StateMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scenario line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("invalid JSON document: {0}")]
    Json(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("planner requires exactly {expected} objectives, instance has {found}")]
    ObjectiveCount { expected: usize, found: usize },
    #[error("search deadline expired")]
    Deadline,
    #[error("agent {agent} has no path to its goal within the horizon")]
    Infeasible { agent: usize },
    #[error("oracle state budget of {budget} exceeded; shrink the instance")]
    OracleTooBig { budget: usize },
}
