//! Library side of the `carnot` command: spec parsing, the subcommands and
//! report rendering. `main.rs` only handles arguments and exit codes.

pub mod commands;
pub mod report;
pub mod spec;

use thiserror::Error;

pub use report::{Format, RunReport};

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const VERDICT_FALSE: i32 = 3;
    pub const NOT_FOUND: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },

    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },

    #[error("{path}: {msg}")]
    Field { path: String, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] carnot_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        exit::INPUT
    }
}
