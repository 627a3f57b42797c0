//! Command-line tool, JSON formats and parallel search for `ultranorm-core`.

pub mod cli;
pub mod formats;
pub mod search;

pub use cli::{run, Io, MAX_ENUM_VAR};
