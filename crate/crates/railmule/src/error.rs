use std::fmt;

/// Crate-wide error type. Variants map one-to-one onto the failure modes
/// surfaced by the public API.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed WKT input or invalid graph-construction parameters.
    #[error("map format error (line {line}): {msg}")]
    MapFormat { line: usize, msg: String },

    /// The two vertices lie in different connected components.
    #[error("no path between vertex {from} and vertex {to}")]
    NoPath { from: u32, to: u32 },

    /// A transfer was requested over a link with a non-positive bitrate.
    #[error("bad link: bitrate {bitrate} bit/s is not usable")]
    BadLink { bitrate: f64 },

    /// A message larger than the whole buffer can never be stored.
    #[error("message of {size} B exceeds buffer capacity {capacity} B")]
    TooLarge { size: u64, capacity: u64 },

    /// Scenario configuration rejected. `line` is set when the problem is
    /// attributable to a specific line of the config file.
    #[error("invalid config{}: {msg}", fmt_line(.line))]
    ConfigInvalid { line: Option<usize>, msg: String },

    /// Delivery probability is undefined when nothing was created.
    #[error("no messages were created")]
    NoMessages,

    /// An aggregate over an empty input set.
    #[error("empty input set")]
    EmptySet,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn fmt_line(line: &Option<usize>) -> String {
    match line {
        Some(n) => format!(" (line {n})"),
        None => String::new(),
    }
}

impl Error {
    pub fn config(msg: impl fmt::Display) -> Self {
        Error::ConfigInvalid { line: None, msg: msg.to_string() }
    }

    pub fn config_at(line: usize, msg: impl fmt::Display) -> Self {
        Error::ConfigInvalid { line: Some(line), msg: msg.to_string() }
    }

    pub fn map_format(line: usize, msg: impl fmt::Display) -> Self {
        Error::MapFormat { line, msg: msg.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
