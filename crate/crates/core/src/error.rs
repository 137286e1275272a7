use thiserror::Error;

use crate::formats::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("population {population} exceeds the safety limit of {limit} cells")]
    PopulationLimit { population: usize, limit: usize },

    #[error("coordinates overflow the representable range")]
    CoordinateOverflow,

    #[error("empty cell set has no canonical form")]
    EmptyPattern,

    #[error("invalid collision spec: {0}")]
    InvalidSpec(String),

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("catalog version {found} is not supported (expected {expected})")]
    Version { found: u64, expected: u64 },

    #[error("catalog schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
