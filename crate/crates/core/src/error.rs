use std::io;

use thiserror::Error;

/// Errors produced by the shaping library, the harness and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("path longer than cover: requested {requested} positions from {available} pixels")]
    PathTooLong { requested: usize, available: usize },

    #[error("payload of {payload} bits does not fit a path of {path} positions")]
    PayloadTooLong { payload: usize, path: usize },

    #[error("invalid image dimensions {width}x{height}: {reason}")]
    Dimensions {
        width: usize,
        height: usize,
        reason: &'static str,
    },

    #[error("shaping index {h} out of range for K={k}")]
    IndexOutOfRange { h: u64, k: u32 },

    #[error("shaping overhead K={0} exceeds the supported maximum of 24")]
    OverheadTooLarge(u32),

    #[error("payload of {len} bits is shorter than the {k}-bit index")]
    PayloadTooShort { len: usize, k: u32 },

    #[error("distribution has zero total mass")]
    EmptyDistribution,

    #[error("degenerate baseline: {0} is not positive")]
    DegenerateBaseline(f64),

    #[error("empty group")]
    EmptyGroup,

    #[error("insufficient pixels: need {needed}, image has {available}")]
    InsufficientPixels { needed: usize, available: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed PGM: {0}")]
    Pgm(String),

    #[error("malformed bit file: {0}")]
    BitFile(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 3 for anything that came from reading or
    /// writing a file, 2 for every other (configuration or argument) error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Csv(_) | Error::Pgm(_) | Error::BitFile(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
