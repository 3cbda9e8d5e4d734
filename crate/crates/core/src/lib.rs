//! Reversible payload shaping for steganographic embedders.
//!
//! A message of `N` bits is turned into `2^K` equivalent payloads of `N + K`
//! bits (a `K`-bit index followed by the message XOR a keyed mask). Each
//! candidate is run through an unchanged embedder, and the one that disturbs
//! the cover least under a chosen objective is kept. The receiver strips the
//! index, regenerates the mask and recovers the message.
//!
//! Two embedders are provided: LSB substitution scored by histogram KL
//! divergence ([`shaping::KlObjective`]), and a syndrome-coding cost model
//! scored by its minimum weighted flip cost ([`stc::SyndromeCostObjective`]).
//! The [`harness`] module runs the simulation campaigns that measure both.

pub mod bits;
pub mod error;
pub mod harness;
pub mod imaging;
pub mod lsb;
pub mod metrics;
pub mod rng;
pub mod shaping;
pub mod stc;

pub use bits::BitVec;
pub use error::{Error, Result};
pub use imaging::{CoverModel, Image};
pub use lsb::PositionList;
pub use shaping::{ShapingConfig, ShapingResult};
