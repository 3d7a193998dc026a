//! Simulator and analysis toolkit for a prepare-transform-measure scenario
//! in which one preparer (Alice) encodes three bits into a single qubit, an
//! intermediate party (Bob) decodes one bit with a non-destructive binary
//! instrument, and a final party (Charlie) decodes another bit from whatever
//! leaves Bob's lab.
//!
//! The crate provides:
//! - exact 2x2 linear algebra primitives ([`qubit`]),
//! - strategy construction, simulation and serialization ([`scenario`]),
//! - correlation witnesses, the quantum trade-off curve, classical bounds and
//!   sharpness certification ([`witness`]),
//! - derivative-free optimization of Charlie's score at fixed Bob score
//!   ([`optimizer`]),
//! - certified randomness rates against several witness classes
//!   ([`randomness`]),
//! - a command line interface ([`cli`]).

pub mod cli;
pub mod error;
pub mod optimizer;
pub mod qubit;
pub mod randomness;
pub mod scenario;
mod search;
pub mod witness;

pub use error::{Error, Result};
