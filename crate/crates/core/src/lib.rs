//! Weighted Hardy inequalities for monotone functions on discrete partially
//! ordered measure spaces.

pub mod cli;
pub mod conditions;
pub mod error;
pub mod hardy;
pub mod monotone;
pub mod pomspace;
pub mod util;
pub mod verify;

pub use error::{Error, Result};
