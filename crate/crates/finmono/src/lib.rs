//! Drivers around `finmono-core`: file formats (character tables, trace
//! tables, sweep checkpoints), rayon-parallel scans whose output does not
//! depend on the worker count, and the pieces behind the `finmono` binary.

pub mod metadata;
pub mod parallel;
pub mod report;
pub mod sweep;
pub mod table;
pub mod verify;

mod error;

pub use error::{Error, Result};
