//! Collision statistics of k-bit random number generation.
//!
//! The crate computes how many collisions (exactly repeated draws) a uniform
//! k-bit generator is expected to produce, the probability of at least one
//! collision and the exact distribution of the collision count, all with
//! formulations that survive double-precision cancellation. It also ships the
//! generators and the IEEE-754 toolkit needed to check those numbers
//! empirically.

pub mod analytics;
pub mod cli;
pub mod empirics;
pub mod error;
pub mod ieee754;
pub mod prng;
pub mod stable_math;

pub use error::{Error, Result};
