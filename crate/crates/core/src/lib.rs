//! Hybrid ramp quantum secret sharing.
//!
//! Constructions that split each player's share into a quantum part and a
//! classical part, a dense simulator to run them, and an exhaustive verifier
//! that checks the access structure of a dealt scheme by enumerating every
//! random choice the dealer could make.

pub mod error;
pub mod classical;
pub mod codes;
pub mod encrypt;
pub mod field;
pub mod qudit;
pub mod scheme;
pub mod verify;

pub use error::{Error, Result};
