//! Almost dual universal₂ hashing over F₂: code and hash families, exact
//! universality measurement, decoding and secrecy bounds, and small
//! classical-quantum state numerics.

pub mod error;
pub mod gf2;
pub mod hashfam;
pub mod universality;
pub mod bounds;
pub mod cqstate;
pub mod simulator;
pub mod verify;
pub mod rational;

pub use error::{Error, Result};
