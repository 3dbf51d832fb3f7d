//! Weil descent for Artin-Schreier and Kummer type exponential sums over
//! finite fields: field towers, polynomial rings, the descent construction,
//! hypothesis certificates, exact point counting and explicit bounds.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod bounds;
pub mod certify;
pub mod counter;
pub mod descent;
pub mod error;
pub mod gf;
pub mod poly;

pub use error::{Error, Result};
