//! Superoptimal continued fractions.
//!
//! Regular continued fraction digits are generated exactly from quadratic
//! surds, certified rational enclosures or seeded random reals. A region
//! `Δ ⊂ [0,1)×[0,1]` of the natural extension of the Gauss map determines an
//! induced map, and recording the matrices of successive visits to `Δ` yields
//! a semi-regular continued fraction whose convergents are a subsequence of
//! the RCF convergents.

pub mod analytics;
pub mod arith;
pub mod cf;
mod error;
pub mod induce;
pub mod region;
mod ser;

pub use error::{Error, Result};

/// First 500 fractional decimal digits of `π − 3` and `e − 2`.
pub mod constants {
    pub const PI_MINUS_3: &str = include_str!("../data/pi_minus_3.txt");
    pub const E_MINUS_2: &str = include_str!("../data/e_minus_2.txt");
}
