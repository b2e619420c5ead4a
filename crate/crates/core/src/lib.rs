//! Exact enumeration of linear k-chord diagrams.
//!
//! A linear k-chord diagram partitions `k*n` linearly ordered vertices into
//! `n` blocks of size `k`. This crate counts diagrams by short chords,
//! connected components of short chords and non-crossing chords, using
//! several independent routes that can be checked against each other:
//!
//! * brute-force enumeration ([`diagram`]),
//! * closed forms and inclusion-exclusion ([`exact`]),
//! * recurrences ([`recurrence`]),
//! * coefficient extraction from truncated generating functions ([`series`]).
//!
//! [`asymptotics`] covers the Poisson and normal limits, [`memory`] the
//! generalized memory game on arbitrary boards, and [`cli`] the `kchord`
//! command-line front end.

pub mod asymptotics;
pub mod cli;
pub mod combinat;
pub mod diagram;
pub mod error;
pub mod exact;
pub mod interval;
pub mod memory;
pub mod recurrence;
pub mod series;
pub mod table;

pub use error::{Error, Result};

/// Arbitrary-precision signed integer used for every count.
pub type ExactInteger = num_bigint::BigInt;
/// Reduced rational with positive denominator.
pub type ExactRational = num_rational::BigRational;
