//! Finite algorithms on abstract geometric types of Markov partitions.
//!
//! The crate is `no_std` and needs only `alloc`. Modules, bottom up:
//!
//! * [`types`]: the geometric type and its validation.
//! * [`matrix`]: incidence matrices with exact integer powers.
//! * [`algebra`]: powers `T^m` and the horizontal type `H(T)`.
//! * [`paclass`]: obstruction tests and the bounded pseudo-Anosov decision.
//! * [`symbolic`]: boundary codes and periodic orbits.
//! * [`refine`]: refinements along periodic orbits.
//! * [`singular`]: the prong census and genus.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod matrix;
pub mod paclass;
pub mod refine;
pub mod singular;
pub mod symbolic;
pub mod types;

mod error;

pub use error::Error;
pub use matrix::{incidence_matrix, oracle_power_matrix, IncidenceMatrix};
pub use types::{validate, Cell, GeometricType, HLabel, Sign, VLabel, ValidationReport, Violation};

/// Default cap on the number of cells materialized by [`algebra::power`].
pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

/// Default cap on orbit periods for enumeration.
pub const DEFAULT_MAX_PERIOD: usize = 12;
