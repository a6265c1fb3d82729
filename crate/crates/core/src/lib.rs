//! Verification laboratory for sums of high-order Dirichlet characters.
//!
//! The crate computes short, maximal and logarithmic character sums, level
//! sets, pretentious distances, prime level-set profiles and large-spectrum
//! sets, exactly where the underlying quantity is an integer, and runs the
//! identity and inequality suites that `charsum verify` exposes.

pub mod arith;
pub mod bounds;
pub mod characters;
pub mod error;
pub mod identity;
pub mod pretentious;
pub mod report;
pub mod spectrum;
pub mod sum_engine;
pub mod util;

pub use error::Error;
