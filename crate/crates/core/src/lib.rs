//! Gaussian-shift tail bounds for normalized sums of bounded zero-mean random
//! variables, with exact and Monte Carlo oracles to check them against.

pub mod bounds;
pub mod digits;
pub mod error;
pub mod monotonicity;
pub mod normal;
pub mod oracle;
pub mod selfcheck;

pub use bounds::{BoundKind, Bounds, Constants, CrossingPoints};
pub use error::{Error, Result};
