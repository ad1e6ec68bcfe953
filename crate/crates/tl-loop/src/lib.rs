//! Toolkit for the dense O(1) loop model viewed as a continuous-time Markov
//! process on link patterns.
//!
//! The crate builds the Temperley-Lieb diagram monoid at loop weight 1, the
//! link-pattern state spaces for closed and periodic boundary conditions,
//! the exact integer intensity matrix and its stationary vector, fully
//! packed loop tallies refined by boundary connectivity, finite-size
//! conformal spectra, and a Gillespie sampler for the same dynamics.

pub mod counts;
pub mod diagram;
pub mod link;
pub mod markov;
pub mod error;
pub mod fpl;
pub mod fpl_dp;
mod lapack;
pub mod spectra;

pub use error::{Error, Result};
