//! Exact Loschmidt echo of a transverse-field Ising chain coupled to a
//! central two-level system.
//!
//! - [`spectrum`]: momentum grids, dispersions, Bogoliubov angles, mode factors.
//! - [`echo`]: the echo product, qubit purity, short-time model, revivals, scaling.
//! - [`oracle`]: pair-block and full spin-chain brute-force checks.
//! - [`harness`]: parameter sweeps, analyses and file output behind the CLI.

pub mod echo;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod spectrum;

pub use error::{Error, Result};
