//! Poisson-binomial, binomial, Poisson and Skellam probability mass functions,
//! and the sharp uniform bound `sigma * P(S = i) <= M` for sums of independent
//! non-homogeneous Bernoulli variables.
//!
//! The crate is split into three layers:
//!
//! * [`dist`]: exact PMFs, standard deviations and the two-binomial convolution.
//! * [`special`]: the collision probabilities `psi_n`, `phi_n`, `phi_inf`, the
//!   profile `M(u)` and its derivative diagnostics.
//! * [`bound`]: computation of the constants `(u_star, M)`, the single-binomial
//!   chain, the sharpness family, certification and extremal search.

pub mod bound;
pub mod dist;
mod error;
pub mod numeric;
pub mod special;

pub use error::{Error, Result};
