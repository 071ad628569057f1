//! Constants, certification and extremal search for the uniform bound
//! `sigma * P(S = i) <= M`.

mod check;
mod constants;
mod lemma;
mod search;
mod sharpness;

pub use check::{check_bound, check_skellam_bound, random_vector, search_random_vectors, BoundReport};
pub use constants::{compute_constants, ConstantResult, DEFAULT_TOLERANCE};
pub use lemma::{c_ak, h_ratio, single_binomial_product, single_binomial_scan, SingleBinomialScan};
pub use search::{
    search_two_binomial, two_binomial_objective, Candidate, SearchConfig, SearchRecord, Strategy,
};
pub use sharpness::{sharpness_value, sharpness_vector};

/// Slack allowed before a negative margin counts as a violation of the bound.
pub const MARGIN_TOLERANCE: f64 = 1e-9;
