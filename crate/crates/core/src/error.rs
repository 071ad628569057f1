use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability at position {index} is {value}, expected a value in [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("variance budget u = {u} is not attainable with n = {n} trials (need 0 <= u <= n/4)")]
    InvalidVariance { n: u64, u: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index range [{lo}, {hi}] does not cover the mode region [{mode_lo}, {mode_hi}]")]
    RangeMissesMode {
        lo: i64,
        hi: i64,
        mode_lo: i64,
        mode_hi: i64,
    },
}
