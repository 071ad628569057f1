use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{poisson_binomial_pmf, sigma, skellam_pmf, skellam_sigma, ParameterVector};
use crate::{Error, Result};

/// The largest `sigma * P(S = i)` of one distribution and its distance to `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub input_descriptor: String,
    pub sigma_value: f64,
    pub argmax_index: i64,
    pub max_product: f64,
    pub margin: f64,
    pub m_used: f64,
}

impl BoundReport {
    /// True when the margin is non-negative up to [`super::MARGIN_TOLERANCE`].
    pub fn holds(&self) -> bool {
        self.margin >= -super::MARGIN_TOLERANCE
    }
}

/// `max_i sigma * P(S = i)` for a Poisson-binomial sum, against `m_used`.
pub fn check_bound(p: &ParameterVector, m_used: f64) -> BoundReport {
    check_bound_labelled(p, m_used, format!("poisson-binomial n={}", p.len()))
}

fn check_bound_labelled(p: &ParameterVector, m_used: f64, input_descriptor: String) -> BoundReport {
    let table = poisson_binomial_pmf(p);
    let sigma_value = sigma(p);
    let argmax_index = table.argmax();
    let max_product = sigma_value * table.get(argmax_index);
    BoundReport {
        input_descriptor,
        sigma_value,
        argmax_index,
        max_product,
        margin: m_used - max_product,
        m_used,
    }
}

/// `max_i sqrt(x + y) * P(X - Y = i)` over `i_range`. The range must contain
/// both `floor(x - y)` and `ceil(x - y)` so that the mode cannot be cut off.
pub fn check_skellam_bound(x: f64, y: f64, i_range: RangeInclusive<i64>, m_used: f64) -> Result<BoundReport> {
    for (name, v) in [("x", x), ("y", y)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} must be a finite value >= 0, got {v}")));
        }
    }
    let (lo, hi) = (*i_range.start(), *i_range.end());
    let mode_lo = (x - y).floor() as i64;
    let mode_hi = (x - y).ceil() as i64;
    if lo > mode_lo || hi < mode_hi {
        return Err(Error::RangeMissesMode {
            lo,
            hi,
            mode_lo,
            mode_hi,
        });
    }

    let sigma_value = skellam_sigma(x, y);
    let mut argmax_index = lo;
    let mut best = f64::NEG_INFINITY;
    for i in i_range {
        let prob = skellam_pmf(x, y, i);
        if prob > best {
            best = prob;
            argmax_index = i;
        }
    }
    let max_product = sigma_value * best;
    Ok(BoundReport {
        input_descriptor: format!("skellam x={x} y={y} range={lo}:{hi}"),
        sigma_value,
        argmax_index,
        max_product,
        margin: m_used - max_product,
        m_used,
    })
}

/// The parameter vector drawn for trial `trial` of a random sweep: length
/// uniform in `[1, n_max]`, entries uniform in `[0, 1)`. Each trial has its
/// own ChaCha stream, so any trial can be regenerated on its own.
pub fn random_vector(seed: u64, trial: u64, n_max: usize) -> ParameterVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = rng.gen_range(1..=n_max.max(1));
    let probs = (0..n).map(|_| rng.gen::<f64>()).collect();
    ParameterVector::new(probs).expect("uniform draws lie in [0, 1)")
}

/// Runs [`check_bound`] on `trials` random vectors and returns the report with
/// the smallest margin (earliest trial on ties).
pub fn search_random_vectors(n_max: usize, trials: u64, seed: u64, m_ref: f64) -> Result<BoundReport> {
    if trials == 0 || n_max == 0 {
        return Err(Error::InvalidArgument("trials and n_max must be positive".into()));
    }
    let margins: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| check_bound(&random_vector(seed, t, n_max), m_ref).margin)
        .collect();
    let mut worst = 0;
    for (t, &m) in margins.iter().enumerate() {
        if m < margins[worst] {
            worst = t;
        }
    }
    let p = random_vector(seed, worst as u64, n_max);
    Ok(check_bound_labelled(
        &p,
        m_ref,
        format!("random trial {worst} of {trials} (seed {seed}, n={})", p.len()),
    ))
}
