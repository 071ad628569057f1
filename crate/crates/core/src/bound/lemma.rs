//! The single-binomial chain: `sqrt(2a lam (1 - lam)) B^a_k(lam)` is maximized in
//! `lam` at `(k + 1/2) / (a + 1)`, giving `C^a_k`, whose largest values sit at
//! `k = 0` and `k = a` and stay below `e^{-1/2}`.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::dist::{binomial_pmf, ln_binomial};

/// `sqrt(2 a lam (1 - lam)) * B^a_k(lam)`.
pub fn single_binomial_product(a: u64, k: i64, lam: f64) -> f64 {
    (2.0 * a as f64 * lam * (1.0 - lam)).sqrt() * binomial_pmf(a, k, lam)
}

/// The maximizing success probability `(k + 1/2) / (a + 1)`.
fn optimal_lambda(a: u64, k: u64) -> f64 {
    (k as f64 + 0.5) / (a as f64 + 1.0)
}

/// `C^a_k = C(a, k) sqrt(2a) (k + 1/2)^{k + 1/2} (a - k + 1/2)^{a - k + 1/2} / (a + 1)^{a + 1}`,
/// evaluated in log space. Zero for `k` outside `[0, a]`.
pub fn c_ak(a: u64, k: i64) -> f64 {
    let Ok(k) = u64::try_from(k) else {
        return 0.0;
    };
    if k > a || a == 0 {
        return 0.0;
    }
    // The expression is symmetric under k <-> a - k; fold to the lower half so
    // that both sides produce identical bits.
    let k = k.min(a - k);
    let lam = optimal_lambda(a, k);
    let ln_value = ln_binomial(a, k, lam) + 0.5 * (2.0 * a as f64 * lam * (1.0 - lam)).ln();
    ln_value.exp()
}

/// `H(x) = x (x - 1/2)^{x - 1/2} / (x + 1/2)^{x + 1/2}` for `x >= 1`, so that
/// `C^a_{k+1} / C^a_k = H(a - k) / H(k + 1)`.
pub fn h_ratio(x: f64) -> f64 {
    (x.ln() + (x - 0.5) * (x - 0.5).ln() - (x + 0.5) * (x + 0.5).ln()).exp()
}

/// Largest `sigma * P(X = k)` over `X ~ B(a, lam)` with `a <= a_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleBinomialScan {
    pub supremum: f64,
    pub a: u64,
    pub k: u64,
    pub lambda: f64,
}

/// Scans every `a in 1..=a_max`, `k in 0..=a` at the optimal `lam`. Each
/// candidate is `sqrt(a lam (1 - lam)) B^a_k(lam)`, i.e. the product with the
/// `sqrt 2` removed. Ties keep the smallest `(a, k)`.
pub fn single_binomial_scan(a_max: u64) -> SingleBinomialScan {
    let mut best = SingleBinomialScan {
        supremum: 0.0,
        a: 0,
        k: 0,
        lambda: 0.0,
    };
    for a in 1..=a_max {
        for k in 0..=a {
            let lambda = optimal_lambda(a, k);
            let value = single_binomial_product(a, k as i64, lambda) / SQRT_2;
            if value > best.supremum {
                best = SingleBinomialScan {
                    supremum: value,
                    a,
                    k,
                    lambda,
                };
            }
        }
    }
    best
}
