//! Collision probabilities of binomial and Poisson laws and the profile
//! `M(u) = sqrt(2u) * phi_inf(u)` whose maximum is the sharp constant.
//!
//! `psi_n(p)` is `P(U = V)` for two independent `B(n, p)` variables. Fixing the
//! variance budget `u = n p (1 - p)` turns it into `phi_n(u)`, which has an
//! equivalent Fourier form
//!
//! ```text
//! phi_n(u) = (1 / 2pi) * integral_0^{2pi} [1 - 2u (1 - cos t) / n]^n dt
//! ```
//!
//! and increases with `n` towards `phi_inf(u) = e^{-2u} I0(2u)`.

use std::f64::consts::{PI, SQRT_2};

use crate::dist::{binomial_pmf, poisson_pmf};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::{Error, Result};

/// Periodic trapezoid rule settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub initial_points: usize,
    pub tolerance: f64,
    pub max_doublings: u32,
}

impl QuadratureConfig {
    pub fn new(initial_points: usize, tolerance: f64, max_doublings: u32) -> Result<Self> {
        if initial_points < 8 || !initial_points.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "initial_points must be a power of two >= 8, got {initial_points}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quadrature tolerance must be positive, got {tolerance}"
            )));
        }
        if max_doublings == 0 {
            return Err(Error::InvalidArgument("max_doublings must be positive".into()));
        }
        Ok(Self {
            initial_points,
            tolerance,
            max_doublings,
        })
    }
}

impl Default for QuadratureConfig {
    /// 8 points doubled up to 2^18, successive values within 1e-13.
    fn default() -> Self {
        Self {
            initial_points: 8,
            tolerance: 1e-13,
            max_doublings: 15,
        }
    }
}

/// Truncation settings for the squared-Poisson series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub relative_cutoff: f64,
    pub max_terms: usize,
}

impl SeriesConfig {
    pub fn new(relative_cutoff: f64, max_terms: usize) -> Result<Self> {
        if !(relative_cutoff > 0.0 && relative_cutoff <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "relative_cutoff must lie in (0, 1e-6], got {relative_cutoff}"
            )));
        }
        if max_terms < 64 {
            return Err(Error::InvalidArgument(format!(
                "max_terms must be at least 64, got {max_terms}"
            )));
        }
        Ok(Self {
            relative_cutoff,
            max_terms,
        })
    }

    /// Default cutoff with enough terms for argument `u`: the squared Poisson
    /// weights span roughly `13 sqrt(u)` indices above the cutoff.
    pub fn sized_for(u: f64) -> Self {
        let base = Self::default();
        let need = 64 + (32.0 * u.max(0.0).sqrt()).ceil() as usize;
        Self {
            max_terms: base.max_terms.max(need),
            ..base
        }
    }
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            relative_cutoff: 1e-18,
            max_terms: 4096,
        }
    }
}

/// `psi_n(p) = sum_k B^n_k(p)^2`, the probability that two independent
/// `B(n, p)` draws coincide.
pub fn psi_n(n: u64, p: f64) -> f64 {
    compensated_sum((0..=n as i64).map(|k| {
        let b = binomial_pmf(n, k, p);
        b * b
    }))
}

/// Smaller root of `n p (1 - p) = u`.
pub fn p_of_u(n: u64, u: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || !(u >= 0.0) || u > nf / 4.0 {
        return Err(Error::InvalidVariance { n, u });
    }
    let r = u / nf;
    // 1/2 (1 - sqrt(1 - 4r)) rewritten to avoid cancellation for small r.
    Ok(2.0 * r / (1.0 + (1.0 - 4.0 * r).max(0.0).sqrt()))
}

/// `phi_n(u) = psi_n(p_n(u))` by direct summation.
pub fn phi_n_series(n: u64, u: f64) -> Result<f64> {
    Ok(psi_n(n, p_of_u(n, u)?))
}

/// Mean of a `2pi`-periodic function by the trapezoid rule, doubling the
/// number of nodes until two successive estimates agree.
pub fn periodic_mean<F>(f: F, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut points = cfg.initial_points;
    let mut acc: CompensatedSum = (0..points)
        .map(|j| f(2.0 * PI * j as f64 / points as f64))
        .collect();
    let mut estimate = acc.value() / points as f64;

    for _ in 0..cfg.max_doublings {
        for j in 0..points {
            acc.add(f(2.0 * PI * (j as f64 + 0.5) / points as f64));
        }
        points *= 2;
        let refined = acc.value() / points as f64;
        if (refined - estimate).abs() < cfg.tolerance {
            return Ok(refined);
        }
        estimate = refined;
    }
    Err(Error::NonConvergence {
        what: "periodic trapezoid rule",
        iterations: cfg.max_doublings as usize,
    })
}

/// `phi_n(u)` from its Fourier integral.
pub fn phi_n_integral(n: u64, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    p_of_u(n, u)?;
    let nf = n as f64;
    let scale = 4.0 * u / nf;
    let integrand = |theta: f64| {
        let s = (0.5 * theta).sin();
        // 2u (1 - cos t) / n = 4u sin^2(t/2) / n
        let base = 1.0 - scale * s * s;
        match i32::try_from(n) {
            Ok(e) => base.powi(e),
            Err(_) => base.powf(nf),
        }
    };
    periodic_mean(integrand, cfg)
}

/// `sum_k P(X = k) P(X = k + shift)` for `X ~ Poisson(u)`, summed outwards from
/// the Poisson mode.
fn shifted_square_series(u: f64, shift: u64, cfg: &SeriesConfig) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::InvalidArgument(format!("u must be a finite value >= 0, got {u}")));
    }
    let term = |k: u64| poisson_pmf(u, k as i64) * poisson_pmf(u, (k + shift) as i64);
    let mode = u.floor() as u64;
    let mut acc = CompensatedSum::new();
    acc.add(term(mode));
    let mut used = 1usize;

    let mut k = mode;
    while k > 0 {
        k -= 1;
        let t = term(k);
        acc.add(t);
        used += 1;
        if t < cfg.relative_cutoff * acc.value() {
            break;
        }
        if used > cfg.max_terms {
            return Err(Error::NonConvergence {
                what: "squared Poisson series",
                iterations: used,
            });
        }
    }

    let mut k = mode;
    loop {
        k += 1;
        let t = term(k);
        acc.add(t);
        used += 1;
        if t < cfg.relative_cutoff * acc.value() && (k as f64) > u {
            break;
        }
        if used > cfg.max_terms {
            return Err(Error::NonConvergence {
                what: "squared Poisson series",
                iterations: used,
            });
        }
    }
    Ok(acc.value())
}

/// `phi_inf(u) = e^{-2u} sum_k (u^k / k!)^2`, equal to `e^{-2u} I0(2u)`.
pub fn phi_infinity(u: f64, cfg: &SeriesConfig) -> Result<f64> {
    shifted_square_series(u, 0, cfg)
}

/// `phi_inf(u)` from `(1 / 2pi) * integral e^{-2u (1 - cos t)} dt`.
pub fn phi_infinity_integral(u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::InvalidArgument(format!("u must be >= 0, got {u}")));
    }
    periodic_mean(
        |theta| {
            let s = (0.5 * theta).sin();
            (-4.0 * u * s * s).exp()
        },
        cfg,
    )
}

/// `e^{-2u} I1(2u) = sum_k P(X = k) P(X = k + 1)`, the companion series
/// needed for derivatives of `phi_inf`.
fn phi_infinity_companion(u: f64) -> f64 {
    shifted_square_series(u, 1, &SeriesConfig::sized_for(u)).unwrap_or(f64::NAN)
}

/// `M(u) = sqrt(2u) phi_inf(u)`. `M(0) = 0`; NaN for negative or non-finite `u`.
pub fn m_of_u(u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    match phi_infinity(u, &SeriesConfig::sized_for(u)) {
        Ok(phi) => (2.0 * u).sqrt() * phi,
        Err(_) => f64::NAN,
    }
}

/// Analytic `M'(u)` for `u > 0`, using `phi_inf' = 2 (e^{-2u} I1(2u) - phi_inf)`.
pub fn m_derivative(u: f64) -> f64 {
    if !(u > 0.0) {
        return f64::NAN;
    }
    let Ok(phi) = phi_infinity(u, &SeriesConfig::sized_for(u)) else {
        return f64::NAN;
    };
    let companion = phi_infinity_companion(u);
    let root = (2.0 * u).sqrt();
    phi / root + 2.0 * root * (companion - phi)
}

/// `h(u) = ln phi_inf(u)`.
pub fn log_phi_infinity(u: f64) -> f64 {
    phi_infinity(u, &SeriesConfig::sized_for(u))
        .map(f64::ln)
        .unwrap_or(f64::NAN)
}

/// Central second difference of `ln phi_inf` at `u`.
pub fn log_phi_curvature(u: f64, step: f64) -> f64 {
    let h = log_phi_infinity;
    (h(u + step) - 2.0 * h(u) + h(u - step)) / (step * step)
}

/// Bracket of `M'(1)`: `4 sum 1 / (k! (k+1)!) - 3 sum 1 / (k!)^2`.
pub fn m_prime_at_1_bracket() -> f64 {
    const CUTOFF: f64 = 1e-18;
    let mut inv_fact = 1.0; // 1 / k!
    let mut cross = CompensatedSum::new();
    let mut square = CompensatedSum::new();
    for k in 0u32.. {
        let next_inv_fact = inv_fact / f64::from(k + 1);
        let c = inv_fact * next_inv_fact;
        let s = inv_fact * inv_fact;
        cross.add(c);
        square.add(s);
        if c < CUTOFF * cross.value() && s < CUTOFF * square.value() {
            break;
        }
        inv_fact = next_inv_fact;
    }
    4.0 * cross.value() - 3.0 * square.value()
}

/// `M'(1) = (e^{-2} / sqrt 2) [4 sum 1 / (k! (k+1)!) - 3 sum 1 / (k!)^2]`.
pub fn m_prime_at_1() -> f64 {
    (-2.0f64).exp() / SQRT_2 * m_prime_at_1_bracket()
}

/// Cauchy-Schwarz envelope `sqrt(x + y) sqrt(phi_a(x) phi_b(y))` of the
/// two-binomial objective.
pub fn cs_envelope(a: u64, b: u64, x: f64, y: f64) -> Result<f64> {
    let phi_a = phi_n_series(a, x)?;
    let phi_b = phi_n_series(b, y)?;
    Ok((x + y).sqrt() * (phi_a * phi_b).sqrt())
}
