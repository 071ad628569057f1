use serde::{Deserialize, Serialize};

use crate::numeric::golden_section_max;
use crate::special::{m_derivative, m_of_u};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-13;

/// Step for the central difference of `M'` in the Newton polish.
const POLISH_STEP: f64 = 1e-5;

/// The maximizer `u_star` of `M(u) = sqrt(2u) phi_inf(u)` and `m_star = M(u_star)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantResult {
    pub u_star: f64,
    pub m_star: f64,
    pub tolerance: f64,
    pub evaluations: usize,
}

/// Golden-section maximization of `M` on `[0, 1]` down to `tolerance`, then one
/// Newton step on `M'(u) = 0`.
///
/// `M` is flat at its peak, so comparisons of `M` alone stop resolving `u_star`
/// around 1e-8; the Newton step uses the analytic `M'` with a central
/// difference for `M''` and lands within a few ulps.
pub fn compute_constants(tolerance: f64) -> Result<ConstantResult> {
    if !(1e-15..=1e-6).contains(&tolerance) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in [1e-15, 1e-6], got {tolerance}"
        )));
    }
    let golden = golden_section_max(m_of_u, 0.0, 1.0, tolerance);
    let mut evaluations = golden.evaluations;

    let u0 = golden.x;
    let slope = m_derivative(u0);
    let curvature = (m_derivative(u0 + POLISH_STEP) - m_derivative(u0 - POLISH_STEP)) / (2.0 * POLISH_STEP);
    evaluations += 3;

    let mut u_star = u0;
    if curvature < 0.0 {
        let candidate = u0 - slope / curvature;
        // The golden bracket already pins u_star to ~1e-8; a larger jump means
        // the derivative was unusable.
        if candidate > 0.0 && candidate < 1.0 && (candidate - u0).abs() < 1e-6 {
            u_star = candidate;
        }
    }
    let m_star = m_of_u(u_star);
    evaluations += 1;

    Ok(ConstantResult {
        u_star,
        m_star,
        tolerance,
        evaluations,
    })
}
