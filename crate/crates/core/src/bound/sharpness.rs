//! The extremal family: `n = 2a` Bernoullis, half with success probability
//! `u / a` and half with `1 - u / a`, observed at `i = a`.

use crate::dist::ParameterVector;
use crate::special::psi_n;

/// `sqrt(2u (1 - u/a)) * sum_k C(a, k)^2 (u/a)^{2k} (1 - u/a)^{2(a-k)}`, which is
/// `sigma * P(S = a)` for the family above. NaN unless `0 < u <= a`.
pub fn sharpness_value(a: u64, u: f64) -> f64 {
    let af = a as f64;
    if a == 0 || !(u > 0.0 && u <= af) {
        return f64::NAN;
    }
    let p = u / af;
    (2.0 * u * (1.0 - p)).sqrt() * psi_n(a, p)
}

/// The Bernoulli vector behind [`sharpness_value`].
pub fn sharpness_vector(a: u64, u: f64) -> crate::Result<ParameterVector> {
    let p = u / a as f64;
    let mut probs = vec![p; a as usize];
    probs.extend(std::iter::repeat_n(1.0 - p, a as usize));
    ParameterVector::new(probs)
}
