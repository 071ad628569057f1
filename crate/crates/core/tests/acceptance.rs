//! Acceptance run. Prints one PASS/FAIL line per criterion and exits with
//! status 1 if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pbound::bound::{
    c_ak, check_skellam_bound, compute_constants, random_vector, search_random_vectors, sharpness_value,
    single_binomial_scan, DEFAULT_TOLERANCE, MARGIN_TOLERANCE,
};
use pbound::dist::poisson_binomial_pmf;
use pbound::dist::poisson_pmf;
use pbound::numeric::CompensatedSum;
use pbound::special::{
    log_phi_curvature, m_of_u, m_prime_at_1, phi_infinity, phi_infinity_integral, phi_n_integral, phi_n_series,
    QuadratureConfig, SeriesConfig,
};

const PUBLISHED_U_STAR: f64 = 0.394_988_929_756_584_51;
const PUBLISHED_M_STAR: f64 = 0.468_822_355_499_395_33;
/// Gap `M - sharpness_value(16384, u_star)` from a 50-digit evaluation.
const SHARPNESS_ANCHOR: f64 = 7.1537e-6;
const RANDOM_SEED: u64 = 42;

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: &[(&str, bool)], detail: String) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    let detail = if failed.is_empty() {
        detail
    } else {
        format!("failed: {}; {detail}", failed.join(", "))
    };
    Outcome {
        pass: failed.is_empty(),
        detail,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

fn constant_reproduction() -> Outcome {
    let (c, elapsed) = timed(|| compute_constants(DEFAULT_TOLERANCE).unwrap());
    let du = (c.u_star - PUBLISHED_U_STAR).abs();
    let dm = (c.m_star - PUBLISHED_M_STAR).abs();
    outcome(
        &[
            ("u_star within 1e-10", du <= 1e-10),
            ("m_star within 1e-10", dm <= 1e-10),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!(
            "u_star={:.17} (|d|={du:.3e}), m_star={:.17} (|d|={dm:.3e}), {:.3} s",
            c.u_star,
            c.m_star,
            elapsed.as_secs_f64()
        ),
    )
}

fn subset_enumeration(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut out = vec![0.0; n + 1];
    for mask in 0u32..(1 << n) {
        let mut prob = 1.0;
        for (j, &pj) in p.iter().enumerate() {
            prob *= if mask & (1 << j) != 0 { pj } else { 1.0 - pj };
        }
        out[mask.count_ones() as usize] += prob;
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let (worst, elapsed) = timed(|| {
        let mut worst = 0.0f64;
        for trial in 0..500 {
            let p = random_vector(RANDOM_SEED, trial, 15);
            let table = poisson_binomial_pmf(&p);
            for (got, want) in table.values.iter().zip(subset_enumeration(p.probs())) {
                worst = worst.max((got - want).abs());
            }
        }
        worst
    });
    outcome(
        &[("entrywise 1e-13", worst <= 1e-13), ("runtime < 10 s", elapsed < Duration::from_secs(10))],
        format!("max |DP - enumeration| = {worst:.3e}, {:.3} s", elapsed.as_secs_f64()),
    )
}

/// `I0(z) = sum_k ((z/2)^k / k!)^2`, summed term by term from `k = 0`.
fn bessel_i0_ascending(z: f64) -> f64 {
    let half = 0.5 * z;
    let mut term = 1.0;
    let mut sum = CompensatedSum::new();
    sum.add(term);
    let mut k = 1.0;
    loop {
        let r = half / k;
        term *= r * r;
        sum.add(term);
        if term < 1e-20 * sum.value() && k > half {
            break;
        }
        k += 1.0;
    }
    sum.value()
}

fn cross_representation() -> Outcome {
    let quad = QuadratureConfig::default();
    let ((phi_n_gap, phi_inf_gap, bessel_gap), elapsed) = timed(|| {
        let mut phi_n_gap = 0.0f64;
        for n in 1..=50u64 {
            for j in 0..=20 {
                let u = n as f64 / 4.0 * j as f64 / 20.0;
                let s = phi_n_series(n, u).unwrap();
                let q = phi_n_integral(n, u, &quad).unwrap();
                phi_n_gap = phi_n_gap.max((s - q).abs());
            }
        }
        let mut phi_inf_gap = 0.0f64;
        let mut bessel_gap = 0.0f64;
        for j in 0..=1000 {
            let u = 10.0 * j as f64 / 1000.0;
            let s = phi_infinity(u, &SeriesConfig::sized_for(u)).unwrap();
            let q = phi_infinity_integral(u, &quad).unwrap();
            phi_inf_gap = phi_inf_gap.max((s - q).abs());
            let i0 = bessel_i0_ascending(2.0 * u);
            bessel_gap = bessel_gap.max(((s * (2.0 * u).exp() - i0) / i0).abs());
        }
        (phi_n_gap, phi_inf_gap, bessel_gap)
    });
    outcome(
        &[
            ("phi_n series vs integral 1e-11", phi_n_gap <= 1e-11),
            ("phi_inf series vs integral 1e-11", phi_inf_gap <= 1e-11),
            ("phi_inf e^{2u} vs I0 1e-12 relative", bessel_gap <= 1e-12),
            ("runtime < 5 s", elapsed < Duration::from_secs(5)),
        ],
        format!(
            "phi_n {phi_n_gap:.3e}, phi_inf {phi_inf_gap:.3e}, I0 rel {bessel_gap:.3e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn monotonicity() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (0u64, 0.0f64);
    let mut above_limit = 0.0f64;
    let mut checked = 0usize;
    for n in 1..200u64 {
        let cap = n as f64 / 4.0;
        for j in 0..=400 {
            let u = 0.125 * j as f64;
            if u > cap {
                break;
            }
            let here = phi_n_series(n, u).unwrap();
            let next = phi_n_series(n + 1, u).unwrap();
            let drop = here - next;
            if drop > worst {
                worst = drop;
                witness = (n, u);
            }
            let limit = phi_infinity(u, &SeriesConfig::sized_for(u)).unwrap();
            above_limit = above_limit.max(next - limit);
            checked += 1;
        }
    }
    outcome(
        &[
            ("phi_n <= phi_(n+1) + 1e-12", worst <= 1e-12),
            ("phi_n <= phi_inf + 1e-12", above_limit <= 1e-12),
        ],
        format!(
            "{checked} pairs, max phi_n - phi_(n+1) = {worst:.3e} at n={}, u={}; max phi_n - phi_inf = {above_limit:.3e}",
            witness.0, witness.1
        ),
    )
}

fn theorem_stress(m_star: f64) -> Outcome {
    let (report, elapsed) = timed(|| search_random_vectors(50, 100_000, RANDOM_SEED, m_star).unwrap());
    outcome(
        &[
            ("margin >= -1e-9", report.margin >= -MARGIN_TOLERANCE),
            ("margin > 0", report.margin > 0.0),
            ("runtime < 60 s", elapsed < Duration::from_secs(60)),
        ],
        format!(
            "worst margin {:.6e} ({}, argmax {}), {:.3} s",
            report.margin,
            report.input_descriptor,
            report.argmax_index,
            elapsed.as_secs_f64()
        ),
    )
}

fn lemma_suite() -> Outcome {
    let inv_sqrt_e = (-0.5f64).exp();
    let inv_sqrt_2e = 1.0 / (2.0 * std::f64::consts::E).sqrt();
    let mut c_max = 0.0f64;
    let mut end_gap = 0.0f64;
    for a in 1..=500u64 {
        for k in 0..=a as i64 {
            c_max = c_max.max(c_ak(a, k));
        }
        end_gap = end_gap.max((c_ak(a, 0).ln() - c_ak(a, a as i64).ln()).abs());
    }
    let scan = single_binomial_scan(500);
    outcome(
        &[
            ("c_ak <= e^-1/2 + 1e-12", c_max <= inv_sqrt_e + 1e-12),
            ("scan <= 1/sqrt(2e) + 1e-9", scan.supremum <= inv_sqrt_2e + 1e-9),
            ("ln C_0 = ln C_a within 1e-12", end_gap <= 1e-12),
        ],
        format!(
            "max c_ak = {c_max:.15}, scan sup = {:.15} at (a={}, k={}), max |ln C_0 - ln C_a| = {end_gap:.3e}",
            scan.supremum, scan.a, scan.k
        ),
    )
}

fn sharpness(u_star: f64, m_star: f64) -> Outcome {
    let values: Vec<f64> = (0..=14).map(|j| sharpness_value(1 << j, u_star)).collect();
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let below = values.iter().all(|&v| v <= m_star);
    let gap = m_star - values[14];
    outcome(
        &[
            ("strictly increasing", increasing),
            ("bounded by m_star", below),
            ("final gap below anchor", gap < SHARPNESS_ANCHOR),
        ],
        format!("value(1) = {:.15}, gap at a=16384 = {gap:.6e} (anchor {SHARPNESS_ANCHOR:e})", values[0]),
    )
}

fn equality_cases(u_star: f64, m_star: f64) -> Outcome {
    let report = check_skellam_bound(u_star, u_star, -20..=20, m_star).unwrap();
    let bound = 1.0 / (2.0 * std::f64::consts::E).sqrt();
    let mut poisson_max = 0.0f64;
    for j in 1..=5000 {
        let x = 50.0 * j as f64 / 5000.0;
        let hi = (x + 12.0 * x.sqrt() + 20.0).ceil() as i64;
        for i in 0..=hi {
            poisson_max = poisson_max.max(x.sqrt() * poisson_pmf(x, i));
        }
    }
    outcome(
        &[
            ("skellam margin in [-1e-10, 1e-9]", (-1e-10..=1e-9).contains(&report.margin)),
            ("skellam argmax 0", report.argmax_index == 0),
            ("single Poisson <= 1/sqrt(2e) + 1e-12", poisson_max <= bound + 1e-12),
        ],
        format!(
            "skellam margin {:.3e} at i={}, single Poisson max {poisson_max:.15} (bound {bound:.15})",
            report.margin, report.argmax_index
        ),
    )
}

fn analytic_signs() -> Outcome {
    let slope = m_prime_at_1();
    let h = 1e-5;
    let fd = (m_of_u(1.0 + h) - m_of_u(1.0 - h)) / (2.0 * h);
    let mut positive = Vec::new();
    let mut max_curvature = f64::NEG_INFINITY;
    for j in 1..=200 {
        let u = 0.01 + (10.0 - 0.01) * j as f64 / 201.0;
        let c = log_phi_curvature(u, 1e-4);
        max_curvature = max_curvature.max(c);
        if !(c < 0.0) {
            positive.push(u);
        }
    }
    outcome(
        &[
            ("M'(1) < 0", slope < 0.0),
            ("M'(1) matches finite difference 1e-8", (slope - fd).abs() <= 1e-8),
            ("log_phi_curvature < 0 at 200 points", positive.is_empty()),
        ],
        format!(
            "M'(1) = {slope:.15}, FD = {fd:.15}; curvature non-negative at {}/200 points (max {max_curvature:.6})",
            positive.len()
        ),
    )
}

fn main() -> ExitCode {
    let constants = compute_constants(DEFAULT_TOLERANCE).expect("constants converge");
    let (u_star, m_star) = (constants.u_star, constants.m_star);

    let criteria: Vec<Criterion> = vec![
        ("constant reproduction", Box::new(constant_reproduction)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("cross-representation", Box::new(cross_representation)),
        ("monotonicity in n", Box::new(monotonicity)),
        ("theorem stress", Box::new(move || theorem_stress(m_star))),
        ("single-binomial lemma", Box::new(lemma_suite)),
        ("sharpness", Box::new(move || sharpness(u_star, m_star))),
        ("equality cases", Box::new(move || equality_cases(u_star, m_star))),
        ("analytic signs", Box::new(analytic_signs)),
    ];

    let mut failures = 0;
    for (name, run) in &criteria {
        let result = run();
        if !result.pass {
            failures += 1;
        }
        println!("{} {name}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
