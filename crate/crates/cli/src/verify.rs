use pbound::bound::{
    c_ak, check_skellam_bound, search_random_vectors, search_two_binomial, sharpness_value, single_binomial_scan,
    ConstantResult, SearchConfig, MARGIN_TOLERANCE,
};
use pbound::special::{
    log_phi_curvature, m_of_u, m_prime_at_1, phi_infinity, phi_infinity_integral, phi_n_integral, phi_n_series,
    QuadratureConfig, SeriesConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::VerifyArgs;
use crate::commands::{constants_used, Outcome};
use crate::envelope::OutputEnvelope;
use crate::error::CliError;

#[derive(Debug, Serialize)]
struct Family {
    name: &'static str,
    pass: bool,
    witness: Value,
}

fn family(name: &'static str, pass: bool, witness: Value) -> Family {
    Family { name, pass, witness }
}

fn inv_sqrt_2e() -> f64 {
    1.0 / (2.0 * std::f64::consts::E).sqrt()
}

fn random(args: &VerifyArgs, m: f64) -> Result<Family, CliError> {
    let r = search_random_vectors(args.n_max, args.trials, args.seed, m)?;
    Ok(family("random", r.holds(), serde_json::to_value(&r).unwrap()))
}

fn two_binomial(args: &VerifyArgs, m: f64) -> Family {
    let records = search_two_binomial(&SearchConfig::ladder(args.a_max), m);
    let best = records.first();
    let pass = best.is_none_or(|r| r.objective <= m + MARGIN_TOLERANCE);
    family(
        "two-binomial-search",
        pass,
        json!({ "best": best, "gap_to_m": best.map(|r| m - r.objective) }),
    )
}

fn lemma(args: &VerifyArgs) -> Family {
    let inv_sqrt_e = (-0.5f64).exp();
    let mut c_max = 0.0f64;
    let mut c_arg = (0, 0);
    for a in 1..=args.a_max {
        for k in 0..=a {
            let c = c_ak(a, k as i64);
            if c > c_max {
                c_max = c;
                c_arg = (a, k);
            }
        }
    }
    let scan = single_binomial_scan(args.a_max);
    let pass = c_max <= inv_sqrt_e + 1e-12 && scan.supremum <= inv_sqrt_2e() + 1e-9;
    family(
        "single-binomial-lemma",
        pass,
        json!({
            "single_binomial_supremum": scan.supremum,
            "supremum_at": { "a": scan.a, "k": scan.k, "lambda": scan.lambda },
            "bound": inv_sqrt_2e(),
            "max_c_ak": c_max,
            "max_c_ak_at": { "a": c_arg.0, "k": c_arg.1 },
        }),
    )
}

fn sharpness(args: &VerifyArgs, c: &ConstantResult) -> Family {
    let sizes: Vec<u64> = (0..64)
        .map(|j| 1u64 << j)
        .take_while(|&a| a <= args.sharpness_max.max(1))
        .collect();
    let values: Vec<f64> = sizes.iter().map(|&a| sharpness_value(a, c.u_star)).collect();
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let bounded = values.iter().all(|&v| v <= c.m_star + MARGIN_TOLERANCE);
    let last = *values.last().unwrap();
    family(
        "sharpness",
        increasing && bounded,
        json!({
            "sizes": sizes,
            "values": values,
            "strictly_increasing": increasing,
            "final_gap": c.m_star - last,
        }),
    )
}

fn monotonicity() -> Family {
    let mut worst = f64::NEG_INFINITY;
    let mut at = (0u64, 0.0f64);
    let mut above_limit = f64::NEG_INFINITY;
    for n in 1..200u64 {
        let cap = n as f64 / 4.0;
        for j in 0..=200 {
            let u = 0.25 * j as f64;
            if u > cap {
                break;
            }
            let here = phi_n_series(n, u).unwrap();
            let next = phi_n_series(n + 1, u).unwrap();
            if here - next > worst {
                worst = here - next;
                at = (n, u);
            }
            let limit = phi_infinity(u, &SeriesConfig::sized_for(u)).unwrap();
            above_limit = above_limit.max(next - limit);
        }
    }
    family(
        "monotonicity-in-n",
        worst <= 1e-12 && above_limit <= 1e-12,
        json!({ "max_decrease": worst, "at": { "n": at.0, "u": at.1 }, "max_excess_over_limit": above_limit }),
    )
}

fn cross_representation() -> Result<Family, CliError> {
    let quad = QuadratureConfig::default();
    let mut phi_n_gap = 0.0f64;
    for n in 1..=50u64 {
        for j in 0..=20 {
            let u = n as f64 / 4.0 * j as f64 / 20.0;
            phi_n_gap = phi_n_gap.max((phi_n_series(n, u)? - phi_n_integral(n, u, &quad)?).abs());
        }
    }
    let mut phi_inf_gap = 0.0f64;
    for j in 0..=200 {
        let u = 10.0 * j as f64 / 200.0;
        let s = phi_infinity(u, &SeriesConfig::sized_for(u))?;
        phi_inf_gap = phi_inf_gap.max((s - phi_infinity_integral(u, &quad)?).abs());
    }
    Ok(family(
        "cross-representation",
        phi_n_gap <= 1e-11 && phi_inf_gap <= 1e-11,
        json!({ "phi_n_max_gap": phi_n_gap, "phi_inf_max_gap": phi_inf_gap }),
    ))
}

fn unimodality() -> Family {
    let values: Vec<f64> = (0..=10_000).map(|j| m_of_u(3.0 * j as f64 / 10_000.0)).collect();
    let rising: Vec<bool> = values.windows(2).map(|w| w[1] > w[0]).collect();
    let turns = rising.windows(2).filter(|w| w[0] != w[1]).count();
    let slope = m_prime_at_1();
    family(
        "unimodality",
        turns == 1 && slope < 0.0,
        json!({ "turning_points_on_0_3": turns, "m_prime_at_1": slope }),
    )
}

fn skellam_equality(c: &ConstantResult) -> Result<Family, CliError> {
    let r = check_skellam_bound(c.u_star, c.u_star, -20..=20, c.m_star)?;
    let pass = (-1e-10..=1e-9).contains(&r.margin) && r.argmax_index == 0;
    Ok(family("skellam-equality", pass, serde_json::to_value(&r).unwrap()))
}

/// `ln phi_inf` on `(0.01, 10)`; reported only.
fn curvature_diagnostic() -> Value {
    let points: Vec<f64> = (1..=200).map(|j| 0.01 + (10.0 - 0.01) * j as f64 / 201.0).collect();
    let curv: Vec<f64> = points.iter().map(|&u| log_phi_curvature(u, 1e-4)).collect();
    let negative = curv.iter().filter(|&&v| v < 0.0).count();
    json!({
        "points": points.len(),
        "negative": negative,
        "min": curv.iter().copied().fold(f64::INFINITY, f64::min),
        "max": curv.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

pub fn verify(args: &VerifyArgs, c: &ConstantResult) -> Result<Outcome, CliError> {
    if args.trials == 0 || args.n_max == 0 {
        return Err(CliError::Input("--trials and --n-max must be positive".into()));
    }
    let mut env = OutputEnvelope::new("verify");
    env.input("trials", args.trials);
    env.input("seed", args.seed);
    env.input("n_max", args.n_max);
    env.input("a_max", args.a_max);
    env.input("sharpness_max", args.sharpness_max);
    env.constants_used = Some(constants_used(c));

    let families = vec![
        random(args, c.m_star)?,
        two_binomial(args, c.m_star),
        lemma(args),
        sharpness(args, c),
        monotonicity(),
        cross_representation()?,
        unimodality(),
        skellam_equality(c)?,
    ];
    let first_failed = families.iter().find(|f| !f.pass).map(|f| f.name);
    env.result("all_passed", first_failed.is_none());
    env.result("families", &families);
    env.result("log_phi_curvature", curvature_diagnostic());

    let failure = first_failed.map(|name| CliError::Violation(format!("family '{name}' failed")));
    Ok(Outcome {
        envelope: env,
        failure,
        rows: None,
    })
}
