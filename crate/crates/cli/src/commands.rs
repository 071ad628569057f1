use pbound::bound::{check_bound, check_skellam_bound, compute_constants, BoundReport, ConstantResult, MARGIN_TOLERANCE};
use pbound::dist::{poisson_binomial_pmf, sigma, skellam_pmf, skellam_sigma, ParameterVector};

use crate::args::{CheckArgs, ConstantArgs, PmfArgs, ProbabilityInput};
use crate::envelope::{ConstantsUsed, OutputEnvelope};
use crate::error::CliError;
use crate::input::{parse_probs, parse_range, read_probs_file};

/// A finished command: the envelope is always printed, `failure` decides the
/// exit status.
pub struct Outcome {
    pub envelope: OutputEnvelope,
    pub failure: Option<CliError>,
    /// `(index, probability, sigma * probability)` rows for CSV output.
    pub rows: Option<Vec<(i64, f64, f64)>>,
}

impl Outcome {
    fn ok(envelope: OutputEnvelope) -> Self {
        Self {
            envelope,
            failure: None,
            rows: None,
        }
    }
}

pub fn constants(tolerance: f64) -> Result<ConstantResult, CliError> {
    let c = compute_constants(tolerance)?;
    if !(c.u_star.is_finite() && c.m_star.is_finite() && c.m_star > 0.0) {
        return Err(CliError::NonConvergence(format!("constant search returned {c:?}")));
    }
    Ok(c)
}

pub fn constants_used(c: &ConstantResult) -> ConstantsUsed {
    ConstantsUsed {
        u_star: c.u_star,
        m_star: c.m_star,
        tolerance: c.tolerance,
    }
}

enum Source {
    Vector(ParameterVector),
    Skellam { x: f64, y: f64 },
}

fn read_source(input: &ProbabilityInput, env: &mut OutputEnvelope) -> Result<Source, CliError> {
    if input.skellam {
        let (Some(x), Some(y)) = (input.x, input.y) else {
            return Err(CliError::Input("--skellam needs both --x and --y".into()));
        };
        for (name, v) in [("x", x), ("y", y)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::Input(format!("--{name} must be a finite value >= 0, got {v}")));
            }
        }
        env.input("skellam", true);
        env.input("x", x);
        env.input("y", y);
        return Ok(Source::Skellam { x, y });
    }
    let p = match (&input.probs, &input.probs_file) {
        (Some(list), None) => parse_probs(list)?,
        (None, Some(path)) => {
            env.input("probs_file", path.display().to_string());
            read_probs_file(path)?
        }
        _ => return Err(CliError::Input("supply exactly one of --probs, --probs-file or --skellam".into())),
    };
    env.input("probs", p.probs());
    Ok(Source::Vector(p))
}

pub fn pmf(args: &PmfArgs) -> Result<Outcome, CliError> {
    let mut env = OutputEnvelope::new("pmf");
    let rows = match read_source(&args.input, &mut env)? {
        Source::Vector(p) => {
            let table = poisson_binomial_pmf(&p);
            let s = sigma(&p);
            env.result("min_index", table.min_index);
            env.result("values", &table.values);
            env.result("sigma", s);
            env.result("mean", p.mean());
            env.result("sigma_times_p", table.values.iter().map(|v| s * v).collect::<Vec<_>>());
            table.iter().map(|(i, v)| (i, v, s * v)).collect::<Vec<_>>()
        }
        Source::Skellam { x, y } => {
            let range = match (args.i, &args.range) {
                (Some(i), None) => {
                    env.input("i", i);
                    i..=i
                }
                (None, Some(r)) => {
                    env.input("range", r);
                    parse_range(r)?
                }
                _ => return Err(CliError::Input("--skellam needs --i or --range".into())),
            };
            let s = skellam_sigma(x, y);
            let rows: Vec<(i64, f64, f64)> = range
                .map(|i| {
                    let v = skellam_pmf(x, y, i);
                    (i, v, s * v)
                })
                .collect();
            env.result("min_index", rows[0].0);
            env.result("values", rows.iter().map(|r| r.1).collect::<Vec<_>>());
            env.result("sigma", s);
            env.result("mean", x - y);
            env.result("sigma_times_p", rows.iter().map(|r| r.2).collect::<Vec<_>>());
            rows
        }
    };
    Ok(Outcome {
        rows: Some(rows),
        ..Outcome::ok(env)
    })
}

pub fn constant(args: &ConstantArgs) -> Result<Outcome, CliError> {
    let mut env = OutputEnvelope::new("constant");
    env.input("tol", args.tol);
    let c = constants(args.tol)?;
    env.result("u_star", c.u_star);
    env.result("m_star", c.m_star);
    env.result("evaluations", c.evaluations);
    env.constants_used = Some(constants_used(&c));
    Ok(Outcome::ok(env))
}

pub fn check(args: &CheckArgs, c: &ConstantResult) -> Result<Outcome, CliError> {
    let mut env = OutputEnvelope::new("check");
    env.constants_used = Some(constants_used(c));
    let report = match read_source(&args.input, &mut env)? {
        Source::Vector(p) => {
            if args.range.is_some() {
                return Err(CliError::Input("--range applies to --skellam only".into()));
            }
            check_bound(&p, c.m_star)
        }
        Source::Skellam { x, y } => {
            let Some(r) = &args.range else {
                return Err(CliError::Input("--skellam needs --range lo:hi".into()));
            };
            env.input("range", r);
            check_skellam_bound(x, y, parse_range(r)?, c.m_star)?
        }
    };
    write_report(&mut env, &report);
    let failure = (!report.holds()).then(|| {
        CliError::Violation(format!(
            "sigma * P(S = {}) = {} exceeds M = {} by {:e}",
            report.argmax_index, report.max_product, report.m_used, -report.margin
        ))
    });
    Ok(Outcome {
        failure,
        ..Outcome::ok(env)
    })
}

fn write_report(env: &mut OutputEnvelope, r: &BoundReport) {
    env.result("input_descriptor", &r.input_descriptor);
    env.result("sigma_value", r.sigma_value);
    env.result("argmax_index", r.argmax_index);
    env.result("max_product", r.max_product);
    env.result("margin", r.margin);
    env.result("m_used", r.m_used);
    env.result("holds", r.margin >= -MARGIN_TOLERANCE);
}
