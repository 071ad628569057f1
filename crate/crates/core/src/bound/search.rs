//! Extremal search over the two-binomial family `S = U + V`, `U ~ B(a, lambda)`,
//! `V ~ B(b, mu)`, which contains a maximizer of `sigma * P(S = i)` for every
//! Bernoulli vector length.
//!
//! The grid covers `lambda = j / (s a)` and `mu = l / (s b)` for the configured
//! `s`, with `a <= b` and `lambda <= 1/2`: swapping the two binomials, or
//! replacing `(lambda, mu, i)` by `(1 - lambda, 1 - mu, a + b - i)`, leaves the
//! objective unchanged. For each cell the index `i` is found by walking uphill
//! from the rounded mean inside a `window_sigmas * sigma` window; the PMF of a
//! Bernoulli sum is log-concave, so the walk finds the window maximum. The best
//! cells are then polished by coordinate ascent in `(lambda, mu)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{binomial_table, two_binomial_point, ParameterVector, TwoBinomialSpec};

/// Table entries below this fraction of the row maximum are skipped in
/// convolutions.
const SUPPORT_CUTOFF: f64 = 1e-25;
const ASCENT_MIN_STEP: f64 = 1e-10;
const ASCENT_MAX_ITERATIONS: usize = 10_000;

/// Sizes used by [`SearchConfig::ladder`] beyond the dense head.
const LADDER_TAIL: [u64; 9] = [16, 24, 32, 48, 64, 96, 128, 160, 192];
const LADDER_DENSE_HEAD: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Grid,
    CoordinateAscent,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidate {
    TwoBinomial(TwoBinomialSpec),
    Vector(ParameterVector),
}

/// One evaluated candidate: `objective = sigma * P(S = index)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub spec: Candidate,
    pub index: i64,
    pub objective: f64,
    pub strategy: Strategy,
}

impl SearchRecord {
    /// Recomputes the objective from `spec` and `index` through the reference
    /// PMF routines.
    pub fn recompute_objective(&self) -> f64 {
        match &self.spec {
            Candidate::TwoBinomial(spec) => two_binomial_objective(spec, self.index),
            Candidate::Vector(p) => {
                crate::dist::sigma(p) * crate::dist::poisson_binomial_pmf(p).get(self.index)
            }
        }
    }
}

/// `sqrt(a lambda (1 - lambda) + b mu (1 - mu)) * P(U + V = i)`.
pub fn two_binomial_objective(spec: &TwoBinomialSpec, i: i64) -> f64 {
    spec.variance().sqrt() * two_binomial_point(spec, i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Candidate sizes for both `a` and `b`; `0` admits a single binomial.
    pub sizes: Vec<u64>,
    /// Grid step for a binomial of size `n` is `1 / (steps_per_unit * n)`.
    pub steps_per_unit: u64,
    pub window_sigmas: f64,
    /// Number of best grid cells polished by coordinate ascent.
    pub refine: usize,
    /// Number of records returned.
    pub top: usize,
}

impl SearchConfig {
    /// Every size in `0..=a_max`.
    pub fn dense(a_max: u64) -> Self {
        Self::with_sizes((0..=a_max).collect())
    }

    /// `0..=12`, then a geometric-ish ladder up to `a_max` (always included).
    pub fn ladder(a_max: u64) -> Self {
        let mut sizes: Vec<u64> = (0..=a_max.min(LADDER_DENSE_HEAD)).collect();
        sizes.extend(LADDER_TAIL.iter().copied().filter(|&n| n <= a_max));
        sizes.push(a_max);
        Self::with_sizes(sizes)
    }

    pub fn with_sizes(mut sizes: Vec<u64>) -> Self {
        sizes.sort_unstable();
        sizes.dedup();
        Self {
            sizes,
            steps_per_unit: 4,
            window_sigmas: 6.0,
            refine: 8,
            top: 10,
        }
    }

    /// A configuration with no sizes; searching it yields no records.
    pub fn empty() -> Self {
        Self::with_sizes(Vec::new())
    }

    fn pairs(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (i, &a) in self.sizes.iter().enumerate() {
            for &b in &self.sizes[i..] {
                if a + b > 0 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// A binomial row with the index range that carries non-negligible mass.
#[derive(Debug, Clone)]
struct Row {
    values: Vec<f64>,
    lo: usize,
    hi: usize,
}

impl Row {
    fn new(n: u64, p: f64) -> Self {
        let values = binomial_table(n, p);
        let peak = values.iter().copied().fold(0.0, f64::max);
        let keep = |v: &f64| *v >= SUPPORT_CUTOFF * peak && *v > 0.0;
        let lo = values.iter().position(keep).unwrap_or(0);
        let hi = values.iter().rposition(keep).unwrap_or(0);
        Self { values, lo, hi }
    }
}

fn convolve_at(u: &Row, v: &Row, i: i64) -> f64 {
    let k_lo = (u.lo as i64).max(i - v.hi as i64);
    let k_hi = (u.hi as i64).min(i - v.lo as i64);
    if k_lo > k_hi {
        return 0.0;
    }
    (k_lo..=k_hi)
        .map(|k| u.values[k as usize] * v.values[(i - k) as usize])
        .sum()
}

/// Best `(i, sigma * P(S = i))` for one `(a, lambda, b, mu)`, smallest `i` on ties.
fn best_index(spec: &TwoBinomialSpec, u: &Row, v: &Row, window_sigmas: f64) -> Option<(i64, f64)> {
    let variance = spec.variance();
    if !(variance > 0.0) {
        return None;
    }
    let sd = variance.sqrt();
    let mean = spec.mean();
    let top = (spec.a + spec.b) as i64;
    let lo = ((mean - window_sigmas * sd).floor().min(mean.floor()) as i64).max(0);
    let hi = ((mean + window_sigmas * sd).ceil().max(mean.ceil()) as i64).min(top);
    let mut i = (mean.round() as i64).clamp(lo, hi);
    let mut pi = convolve_at(u, v, i);

    // Prefer moving left on equality so plateaus resolve to the smallest index.
    let mut moved_left = false;
    while i > lo {
        let left = convolve_at(u, v, i - 1);
        if left >= pi {
            i -= 1;
            pi = left;
            moved_left = true;
        } else {
            break;
        }
    }
    if !moved_left {
        while i < hi {
            let right = convolve_at(u, v, i + 1);
            if right > pi {
                i += 1;
                pi = right;
            } else {
                break;
            }
        }
    }
    Some((i, sd * pi))
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    spec: TwoBinomialSpec,
    index: i64,
    objective: f64,
}

fn cell_order(x: &Cell, y: &Cell) -> Ordering {
    y.objective
        .total_cmp(&x.objective)
        .then(x.spec.a.cmp(&y.spec.a))
        .then(x.spec.b.cmp(&y.spec.b))
        .then(x.spec.lambda.total_cmp(&y.spec.lambda))
        .then(x.spec.mu.total_cmp(&y.spec.mu))
        .then(x.index.cmp(&y.index))
}

fn keep_best(cells: &mut Vec<Cell>, limit: usize) {
    cells.sort_by(cell_order);
    cells.truncate(limit);
}

fn grid_values(n: u64, steps_per_unit: u64, half: bool) -> Vec<f64> {
    if n == 0 {
        return vec![0.0];
    }
    let denom = steps_per_unit * n;
    let last = if half { denom / 2 } else { denom };
    (0..=last).map(|j| j as f64 / denom as f64).collect()
}

fn search_pair(
    a: u64,
    b: u64,
    rows: &BTreeMap<u64, Vec<Row>>,
    cfg: &SearchConfig,
    limit: usize,
) -> Vec<Cell> {
    let lambdas = grid_values(a, cfg.steps_per_unit, true);
    let mus = grid_values(b, cfg.steps_per_unit, false);
    let (rows_a, rows_b) = (&rows[&a], &rows[&b]);
    let mut best: Vec<Cell> = Vec::with_capacity(2 * limit);
    for (j, &lambda) in lambdas.iter().enumerate() {
        for (l, &mu) in mus.iter().enumerate() {
            let spec = TwoBinomialSpec { a, lambda, b, mu };
            if let Some((index, objective)) = best_index(&spec, &rows_a[j], &rows_b[l], cfg.window_sigmas) {
                best.push(Cell {
                    spec,
                    index,
                    objective,
                });
                if best.len() >= 2 * limit {
                    keep_best(&mut best, limit);
                }
            }
        }
    }
    keep_best(&mut best, limit);
    best
}

fn evaluate(spec: &TwoBinomialSpec, window_sigmas: f64) -> Option<Cell> {
    let u = Row::new(spec.a, spec.lambda);
    let v = Row::new(spec.b, spec.mu);
    best_index(spec, &u, &v, window_sigmas).map(|(index, objective)| Cell {
        spec: *spec,
        index,
        objective,
    })
}

/// Pattern-style coordinate ascent in `(lambda, mu)` starting from a grid cell,
/// halving the steps whenever neither coordinate improves.
fn coordinate_ascent(start: Cell, cfg: &SearchConfig) -> Cell {
    let step_for = |n: u64| if n == 0 { 0.0 } else { 1.0 / (cfg.steps_per_unit * n) as f64 };
    let mut step_lambda = step_for(start.spec.a);
    let mut step_mu = step_for(start.spec.b);
    let mut current = start;

    for _ in 0..ASCENT_MAX_ITERATIONS {
        let mut improved = false;
        for axis in 0..2 {
            let step = if axis == 0 { step_lambda } else { step_mu };
            if step == 0.0 {
                continue;
            }
            let mut best_here = current;
            for sign in [1.0, -1.0] {
                let mut spec = current.spec;
                if axis == 0 {
                    spec.lambda = (spec.lambda + sign * step).clamp(0.0, 1.0);
                } else {
                    spec.mu = (spec.mu + sign * step).clamp(0.0, 1.0);
                }
                if let Some(cell) = evaluate(&spec, cfg.window_sigmas) {
                    if cell.objective > best_here.objective {
                        best_here = cell;
                    }
                }
            }
            if best_here.objective > current.objective {
                current = best_here;
                improved = true;
            }
        }
        if !improved {
            step_lambda *= 0.5;
            step_mu *= 0.5;
            if step_lambda.max(step_mu) < ASCENT_MIN_STEP {
                break;
            }
        }
    }
    current
}

fn into_record(cell: Cell, strategy: Strategy) -> SearchRecord {
    SearchRecord {
        objective: two_binomial_objective(&cell.spec, cell.index),
        spec: Candidate::TwoBinomial(cell.spec),
        index: cell.index,
        strategy,
    }
}

fn record_key(r: &SearchRecord) -> Cell {
    match &r.spec {
        Candidate::TwoBinomial(spec) => Cell {
            spec: *spec,
            index: r.index,
            objective: r.objective,
        },
        Candidate::Vector(_) => unreachable!("two-binomial search only emits two-binomial records"),
    }
}

/// Grid search plus coordinate-ascent polish over the two-binomial family.
///
/// Returns at most `cfg.top` records, best first, ties broken by
/// `(a, b, lambda, mu, i)` ascending. The result does not depend on the number
/// of worker threads. `m_ref` is only used to flag records that exceed it: any
/// such record signals a numerical problem, and is reported rather than
/// discarded.
pub fn search_two_binomial(cfg: &SearchConfig, m_ref: f64) -> Vec<SearchRecord> {
    let pairs = cfg.pairs();
    if pairs.is_empty() || cfg.top == 0 {
        return Vec::new();
    }
    let limit = cfg.top.max(cfg.refine).max(1);

    let rows: BTreeMap<u64, Vec<Row>> = cfg
        .sizes
        .par_iter()
        .map(|&n| {
            let ps = grid_values(n, cfg.steps_per_unit, false);
            (n, ps.into_iter().map(|p| Row::new(n, p)).collect())
        })
        .collect();

    let per_pair: Vec<Vec<Cell>> = pairs
        .par_iter()
        .map(|&(a, b)| search_pair(a, b, &rows, cfg, limit))
        .collect();
    let mut grid: Vec<Cell> = per_pair.into_iter().flatten().collect();
    keep_best(&mut grid, limit);

    let refined: Vec<Cell> = grid
        .iter()
        .take(cfg.refine)
        .copied()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| coordinate_ascent(c, cfg))
        .collect();

    let mut records: Vec<SearchRecord> = grid
        .into_iter()
        .map(|c| into_record(c, Strategy::Grid))
        .chain(refined.into_iter().map(|c| into_record(c, Strategy::CoordinateAscent)))
        .collect();
    records.sort_by(|x, y| cell_order(&record_key(x), &record_key(y)).then(strategy_rank(x).cmp(&strategy_rank(y))));
    records.dedup_by(|x, y| x.spec == y.spec && x.index == y.index);
    records.truncate(cfg.top);

    if let Some(worst) = records.iter().find(|r| r.objective > m_ref + super::MARGIN_TOLERANCE) {
        debug_assert!(false, "search record exceeds the reference constant: {worst:?}");
    }
    records
}

fn strategy_rank(r: &SearchRecord) -> u8 {
    match r.strategy {
        Strategy::Grid => 0,
        Strategy::CoordinateAscent => 1,
        Strategy::Random => 2,
    }
}
