//! Runtime statistics: ERT, ECDF over ERT, quantiles, theory curves for the
//! (1+1)-EA>0 and a weighted one-regressor scaling fit.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::solvers::RunTrace;

/// Total FEs of all runs divided by the number of successes; `+inf` without
/// successes.
pub fn ert(runs: &[RunTrace]) -> f64 {
    let total: u64 = runs.iter().map(|r| r.fes).sum();
    let successes = runs.iter().filter(|r| r.succeeded()).count();
    if successes == 0 {
        f64::INFINITY
    } else {
        total as f64 / successes as f64
    }
}

/// Fraction of instances with ERT at most `t`, as a step function.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    finite: Vec<f64>,
    instances: usize,
}

pub fn ecdf_over_ert(erts: &[f64]) -> Ecdf {
    let mut finite: Vec<f64> = erts.iter().copied().filter(|v| v.is_finite()).collect();
    finite.sort_by(f64::total_cmp);
    Ecdf {
        finite,
        instances: erts.len(),
    }
}

impl Ecdf {
    pub fn at(&self, t: f64) -> f64 {
        if self.instances == 0 {
            return 0.0;
        }
        let below = self.finite.partition_point(|&v| v <= t);
        below as f64 / self.instances as f64
    }

    /// `(t, fraction)` at every jump, in increasing `t`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &t) in self.finite.iter().enumerate() {
            let frac = (i + 1) as f64 / self.instances as f64;
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 = frac,
                _ => out.push((t, frac)),
            }
        }
        out
    }

    pub fn instances(&self) -> usize {
        self.instances
    }
}

/// Empirical quantile with linear interpolation between order statistics:
/// position `h = (n - 1) q` in the sorted sample.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    assert!((0.0..=1.0).contains(&q), "quantile level {q} outside [0, 1]");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, q)
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Share of plain standard-mutation offspring that flip at least one bit,
/// `1 - (1 - 1/s)^s`.
pub fn correction_factor(s: u32) -> f64 {
    1.0 - (1.0 - 1.0 / s as f64).powi(s as i32)
}

const ONEMAX_C1: f64 = 1.89254;
const ONEMAX_C2: f64 = 0.59789875;

/// Expected optimization time of the (1+1)-EA>0 on OneMax.
pub fn theory_ea_onemax(s: u32) -> f64 {
    let sf = s as f64;
    let ln = sf.ln();
    (E * sf * ln - ONEMAX_C1 * sf + 0.5 * E * ln + ONEMAX_C2) * correction_factor(s)
}

/// Expected optimization time of the (1+1)-EA>0 on LeadingOnes.
pub fn theory_ea_leadingones(s: u32) -> f64 {
    let sf = s as f64;
    0.5 * sf * sf * ((1.0 - 1.0 / sf).powf(1.0 - sf) - 1.0 + 1.0 / sf) * correction_factor(s)
}

/// Regressor of the runtime scaling model `c * s^2 * ln s`.
pub fn scale_regressor(s: f64) -> f64 {
    s * s * s.ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFit {
    pub c: f64,
    /// weighted coefficient of determination, centred on the weighted mean
    pub r2: f64,
}

/// Weighted least squares of mean runtime on `s^2 ln s` through the origin,
/// weights `1 / variance`. Points are `(s, mean, variance)`.
pub fn fit_scale_model(points: &[(f64, f64, f64)]) -> Result<ScaleFit> {
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::param(
            "points",
            distinct.len(),
            "need at least two distinct dimensions",
        ));
    }
    if let Some(p) = points.iter().find(|p| !(p.2 > 0.0 && p.2.is_finite())) {
        return Err(Error::param(
            "variance",
            p.2 as i64,
            format!("non-positive variance at s={}", p.0),
        ));
    }
    let (mut sxy, mut sxx, mut sw, mut swy) = (0.0, 0.0, 0.0, 0.0);
    for &(s, y, var) in points {
        let (w, x) = (1.0 / var, scale_regressor(s));
        sxy += w * x * y;
        sxx += w * x * x;
        sw += w;
        swy += w * y;
    }
    let c = sxy / sxx;
    let ybar = swy / sw;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(s, y, var) in points {
        let w = 1.0 / var;
        ss_res += w * (y - c * scale_regressor(s)).powi(2);
        ss_tot += w * (y - ybar).powi(2);
    }
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(ScaleFit { c, r2 })
}

/// Summary of one algorithm-instance cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub runs: usize,
    pub successes: usize,
    pub success_fraction: f64,
    pub ert: f64,
    /// statistics over successful hitting times; NaN without successes
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub q159: f64,
    pub q841: f64,
    /// mean best objective value over all runs
    pub mean_best: f64,
}

impl CellSummary {
    pub fn from_runs(runs: &[RunTrace]) -> Self {
        let hits: Vec<f64> = runs
            .iter()
            .filter_map(RunTrace::hitting_time)
            .map(|h| h as f64)
            .collect();
        let n = runs.len();
        let mean_best = if n == 0 {
            f64::NAN
        } else {
            runs.iter().filter_map(RunTrace::best).sum::<u64>() as f64 / n as f64
        };
        let (mean, median, sd, q159, q841) = if hits.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN)
        } else {
            let mut sorted = hits.clone();
            sorted.sort_by(f64::total_cmp);
            let mean = hits.iter().sum::<f64>() / hits.len() as f64;
            let sd = if hits.len() > 1 {
                (hits.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (hits.len() - 1) as f64).sqrt()
            } else {
                0.0
            };
            (
                mean,
                quantile_sorted(&sorted, 0.5),
                sd,
                quantile_sorted(&sorted, 0.159),
                quantile_sorted(&sorted, 0.841),
            )
        };
        CellSummary {
            runs: n,
            successes: hits.len(),
            success_fraction: if n == 0 { 0.0 } else { hits.len() as f64 / n as f64 },
            ert: ert(runs),
            mean,
            median,
            sd,
            q159,
            q841,
            mean_best,
        }
    }

    pub const CSV_HEADER: &'static str = "runs,successes,success_fraction,ert,mean,median,sd,q15.9,q84.1,mean_best";

    pub fn csv_fields(&self) -> String {
        let f = |v: f64| {
            if v.is_nan() {
                String::new()
            } else if v.is_infinite() {
                "inf".to_string()
            } else {
                format!("{v:.3}")
            }
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.runs,
            self.successes,
            f(self.success_fraction),
            f(self.ert),
            f(self.mean),
            f(self.median),
            f(self.sd),
            f(self.q159),
            f(self.q841),
            f(self.mean_best)
        )
    }
}
