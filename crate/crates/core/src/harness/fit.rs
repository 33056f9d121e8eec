use serde::{Deserialize, Serialize};

use super::run::TrialResult;
use crate::{Error, Result};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for two-parameter exact fits).
    pub stderr: f64,
    pub points: usize,
}

/// Fewest sweep points a slope is fitted from.
pub const MIN_POINTS: usize = 4;

/// Fits `y ≈ e^b · x^a` by least squares in log-log space.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints { needed: MIN_POINTS, got: points.len() });
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidArgument(format!("log-log fit needs positive values, got ({x}, {y})")));
    }
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all sweep points share one x value".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (sse / (k - 2.0) / sxx).sqrt();
    Ok(ScalingFit { slope, intercept, stderr, points: points.len() })
}

/// Per-cell aggregate of a result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub delta: f64,
    pub trials: usize,
    pub mean_queries: f64,
    pub mean_estimate: f64,
    /// Fraction of successful trials, when exact values were available.
    pub success_rate: Option<f64>,
}

/// Groups rows by cell, in cell order.
pub fn summarize(rows: &[TrialResult]) -> Vec<CellSummary> {
    let mut cells: Vec<usize> = rows.iter().map(|r| r.cell).collect();
    cells.sort_unstable();
    cells.dedup();
    cells
        .into_iter()
        .map(|cell| {
            let group: Vec<_> = rows.iter().filter(|r| r.cell == cell).collect();
            let k = group.len() as f64;
            let judged: Vec<bool> = group.iter().filter_map(|r| r.success).collect();
            CellSummary {
                cell,
                delta: group[0].delta,
                trials: group.len(),
                mean_queries: group.iter().map(|r| r.queries.total as f64).sum::<f64>() / k,
                mean_estimate: group.iter().map(|r| r.estimate).sum::<f64>() / k,
                success_rate: (!judged.is_empty())
                    .then(|| judged.iter().filter(|&&s| s).count() as f64 / judged.len() as f64),
            }
        })
        .collect()
}

/// Log-log slope of mean total queries against `δ` across the cells of
/// `rows`. A cost growing like `(1/δ)^a` gives slope `-a`.
pub fn fit_scaling(rows: &[TrialResult]) -> Result<ScalingFit> {
    let points: Vec<_> = summarize(rows).iter().map(|c| (c.delta, c.mean_queries)).collect();
    fit_power_law(&points)
}

/// Largest failure rate compatible with `p_f` at three binomial standard
/// deviations over `trials` trials.
pub fn failure_allowance(p_f: f64, trials: usize) -> f64 {
    p_f + 3.0 * (p_f * (1.0 - p_f) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = (1..=6).map(|i| {
            let x = 2f64.powi(-i);
            (x, 3.0 * x.powf(-2.0 / 3.0))
        }).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.slope + 2.0 / 3.0).abs() < 1e-9);
        assert!(fit.stderr < 1e-9);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn constant_has_zero_slope() {
        let pts: Vec<_> = (1..=5).map(|i| (i as f64, 7.0)).collect();
        assert!(fit_power_law(&pts).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let pts = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        assert!(matches!(fit_power_law(&pts), Err(Error::InsufficientPoints { needed: 4, got: 3 })));
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }

    #[test]
    fn allowance() {
        assert!((failure_allowance(0.1, 200) - (0.1 + 3.0 * (0.09f64 / 200.0).sqrt())).abs() < 1e-15);
    }
}
