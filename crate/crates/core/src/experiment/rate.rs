use serde::Serialize;

use crate::error::{Error, Result};

use super::ConvergenceRecord;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    /// Slope of `log(error)` against `log(N)`.
    pub slope: f64,
    pub intercept: f64,
    /// Number of points fitted.
    pub m: usize,
}

/// Least-squares slope over the last `m` records.
pub fn fit_rate(records: &[ConvergenceRecord], m: usize) -> Result<RateFit> {
    let points: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.error)).collect();
    fit_rate_points(&points, m)
}

/// Least-squares slope of `log(error)` against `log(N)` over the last `m`
/// `(N, error)` points. Points with a non-positive error are skipped.
pub fn fit_rate_points(points: &[(f64, f64)], m: usize) -> Result<RateFit> {
    let tail = &points[points.len().saturating_sub(m)..];
    let logs: Vec<(f64, f64)> = tail.iter().filter(|(n, e)| *n > 0.0 && *e > 0.0).map(|(n, e)| (n.ln(), e.ln())).collect();
    if m < 3 || logs.len() < 3 {
        return Err(Error::InsufficientData { needed: 3.max(m), got: logs.len() });
    }
    let (slope, intercept) = least_squares_line(&logs);
    Ok(RateFit { slope, intercept, m: logs.len() })
}

fn least_squares_line(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Limit of a sequence `lambda_h(N) = lambda + c N^{-p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extrapolation {
    pub lambda: f64,
    pub c: f64,
    pub p: f64,
    /// Root-mean-square misfit.
    pub rms: f64,
}

/// Fit `lambda + c N^{-p}` to `(N, lambda_h)` points by least squares. For a
/// fixed exponent the model is linear; the exponent is found by a golden
/// section search on the residual over `p in [0.2, 3]`.
pub fn extrapolate_limit(points: &[(f64, f64)]) -> Result<Extrapolation> {
    if points.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: points.len() });
    }
    let fit = |p: f64| {
        let xs: Vec<(f64, f64)> = points.iter().map(|&(n, l)| (n.powf(-p), l)).collect();
        let (c, lambda) = least_squares_line(&xs);
        let rms = (xs.iter().map(|(x, l)| (lambda + c * x - l).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
        Extrapolation { lambda, c, p, rms }
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.2, 3.0);
    for _ in 0..200 {
        let a = hi - ratio * (hi - lo);
        let b = lo + ratio * (hi - lo);
        if fit(a).rms <= fit(b).rms {
            hi = b;
        } else {
            lo = a;
        }
    }
    Ok(fit(0.5 * (lo + hi)))
}
