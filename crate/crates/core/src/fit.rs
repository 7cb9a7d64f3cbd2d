//! Least-squares fits used to read exponents, Zeno times and rates off sampled curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual_rms: f64,
    pub points: usize,
}

/// Ordinary least squares y = slope·x + intercept.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::param(format!("fit needs equal lengths, got {} and {}", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::param("fit needs at least 2 points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::param("fit data must be finite"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("fit abscissae are all equal"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(LinearFit { slope, intercept, residual_rms: (ss / n).sqrt(), points: xs.len() })
}

fn logs(v: &[f64], what: &str) -> Result<Vec<f64>> {
    v.iter()
        .map(|&x| if x > 0.0 { Ok(x.ln()) } else { Err(Error::param(format!("{what} must be positive, got {x}"))) })
        .collect()
}

/// Exponent p of y ∝ xᵖ from a log–log fit.
pub fn power_law_exponent(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    linear_fit(&logs(xs, "abscissa")?, &logs(ys, "ordinate")?)
}

/// t_Z from loss(t) = (t/t_Z)^p with p held fixed: least squares on the log intercept.
pub fn fit_scale_fixed_exponent(ts: &[f64], loss: &[f64], p: f64) -> Result<f64> {
    if ts.len() != loss.len() || ts.is_empty() {
        return Err(Error::param("fit needs equal, non-empty inputs"));
    }
    let lt = logs(ts, "time")?;
    let ll = logs(loss, "loss")?;
    let c = lt.iter().zip(&ll).map(|(t, l)| l - p * t).sum::<f64>() / lt.len() as f64;
    Ok((-c / p).exp())
}

/// `n` points from `lo` to `hi` evenly spaced in log.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
