use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Least-squares fit `ln y = ln A + b·x'` with `x' = ln x` (power law) or
/// `x' = x` (exponential). `rss` is the residual sum of squares in log space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub a: f64,
    pub b: f64,
    pub rss: f64,
}

fn linear_fit(x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.len() != y.len() {
        return Err(Error::dims(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: x.len(),
        });
    }
    if y.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("fit targets must be positive".into()));
    }
    let k = x.len() as f64;
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = x.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("fit abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(&ly).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let b = sxy / sxx;
    let c = my - b * mx;
    let rss = x.iter().zip(&ly).map(|(xi, yi)| (yi - c - b * xi).powi(2)).sum();
    Ok(Fit { a: c.exp(), b, rss })
}

/// `y ≈ A·xᵇ`.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("power-law abscissae must be positive".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, y)
}

/// `y ≈ A·e^{b x}`.
pub fn fit_exponential(x: &[f64], y: &[f64]) -> Result<Fit> {
    linear_fit(x, y)
}
