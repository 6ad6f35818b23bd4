use super::special::{ln_factorials, log_sum_exp};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Moments of the local field `L` on a hidden spin of the planted metastable
/// cluster. `c_v` is `None` when the mean vanishes (`r = 0.5`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    pub mean: f64,
    pub variance: f64,
    pub c_v: Option<f64>,
}

/// Mean and variance of
/// `L = 2·B(N, n₁/⌈nd⌉)(ε−1) + 2·B(N, (nr−n₁)/(n−⌈nd⌉)) − εN`
/// with `n₁ ~ B(⌈nd⌉, r)`, summed exactly over `n₁` by the law of total
/// variance.
pub fn local_field_dispersion(n: usize, n_loops: usize, eps: f64, r: f64, d: f64) -> Result<Dispersion> {
    let bad = |s: String| Err(Error::InvalidParameter(s));
    if n < 2 {
        return bad(format!("n = {n} must be at least 2"));
    }
    if n_loops == 0 {
        return bad("N must be at least 1".into());
    }
    if !(eps > 0.0 && eps < 1.0) {
        return bad(format!("eps = {eps} must be in (0, 1)"));
    }
    if !(0.0..=1.0).contains(&r) {
        return bad(format!("r = {r} must be in [0, 1]"));
    }
    if !(d > 0.0 && d < 1.0) {
        return bad(format!("d = {d} must be in (0, 1)"));
    }
    let nf = n as f64;
    let big_n = n_loops as f64;
    let nb = ((nf * d - 1e-9).ceil() as usize).clamp(1, n - 1);
    let nbf = nb as f64;
    let lnf = ln_factorials(nb);

    let ln_w: Vec<f64> = (0..=nb)
        .map(|k| {
            let kf = k as f64;
            let lr = if k == 0 { 0.0 } else { kf * r.ln() };
            let lq = if k == nb { 0.0 } else { (nbf - kf) * (1.0 - r).ln() };
            lnf[nb] - lnf[k] - lnf[nb - k] + lr + lq
        })
        .collect();
    let norm = log_sum_exp(&ln_w);

    let mut e1 = 0.0;
    let mut e2 = 0.0;
    let mut inner = 0.0;
    for (k, lw) in ln_w.iter().enumerate() {
        let w = (lw - norm).exp();
        if w == 0.0 {
            continue;
        }
        let kf = k as f64;
        let p1 = (kf / nbf).clamp(0.0, 1.0);
        let p2 = ((nf * r - kf) / (nf - nbf)).clamp(0.0, 1.0);
        let mean = 2.0 * big_n * p1 * (eps - 1.0) + 2.0 * big_n * p2 - eps * big_n;
        let var = 4.0 * big_n * p1 * (1.0 - p1) * (eps - 1.0).powi(2) + 4.0 * big_n * p2 * (1.0 - p2);
        e1 += w * mean;
        e2 += w * mean * mean;
        inner += w * var;
    }
    let variance = inner + (e2 - e1 * e1).max(0.0);
    // closed form; the exact sum agrees unless the p₂ clamp is active
    let mean = big_n * eps * (2.0 * r - 1.0);
    if (e1 - mean).abs() > 1e-6 * (1.0 + mean.abs()) {
        log::debug!("dispersion: clamped mixture mean {e1} differs from {mean}");
    }
    let c_v = if mean == 0.0 { None } else { Some(variance.sqrt() / mean) };
    Ok(Dispersion { mean, variance, c_v })
}
