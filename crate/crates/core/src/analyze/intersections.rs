use super::special::{ln_bessel_i, ln_factorials, log_sum_exp};
use super::Method;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

const REL_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 10_000;

/// Loop overlap statistics for `N` loops dropped uniformly on an `n × m` matrix.
///
/// A single loop covers a given edge with probability `p = 4/(nm)`, so the
/// number of loops on an edge is roughly Poisson with mean `λ = 4N/(nm)`,
/// split into negative (`λ/4`) and positive (`3λ/4`) contributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionModel {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub n_loops: usize,
    pub lambda: f64,
    pub expected_intersections: f64,
    pub expected_frustration: f64,
    pub method: Method,
}

impl IntersectionModel {
    pub fn new(n: usize, m: usize, n_loops: usize) -> Result<Self> {
        let (e, method) = expected_intersections_with_method(n, m, n_loops)?;
        Ok(IntersectionModel {
            n,
            m,
            n_loops,
            lambda: lambda(n, m, n_loops),
            expected_intersections: e,
            expected_frustration: frustration_from(n_loops, e),
            method,
        })
    }
}

fn lambda(n: usize, m: usize, n_loops: usize) -> f64 {
    4.0 * n_loops as f64 / (n * m) as f64
}

/// `E[min(k₁, k₂)]` for independent `k₁ ~ Poisson(λ/4)`, `k₂ ~ Poisson(3λ/4)`:
///
/// `λ/2 − ½ e^{−λ} Σ_{k≥1} k (3^{−k/2} + 3^{k/2}) I_k(√3 λ/2)`.
///
/// The two halves of the sum are `E[(k₁−k₂)⁺]` and `E[(k₂−k₁)⁺]`, whose
/// difference is `λ/2`, so the series is evaluated as
/// `λ/4 − e^{−λ} Σ_{k≥1} k 3^{−k/2} I_k(√3 λ/2)`. This has no cancellation
/// and stays below `λ/4` for large `λ`.
///
/// Falls back to the `λ/4` asymptote if the series has not converged after
/// 10⁴ terms.
pub fn expected_min_poisson(lambda: f64) -> (f64, Method) {
    if lambda <= 0.0 {
        return (0.0, Method::ExactSeries);
    }
    let z = 3f64.sqrt() * lambda / 2.0;
    let ln3h = 3f64.ln() / 2.0;
    let mut lnf = ln_factorials(256);
    let mut terms: Vec<f64> = Vec::new();
    let mut acc = f64::NEG_INFINITY;
    for k in 1..=MAX_TERMS {
        let kf = k as f64;
        let t = kf.ln() - kf * ln3h + ln_bessel_i(k, z, &mut lnf) - lambda;
        terms.push(t);
        acc = log_sum_exp(&[acc, t]);
        let falling = terms.len() >= 2 && t < terms[terms.len() - 2];
        if falling && t - acc < REL_TOL.ln() {
            let excess = log_sum_exp(&terms).exp();
            return ((lambda / 4.0 - excess).max(0.0), Method::ExactSeries);
        }
    }
    log::warn!("intersection series did not converge at lambda={lambda}; using lambda/4");
    (lambda / 4.0, Method::Asymptote)
}

fn check(n: usize, m: usize) -> Result<()> {
    if n * m < 4 {
        return Err(Error::InvalidParameter(format!("n*m = {} must be at least 4", n * m)));
    }
    Ok(())
}

fn expected_intersections_with_method(n: usize, m: usize, n_loops: usize) -> Result<(f64, Method)> {
    check(n, m)?;
    let (e, method) = expected_min_poisson(lambda(n, m, n_loops));
    Ok(((n * m) as f64 * e, method))
}

/// Expected number of intersection events `nm · E[min(k₁, k₂)]`.
pub fn expected_intersections(n: usize, m: usize, n_loops: usize) -> Result<f64> {
    Ok(expected_intersections_with_method(n, m, n_loops)?.0)
}

fn frustration_from(n_loops: usize, e: f64) -> f64 {
    if n_loops == 0 {
        return 0.25;
    }
    let n = n_loops as f64;
    (0.5 * (1.0 - n / (2.0 * n - e))).clamp(0.0, 0.25)
}

/// Expected frustration `½(1 − N/(2N − E[N×]))` for unit-weight loops placed
/// with destructive overlaps allowed.
pub fn expected_frustration_decay(n: usize, m: usize, n_loops: usize) -> Result<f64> {
    if n_loops == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let e = expected_intersections(n, m, n_loops)?;
    Ok(frustration_from(n_loops, e))
}
