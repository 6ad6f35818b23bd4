use super::special::{ln_erfc, ln_factorials, log_sum_exp};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Result of the local-minima estimate. `overflow` is set when the sum is not
/// representable as an `f64`; `value` is then `+∞` and `ln_value` stays finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMinimaEstimate {
    pub value: f64,
    pub ln_value: f64,
    pub overflow: bool,
}

fn k_of(alpha: f64) -> f64 {
    (3.0 - alpha) / (alpha + 1.0)
}

/// `ln p(n₁, n₂)`: the probability, under the independence approximation,
/// that a state with `n₁` visible and `n₂` hidden spins down is a local minimum
/// of an `n × n` gauged loop instance.
pub fn ln_p_local_minimum(n: usize, n1: usize, n2: usize, alpha: f64) -> f64 {
    ln_p_from_table(n, n1, n2, &erfc_table(n, alpha))
}

/// `ln erfc(k(n − 2j)/√(6n))` for `j = 0..=n`; the mirrored argument
/// `k(2j − n)/√(6n)` is entry `n − j`.
fn erfc_table(n: usize, alpha: f64) -> Vec<f64> {
    let nf = n as f64;
    let k = k_of(alpha);
    let s = (6.0 * nf).sqrt();
    (0..=n).map(|j| ln_erfc(k * (nf - 2.0 * j as f64) / s)).collect()
}

fn ln_p_from_table(n: usize, n1: usize, n2: usize, t: &[f64]) -> f64 {
    let nf = n as f64;
    let (a1, a2) = (n1 as f64, n2 as f64);
    -2.0 * nf * 2f64.ln() + a1 * t[n2] + (nf - a1) * t[n - n2] + a2 * t[n1] + (nf - a2) * t[n - n1]
}

fn validate(n: usize, alpha: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be in (0, 1]")));
    }
    Ok(())
}

fn estimate(n: usize, alpha: f64, drop_flip: bool) -> Result<LocalMinimaEstimate> {
    validate(n, alpha)?;
    let lnf = ln_factorials(n);
    let table = erfc_table(n, alpha);
    let ln_c = |k: usize| lnf[n] - lnf[k] - lnf[n - k];
    let mut terms = Vec::with_capacity((n + 1) * (n + 1));
    for n1 in 0..=n {
        for n2 in 0..=n {
            if (n1, n2) == (0, 0) || (drop_flip && (n1, n2) == (n, n)) {
                continue;
            }
            terms.push(ln_p_from_table(n, n1, n2, &table) + ln_c(n1) + ln_c(n2));
        }
    }
    // skipping (0,0) is the "− p(0,0)" of the formula, since C(n,0)² = 1
    let ln_value = log_sum_exp(&terms);
    let value = ln_value.exp();
    let overflow = !value.is_finite();
    Ok(LocalMinimaEstimate {
        value: if overflow { f64::INFINITY } else { value },
        ln_value,
        overflow,
    })
}

/// Expected number of local minima other than the ground state,
/// `Σ p(n₁,n₂) C(n,n₁) C(n,n₂) − p(0,0)`, evaluated as printed.
///
/// The all-down corner `(n, n)` is the global flip of the ground state; it is
/// kept here and removed by [`expected_local_minima_excluding_flip`].
pub fn expected_local_minima(n: usize, alpha: f64) -> Result<LocalMinimaEstimate> {
    estimate(n, alpha, false)
}

/// [`expected_local_minima`] without the `(n, n)` global-flip term.
pub fn expected_local_minima_excluding_flip(n: usize, alpha: f64) -> Result<LocalMinimaEstimate> {
    estimate(n, alpha, true)
}
