use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Log-normal summary of positive samples.
///
/// `p5 = exp(μ̂ - 2σ̂)`, `p50 = geo_mean = exp(μ̂)`, `p95 = exp(μ̂ + 2σ̂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessStats {
    pub k: usize,
    pub mu_hat: f64,
    pub sigma_hat: f64,
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
    pub geo_mean: f64,
}

/// `μ̂` is the mean of `ln x`, `σ̂` its `k-1`-normalised standard deviation.
pub fn lognormal_stats(samples: &[f64]) -> Result<HardnessStats> {
    let k = samples.len();
    if k < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: k });
    }
    if let Some(bad) = samples.iter().find(|&&x| !(x >= 1.0) || !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("samples must be finite and >= 1, got {bad}")));
    }
    let logs: Vec<f64> = samples.iter().map(|x| x.ln()).collect();
    let mu = logs.iter().sum::<f64>() / k as f64;
    let var = logs.iter().map(|l| (l - mu).powi(2)).sum::<f64>() / (k - 1) as f64;
    let sigma = var.sqrt();
    let g = mu.exp();
    Ok(HardnessStats {
        k,
        mu_hat: mu,
        sigma_hat: sigma,
        p5: (mu - 2.0 * sigma).exp(),
        p50: g,
        p95: (mu + 2.0 * sigma).exp(),
        geo_mean: g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::LogNormal;

    #[test]
    fn constant_samples() {
        let s = lognormal_stats(&[7.0; 5]).unwrap();
        assert!((s.mu_hat - 7f64.ln()).abs() < 1e-15);
        assert!(s.sigma_hat < 1e-12);
        assert!((s.p95 - 7.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_samples() {
        let s = lognormal_stats(&[1.0, 1f64.exp().powi(2)]).unwrap();
        assert!((s.mu_hat - 1.0).abs() < 1e-15);
        assert!((s.sigma_hat - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.p95 - (1.0 + 2.0 * 2f64.sqrt()).exp()).abs() < 1e-9);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(lognormal_stats(&[3.0]), Err(Error::InsufficientSamples { .. })));
        assert!(lognormal_stats(&[0.5, 2.0]).is_err());
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let dist = LogNormal::new(3.0, 0.5).unwrap();
        let mut rng = stream(2024, 0);
        // shift keeps every draw >= 1 without touching the bulk (exp(3 - 10σ) > 1)
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample::<f64, _>(dist).max(1.0)).collect();
        let s = lognormal_stats(&xs).unwrap();
        assert!((s.mu_hat - 3.0).abs() < 0.01);
        assert!((s.p95 / 4f64.exp() - 1.0).abs() < 0.02);
    }

    proptest! {
        #[test]
        fn percentile_identity(xs in proptest::collection::vec(1.0f64..1e6, 2..50)) {
            let s = lognormal_stats(&xs).unwrap();
            prop_assert!(((s.p5 * s.p95) / (s.geo_mean * s.geo_mean) - 1.0).abs() < 1e-9);
            prop_assert!(s.p5 <= s.p50 && s.p50 <= s.p95);
        }
    }
}
