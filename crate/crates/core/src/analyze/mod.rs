//! Closed-form predictors: loop intersections and frustration decay, the
//! expected number of local minima, the energy-gap variance of random
//! instances and the local-field dispersion of the metastable cluster.

mod dispersion;
mod intersections;
mod local_minima;
pub mod special;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub use dispersion::{local_field_dispersion, Dispersion};
pub use intersections::{
    expected_frustration_decay, expected_intersections, expected_min_poisson, IntersectionModel,
};
pub use local_minima::{
    expected_local_minima, expected_local_minima_excluding_flip, ln_p_local_minimum, LocalMinimaEstimate,
};

/// How a series-based value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactSeries,
    Asymptote,
}

/// Variance `4nmd(μ² + σ²)` of the energy gap between two states at distance
/// `d` when the weights are i.i.d. with mean `μ` and standard deviation `σ`.
pub fn gap_variance(n: usize, m: usize, d: f64, mu: f64, sigma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidParameter(format!("d = {d} must be in [0, 1]")));
    }
    Ok(4.0 * n as f64 * m as f64 * d * (mu * mu + sigma * sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbm::{energy_gap, RbmInstance, SpinState, WeightMatrix};
    use crate::rng::stream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn gap_variance_values() {
        assert_eq!(gap_variance(20, 20, 0.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(gap_variance(20, 20, 0.25, 0.0, 1.0).unwrap(), 400.0);
        assert!(gap_variance(2, 2, 1.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn gap_variance_monte_carlo() {
        // |F| = n'm + nm' - 2n'm' = 100 with n' = 5, m' = 0, so d = 0.25
        let (n, m) = (20, 20);
        let mut rng = stream(5, 0);
        let draws = 20_000;
        let mut s2 = 0.0;
        for _ in 0..draws {
            let w: Vec<f64> = (0..n * m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let inst = RbmInstance::unbiased(WeightMatrix::from_vec(n, m, w).unwrap());
            let s = SpinState::random(n, m, &mut rng);
            let mut t = s.clone();
            let mut rows: Vec<usize> = (0..n).collect();
            for k in 0..5 {
                let pick = rng.random_range(k..n);
                rows.swap(k, pick);
                t.flip_visible(rows[k]);
            }
            let g = energy_gap(&inst, &s, &t).unwrap();
            s2 += g * g;
        }
        let var = s2 / draws as f64;
        assert!((var / 400.0 - 1.0).abs() < 0.05, "{var}");
    }
}
