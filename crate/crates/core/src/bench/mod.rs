//! Time-to-solution measurement: log-normal statistics over `N_tot`,
//! fitted sweep schedules, density scans and scaling studies.

mod fit;
mod scan;
mod stats;

pub use fit::{fit_exponential, fit_power_law, Fit};
pub use scan::{
    collect_tts, density_scan, geometric_densities, scaling_study, write_csv_summary, write_jsonl, BenchPoint,
    DensityScan, PeakStatistic, PointSpec, ScalingStudy, SchedulePolicy,
};
pub use stats::{lognormal_stats, HardnessStats};

/// Raw value of the fitted sweeps-per-run model
/// `(1.29n² - 33.1n + 1664)(41.4f³ - 11.7f² + 1.06f - 0.018)`.
pub fn default_nsweep_fit(n: usize, f: f64) -> f64 {
    let n = n as f64;
    (1.29 * n * n - 33.1 * n + 1664.0) * (41.4 * f.powi(3) - 11.7 * f * f + 1.06 * f - 0.018)
}

/// Fitted sweeps per run, rounded, at least 1.
///
/// Below `f ≈ 0.022` the fit is not positive and the result is clamped to 1
/// with a warning.
pub fn default_nsweep(n: usize, f: f64) -> usize {
    let x = default_nsweep_fit(n, f).round();
    if x < 1.0 {
        log::warn!("sweep fit non-positive at n={n}, f={f}; clamped to 1");
        return 1;
    }
    x as usize
}

/// The earlier fit `(0.504n² - 13.3n + 311)(193f³ - 52.7f² + 4.73f - 0.102)`,
/// kept for reference. Clamped to at least 1 like [`default_nsweep`].
pub fn first_fit_nsweep(n: usize, f: f64) -> usize {
    let nf = n as f64;
    let x = ((0.504 * nf * nf - 13.3 * nf + 311.0) * (193.0 * f.powi(3) - 52.7 * f * f + 4.73 * f - 0.102)).round();
    if x < 1.0 {
        log::warn!("first sweep fit non-positive at n={n}, f={f}; clamped to 1");
        return 1;
    }
    x as usize
}

/// Reference location of the hardness peak in loop density:
/// `0.3035 + 0.2952·exp(-0.0196 n)`.
pub fn rho_peak_reference(n: usize) -> f64 {
    if n < 2 {
        log::warn!("rho_peak_reference evaluated outside its domain (n={n})");
    }
    0.3035 + 0.2952 * (-0.0196 * n as f64).exp()
}
