use super::{fit_exponential, fit_power_law, lognormal_stats, rho_peak_reference, Fit, HardnessStats};
use crate::generate::{generate, GenMode, GenParams};
use crate::rng::derive_seed;
use crate::solve::{solve_planted, AnnealSchedule, DEFAULT_BETA_MIN, DEFAULT_MAX_RUNS};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Instance family measured at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub n: usize,
    pub m: usize,
    pub f: f64,
    pub rho: f64,
    pub mode: GenMode,
    /// Block fraction (structured mode).
    #[serde(default = "default_d")]
    pub d: f64,
}

fn default_d() -> f64 {
    1.0
}

impl PointSpec {
    pub fn random(n: usize, f: f64, rho: f64) -> Self {
        Self {
            n,
            m: n,
            f,
            rho,
            mode: GenMode::Random,
            d: 1.0,
        }
    }

    pub fn structured(n: usize, f: f64, rho: f64, d: f64) -> Self {
        Self {
            mode: GenMode::Structured,
            d,
            ..Self::random(n, f, rho)
        }
    }

    pub fn params(&self, seed: u64) -> Result<GenParams> {
        match self.mode {
            GenMode::Random => GenParams::random(self.n, self.m, self.f, self.rho, seed),
            GenMode::Structured => GenParams::structured(self.n, self.m, self.f, self.rho, self.d, seed),
            GenMode::UniformSat => GenParams::uniform_sat(self.n, self.m, self.rho, seed),
        }
    }

    fn tag(&self) -> [u64; 6] {
        let mode = match self.mode {
            GenMode::Random => 0,
            GenMode::Structured => 1,
            GenMode::UniformSat => 2,
        };
        [
            self.n as u64,
            self.m as u64,
            self.f.to_bits(),
            self.rho.to_bits(),
            mode,
            self.d.to_bits(),
        ]
    }

    /// Seed of instance `index` under `master`.
    pub fn instance_seed(&self, master: u64, index: u64) -> u64 {
        let mut tags = self.tag().to_vec();
        tags.push(index);
        derive_seed(master, &tags)
    }
}

/// How each instance's annealing schedule is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchedulePolicy {
    /// Fixed sweeps per run; `None` uses the fitted default for `(n, f)`.
    pub n_sweep: Option<usize>,
    pub max_runs: u64,
    pub beta_min: f64,
}

impl Default for SchedulePolicy {
    fn default() -> Self {
        Self {
            n_sweep: None,
            max_runs: DEFAULT_MAX_RUNS,
            beta_min: DEFAULT_BETA_MIN,
        }
    }
}

impl SchedulePolicy {
    pub fn schedule(&self, spec: &PointSpec, seed: u64) -> AnnealSchedule {
        let mut s = AnnealSchedule::default_for(spec.n, spec.f, spec.rho, seed);
        if let Some(k) = self.n_sweep {
            s.n_sweep = k;
        }
        s.max_runs = self.max_runs;
        s.beta_min = self.beta_min;
        s
    }
}

/// Which statistic locates a hardness peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeakStatistic {
    P95,
    Median,
}

impl PeakStatistic {
    pub fn of(self, s: &HardnessStats) -> f64 {
        match self {
            PeakStatistic::P95 => s.p95,
            PeakStatistic::Median => s.p50,
        }
    }
}

/// Measured `N_tot` samples and their summary at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    #[serde(flatten)]
    pub spec: PointSpec,
    pub master_seed: u64,
    pub n_sweep: usize,
    pub max_runs: u64,
    #[serde(flatten)]
    pub stats: HardnessStats,
    /// Empirical median of the raw samples.
    pub median: f64,
    /// Samples that hit the run cap; they enter the statistics at `n_sweep·max_runs`.
    pub censored_count: usize,
    pub samples: Vec<u64>,
}

/// Generates and solves `samples` instances of `spec`.
///
/// Instances run in parallel; results are ordered by instance index, so the
/// output depends only on `master_seed`.
pub fn collect_tts(spec: &PointSpec, samples: usize, master_seed: u64, policy: &SchedulePolicy) -> Result<BenchPoint> {
    let results: Vec<Result<(u64, bool)>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let seed = spec.instance_seed(master_seed, s);
            let inst = generate(&spec.params(seed)?)?;
            let sched = policy.schedule(spec, derive_seed(seed, &[1]));
            let rec = solve_planted(&inst, &sched)?;
            Ok((rec.n_tot, rec.found))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let n_tot: Vec<u64> = results.iter().map(|r| r.0).collect();
    let censored_count = results.iter().filter(|r| !r.1).count();
    let xs: Vec<f64> = n_tot.iter().map(|&x| x as f64).collect();
    let stats = lognormal_stats(&xs)?;
    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    };
    let sched = policy.schedule(spec, 0);
    log::info!(
        "n={} f={} rho={} mode={}: p50={:.1} p95={:.1} censored={}",
        spec.n,
        spec.f,
        spec.rho,
        spec.mode.name(),
        stats.p50,
        stats.p95,
        censored_count
    );
    Ok(BenchPoint {
        spec: spec.clone(),
        master_seed,
        n_sweep: sched.n_sweep,
        max_runs: sched.max_runs,
        stats,
        median,
        censored_count,
        samples: n_tot,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityScan {
    pub points: Vec<BenchPoint>,
    pub statistic: PeakStatistic,
    pub peak_rho: f64,
}

/// `ρ_k = 0.1·1.12^k` for `k = 1..=count`.
pub fn geometric_densities(count: usize) -> Vec<f64> {
    (1..=count).map(|k| 0.1 * 1.12f64.powi(k as i32)).collect()
}

/// Measures hardness along `densities` and locates the peak of `statistic`.
pub fn density_scan(
    base: &PointSpec,
    densities: &[f64],
    samples: usize,
    master_seed: u64,
    policy: &SchedulePolicy,
    statistic: PeakStatistic,
) -> Result<DensityScan> {
    if densities.is_empty() {
        return Err(Error::InvalidParameter("density list is empty".into()));
    }
    let points = densities
        .iter()
        .map(|&rho| collect_tts(&PointSpec { rho, ..base.clone() }, samples, master_seed, policy))
        .collect::<Result<Vec<_>>>()?;
    let peak = points
        .iter()
        .max_by(|a, b| statistic.of(&a.stats).total_cmp(&statistic.of(&b.stats)))
        .expect("nonempty");
    Ok(DensityScan {
        peak_rho: peak.spec.rho,
        statistic,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStudy {
    pub sizes: Vec<usize>,
    pub geo_means: Vec<f64>,
    pub points: Vec<BenchPoint>,
    pub power_law: Fit,
    pub exponential: Fit,
}

/// Geometric-mean `N_tot` per size at the reference peak density, with
/// power-law and exponential fits.
pub fn scaling_study(
    f: f64,
    sizes: &[usize],
    samples: usize,
    master_seed: u64,
    policy: &SchedulePolicy,
) -> Result<ScalingStudy> {
    if sizes.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: sizes.len(),
        });
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("sizes must be strictly ascending".into()));
    }
    let points = sizes
        .iter()
        .map(|&n| collect_tts(&PointSpec::random(n, f, rho_peak_reference(n)), samples, master_seed, policy))
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let g: Vec<f64> = points.iter().map(|p| p.stats.geo_mean).collect();
    Ok(ScalingStudy {
        sizes: sizes.to_vec(),
        power_law: fit_power_law(&x, &g)?,
        exponential: fit_exponential(&x, &g)?,
        geo_means: g,
        points,
    })
}

/// One JSON object per point.
pub fn write_jsonl<W: Write>(points: &[BenchPoint], out: &mut W) -> Result<()> {
    for p in points {
        serde_json::to_writer(&mut *out, p)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    f: f64,
    rho: f64,
    k: usize,
    mu_hat: f64,
    sigma_hat: f64,
    p5: f64,
    p50: f64,
    p95: f64,
    censored_count: usize,
}

pub fn write_csv_summary<W: Write>(points: &[BenchPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(CsvRow {
            n: p.spec.n,
            f: p.spec.f,
            rho: p.spec.rho,
            k: p.stats.k,
            mu_hat: p.stats.mu_hat,
            sigma_hat: p.stats.sigma_hat,
            p5: p.stats.p5,
            p50: p.stats.p50,
            p95: p.stats.p95,
            censored_count: p.censored_count,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SchedulePolicy {
        SchedulePolicy {
            n_sweep: Some(30),
            max_runs: 50,
            beta_min: DEFAULT_BETA_MIN,
        }
    }

    #[test]
    fn single_density_scan() {
        let scan = density_scan(&PointSpec::random(12, 0.1, 0.5), &[0.5], 2, 1, &quick(), PeakStatistic::P95).unwrap();
        assert_eq!(scan.points.len(), 1);
        assert_eq!(scan.peak_rho, 0.5);
    }

    #[test]
    fn scans_are_reproducible() {
        let spec = PointSpec::random(14, 0.15, 0.5);
        let a = collect_tts(&spec, 6, 42, &quick()).unwrap();
        let b = collect_tts(&spec, 6, 42, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn censored_samples_sit_at_the_cap() {
        let spec = PointSpec::random(30, 0.24, 0.5);
        let policy = SchedulePolicy {
            n_sweep: Some(1),
            max_runs: 2,
            beta_min: DEFAULT_BETA_MIN,
        };
        let p = collect_tts(&spec, 4, 3, &policy).unwrap();
        assert!(p.censored_count > 0);
        assert!(p.samples.iter().all(|&x| x <= 2));
    }

    #[test]
    fn more_runs_never_lower_samples() {
        let spec = PointSpec::random(16, 0.2, 0.6);
        let mut lo = quick();
        lo.max_runs = 2;
        let mut hi = quick();
        hi.max_runs = 20;
        let a = collect_tts(&spec, 8, 5, &lo).unwrap();
        let b = collect_tts(&spec, 8, 5, &hi).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!(y >= x);
        }
    }

    #[test]
    fn outputs() {
        let p = collect_tts(&PointSpec::random(10, 0.1, 0.5), 3, 9, &quick()).unwrap();
        let mut buf = Vec::new();
        write_jsonl(std::slice::from_ref(&p), &mut buf).unwrap();
        let back: BenchPoint = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, p);
        let mut csv = Vec::new();
        write_csv_summary(&[p], &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("n,f,rho,k,mu_hat,sigma_hat,p5,p50,p95,censored_count\n"));
    }

    #[test]
    fn density_grid() {
        let d = geometric_densities(20);
        assert_eq!(d.len(), 20);
        assert!((d[0] - 0.112).abs() < 1e-12);
    }
}
