//! Simulated annealing with restarts.
//!
//! A sweep proposes a Metropolis flip of every visible spin (in index order)
//! and then every hidden spin. Flipping `vᵢ` changes the energy by
//! `2vᵢθᵢ` with `θ = W h + a`; flipping `hⱼ` by `2hⱼφⱼ` with `φ = Wᵀ v + b`.
//! Fields are updated incrementally after each accepted flip. The inverse
//! temperature rises linearly over the sweeps of a run.
//!
//! Hardness is reported as `N_tot`, the number of sweeps summed over all
//! runs until one of them reaches the target energy.

mod anneal;

pub use anneal::{Annealer, OpCounters};

use crate::bench::default_nsweep_fit;
use crate::rbm::{RbmInstance, SpinState};
use crate::rng::{stream, Rng};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_BETA_MIN: f64 = 0.01;
pub const DEFAULT_MAX_RUNS: u64 = 10_000;
/// Sweeps per run when the fitted schedule is not positive (very low `f`).
pub const LOW_F_NSWEEP: usize = 1000;

/// Energy slack for flagging a candidate hit before exact recomputation.
const CANDIDATE_TOL: f64 = 1e-6;
/// Tolerance of the confirmed energy match.
pub const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub beta_min: f64,
    pub beta_max: f64,
    pub n_sweep: usize,
    pub max_runs: u64,
    pub seed: u64,
}

impl AnnealSchedule {
    /// `β` from `β_min` to `ln(n) / max(1, ρ)`.
    pub fn new(n: usize, rho: f64, n_sweep: usize, max_runs: u64, seed: u64) -> Self {
        Self {
            beta_min: DEFAULT_BETA_MIN,
            beta_max: beta_max(n, rho),
            n_sweep,
            max_runs,
            seed,
        }
    }

    /// Schedule from the fitted sweep count for `(n, f)`; falls back to
    /// [`LOW_F_NSWEEP`] where the fit is not positive.
    pub fn default_for(n: usize, f: f64, rho: f64, seed: u64) -> Self {
        let fit = default_nsweep_fit(n, f);
        let n_sweep = if fit >= 0.5 {
            fit.round() as usize
        } else {
            log::warn!("sweep fit is {fit:.3} at n={n}, f={f}; using {LOW_F_NSWEEP} sweeps");
            LOW_F_NSWEEP
        };
        Self::new(n, rho, n_sweep, DEFAULT_MAX_RUNS, seed)
    }

    /// Default schedule for a generated instance (reads `f` and `ρ` from its metadata).
    pub fn for_instance(inst: &RbmInstance, seed: u64) -> Self {
        let (f, rho) = inst.meta.as_ref().map_or((0.0, 1.0), |m| (m.f, m.rho));
        Self::default_for(inst.n(), f, rho, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_min > 0.0 && self.beta_min <= self.beta_max) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < beta_min <= beta_max, got {} and {}",
                self.beta_min, self.beta_max
            )));
        }
        if self.n_sweep == 0 || self.max_runs == 0 {
            return Err(Error::InvalidParameter("n_sweep and max_runs must be >= 1".into()));
        }
        Ok(())
    }

    pub fn betas(&self) -> Vec<f64> {
        linear_betas(self.beta_min, self.beta_max, self.n_sweep)
    }
}

pub fn beta_max(n: usize, rho: f64) -> f64 {
    (n as f64).ln() / rho.max(1.0)
}

fn linear_betas(lo: f64, hi: f64, n_sweep: usize) -> Vec<f64> {
    if n_sweep <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n_sweep - 1) as f64;
    (0..n_sweep).map(|c| lo + c as f64 * step).collect()
}

/// `β(c) = β_min + (c-1)/(n_sweep-1)·(β_max - β_min)` for `c = 1..n_sweep`.
pub fn beta_schedule(n: usize, rho: f64, n_sweep: usize, beta_min: f64) -> Vec<f64> {
    linear_betas(beta_min, beta_max(n, rho), n_sweep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtsRecord {
    /// Sweeps summed over all runs (a partial final sweep counts as one).
    pub n_tot: u64,
    pub runs_used: u64,
    pub found: bool,
    pub best_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_hint: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub state: SpinState,
    pub energy: f64,
    pub sweeps_used: usize,
    pub reached_target: bool,
}

/// One annealing run from a uniformly random initial state.
///
/// Stops as soon as the energy is confirmed within [`MATCH_TOL`] of
/// `target` (mid-sweep). Returns the best state seen at a sweep boundary or
/// at the stopping point.
pub fn anneal_run(inst: &RbmInstance, betas: &[f64], target: Option<f64>, rng: &mut Rng) -> RunOutcome {
    let init = SpinState::random(inst.n(), inst.m(), rng);
    let mut a = Annealer::new(inst, &init).expect("state matches instance");
    a.run(betas, target, rng)
}

/// Anneals with restarts until `target` is reached or `max_runs` runs are spent.
///
/// Run `r` uses the stream `(sched.seed, r)`, so records are reproducible.
pub fn solve_with_restarts(inst: &RbmInstance, target: f64, sched: &AnnealSchedule) -> Result<TtsRecord> {
    sched.validate()?;
    let started = std::time::Instant::now();
    let betas = sched.betas();
    let mut annealer = Annealer::new(inst, &SpinState::all_up(inst.n(), inst.m()))?;
    let mut n_tot = 0u64;
    let mut best = f64::INFINITY;
    for r in 0..sched.max_runs {
        let mut rng = stream(sched.seed, r);
        let init = SpinState::random(inst.n(), inst.m(), &mut rng);
        annealer.reset(&init);
        let out = annealer.run(&betas, Some(target), &mut rng);
        n_tot += out.sweeps_used as u64;
        best = best.min(out.energy);
        if out.reached_target {
            return Ok(TtsRecord {
                n_tot,
                runs_used: r + 1,
                found: true,
                best_energy: out.energy,
                wall_hint: Some(started.elapsed().as_secs_f64()),
            });
        }
    }
    Ok(TtsRecord {
        n_tot,
        runs_used: sched.max_runs,
        found: false,
        best_energy: best,
        wall_hint: Some(started.elapsed().as_secs_f64()),
    })
}

/// Solves a generated instance against its certified ground energy.
pub fn solve_planted(inst: &RbmInstance, sched: &AnnealSchedule) -> Result<TtsRecord> {
    let target = inst
        .ground_energy
        .ok_or_else(|| Error::InvalidParameter("instance has no certified ground energy".into()))?;
    solve_with_restarts(inst, target, sched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenParams};

    #[test]
    fn schedule_examples() {
        assert_eq!(beta_schedule(30, 0.5, 1, 0.01), vec![0.01]);
        let n = 2f64.exp();
        let betas = linear_betas(0.01, n.ln(), 3);
        assert!((betas[0] - 0.01).abs() < 1e-15);
        assert!((betas[1] - 1.005).abs() < 1e-12);
        assert!((betas[2] - 2.0).abs() < 1e-12);
        // ln n = 2 at density 4
        assert!((2.0f64 / 4.0f64.max(1.0) - 0.5).abs() < 1e-15);
        let s = AnnealSchedule::new(1000, 4.0, 10, 1, 0);
        assert!((s.beta_max - (1000f64).ln() / 4.0).abs() < 1e-15);
        assert_eq!(AnnealSchedule::new(1000, 0.5, 10, 1, 0).beta_max, (1000f64).ln());
    }

    #[test]
    fn unreachable_target_uses_full_budget() {
        let p = GenParams::random(10, 10, 0.1, 0.5, 1).unwrap();
        let inst = generate(&p).unwrap();
        let sched = AnnealSchedule::new(10, 0.5, 7, 5, 3);
        let rec = solve_with_restarts(&inst, inst.ground_energy.unwrap() - 1.0, &sched).unwrap();
        assert!(!rec.found);
        assert_eq!(rec.n_tot, 35);
        assert_eq!(rec.runs_used, 5);
    }

    #[test]
    fn same_seed_same_record() {
        let p = GenParams::random(20, 20, 0.15, 0.5, 2).unwrap();
        let inst = generate(&p).unwrap();
        let sched = AnnealSchedule::for_instance(&inst, 77);
        let mut a = solve_planted(&inst, &sched).unwrap();
        let mut b = solve_planted(&inst, &sched).unwrap();
        a.wall_hint = None;
        b.wall_hint = None;
        assert_eq!(a, b);
        assert!(a.found);
        assert!((a.best_energy - inst.ground_energy.unwrap()).abs() < MATCH_TOL);
        assert!(a.n_tot <= sched.n_sweep as u64 * a.runs_used);
    }

    #[test]
    fn low_f_falls_back_to_fixed_sweeps() {
        let s = AnnealSchedule::default_for(30, 0.0, 0.5, 0);
        assert_eq!(s.n_sweep, LOW_F_NSWEEP);
        let s = AnnealSchedule::default_for(30, 0.05, 0.5, 0);
        assert_eq!(s.n_sweep, 20);
    }
}
