//! Planted-instance generators.
//!
//! All generators build the coupling matrix in the gauged frame, where the
//! all-`+1` state is a ground state, by summing loop atoms whose placement
//! never cancels existing weight. The result is then gauged onto a planted
//! state. Each atom on its own has `+1` as a ground state with energy
//! `-(3 - α)`, so the sum has ground energy `-N(3 - α)`.

mod atom;
mod random;
mod structured;

pub use atom::{decompose_loop, LoopAtom};

use crate::convert::{rbm_to_max2sat, Max2SatInstance};
use crate::rbm::{energy, plant, InstanceMeta, RbmInstance, SpinState, WeightMatrix};
use crate::rng::{stream, Rng, GENERATION_STREAM};
use crate::{Error, Result};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// `α = 3f / (1 - f)`, defined for `0 ≤ f < 0.25`.
pub fn alpha_from_f(f: f64) -> Result<f64> {
    if !(0.0..0.25).contains(&f) {
        return Err(Error::InvalidParameter(format!(
            "frustration index {f} outside [0, 0.25); alpha would exceed 1"
        )));
    }
    Ok(3.0 * f / (1.0 - f))
}

/// `f = α / (3 + α)`, defined for `0 ≤ α ≤ 1`.
pub fn f_from_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
    }
    Ok(alpha / (3.0 + alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenMode {
    Random,
    Structured,
    UniformSat,
}

impl GenMode {
    pub fn name(self) -> &'static str {
        match self {
            GenMode::Random => "random",
            GenMode::Structured => "structured",
            GenMode::UniformSat => "uniform-sat",
        }
    }
}

impl std::str::FromStr for GenMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(GenMode::Random),
            "structured" => Ok(GenMode::Structured),
            "uniform-sat" | "uniform" => Ok(GenMode::UniformSat),
            _ => Err(Error::InvalidParameter(format!("unknown mode '{s}'"))),
        }
    }
}

/// Which sign patterns a new atom may land on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Placement {
    /// Cells may already hold weight of the same sign.
    pub constructive: bool,
    /// Cells may hold weight of the opposite sign (cancellation).
    pub destructive: bool,
}

impl Placement {
    pub fn negative_ok(&self, w: f64) -> bool {
        self.destructive || w == 0.0 || (self.constructive && w < 0.0)
    }

    pub fn positive_ok(&self, w: f64) -> bool {
        self.destructive || w == 0.0 || (self.constructive && w > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    /// Magnitude of each atom's negative edge, in `[0, 1]`.
    pub alpha: f64,
    /// Loop density `N / n`.
    pub rho: f64,
    pub seed: u64,
    pub mode: GenMode,
    /// Block-size fraction for the structured mode, in `(0, 1]`.
    pub d: f64,
    /// `(left, upper, center)` loop counts; defaults to `⌊N/4⌋, ⌊N/4⌋, rest`.
    pub loop_mix: Option<[usize; 3]>,
    /// Allow stacking onto cells of the same sign (random mode).
    pub allow_constructive: bool,
    /// Allow cancellation; breaks the exact frustration index. Off by default.
    pub allow_destructive: bool,
    /// Standard deviation of multiplicative noise on loop edges (0 = exact weights).
    pub jitter: f64,
    /// State to plant; drawn uniformly when absent.
    pub planted: Option<SpinState>,
}

impl GenParams {
    fn base(mode: GenMode, n: usize, m: usize, alpha: f64, rho: f64, seed: u64) -> Self {
        Self {
            n,
            m,
            alpha,
            rho,
            seed,
            mode,
            d: 1.0,
            loop_mix: None,
            allow_constructive: true,
            allow_destructive: false,
            jitter: 0.0,
            planted: None,
        }
    }

    pub fn random(n: usize, m: usize, f: f64, rho: f64, seed: u64) -> Result<Self> {
        let p = Self::base(GenMode::Random, n, m, alpha_from_f(f)?, rho, seed);
        p.validate()?;
        Ok(p)
    }

    pub fn structured(n: usize, m: usize, f: f64, rho: f64, d: f64, seed: u64) -> Result<Self> {
        let mut p = Self::base(GenMode::Structured, n, m, alpha_from_f(f)?, rho, seed);
        p.d = d;
        p.validate()?;
        Ok(p)
    }

    /// Uniform-weight MAX-2-SAT mode: `α = 1`, no intersections at all.
    pub fn uniform_sat(n: usize, m: usize, rho: f64, seed: u64) -> Result<Self> {
        let mut p = Self::base(GenMode::UniformSat, n, m, 1.0, rho, seed);
        p.allow_constructive = false;
        p.validate()?;
        Ok(p)
    }

    /// Sets `α` directly (allows `α = 1`, i.e. `f = 0.25`).
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn with_loop_mix(mut self, mix: [usize; 3]) -> Result<Self> {
        self.loop_mix = Some(mix);
        self.validate()?;
        Ok(self)
    }

    pub fn f(&self) -> f64 {
        self.alpha / (3.0 + self.alpha)
    }

    /// `N = round(ρ n)`, ties to even.
    pub fn n_loops(&self) -> usize {
        (self.rho * self.n as f64).round_ties_even() as usize
    }

    /// `(N1, N2, N3)` for the structured mode.
    pub fn resolved_loop_mix(&self) -> [usize; 3] {
        self.loop_mix.unwrap_or_else(|| {
            let n = self.n_loops();
            [n / 4, n / 4, n - 2 * (n / 4)]
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidParameter(s));
        if self.n < 2 || self.m < 2 {
            return bad(format!("need n, m >= 2, got {}x{}", self.n, self.m));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha {} outside [0, 1]", self.alpha));
        }
        if !(self.rho >= 0.0) || !self.rho.is_finite() {
            return bad(format!("loop density {} must be finite and >= 0", self.rho));
        }
        if !(self.jitter >= 0.0) || !self.jitter.is_finite() {
            return bad(format!("jitter {} must be finite and >= 0", self.jitter));
        }
        if self.mode == GenMode::Structured {
            if !(self.d > 0.0 && self.d <= 1.0) {
                return bad(format!("block fraction d={} outside (0, 1]", self.d));
            }
            if let Some(mix) = self.loop_mix {
                if mix.iter().sum::<usize>() != self.n_loops() {
                    return bad(format!(
                        "loop mix {:?} does not sum to N = {}",
                        mix,
                        self.n_loops()
                    ));
                }
            }
        }
        if self.mode == GenMode::UniformSat && (self.alpha != 1.0 || self.allow_constructive || self.allow_destructive) {
            return bad("uniform-sat mode needs alpha = 1 and no intersections".into());
        }
        if let Some(p) = &self.planted {
            if p.n() != self.n || p.m() != self.m {
                return bad(format!("planted state is {}+{}, instance {}x{}", p.n(), p.m(), self.n, self.m));
            }
        }
        Ok(())
    }

    pub(crate) fn placement(&self) -> Placement {
        Placement {
            constructive: self.allow_constructive,
            destructive: self.allow_destructive,
        }
    }
}

/// Edge weights for the next atom: exact `[-α, 1, 1, 1]`, or jittered
/// positives `max(0, 1 + σξ)` with the negative at `α·min(positives)` so
/// that the atom keeps `+1` as a ground state.
pub(crate) fn atom_weights(alpha: f64, jitter: f64, rng: &mut Rng) -> [f64; 4] {
    if jitter == 0.0 {
        return [-alpha, 1.0, 1.0, 1.0];
    }
    let mut pos = [0.0; 3];
    for p in &mut pos {
        let xi: f64 = rng.sample(StandardNormal);
        *p = (1.0 + jitter * xi).max(0.0);
    }
    let least = pos.iter().copied().fold(f64::INFINITY, f64::min);
    [-alpha * least, pos[0], pos[1], pos[2]]
}

pub(crate) fn fits(w: &WeightMatrix, cells: &[(usize, usize); 4], rule: Placement) -> bool {
    rule.negative_ok(w[cells[0]]) && cells[1..].iter().all(|&c| rule.positive_ok(w[c]))
}

pub(crate) fn apply(w: &mut WeightMatrix, cells: &[(usize, usize); 4], weights: &[f64; 4]) {
    for (&c, &x) in cells.iter().zip(weights) {
        w[c] += x;
    }
}

pub(crate) fn attempt_budget(n: usize, m: usize) -> usize {
    100 * n * m
}

/// Gauges the generated matrix onto the planted state and records metadata.
fn finish(p: &GenParams, w: WeightMatrix, rng: &mut Rng) -> Result<RbmInstance> {
    let planted = match &p.planted {
        Some(s) => s.clone(),
        None => SpinState::random(p.n, p.m, rng),
    };
    let gauged = RbmInstance::unbiased(w);
    let mut inst = plant(&gauged, &planted)?;
    let e = energy(&inst, &planted)?;
    inst.ground_energy = Some(e);
    inst.meta = Some(InstanceMeta {
        mode: p.mode.name().to_string(),
        seed: p.seed,
        alpha: p.alpha,
        f: p.f(),
        rho: p.rho,
        n_loops: p.n_loops(),
        d: (p.mode == GenMode::Structured).then_some(p.d),
        loop_mix: (p.mode == GenMode::Structured).then(|| p.resolved_loop_mix()),
        f_exact: p.jitter == 0.0 && !p.allow_destructive,
    });
    Ok(inst)
}

/// Generates a planted instance according to `p.mode`.
pub fn generate(p: &GenParams) -> Result<RbmInstance> {
    p.validate()?;
    let mut rng = stream(p.seed, GENERATION_STREAM);
    let w = match p.mode {
        GenMode::Random | GenMode::UniformSat => random::place_loops(p, &mut rng)?,
        GenMode::Structured => structured::place_loops(p, &mut rng)?,
    };
    finish(p, w, &mut rng)
}

pub fn random_loop_instance(p: &GenParams) -> Result<RbmInstance> {
    if p.mode != GenMode::Random {
        return Err(Error::InvalidParameter("expected random mode parameters".into()));
    }
    generate(p)
}

pub fn structured_loop_instance(p: &GenParams) -> Result<RbmInstance> {
    if p.mode != GenMode::Structured {
        return Err(Error::InvalidParameter("expected structured mode parameters".into()));
    }
    generate(p)
}

/// Uniform-weight MAX-2-SAT: `8N` clauses of weight 2 from `N` disjoint
/// `α = 1` loops. Also returns the underlying planted instance.
pub fn uniform_sat_instance(p: &GenParams) -> Result<(Max2SatInstance, RbmInstance)> {
    if p.mode != GenMode::UniformSat {
        return Err(Error::InvalidParameter("expected uniform-sat mode parameters".into()));
    }
    let inst = generate(p)?;
    Ok((rbm_to_max2sat(&inst)?, inst))
}

/// Block sizes `n₁ = ⌈(n-1)d⌉`, `m₁ = ⌈(m-1)d⌉` of the structured layout.
pub fn block_sizes(n: usize, m: usize, d: f64) -> (usize, usize) {
    // the small shift keeps e.g. (n-1)·d = 7.000000000000001 from rounding up
    let up = |k: usize| ((k as f64 * d) - 1e-9).ceil().max(1.0) as usize;
    (up(n - 1), up(m - 1))
}

/// The state reached from all-`+1` by flipping the top `n₁` visible and the
/// right `m - m₁` hidden spins, i.e. switching the `B1 ∪ B4` blocks.
pub fn b1_b4_state(n: usize, m: usize, d: f64) -> SpinState {
    let (n1, m1) = block_sizes(n, m, d);
    SpinState {
        v: (0..n).map(|i| if i < n1 { -1 } else { 1 }).collect(),
        h: (0..m).map(|j| if j < m1 { 1 } else { -1 }).collect(),
    }
}

/// Sums of a gauged matrix over the four blocks `[B1, B2, B3, B4]`
/// (top-left, top-right, bottom-left, bottom-right).
pub fn block_sums(w: &WeightMatrix, d: f64) -> [f64; 4] {
    let (n1, m1) = block_sizes(w.rows(), w.cols(), d);
    let mut s = [0.0; 4];
    for (i, j, x) in w.iter() {
        let k = match (i < n1, j < m1) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        };
        s[k] += x;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbm::{brute_force_ground_state, frustration_index, gauge_fix};

    #[test]
    fn alpha_f_conversions() {
        assert_eq!(alpha_from_f(0.0).unwrap(), 0.0);
        assert!((alpha_from_f(0.1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f_from_alpha(1.0).unwrap(), 0.25);
        assert!(alpha_from_f(0.25).is_err());
        assert!(f_from_alpha(1.1).is_err());
        for k in 0..25 {
            let f = k as f64 / 100.0;
            assert!((f_from_alpha(alpha_from_f(f).unwrap()).unwrap() - f).abs() < 1e-15);
        }
    }

    #[test]
    fn loop_count_rounds_half_to_even() {
        let p = GenParams::random(10, 10, 0.1, 0.25, 0).unwrap();
        assert_eq!(p.n_loops(), 2);
        let p = GenParams::random(10, 10, 0.1, 0.35, 0).unwrap();
        assert_eq!(p.n_loops(), 4);
    }

    #[test]
    fn block_sizes_follow_ceiling() {
        assert_eq!(block_sizes(40, 40, 0.2), (8, 8));
        assert_eq!(block_sizes(11, 6, 0.5), (5, 3));
        assert_eq!(block_sizes(8, 8, 1.0), (7, 7));
        assert_eq!(block_sizes(2, 2, 0.01), (1, 1));
    }

    #[test]
    fn single_atom_instance() {
        let p = GenParams::random(2, 2, 0.0, 0.5, 3).unwrap().with_alpha(1.0).unwrap();
        let inst = generate(&p).unwrap();
        assert_eq!(inst.ground_energy, Some(-2.0));
        assert_eq!(frustration_index(&inst).unwrap(), 0.25);
        let (_, e) = brute_force_ground_state(&inst).unwrap();
        assert_eq!(e, -2.0);
    }

    #[test]
    fn ten_loop_energy() {
        let p = GenParams::random(10, 10, 0.1, 1.0, 11).unwrap();
        let inst = generate(&p).unwrap();
        assert!((inst.ground_energy.unwrap() + 80.0 / 3.0).abs() < 1e-9);
        assert!((frustration_index(&inst).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams::structured(12, 9, 0.2, 1.0, 0.5, 99).unwrap();
        assert_eq!(generate(&p).unwrap(), generate(&p).unwrap());
        let q = GenParams { seed: 100, ..p.clone() };
        assert_ne!(generate(&p).unwrap(), generate(&q).unwrap());
    }

    #[test]
    fn jitter_keeps_planted_optimum() {
        for seed in 0..20 {
            let mut p = GenParams::random(8, 8, 0.2, 1.5, seed).unwrap();
            p.jitter = 0.3;
            let inst = generate(&p).unwrap();
            let (_, e) = brute_force_ground_state(&inst).unwrap();
            assert!((e - inst.ground_energy.unwrap()).abs() < 1e-9);
            assert!(!inst.meta.as_ref().unwrap().f_exact);
        }
    }

    #[test]
    fn destructive_variant_still_certified() {
        for seed in 0..20 {
            let mut p = GenParams::random(6, 6, 0.0, 3.0, seed).unwrap().with_alpha(1.0).unwrap();
            p.allow_destructive = true;
            let inst = generate(&p).unwrap();
            let (_, e) = brute_force_ground_state(&inst).unwrap();
            assert!((e - inst.ground_energy.unwrap()).abs() < 1e-9);
            assert!((e + 2.0 * p.n_loops() as f64).abs() < 1e-9);
            let g = gauge_fix(&inst, inst.planted.as_ref().unwrap()).unwrap();
            assert!(frustration_index(&g).unwrap() <= 0.25 + 1e-12);
        }
    }

    #[test]
    fn uniform_sat_shape() {
        let p = GenParams::uniform_sat(4, 4, 0.25, 5).unwrap();
        let (sat, _) = uniform_sat_instance(&p).unwrap();
        assert_eq!(sat.clauses.len(), 8);
        assert!(sat.clauses.iter().all(|c| c.weight == 2.0));
        let p0 = GenParams::uniform_sat(4, 4, 0.0, 5).unwrap();
        assert!(uniform_sat_instance(&p0).unwrap().0.clauses.is_empty());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GenParams::random(1, 5, 0.1, 1.0, 0).is_err());
        assert!(GenParams::random(5, 5, 0.3, 1.0, 0).is_err());
        assert!(GenParams::structured(5, 5, 0.1, 1.0, 0.0, 0).is_err());
        let p = GenParams::structured(10, 10, 0.1, 1.0, 0.5, 0).unwrap();
        assert!(p.with_loop_mix([1, 1, 1]).is_err());
    }

    #[test]
    fn saturation_is_reported() {
        let p = GenParams::uniform_sat(4, 4, 10.0, 1).unwrap();
        assert!(matches!(generate(&p), Err(Error::Saturated { .. })));
    }
}
