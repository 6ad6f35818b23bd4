use super::{RunOutcome, CANDIDATE_TOL, MATCH_TOL};
use crate::rbm::{energy, RbmInstance, SpinState, WeightMatrix};
use crate::rng::Rng;
use crate::Result;
use rand::Rng as _;

/// Work counters, for checking per-sweep cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub sweeps: u64,
    pub proposals: u64,
    pub accepted: u64,
    /// Individual local-field entries touched by accepted flips.
    pub field_updates: u64,
}

/// Single-spin Metropolis state with incrementally maintained fields.
pub struct Annealer<'a> {
    inst: &'a RbmInstance,
    wt: WeightMatrix,
    v: Vec<f64>,
    h: Vec<f64>,
    theta: Vec<f64>,
    phi: Vec<f64>,
    energy: f64,
    pub counters: OpCounters,
}

impl<'a> Annealer<'a> {
    pub fn new(inst: &'a RbmInstance, s: &SpinState) -> Result<Self> {
        let mut a = Self {
            inst,
            wt: inst.weights.transpose(),
            v: Vec::new(),
            h: Vec::new(),
            theta: Vec::new(),
            phi: Vec::new(),
            energy: 0.0,
            counters: OpCounters::default(),
        };
        inst.local_fields(s)?;
        a.reset(s);
        Ok(a)
    }

    /// Moves to state `s` and recomputes fields and energy from scratch.
    pub fn reset(&mut self, s: &SpinState) {
        let (theta, phi) = self.inst.local_fields(s).expect("dimensions checked");
        self.v = s.v.iter().map(|&x| x as f64).collect();
        self.h = s.h.iter().map(|&x| x as f64).collect();
        self.theta = theta;
        self.phi = phi;
        self.energy = energy(self.inst, s).expect("dimensions checked");
    }

    pub fn state(&self) -> SpinState {
        let spin = |x: &f64| if *x > 0.0 { 1 } else { -1 };
        SpinState {
            v: self.v.iter().map(spin).collect(),
            h: self.h.iter().map(spin).collect(),
        }
    }

    /// Running energy, maintained incrementally.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn fields(&self) -> (&[f64], &[f64]) {
        (&self.theta, &self.phi)
    }

    /// Energy change of flipping visible spin `i`.
    pub fn delta_visible(&self, i: usize) -> f64 {
        2.0 * self.v[i] * self.theta[i]
    }

    /// Energy change of flipping hidden spin `j`.
    pub fn delta_hidden(&self, j: usize) -> f64 {
        2.0 * self.h[j] * self.phi[j]
    }

    pub fn flip_visible(&mut self, i: usize) {
        self.energy += self.delta_visible(i);
        self.v[i] = -self.v[i];
        let s2 = 2.0 * self.v[i];
        for (p, &w) in self.phi.iter_mut().zip(self.inst.weights.row(i)) {
            *p += s2 * w;
        }
        self.counters.accepted += 1;
        self.counters.field_updates += self.phi.len() as u64;
    }

    pub fn flip_hidden(&mut self, j: usize) {
        self.energy += self.delta_hidden(j);
        self.h[j] = -self.h[j];
        let s2 = 2.0 * self.h[j];
        for (t, &w) in self.theta.iter_mut().zip(self.wt.row(j)) {
            *t += s2 * w;
        }
        self.counters.accepted += 1;
        self.counters.field_updates += self.theta.len() as u64;
    }

    fn hit(&self, target: Option<f64>) -> bool {
        match target {
            Some(t) if self.energy <= t + CANDIDATE_TOL => {
                energy(self.inst, &self.state()).expect("dimensions checked") <= t + MATCH_TOL
            }
            _ => false,
        }
    }

    /// One Metropolis sweep at inverse temperature `beta`. Each proposal
    /// consumes one uniform variate and is accepted when
    /// `u < exp(-β ΔE)`. Returns true if `target` was reached (the sweep
    /// stops there).
    pub fn sweep(&mut self, beta: f64, target: Option<f64>, rng: &mut Rng) -> bool {
        self.counters.sweeps += 1;
        let (n, m) = (self.v.len(), self.h.len());
        for i in 0..n {
            self.counters.proposals += 1;
            let de = self.delta_visible(i);
            let u: f64 = rng.random();
            if de <= 0.0 || u < (-beta * de).exp() {
                self.flip_visible(i);
                if self.hit(target) {
                    return true;
                }
            }
        }
        for j in 0..m {
            self.counters.proposals += 1;
            let de = self.delta_hidden(j);
            let u: f64 = rng.random();
            if de <= 0.0 || u < (-beta * de).exp() {
                self.flip_hidden(j);
                if self.hit(target) {
                    return true;
                }
            }
        }
        false
    }

    /// Anneals over `betas`, one sweep each, from the current state.
    pub fn run(&mut self, betas: &[f64], target: Option<f64>, rng: &mut Rng) -> RunOutcome {
        if self.hit(target) {
            return self.outcome(0, true);
        }
        let mut best = (self.energy, self.state());
        for (c, &beta) in betas.iter().enumerate() {
            if self.sweep(beta, target, rng) {
                return self.outcome(c + 1, true);
            }
            if self.energy < best.0 {
                best = (self.energy, self.state());
            }
        }
        let e = energy(self.inst, &best.1).expect("dimensions checked");
        RunOutcome {
            state: best.1,
            energy: e,
            sweeps_used: betas.len(),
            reached_target: false,
        }
    }

    fn outcome(&self, sweeps_used: usize, reached: bool) -> RunOutcome {
        let state = self.state();
        let e = energy(self.inst, &state).expect("dimensions checked");
        RunOutcome {
            state,
            energy: e,
            sweeps_used,
            reached_target: reached,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbm::{energy_gap, WeightMatrix};
    use crate::rng::stream;
    use proptest::prelude::*;

    fn random_instance(n: usize, m: usize, seed: u64) -> RbmInstance {
        let mut rng = stream(seed, 9);
        let w = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut inst = RbmInstance::unbiased(WeightMatrix::from_vec(n, m, w).unwrap());
        inst.visible_bias = (0..n).map(|_| rng.random_range(-0.5..0.5)).collect();
        inst.hidden_bias = (0..m).map(|_| rng.random_range(-0.5..0.5)).collect();
        inst
    }

    #[test]
    fn zero_temperature_quench_on_ferromagnet() {
        let w = WeightMatrix::from_vec(6, 5, vec![1.0; 30]).unwrap();
        let inst = RbmInstance::unbiased(w);
        let mut rng = stream(1, 0);
        let init = SpinState::random(6, 5, &mut rng);
        let mut a = Annealer::new(&inst, &init).unwrap();
        for _ in 0..5 {
            a.sweep(1e3, None, &mut rng);
        }
        assert_eq!(a.energy(), -30.0);
    }

    #[test]
    fn infinite_temperature_accepts_everything() {
        let inst = random_instance(5, 4, 2);
        let mut rng = stream(2, 0);
        let mut a = Annealer::new(&inst, &SpinState::all_up(5, 4)).unwrap();
        a.sweep(0.0, None, &mut rng);
        assert_eq!(a.counters.accepted, 9);
        assert_eq!(a.state(), SpinState::all_up(5, 4).global_flip());
    }

    #[test]
    fn sweep_cost_counters() {
        let inst = random_instance(7, 4, 3);
        let mut rng = stream(3, 0);
        let mut a = Annealer::new(&inst, &SpinState::random(7, 4, &mut rng)).unwrap();
        a.sweep(0.5, None, &mut rng);
        let c = a.counters;
        assert_eq!(c.proposals, 11);
        // field updates: m per accepted visible flip and n per accepted hidden flip
        assert!(c.field_updates <= c.accepted * 7);
        let mut b = Annealer::new(&inst, &SpinState::all_up(7, 4)).unwrap();
        b.flip_visible(0);
        assert_eq!(b.counters.field_updates, 4);
        b.flip_hidden(0);
        assert_eq!(b.counters.field_updates, 4 + 7);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn incremental_bookkeeping_matches_recomputation(seed in any::<u64>()) {
            let inst = random_instance(8, 8, seed);
            let mut rng = stream(seed, 1);
            let mut a = Annealer::new(&inst, &SpinState::random(8, 8, &mut rng)).unwrap();
            for _ in 0..300 {
                let before = a.state();
                let k = rng.random_range(0..16);
                let de = if k < 8 { a.delta_visible(k) } else { a.delta_hidden(k - 8) };
                if k < 8 { a.flip_visible(k) } else { a.flip_hidden(k - 8) }
                let after = a.state();
                prop_assert!((energy_gap(&inst, &before, &after).unwrap() - de).abs() < 1e-9);
                let (t, p) = inst.local_fields(&after).unwrap();
                for (x, y) in t.iter().zip(a.fields().0).chain(p.iter().zip(a.fields().1)) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
                prop_assert!((a.energy() - energy(&inst, &after).unwrap()).abs() < 1e-9);
            }
        }
    }
}
