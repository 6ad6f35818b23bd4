//! Bipartite Ising instances, spin states and the switching-subset geometry.
//!
//! Indices are 0-based throughout: visible spins `0..n`, hidden spins `0..m`.

mod gauge;
mod oracle;

pub use gauge::{gauge_fix, plant, vertex_switch};
pub use oracle::{brute_force_ground_state, BRUTE_FORCE_MAX};

use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::ops::{Index, IndexMut};

/// Absolute tolerance used when comparing energies built from sums of weights.
pub const ENERGY_TOL: f64 = 1e-9;

/// Dense row-major `n × m` coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(
                format!("{} entries ({rows}x{cols})", rows * cols),
                data.len(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * m);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::dims(format!("row {i} of length {m}"), r.len()));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: n, cols: m, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.data.iter().map(|w| w.abs()).sum()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&w| w != 0.0).count()
    }

    /// Iterates `(i, j, w)` over all cells.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let m = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, &w)| (k / m.max(1), k % m.max(1), w))
    }
}

impl Index<(usize, usize)> for WeightMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for WeightMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// A joint configuration of visible and hidden `±1` spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinState {
    pub v: Vec<i8>,
    pub h: Vec<i8>,
}

impl SpinState {
    pub fn new(v: Vec<i8>, h: Vec<i8>) -> Result<Self> {
        if let Some(&s) = v.iter().chain(&h).find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin(s as i64));
        }
        Ok(Self { v, h })
    }

    pub fn all_up(n: usize, m: usize) -> Self {
        Self {
            v: vec![1; n],
            h: vec![1; m],
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Self {
        let mut spin = || if rng.random::<bool>() { 1 } else { -1 };
        let v = (0..n).map(|_| spin()).collect();
        let h = (0..m).map(|_| spin()).collect();
        Self { v, h }
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn m(&self) -> usize {
        self.h.len()
    }

    pub fn flip_visible(&mut self, i: usize) {
        self.v[i] = -self.v[i];
    }

    pub fn flip_hidden(&mut self, j: usize) {
        self.h[j] = -self.h[j];
    }

    pub fn global_flip(&self) -> Self {
        Self {
            v: self.v.iter().map(|s| -s).collect(),
            h: self.h.iter().map(|s| -s).collect(),
        }
    }

    /// Elementwise product, the gauge action of `other` on `self`.
    pub fn times(&self, other: &SpinState) -> Self {
        Self {
            v: self.v.iter().zip(&other.v).map(|(a, b)| a * b).collect(),
            h: self.h.iter().zip(&other.h).map(|(a, b)| a * b).collect(),
        }
    }

    fn check_dims(&self, n: usize, m: usize) -> Result<()> {
        if self.n() != n || self.m() != m {
            return Err(Error::dims(
                format!("state {n}+{m}"),
                format!("{}+{}", self.n(), self.m()),
            ));
        }
        Ok(())
    }
}

/// Generation record carried alongside an instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub mode: String,
    pub seed: u64,
    pub alpha: f64,
    /// Target frustration index.
    pub f: f64,
    pub rho: f64,
    pub n_loops: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Loop counts `(left, upper, center)` for the structured mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_mix: Option<[usize; 3]>,
    /// Whether `f` is exact for the emitted weights (false with jitter).
    #[serde(default = "default_true")]
    pub f_exact: bool,
}

fn default_true() -> bool {
    true
}

/// A bipartite Ising instance with optional planted ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct RbmInstance {
    pub weights: WeightMatrix,
    pub visible_bias: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub planted: Option<SpinState>,
    pub ground_energy: Option<f64>,
    pub meta: Option<InstanceMeta>,
}

impl RbmInstance {
    pub fn new(weights: WeightMatrix, visible_bias: Vec<f64>, hidden_bias: Vec<f64>) -> Result<Self> {
        if visible_bias.len() != weights.rows() {
            return Err(Error::dims(
                format!("visible bias of length {}", weights.rows()),
                visible_bias.len(),
            ));
        }
        if hidden_bias.len() != weights.cols() {
            return Err(Error::dims(
                format!("hidden bias of length {}", weights.cols()),
                hidden_bias.len(),
            ));
        }
        Ok(Self {
            weights,
            visible_bias,
            hidden_bias,
            planted: None,
            ground_energy: None,
            meta: None,
        })
    }

    pub fn unbiased(weights: WeightMatrix) -> Self {
        let (n, m) = (weights.rows(), weights.cols());
        Self::new(weights, vec![0.0; n], vec![0.0; m]).expect("sizes match")
    }

    pub fn n(&self) -> usize {
        self.weights.rows()
    }

    pub fn m(&self) -> usize {
        self.weights.cols()
    }

    pub fn is_unbiased(&self) -> bool {
        self.visible_bias.iter().chain(&self.hidden_bias).all(|&x| x == 0.0)
    }

    pub fn with_planted(mut self, planted: SpinState, ground_energy: f64) -> Self {
        self.planted = Some(planted);
        self.ground_energy = Some(ground_energy);
        self
    }

    /// Visible fields `θ = W h + a` and hidden fields `φ = Wᵀ v + b`.
    pub fn local_fields(&self, s: &SpinState) -> Result<(Vec<f64>, Vec<f64>)> {
        s.check_dims(self.n(), self.m())?;
        let mut theta = self.visible_bias.clone();
        let mut phi = self.hidden_bias.clone();
        for i in 0..self.n() {
            let vi = s.v[i] as f64;
            for (j, &w) in self.weights.row(i).iter().enumerate() {
                theta[i] += w * s.h[j] as f64;
                phi[j] += w * vi;
            }
        }
        Ok((theta, phi))
    }

    pub fn energy(&self, s: &SpinState) -> Result<f64> {
        energy(self, s)
    }
}

/// `E(v, h) = -(vᵀ W h + aᵀ v + bᵀ h)`.
pub fn energy(inst: &RbmInstance, s: &SpinState) -> Result<f64> {
    s.check_dims(inst.n(), inst.m())?;
    let mut e = 0.0;
    for i in 0..inst.n() {
        let mut row = 0.0;
        for (j, &w) in inst.weights.row(i).iter().enumerate() {
            row += w * s.h[j] as f64;
        }
        e += s.v[i] as f64 * (row + inst.visible_bias[i]);
    }
    for (j, &b) in inst.hidden_bias.iter().enumerate() {
        e += b * s.h[j] as f64;
    }
    Ok(-e)
}

/// The set of couplings whose bond product `vᵢhⱼ` changes sign between two states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingSubset {
    pub n: usize,
    pub m: usize,
    /// Flipped visible indices.
    pub rows: Vec<usize>,
    /// Flipped hidden indices.
    pub cols: Vec<usize>,
}

impl SwitchingSubset {
    /// `|F| = n'm + nm' - 2n'm'`.
    pub fn cardinality(&self) -> usize {
        let (np, mp) = (self.rows.len(), self.cols.len());
        np * self.m + self.n * mp - 2 * np * mp
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows.binary_search(&i).is_ok() != self.cols.binary_search(&j).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.m).map(move |j| (i, j)).filter(move |&(i, j)| self.contains(i, j)))
    }
}

pub fn switching_subset(s: &SpinState, t: &SpinState) -> Result<SwitchingSubset> {
    t.check_dims(s.n(), s.m())?;
    let rows = (0..s.n()).filter(|&i| s.v[i] != t.v[i]).collect();
    let cols = (0..s.m()).filter(|&j| s.h[j] != t.h[j]).collect();
    Ok(SwitchingSubset {
        n: s.n(),
        m: s.m(),
        rows,
        cols,
    })
}

/// Energy change `E(t) - E(s)`, computed from the switching subset:
/// `2 Σ_F Wᵢⱼvᵢhⱼ` plus the bias terms of the flipped spins.
pub fn energy_gap(inst: &RbmInstance, s: &SpinState, t: &SpinState) -> Result<f64> {
    s.check_dims(inst.n(), inst.m())?;
    let f = switching_subset(s, t)?;
    let mut gap = 0.0;
    for (i, j) in f.iter() {
        gap += inst.weights[(i, j)] * (s.v[i] * s.h[j]) as f64;
    }
    for &i in &f.rows {
        gap += inst.visible_bias[i] * s.v[i] as f64;
    }
    for &j in &f.cols {
        gap += inst.hidden_bias[j] * s.h[j] as f64;
    }
    Ok(2.0 * gap)
}

/// Normalised Hamming distance between bond configurations, `|F| / nm`.
///
/// A pseudometric: a state and its global flip are at distance zero.
pub fn distance(s: &SpinState, t: &SpinState) -> Result<f64> {
    let f = switching_subset(s, t)?;
    let nm = f.n * f.m;
    if nm == 0 {
        return Ok(0.0);
    }
    Ok(f.cardinality() as f64 / nm as f64)
}

/// Fraction of negative coupling weight, `(-Σ_{W<0} W) / Σ|W|`.
///
/// Measured in the gauge of the planted state when one is recorded.
pub fn frustration_index(inst: &RbmInstance) -> Result<f64> {
    if !inst.is_unbiased() {
        return Err(Error::UndefinedFrustration(
            "instance has biases; absorb them into ghost spins first",
        ));
    }
    let gauged;
    let w = match &inst.planted {
        Some(p) => {
            gauged = gauge_fix(inst, p)?;
            &gauged.weights
        }
        None => &inst.weights,
    };
    let total = w.abs_sum();
    if total == 0.0 {
        return Err(Error::UndefinedFrustration("all couplings are zero"));
    }
    let neg: f64 = w.as_slice().iter().filter(|&&x| x < 0.0).map(|x| -x).sum();
    Ok(neg / total)
}

/// True when no single spin flip lowers the energy (ties allowed, up to [`ENERGY_TOL`]).
pub fn is_local_minimum(inst: &RbmInstance, s: &SpinState) -> Result<bool> {
    let (theta, phi) = inst.local_fields(s)?;
    let vis = theta.iter().zip(&s.v).all(|(t, &v)| 2.0 * v as f64 * t >= -ENERGY_TOL);
    let hid = phi.iter().zip(&s.h).all(|(p, &h)| 2.0 * h as f64 * p >= -ENERGY_TOL);
    Ok(vis && hid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, Strategy};

    fn naive_energy(inst: &RbmInstance, s: &SpinState) -> f64 {
        let mut e = 0.0;
        for (i, j, w) in inst.weights.iter() {
            e -= w * (s.v[i] * s.h[j]) as f64;
        }
        for i in 0..inst.n() {
            e -= inst.visible_bias[i] * s.v[i] as f64;
        }
        for j in 0..inst.m() {
            e -= inst.hidden_bias[j] * s.h[j] as f64;
        }
        e
    }

    fn arb_instance(max: usize, biased: bool) -> impl Strategy<Value = (RbmInstance, SpinState, SpinState)> {
        (1..=max, 1..=max, any::<u64>()).prop_map(move |(n, m, seed)| {
            let mut rng = stream(seed, 0);
            let w: Vec<f64> = (0..n * m).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut inst = RbmInstance::unbiased(WeightMatrix::from_vec(n, m, w).unwrap());
            if biased {
                inst.visible_bias = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                inst.hidden_bias = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            }
            let s = SpinState::random(n, m, &mut rng);
            let t = SpinState::random(n, m, &mut rng);
            (inst, s, t)
        })
    }

    #[test]
    fn energy_of_small_example() {
        let w = WeightMatrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 3.0]]).unwrap();
        let inst = RbmInstance::new(w, vec![0.25, -1.0], vec![2.0, 0.0]).unwrap();
        let s = SpinState::new(vec![1, -1], vec![-1, 1]).unwrap();
        // vWh = (1)(-1)(1) + (1)(1)(-2) + (-1)(-1)(0.5) + (-1)(1)(3) = -1 -2 +0.5 -3 = -5.5
        // av = 0.25 + 1 = 1.25 ; bh = -2
        assert!((energy(&inst, &s).unwrap() - 6.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_spins_and_dims() {
        assert!(SpinState::new(vec![1, 0], vec![1]).is_err());
        let inst = RbmInstance::unbiased(WeightMatrix::zeros(2, 3));
        assert!(energy(&inst, &SpinState::all_up(3, 2)).is_err());
        assert!(RbmInstance::new(WeightMatrix::zeros(2, 3), vec![0.0; 3], vec![0.0; 3]).is_err());
    }

    #[test]
    fn frustration_index_requires_unbiased_nonzero() {
        let inst = RbmInstance::unbiased(WeightMatrix::zeros(2, 2));
        assert!(matches!(frustration_index(&inst), Err(Error::UndefinedFrustration(_))));
        let mut b = RbmInstance::unbiased(WeightMatrix::from_rows(&[vec![1.0]]).unwrap());
        b.visible_bias[0] = 1.0;
        assert!(frustration_index(&b).is_err());
        let w = WeightMatrix::from_rows(&[vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap();
        assert!((frustration_index(&RbmInstance::unbiased(w)).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn local_minimum_allows_ties() {
        let w = WeightMatrix::from_rows(&[vec![1.0, -1.0]]).unwrap();
        let inst = RbmInstance::unbiased(w);
        // v flip gap is zero at the all-up state; hidden flips: h0 gap 2, h1 gap -2
        assert!(!is_local_minimum(&inst, &SpinState::all_up(1, 2)).unwrap());
        let s = SpinState::new(vec![1], vec![1, -1]).unwrap();
        assert!(is_local_minimum(&inst, &s).unwrap());
    }

    proptest! {
        #[test]
        fn energy_matches_naive_sum((inst, s, _t) in arb_instance(8, true)) {
            prop_assert!((energy(&inst, &s).unwrap() - naive_energy(&inst, &s)).abs() < 1e-9);
        }

        #[test]
        fn gap_identity((inst, s, t) in arb_instance(8, true)) {
            let direct = energy(&inst, &t).unwrap() - energy(&inst, &s).unwrap();
            prop_assert!((energy_gap(&inst, &s, &t).unwrap() - direct).abs() < 1e-9);
        }

        #[test]
        fn switching_subset_cardinality((_inst, s, t) in arb_instance(9, false)) {
            let f = switching_subset(&s, &t).unwrap();
            let explicit = (0..s.n()).flat_map(|i| (0..s.m()).map(move |j| (i, j)))
                .filter(|&(i, j)| t.v[i] * t.h[j] == -s.v[i] * s.h[j])
                .count();
            prop_assert_eq!(f.cardinality(), explicit);
            prop_assert_eq!(f.iter().count(), explicit);
        }

        #[test]
        fn distance_is_pseudometric(n in 1usize..8, m in 1usize..8, seed in any::<u64>()) {
            let mut rng = stream(seed, 1);
            let a = SpinState::random(n, m, &mut rng);
            let b = SpinState::random(n, m, &mut rng);
            let c = SpinState::random(n, m, &mut rng);
            let d = |x: &SpinState, y: &SpinState| distance(x, y).unwrap();
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert_eq!(d(&a, &a.global_flip()), 0.0);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
            prop_assert!((0.0..=1.0).contains(&d(&a, &b)));
        }
    }
}
