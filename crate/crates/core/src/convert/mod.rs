//! Conversions between weighted MAX-2-SAT, QUBO, bipartite QUBO and the
//! `±1` bipartite Ising form, plus file formats.
//!
//! Objective conventions: MAX-2-SAT and QUBO values are maximised and include
//! their `offset`; the Ising energy is minimised. Every conversion returns the
//! constant it drops, so objective values agree along the whole chain.

pub mod json;
pub mod wcnf;

use crate::rbm::{RbmInstance, SpinState, WeightMatrix};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A clause of one or two literals. Literals are 1-based signed variable
/// indices; negative means negated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedClause {
    pub lit1: i64,
    pub lit2: Option<i64>,
    pub weight: f64,
}

impl WeightedClause {
    pub fn unit(lit: i64, weight: f64) -> Self {
        Self {
            lit1: lit,
            lit2: None,
            weight,
        }
    }

    pub fn pair(lit1: i64, lit2: i64, weight: f64) -> Self {
        Self {
            lit1,
            lit2: Some(lit2),
            weight,
        }
    }

    pub fn literals(&self) -> impl Iterator<Item = i64> {
        std::iter::once(self.lit1).chain(self.lit2)
    }

    pub fn is_satisfied(&self, x: &[bool]) -> bool {
        self.literals().any(|l| lit_value(l, x))
    }
}

fn lit_value(lit: i64, x: &[bool]) -> bool {
    let v = x[lit.unsigned_abs() as usize - 1];
    if lit > 0 {
        v
    } else {
        !v
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Max2SatInstance {
    pub num_vars: usize,
    pub clauses: Vec<WeightedClause>,
}

impl Max2SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<WeightedClause>) -> Result<Self> {
        for c in &clauses {
            if !(c.weight >= 0.0) || !c.weight.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "clause weight must be finite and non-negative, got {}",
                    c.weight
                )));
            }
            for l in c.literals() {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidParameter(format!(
                        "literal {l} out of range 1..={num_vars}"
                    )));
                }
            }
            if let Some(l2) = c.lit2 {
                if l2.abs() == c.lit1.abs() {
                    return Err(Error::InvalidParameter(format!(
                        "clause repeats variable {}",
                        l2.abs()
                    )));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn total_weight(&self) -> f64 {
        self.clauses.iter().map(|c| c.weight).sum()
    }

    pub fn satisfied_weight(&self, x: &[bool]) -> f64 {
        self.clauses
            .iter()
            .filter(|c| c.is_satisfied(x))
            .map(|c| c.weight)
            .sum()
    }
}

/// `offset + Σ Bᵢxᵢ + Σ_{i<j} Qᵢⱼxᵢxⱼ` over `x ∈ {0,1}ⁿ`, to be maximised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuboInstance {
    pub n: usize,
    pub linear: Vec<f64>,
    pub quadratic: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
}

impl QuboInstance {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            linear: vec![0.0; n],
            quadratic: BTreeMap::new(),
            offset: 0.0,
        }
    }

    /// Adds `c·xᵢxⱼ`, storing it under `(min, max)`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, c: f64) {
        assert_ne!(i, j, "diagonal terms belong in the linear part");
        let key = if i < j { (i, j) } else { (j, i) };
        *self.quadratic.entry(key).or_insert(0.0) += c;
    }

    pub fn value(&self, x: &[bool]) -> f64 {
        let b = |i: usize| if x[i] { 1.0 } else { 0.0 };
        let lin: f64 = self.linear.iter().enumerate().map(|(i, c)| c * b(i)).sum();
        let quad: f64 = self.quadratic.iter().map(|(&(i, j), c)| c * b(i) * b(j)).sum();
        self.offset + lin + quad
    }
}

/// `offset + aᵀv + bᵀh + vᵀWh` over `v ∈ {0,1}ⁿ, h ∈ {0,1}ᵐ`, to be maximised.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteQubo {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub w: WeightMatrix,
    pub offset: f64,
}

impl BipartiteQubo {
    pub fn value(&self, v: &[bool], h: &[bool]) -> f64 {
        let b = |x: bool| if x { 1.0 } else { 0.0 };
        let mut s = self.offset;
        s += self.a.iter().zip(v).map(|(c, &x)| c * b(x)).sum::<f64>();
        s += self.b.iter().zip(h).map(|(c, &x)| c * b(x)).sum::<f64>();
        for (i, j, w) in self.w.iter() {
            s += w * b(v[i]) * b(h[j]);
        }
        s
    }
}

/// Literal as an affine function `c + s·x` of its variable.
fn affine(lit: i64) -> (usize, f64, f64) {
    let var = lit.unsigned_abs() as usize - 1;
    if lit > 0 {
        (var, 0.0, 1.0)
    } else {
        (var, 1.0, -1.0)
    }
}

/// Sums the QUBO translations of the clauses:
/// `x∨y → x+y−xy`, `¬x∨y → 1−x+xy`, `x∨¬y → 1−y+xy`, `¬x∨¬y → 1−xy`,
/// and `x → x`, `¬x → 1−x` for unit clauses.
pub fn max2sat_to_qubo(sat: &Max2SatInstance) -> QuboInstance {
    let mut q = QuboInstance::zeros(sat.num_vars);
    for c in &sat.clauses {
        let w = c.weight;
        let (x1, c1, s1) = affine(c.lit1);
        match c.lit2 {
            None => {
                q.offset += w * c1;
                q.linear[x1] += w * s1;
            }
            Some(l2) => {
                // l1 + l2 − l1·l2 with lk = ck + sk·xk
                let (x2, c2, s2) = affine(l2);
                q.offset += w * (c1 + c2 - c1 * c2);
                q.linear[x1] += w * s1 * (1.0 - c2);
                q.linear[x2] += w * s2 * (1.0 - c1);
                q.add_quadratic(x1, x2, -w * s1 * s2);
            }
        }
    }
    q
}

/// Embeds an `n`-variable QUBO into an `n × n` bipartite QUBO whose maxima
/// have `v = h` and `v` maximising the original.
///
/// Quadratic terms `Qᵢⱼ` become couplings `Wᵢⱼ`; the penalty
/// `−2c·Σ(vᵢ + hᵢ − 2vᵢhᵢ)` with `c = Σ|B| + Σ|Q|` (or 1 if that is zero)
/// costs `2c` per mismatched pair and nothing when `vᵢ = hᵢ`.
pub fn qubo_to_bipartite(q: &QuboInstance) -> BipartiteQubo {
    let n = q.n;
    let mut c = q.linear.iter().map(|x| x.abs()).sum::<f64>()
        + q.quadratic.values().map(|x| x.abs()).sum::<f64>();
    if c == 0.0 {
        c = 1.0;
    }
    let mut w = WeightMatrix::zeros(n, n);
    for (&(i, j), &x) in &q.quadratic {
        w[(i, j)] += x;
    }
    for i in 0..n {
        w[(i, i)] += 4.0 * c;
    }
    BipartiteQubo {
        a: q.linear.iter().map(|b| b - 2.0 * c).collect(),
        b: vec![-2.0 * c; n],
        w,
        offset: q.offset,
    }
}

/// Substitutes `x = (1 + s)/2` on both layers.
///
/// Returns the Ising instance and the constant `K` such that, for every
/// state, `bipartite.value(x(s)) = −E(s) + K`.
pub fn binary_to_ising(bq: &BipartiteQubo) -> (RbmInstance, f64) {
    let (n, m) = (bq.w.rows(), bq.w.cols());
    let mut a: Vec<f64> = bq.a.iter().map(|x| 0.5 * x).collect();
    let mut b: Vec<f64> = bq.b.iter().map(|x| 0.5 * x).collect();
    let mut w = WeightMatrix::zeros(n, m);
    for (i, j, x) in bq.w.iter() {
        a[i] += 0.25 * x;
        b[j] += 0.25 * x;
        w[(i, j)] = 0.25 * x;
    }
    let offset = bq.offset
        + 0.5 * bq.a.iter().sum::<f64>()
        + 0.5 * bq.b.iter().sum::<f64>()
        + 0.25 * bq.w.sum();
    (RbmInstance::new(w, a, b).expect("sizes match"), offset)
}

/// The full chain MAX-2-SAT → QUBO → bipartite QUBO → Ising.
///
/// For every assignment `x`, `sat.satisfied_weight(x) = −E(s) + K` where `s`
/// is `x` (as `±1`) on both layers.
pub fn max2sat_to_ising(sat: &Max2SatInstance) -> (RbmInstance, f64) {
    binary_to_ising(&qubo_to_bipartite(&max2sat_to_qubo(sat)))
}

/// Replaces biases with couplings to two ghost spins pinned at `+1`:
/// `W_{i,m} = aᵢ`, `W_{n,j} = bⱼ`, corner 0.
///
/// A planted state is extended with `+1` ghosts. The ground energy is not
/// carried over, since the extended model also admits states with a ghost
/// at `−1`.
pub fn absorb_biases(inst: &RbmInstance) -> RbmInstance {
    let (n, m) = (inst.n(), inst.m());
    let mut w = WeightMatrix::zeros(n + 1, m + 1);
    for (i, j, x) in inst.weights.iter() {
        w[(i, j)] = x;
    }
    for (i, &a) in inst.visible_bias.iter().enumerate() {
        w[(i, m)] = a;
    }
    for (j, &b) in inst.hidden_bias.iter().enumerate() {
        w[(n, j)] = b;
    }
    let mut out = RbmInstance::unbiased(w);
    out.planted = inst.planted.as_ref().map(|p| {
        let mut p = p.clone();
        p.v.push(1);
        p.h.push(1);
        p
    });
    out.meta = inst.meta.clone();
    out
}

/// Visible spin `i` is variable `i + 1`, hidden spin `j` is `n + j + 1`;
/// `+1` means true.
pub fn state_to_assignment(s: &SpinState) -> Vec<bool> {
    s.v.iter().chain(&s.h).map(|&x| x > 0).collect()
}

pub fn assignment_to_state(n: usize, m: usize, x: &[bool]) -> Result<SpinState> {
    if x.len() != n + m {
        return Err(Error::dims(n + m, x.len()));
    }
    let spin = |b: &bool| if *b { 1 } else { -1 };
    Ok(SpinState {
        v: x[..n].iter().map(spin).collect(),
        h: x[n..].iter().map(spin).collect(),
    })
}

fn push_bond(clauses: &mut Vec<WeightedClause>, vi: i64, hj: i64, w: f64) {
    if w > 0.0 {
        clauses.push(WeightedClause::pair(vi, -hj, 2.0 * w));
        clauses.push(WeightedClause::pair(-vi, hj, 2.0 * w));
    } else if w < 0.0 {
        clauses.push(WeightedClause::pair(vi, hj, -2.0 * w));
        clauses.push(WeightedClause::pair(-vi, -hj, -2.0 * w));
    }
}

/// Splits each nonzero coupling into two clauses of weight `2|Wᵢⱼ|`:
/// `W > 0 → (vᵢ ∨ ¬hⱼ), (¬vᵢ ∨ hⱼ)`; `W < 0 → (vᵢ ∨ hⱼ), (¬vᵢ ∨ ¬hⱼ)`.
///
/// A violated bond costs exactly `2|Wᵢⱼ|`, so the violated weight of a state
/// is `E(s) + Σ|W|`. Requires an unbiased instance; see
/// [`rbm_to_max2sat_with_offset`] for the biased case.
pub fn rbm_to_max2sat(inst: &RbmInstance) -> Result<Max2SatInstance> {
    if !inst.is_unbiased() {
        return Err(Error::InvalidParameter(
            "rbm_to_max2sat needs an unbiased instance; use rbm_to_max2sat_with_offset".into(),
        ));
    }
    Ok(rbm_to_max2sat_with_offset(inst).0)
}

/// Like [`rbm_to_max2sat`] but also accepts biases, treating them as
/// couplings to ghost literals pinned true.
///
/// Clauses containing a true ghost literal are dropped and their weight is
/// returned as the offset; false ghost literals are removed, leaving unit
/// clauses. `satisfied_weight(x) + offset` is the satisfied weight of the
/// unsimplified ghost formula.
pub fn rbm_to_max2sat_with_offset(inst: &RbmInstance) -> (Max2SatInstance, f64) {
    let (n, m) = (inst.n(), inst.m());
    let mut clauses = Vec::new();
    for (i, j, w) in inst.weights.iter() {
        push_bond(&mut clauses, i as i64 + 1, (n + j) as i64 + 1, w);
    }
    let mut offset = 0.0;
    let biases = inst
        .visible_bias
        .iter()
        .enumerate()
        .map(|(i, &a)| (i as i64 + 1, a))
        .chain(
            inst.hidden_bias
                .iter()
                .enumerate()
                .map(|(j, &b)| ((n + j) as i64 + 1, b)),
        );
    for (var, x) in biases {
        // Coupling x to a ghost g = true: one clause keeps a false ghost
        // literal (becomes unit), the other contains a true one (dropped).
        if x > 0.0 {
            clauses.push(WeightedClause::unit(var, 2.0 * x));
            offset += 2.0 * x;
        } else if x < 0.0 {
            clauses.push(WeightedClause::unit(-var, -2.0 * x));
            offset -= 2.0 * x;
        }
    }
    (
        Max2SatInstance {
            num_vars: n + m,
            clauses,
        },
        offset,
    )
}

/// Clauses per variable of the MAX-2-SAT form: `2·nnz(W) / (n + m)`.
pub fn clause_density(inst: &RbmInstance) -> f64 {
    let vars = inst.n() + inst.m();
    if vars == 0 {
        return 0.0;
    }
    2.0 * inst.weights.nnz() as f64 / vars as f64
}

/// Density `8N / nm` used for non-intersecting loop instances.
pub fn loop_clause_density(n: usize, m: usize, n_loops: usize) -> f64 {
    if n * m == 0 {
        return 0.0;
    }
    8.0 * n_loops as f64 / (n * m) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbm::{brute_force_ground_state, energy};
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn assignments(k: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u64..1 << k).map(move |mask| (0..k).map(|i| mask >> i & 1 == 1).collect())
    }

    #[test]
    fn clause_table_examples() {
        let sat = Max2SatInstance::new(2, vec![WeightedClause::pair(1, 2, 1.0)]).unwrap();
        let q = max2sat_to_qubo(&sat);
        assert_eq!(q.linear, vec![1.0, 1.0]);
        assert_eq!(q.quadratic[&(0, 1)], -1.0);
        assert_eq!(q.offset, 0.0);
        assert_eq!(q.value(&[true, true]), 1.0);

        let sat = Max2SatInstance::new(2, vec![WeightedClause::pair(-1, -2, 2.0)]).unwrap();
        let q = max2sat_to_qubo(&sat);
        assert_eq!(q.quadratic[&(0, 1)], -2.0);
        assert_eq!(q.offset, 2.0);
        assert_eq!(q.value(&[true, true]), 0.0);

        let q = max2sat_to_qubo(&Max2SatInstance::new(3, vec![]).unwrap());
        assert_eq!(q, QuboInstance::zeros(3));
    }

    #[test]
    fn qubo_matches_clause_weight_for_all_clause_shapes() {
        let mut clauses = vec![];
        for &(a, b) in &[(1, 2), (-1, 2), (1, -2), (-1, -2), (2, -1)] {
            clauses.push(WeightedClause::pair(a, b, 0.7));
        }
        clauses.push(WeightedClause::unit(1, 0.3));
        clauses.push(WeightedClause::unit(-2, 1.1));
        let sat = Max2SatInstance::new(2, clauses).unwrap();
        let q = max2sat_to_qubo(&sat);
        for x in assignments(2) {
            assert!((q.value(&x) - sat.satisfied_weight(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_clauses() {
        assert!(Max2SatInstance::new(2, vec![WeightedClause::pair(1, -1, 1.0)]).is_err());
        assert!(Max2SatInstance::new(2, vec![WeightedClause::pair(1, 3, 1.0)]).is_err());
        assert!(Max2SatInstance::new(2, vec![WeightedClause::unit(1, -1.0)]).is_err());
    }

    #[test]
    fn bipartite_single_variable() {
        let mut q = QuboInstance::zeros(1);
        q.linear[0] = 1.0;
        let bq = qubo_to_bipartite(&q);
        let mut best = (f64::NEG_INFINITY, vec![], vec![]);
        for v in assignments(1) {
            for h in assignments(1) {
                let val = bq.value(&v, &h);
                if val > best.0 {
                    best = (val, v.clone(), h.clone());
                }
            }
        }
        assert_eq!(best.1, vec![true]);
        assert_eq!(best.2, vec![true]);
    }

    #[test]
    fn bipartite_zero_qubo_penalises_mismatch() {
        let bq = qubo_to_bipartite(&QuboInstance::zeros(2));
        for v in assignments(2) {
            for h in assignments(2) {
                let val = bq.value(&v, &h);
                if v == h {
                    assert_eq!(val, 0.0);
                } else {
                    assert!(val < 0.0);
                }
            }
        }
    }

    #[test]
    fn ising_single_coupling() {
        let bq = BipartiteQubo {
            a: vec![0.0],
            b: vec![0.0],
            w: WeightMatrix::from_rows(&[vec![4.0]]).unwrap(),
            offset: 0.0,
        };
        let (inst, k) = binary_to_ising(&bq);
        assert_eq!(inst.weights[(0, 0)], 1.0);
        assert_eq!(inst.visible_bias, vec![1.0]);
        assert_eq!(inst.hidden_bias, vec![1.0]);
        let up = SpinState::all_up(1, 1);
        assert_eq!(-energy(&inst, &up).unwrap() + k, 4.0);
    }

    #[test]
    fn ising_of_zero_is_zero() {
        let bq = BipartiteQubo {
            a: vec![0.0; 2],
            b: vec![0.0; 3],
            w: WeightMatrix::zeros(2, 3),
            offset: 0.0,
        };
        let (inst, k) = binary_to_ising(&bq);
        assert_eq!(inst, RbmInstance::unbiased(WeightMatrix::zeros(2, 3)));
        assert_eq!(k, 0.0);
    }

    #[test]
    fn ghost_matrix_layout() {
        let w = WeightMatrix::from_rows(&[vec![2.0]]).unwrap();
        let inst = RbmInstance::new(w, vec![3.0], vec![-1.0]).unwrap();
        let g = absorb_biases(&inst);
        assert_eq!(g.weights, WeightMatrix::from_rows(&[vec![2.0, 3.0], vec![-1.0, 0.0]]).unwrap());
        let z = absorb_biases(&RbmInstance::unbiased(WeightMatrix::zeros(2, 2)));
        assert_eq!(z.weights, WeightMatrix::zeros(3, 3));
    }

    #[test]
    fn bond_clause_table() {
        let sat = rbm_to_max2sat(&RbmInstance::unbiased(WeightMatrix::from_rows(&[vec![1.0]]).unwrap())).unwrap();
        assert_eq!(sat.clauses, vec![WeightedClause::pair(1, -2, 2.0), WeightedClause::pair(-1, 2, 2.0)]);
        let sat = rbm_to_max2sat(&RbmInstance::unbiased(WeightMatrix::from_rows(&[vec![-0.5]]).unwrap())).unwrap();
        assert_eq!(sat.clauses, vec![WeightedClause::pair(1, 2, 1.0), WeightedClause::pair(-1, -2, 1.0)]);
        let sat = rbm_to_max2sat(&RbmInstance::unbiased(WeightMatrix::zeros(3, 2))).unwrap();
        assert!(sat.clauses.is_empty());
        assert_eq!(sat.num_vars, 5);
    }

    #[test]
    fn densities() {
        let dense = RbmInstance::unbiased(WeightMatrix::from_vec(10, 10, vec![1.0; 100]).unwrap());
        assert_eq!(clause_density(&dense), 10.0);
        assert_eq!(loop_clause_density(10, 10, 5), 0.4);
        assert_eq!(clause_density(&RbmInstance::unbiased(WeightMatrix::zeros(4, 4))), 0.0);
    }

    fn random_sat(seed: u64) -> Max2SatInstance {
        let mut rng = stream(seed, 0);
        let nv = rng.random_range(2..=8usize);
        let nc = rng.random_range(0..=20usize);
        let clauses = (0..nc)
            .map(|_| {
                let x = rng.random_range(1..=nv as i64);
                let sx = if rng.random() { x } else { -x };
                let w = 2.0 - rng.random_range(0.0..2.0);
                if rng.random_bool(0.2) {
                    WeightedClause::unit(sx, w)
                } else {
                    let mut y = rng.random_range(1..=nv as i64 - 1);
                    if y >= x {
                        y += 1;
                    }
                    let sy = if rng.random() { y } else { -y };
                    WeightedClause::pair(sx, sy, w)
                }
            })
            .collect();
        Max2SatInstance::new(nv, clauses).unwrap()
    }

    proptest! {
        #[test]
        fn chain_preserves_objective(seed in any::<u64>()) {
            let sat = random_sat(seed);
            let (inst, k) = max2sat_to_ising(&sat);
            for x in assignments(sat.num_vars) {
                let s = assignment_to_state(sat.num_vars, sat.num_vars, &[x.clone(), x.clone()].concat()).unwrap();
                let via = -energy(&inst, &s).unwrap() + k;
                prop_assert!((via - sat.satisfied_weight(&x)).abs() < 1e-9);
            }
        }

        #[test]
        fn chain_preserves_optimum(seed in any::<u64>()) {
            let sat = random_sat(seed);
            let best = assignments(sat.num_vars).map(|x| sat.satisfied_weight(&x)).fold(f64::NEG_INFINITY, f64::max);
            let (inst, k) = max2sat_to_ising(&sat);
            let (s, e) = brute_force_ground_state(&inst).unwrap();
            prop_assert_eq!(&s.v, &s.h);
            let x: Vec<bool> = s.v.iter().map(|&b| b > 0).collect();
            prop_assert!((sat.satisfied_weight(&x) - best).abs() < 1e-9);
            prop_assert!((-e + k - best).abs() < 1e-9);
        }

        #[test]
        fn random_qubo_bipartite_argmax(seed in any::<u64>()) {
            let mut rng = stream(seed, 1);
            let mut q = QuboInstance::zeros(4);
            for i in 0..4 {
                q.linear[i] = rng.random_range(-1.0..1.0);
                for j in i + 1..4 {
                    q.add_quadratic(i, j, rng.random_range(-1.0..1.0));
                }
            }
            let bq = qubo_to_bipartite(&q);
            let mut best = (f64::NEG_INFINITY, vec![], vec![]);
            for v in assignments(4) {
                for h in assignments(4) {
                    let val = bq.value(&v, &h);
                    if val > best.0 { best = (val, v.clone(), h); }
                }
            }
            prop_assert_eq!(&best.1, &best.2);
            let qbest = assignments(4).map(|x| q.value(&x)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((q.value(&best.1) - qbest).abs() < 1e-12);
        }

        #[test]
        fn ising_matches_binary_everywhere(seed in any::<u64>()) {
            let mut rng = stream(seed, 2);
            let mut r = |k: usize| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
            let bq = BipartiteQubo { a: r(3), b: r(3), w: WeightMatrix::from_vec(3, 3, r(9)).unwrap(), offset: 0.0 };
            let (inst, k) = binary_to_ising(&bq);
            for x in assignments(6) {
                let s = assignment_to_state(3, 3, &x).unwrap();
                prop_assert!((bq.value(&x[..3], &x[3..]) - (-energy(&inst, &s).unwrap() + k)).abs() < 1e-9);
            }
        }

        #[test]
        fn ghost_spins_reproduce_energy(seed in any::<u64>()) {
            let mut rng = stream(seed, 3);
            let mut r = |k: usize| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
            let inst = RbmInstance::new(WeightMatrix::from_vec(3, 3, r(9)).unwrap(), r(3), r(3)).unwrap();
            let g = absorb_biases(&inst);
            for x in assignments(6) {
                let s = assignment_to_state(3, 3, &x).unwrap();
                let mut ext = s.clone();
                ext.v.push(1);
                ext.h.push(1);
                prop_assert!((energy(&inst, &s).unwrap() - energy(&g, &ext).unwrap()).abs() < 1e-12);
            }
        }

        #[test]
        fn violated_weight_tracks_energy(n in 1usize..=5, m in 1usize..=5, seed in any::<u64>(), biased in any::<bool>()) {
            let mut rng = stream(seed, 4);
            let mut r = |k: usize| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
            let mut inst = RbmInstance::unbiased(WeightMatrix::from_vec(n, m, r(n * m)).unwrap());
            if biased {
                inst.visible_bias = r(n);
                inst.hidden_bias = r(m);
            }
            let (sat, offset) = rbm_to_max2sat_with_offset(&inst);
            let emin = -(inst.weights.abs_sum()
                + inst.visible_bias.iter().map(|x| x.abs()).sum::<f64>()
                + inst.hidden_bias.iter().map(|x| x.abs()).sum::<f64>());
            let total = sat.total_weight() + offset;
            for x in assignments(n + m) {
                let s = assignment_to_state(n, m, &x).unwrap();
                let violated = total - (sat.satisfied_weight(&x) + offset);
                prop_assert!((violated - (energy(&inst, &s).unwrap() - emin)).abs() < 1e-9);
            }
        }
    }
}
