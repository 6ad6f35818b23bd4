use super::{energy, RbmInstance, SpinState, WeightMatrix};
use crate::{Error, Result};

/// Largest layer size the exact oracle will enumerate.
pub const BRUTE_FORCE_MAX: usize = 24;

/// Exact ground state by enumerating the smaller layer.
///
/// For each configuration of the enumerated layer the other layer is set to
/// the sign of its local field (`sign(0) = +1`), which minimises the energy
/// conditionally. Configurations are visited in Gray-code order so each step
/// costs one field update. Fails when `min(n, m) > 24`.
pub fn brute_force_ground_state(inst: &RbmInstance) -> Result<(SpinState, f64)> {
    let (n, m) = (inst.n(), inst.m());
    let k = n.min(m);
    if k > BRUTE_FORCE_MAX {
        return Err(Error::EnumerationBudget {
            size: k,
            budget: BRUTE_FORCE_MAX,
        });
    }
    let visible_side = n <= m;
    let (w, a, b): (WeightMatrix, &[f64], &[f64]) = if visible_side {
        (inst.weights.clone(), &inst.visible_bias, &inst.hidden_bias)
    } else {
        (inst.weights.transpose(), &inst.hidden_bias, &inst.visible_bias)
    };
    let l = w.cols();

    let mut x = vec![1i8; k];
    let mut field: Vec<f64> = b.to_vec();
    for i in 0..k {
        for (j, f) in field.iter_mut().enumerate() {
            *f += w[(i, j)];
        }
    }
    let mut lin: f64 = a.iter().sum();
    let score = |lin: f64, field: &[f64]| lin + field.iter().map(|f| f.abs()).sum::<f64>();

    let mut best = score(lin, &field);
    let mut best_x = x.clone();
    for step in 1u64..(1u64 << k) {
        let i = step.trailing_zeros() as usize;
        x[i] = -x[i];
        let s = x[i] as f64;
        lin += 2.0 * s * a[i];
        for (j, f) in field.iter_mut().enumerate() {
            *f += 2.0 * s * w[(i, j)];
        }
        let sc = score(lin, &field);
        if sc > best {
            best = sc;
            best_x.copy_from_slice(&x);
        }
    }

    // Recompute the other layer and the energy from scratch for the winner.
    let mut other = b.to_vec();
    for i in 0..k {
        for (j, o) in other.iter_mut().enumerate() {
            *o += w[(i, j)] * best_x[i] as f64;
        }
    }
    let y: Vec<i8> = other.iter().map(|&f| if f >= 0.0 { 1 } else { -1 }).collect();
    debug_assert_eq!(y.len(), l);
    let state = if visible_side {
        SpinState { v: best_x, h: y }
    } else {
        SpinState { v: y, h: best_x }
    };
    let e = energy(inst, &state)?;
    Ok((state, e))
}
