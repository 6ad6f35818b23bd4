use super::{switching_subset, RbmInstance, SpinState, WeightMatrix};
use crate::{Error, Result};

/// Negates the couplings on the switching subset between `s` and `t`.
///
/// Equivalent to multiplying `Wᵢⱼ` by `vᵢv'ᵢhⱼh'ⱼ`.
pub fn vertex_switch(w: &WeightMatrix, s: &SpinState, t: &SpinState) -> Result<WeightMatrix> {
    if s.n() != w.rows() || s.m() != w.cols() {
        return Err(Error::dims(
            format!("state {}+{}", w.rows(), w.cols()),
            format!("{}+{}", s.n(), s.m()),
        ));
    }
    let f = switching_subset(s, t)?;
    let mut out = w.clone();
    for (i, j) in f.iter() {
        out[(i, j)] = -out[(i, j)];
    }
    Ok(out)
}

/// Gauge transformation by `s0`: `W'ᵢⱼ = Wᵢⱼ v⁰ᵢ h⁰ⱼ`, `a'ᵢ = aᵢ v⁰ᵢ`, `b'ⱼ = bⱼ h⁰ⱼ`.
///
/// Maps the state `x` of the input to `x ⊙ s0` with the same energy, so a
/// recorded planted state `s0` becomes all `+1`. It is an involution.
pub fn gauge_fix(inst: &RbmInstance, s0: &SpinState) -> Result<RbmInstance> {
    if s0.n() != inst.n() || s0.m() != inst.m() {
        return Err(Error::dims(
            format!("state {}+{}", inst.n(), inst.m()),
            format!("{}+{}", s0.n(), s0.m()),
        ));
    }
    let mut w = inst.weights.clone();
    let m = inst.m();
    for (k, x) in w.as_mut_slice().iter_mut().enumerate() {
        *x *= (s0.v[k / m] * s0.h[k % m]) as f64;
    }
    let a = inst.visible_bias.iter().zip(&s0.v).map(|(a, &v)| a * v as f64).collect();
    let b = inst.hidden_bias.iter().zip(&s0.h).map(|(b, &h)| b * h as f64).collect();
    Ok(RbmInstance {
        weights: w,
        visible_bias: a,
        hidden_bias: b,
        planted: inst.planted.as_ref().map(|p| p.times(s0)),
        ground_energy: inst.ground_energy,
        meta: inst.meta.clone(),
    })
}

/// Moves a gauged instance (ground state all `+1`) onto the planted state `s0`.
///
/// The same transformation as [`gauge_fix`]; afterwards `planted == s0`.
pub fn plant(inst: &RbmInstance, s0: &SpinState) -> Result<RbmInstance> {
    let mut out = gauge_fix(inst, s0)?;
    if out.planted.is_none() {
        out.planted = Some(s0.clone());
    }
    Ok(out)
}
