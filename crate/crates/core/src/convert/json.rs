//! JSON instance format.
//!
//! ```json
//! {"n": 2, "m": 2, "W": [w00, w01, w10, w11], "a": [..], "b": [..],
//!  "planted": {"v": [..], "h": [..]}, "ground_energy": -2,
//!  "meta": {"algorithm": "random", "f": 0.25, "alpha": 1, "rho": 0.5,
//!           "d": null, "N1": null, "N2": null, "N3": null, "seed": 7,
//!           "n_loops": 1, "f_exact": true}}
//! ```
//!
//! `W` is row-major. Reals are written with 17 significant digits, which
//! round-trips every `f64` exactly.

use crate::rbm::{InstanceMeta, RbmInstance, SpinState, WeightMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use std::path::Path;

/// `printf("%.17g")` formatting. Non-finite values become `null`.
pub fn format_g17(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn raw(s: String) -> Box<RawValue> {
    RawValue::from_string(s).expect("valid JSON fragment")
}

fn num(x: f64) -> Box<RawValue> {
    raw(format_g17(x))
}

fn opt_num(x: Option<f64>) -> Box<RawValue> {
    x.map_or_else(|| raw("null".into()), num)
}

fn array(xs: &[f64]) -> Box<RawValue> {
    let parts: Vec<String> = xs.iter().map(|&x| format_g17(x)).collect();
    raw(format!("[{}]", parts.join(",")))
}

#[derive(Serialize)]
struct MetaOut {
    algorithm: String,
    f: Box<RawValue>,
    alpha: Box<RawValue>,
    rho: Box<RawValue>,
    d: Box<RawValue>,
    #[serde(rename = "N1")]
    n1: Option<usize>,
    #[serde(rename = "N2")]
    n2: Option<usize>,
    #[serde(rename = "N3")]
    n3: Option<usize>,
    seed: u64,
    n_loops: usize,
    f_exact: bool,
}

#[derive(Serialize)]
struct InstanceOut<'a> {
    n: usize,
    m: usize,
    #[serde(rename = "W")]
    w: Box<RawValue>,
    a: Box<RawValue>,
    b: Box<RawValue>,
    planted: Option<&'a SpinState>,
    ground_energy: Box<RawValue>,
    meta: Option<MetaOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a serde_json::Value>,
}

#[derive(Deserialize)]
struct MetaIn {
    #[serde(default)]
    algorithm: String,
    #[serde(default)]
    f: f64,
    #[serde(default)]
    alpha: f64,
    #[serde(default)]
    rho: f64,
    d: Option<f64>,
    #[serde(rename = "N1")]
    n1: Option<usize>,
    #[serde(rename = "N2")]
    n2: Option<usize>,
    #[serde(rename = "N3")]
    n3: Option<usize>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    n_loops: usize,
    #[serde(default = "yes")]
    f_exact: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
struct InstanceIn {
    n: usize,
    m: usize,
    #[serde(rename = "W")]
    w: Vec<f64>,
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    planted: Option<SpinState>,
    ground_energy: Option<f64>,
    meta: Option<MetaIn>,
}

pub fn instance_to_json(inst: &RbmInstance) -> String {
    instance_to_json_with(inst, None)
}

/// Like [`instance_to_json`] with an extra top-level `provenance` object.
/// Readers ignore it.
pub fn instance_to_json_with(inst: &RbmInstance, provenance: Option<&serde_json::Value>) -> String {
    let meta = inst.meta.as_ref().map(|m| {
        let [n1, n2, n3] = m.loop_mix.map_or([None; 3], |l| l.map(Some));
        MetaOut {
            algorithm: m.mode.clone(),
            f: num(m.f),
            alpha: num(m.alpha),
            rho: num(m.rho),
            d: opt_num(m.d),
            n1,
            n2,
            n3,
            seed: m.seed,
            n_loops: m.n_loops,
            f_exact: m.f_exact,
        }
    });
    let out = InstanceOut {
        n: inst.n(),
        m: inst.m(),
        w: array(inst.weights.as_slice()),
        a: array(&inst.visible_bias),
        b: array(&inst.hidden_bias),
        planted: inst.planted.as_ref(),
        ground_energy: opt_num(inst.ground_energy),
        meta,
        provenance,
    };
    serde_json::to_string(&out).expect("serialisable")
}

pub fn instance_from_json(text: &str) -> Result<RbmInstance> {
    let raw: InstanceIn = serde_json::from_str(text)?;
    let w = WeightMatrix::from_vec(raw.n, raw.m, raw.w)?;
    let a = raw.a.unwrap_or_else(|| vec![0.0; raw.n]);
    let b = raw.b.unwrap_or_else(|| vec![0.0; raw.m]);
    let mut inst = RbmInstance::new(w, a, b)?;
    if let Some(p) = raw.planted {
        let p = SpinState::new(p.v, p.h)?;
        if p.n() != raw.n || p.m() != raw.m {
            return Err(Error::DimensionMismatch {
                expected: format!("planted state {}+{}", raw.n, raw.m),
                found: format!("{}+{}", p.n(), p.m()),
            });
        }
        inst.planted = Some(p);
    }
    inst.ground_energy = raw.ground_energy;
    inst.meta = raw.meta.map(|m| InstanceMeta {
        mode: m.algorithm,
        seed: m.seed,
        alpha: m.alpha,
        f: m.f,
        rho: m.rho,
        n_loops: m.n_loops,
        d: m.d,
        loop_mix: match (m.n1, m.n2, m.n3) {
            (Some(a), Some(b), Some(c)) => Some([a, b, c]),
            _ => None,
        },
        f_exact: m.f_exact,
    });
    Ok(inst)
}

pub fn write_instance(path: &Path, inst: &RbmInstance) -> Result<()> {
    let mut text = instance_to_json(inst);
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<RbmInstance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}
