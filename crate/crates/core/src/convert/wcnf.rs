//! DIMACS weighted CNF export and best-effort import.
//!
//! Weights are real numbers scaled to integers: a clause of weight `w` is
//! written as `round(w·scale)`. The header is `p wcnf <vars> <clauses> <top>`
//! with `top = 1 + Σ round(w·scale)`, so no clause is hard.
//!
//! Metadata travels in comment lines:
//!
//! ```text
//! c dims <n> <m>
//! c algorithm <mode>
//! c f <f>
//! c rho <rho>
//! c seed <seed>
//! c offset <constant dropped by ghost simplification>
//! c ground_energy <E>
//! c planted <±1 list, visible then hidden>
//! ```

use super::json::format_g17;
use super::{Max2SatInstance, WeightedClause};
use crate::rbm::{RbmInstance, SpinState, WeightMatrix};
use crate::{Error, Result};
use std::io::{BufRead, Write};

pub const DEFAULT_SCALE: u64 = 1_000_000;

/// Comment-line metadata of a wcnf file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WcnfMeta {
    pub dims: Option<(usize, usize)>,
    pub algorithm: Option<String>,
    pub f: Option<f64>,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
    pub offset: Option<f64>,
    pub ground_energy: Option<f64>,
    pub planted: Option<Vec<i8>>,
    /// Free text (one line) recorded as `c provenance <text>`.
    pub provenance: Option<String>,
}

impl WcnfMeta {
    pub fn from_instance(inst: &RbmInstance, offset: f64) -> Self {
        Self {
            dims: Some((inst.n(), inst.m())),
            algorithm: inst.meta.as_ref().map(|m| m.mode.clone()),
            f: inst.meta.as_ref().map(|m| m.f),
            rho: inst.meta.as_ref().map(|m| m.rho),
            seed: inst.meta.as_ref().map(|m| m.seed),
            offset: Some(offset),
            ground_energy: inst.ground_energy,
            planted: inst
                .planted
                .as_ref()
                .map(|p| p.v.iter().chain(&p.h).copied().collect()),
            provenance: None,
        }
    }
}

fn scaled(weight: f64, scale: u64) -> Result<u64> {
    let s = (weight * scale as f64).round();
    if weight != 0.0 && s == 0.0 {
        return Err(Error::LossyScale { weight, scale });
    }
    Ok(s as u64)
}

pub fn write_wcnf<W: Write>(sat: &Max2SatInstance, scale: u64, meta: &WcnfMeta, out: &mut W) -> Result<()> {
    if scale == 0 {
        return Err(Error::InvalidParameter("wcnf scale must be at least 1".into()));
    }
    let weights = sat
        .clauses
        .iter()
        .map(|c| scaled(c.weight, scale))
        .collect::<Result<Vec<_>>>()?;
    let top = 1 + weights.iter().sum::<u64>();

    if let Some((n, m)) = meta.dims {
        writeln!(out, "c dims {n} {m}")?;
    }
    if let Some(a) = &meta.algorithm {
        writeln!(out, "c algorithm {a}")?;
    }
    if let Some(f) = meta.f {
        writeln!(out, "c f {}", format_g17(f))?;
    }
    if let Some(r) = meta.rho {
        writeln!(out, "c rho {}", format_g17(r))?;
    }
    if let Some(s) = meta.seed {
        writeln!(out, "c seed {s}")?;
    }
    if let Some(o) = meta.offset {
        writeln!(out, "c offset {}", format_g17(o))?;
    }
    if let Some(e) = meta.ground_energy {
        writeln!(out, "c ground_energy {}", format_g17(e))?;
    }
    if let Some(p) = &meta.planted {
        let spins: Vec<String> = p.iter().map(|s| s.to_string()).collect();
        writeln!(out, "c planted {}", spins.join(" "))?;
    }
    if let Some(p) = &meta.provenance {
        writeln!(out, "c provenance {}", p.replace('\n', " "))?;
    }
    writeln!(out, "p wcnf {} {} {}", sat.num_vars, sat.clauses.len(), top)?;
    for (c, w) in sat.clauses.iter().zip(weights) {
        match c.lit2 {
            Some(l2) => writeln!(out, "{w} {} {l2} 0", c.lit1)?,
            None => writeln!(out, "{w} {} 0", c.lit1)?,
        }
    }
    Ok(())
}

pub fn read_wcnf<R: BufRead>(input: R, scale: u64) -> Result<(Max2SatInstance, WcnfMeta)> {
    if scale == 0 {
        return Err(Error::InvalidParameter("wcnf scale must be at least 1".into()));
    }
    let mut meta = WcnfMeta::default();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let bad = |message: String| Error::Wcnf {
            line: lineno,
            message,
        };
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('c') {
            parse_comment(rest.trim(), &mut meta).map_err(bad)?;
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields[0] == "p" {
            if fields.len() < 4 || fields[1] != "wcnf" {
                return Err(bad(format!("bad header '{t}'")));
            }
            let nv = fields[2].parse().map_err(|_| bad("bad variable count".into()))?;
            let nc = fields[3].parse().map_err(|_| bad("bad clause count".into()))?;
            header = Some((nv, nc));
            continue;
        }
        if header.is_none() {
            return Err(bad("clause before header".into()));
        }
        let nums = fields
            .iter()
            .map(|f| f.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("non-integer token in '{t}'")))?;
        if nums.last() != Some(&0) || !(3..=4).contains(&nums.len()) {
            return Err(bad(format!("expected '<w> <lit> [<lit>] 0', got '{t}'")));
        }
        if nums[0] < 0 {
            return Err(bad("negative weight".into()));
        }
        let weight = nums[0] as f64 / scale as f64;
        clauses.push(if nums.len() == 4 {
            WeightedClause::pair(nums[1], nums[2], weight)
        } else {
            WeightedClause::unit(nums[1], weight)
        });
    }
    let (nv, nc) = header.ok_or(Error::Wcnf {
        line: 0,
        message: "missing 'p wcnf' header".into(),
    })?;
    if clauses.len() != nc {
        return Err(Error::Wcnf {
            line: 0,
            message: format!("header declares {nc} clauses, found {}", clauses.len()),
        });
    }
    let sat = Max2SatInstance::new(nv, clauses).map_err(|e| Error::Wcnf {
        line: 0,
        message: e.to_string(),
    })?;
    Ok((sat, meta))
}

fn parse_comment(rest: &str, meta: &mut WcnfMeta) -> std::result::Result<(), String> {
    if let Some(p) = rest.strip_prefix("provenance") {
        meta.provenance = Some(p.trim().to_string());
        return Ok(());
    }
    let mut it = rest.split_whitespace();
    let Some(key) = it.next() else { return Ok(()) };
    let vals: Vec<&str> = it.collect();
    let one = || vals.first().copied().ok_or_else(|| format!("'{key}' needs a value"));
    let real = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number '{s}'"));
    match key {
        "dims" if vals.len() == 2 => {
            let p = |s: &str| s.parse::<usize>().map_err(|_| format!("bad size '{s}'"));
            meta.dims = Some((p(vals[0])?, p(vals[1])?));
        }
        "algorithm" => meta.algorithm = Some(one()?.to_string()),
        "f" => meta.f = Some(real(one()?)?),
        "rho" => meta.rho = Some(real(one()?)?),
        "seed" => meta.seed = Some(one()?.parse().map_err(|_| "bad seed".to_string())?),
        "offset" => meta.offset = Some(real(one()?)?),
        "ground_energy" => meta.ground_energy = Some(real(one()?)?),
        "planted" => {
            let spins = vals
                .iter()
                .map(|s| match *s {
                    "1" | "+1" => Ok(1),
                    "-1" => Ok(-1),
                    _ => Err(format!("bad spin '{s}'")),
                })
                .collect::<std::result::Result<Vec<i8>, _>>()?;
            meta.planted = Some(spins);
        }
        // free-form comments are ignored
        _ => {}
    }
    Ok(())
}

/// Rebuilds a bipartite Ising instance from a formula produced by
/// [`super::rbm_to_max2sat_with_offset`].
///
/// Each two-literal clause over a visible and a hidden variable contributes
/// `±weight/4` to their coupling (plus for `(v ∨ ¬h)`, `(¬v ∨ h)`, minus for
/// `(v ∨ h)`, `(¬v ∨ ¬h)`), and each unit clause `±weight/2` to a bias. This
/// inverts the export exactly; other formulas are approximated.
pub fn max2sat_to_rbm(sat: &Max2SatInstance, n: usize, m: usize) -> Result<RbmInstance> {
    if sat.num_vars != n + m {
        return Err(Error::dims(format!("{} variables", n + m), sat.num_vars));
    }
    let mut w = WeightMatrix::zeros(n, m);
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; m];
    for c in &sat.clauses {
        match c.lit2 {
            None => {
                let var = c.lit1.unsigned_abs() as usize - 1;
                let x = c.lit1.signum() as f64 * c.weight / 2.0;
                if var < n {
                    a[var] += x;
                } else {
                    b[var - n] += x;
                }
            }
            Some(l2) => {
                let (mut p, mut q) = (c.lit1, l2);
                if p.unsigned_abs() > q.unsigned_abs() {
                    std::mem::swap(&mut p, &mut q);
                }
                let (i, j) = (p.unsigned_abs() as usize - 1, q.unsigned_abs() as usize - 1);
                if i >= n || j < n {
                    return Err(Error::InvalidParameter(format!(
                        "clause ({p} ∨ {q}) does not join a visible and a hidden variable"
                    )));
                }
                let sign = if (p > 0) != (q > 0) { 1.0 } else { -1.0 };
                w[(i, j - n)] += sign * c.weight / 4.0;
            }
        }
    }
    RbmInstance::new(w, a, b)
}

/// Rebuilds an instance from a wcnf file with a `c dims` line.
pub fn wcnf_to_instance(sat: &Max2SatInstance, meta: &WcnfMeta) -> Result<RbmInstance> {
    let (n, m) = meta.dims.ok_or_else(|| Error::Wcnf {
        line: 0,
        message: "missing 'c dims <n> <m>' line".into(),
    })?;
    let mut inst = max2sat_to_rbm(sat, n, m)?;
    if let Some(p) = &meta.planted {
        if p.len() != n + m {
            return Err(Error::dims(n + m, p.len()));
        }
        inst.planted = Some(SpinState::new(p[..n].to_vec(), p[n..].to_vec())?);
        inst.ground_energy = meta.ground_energy;
    }
    Ok(inst)
}
