use crate::rbm::WeightMatrix;
use crate::{Error, Result};

/// A frustrated 4-cycle: `-α` at `(i1, j1)` and `+1` at `(i1, j2)`,
/// `(i2, j1)`, `(i2, j2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopAtom {
    pub i1: usize,
    pub i2: usize,
    pub j1: usize,
    pub j2: usize,
    pub alpha: f64,
}

impl LoopAtom {
    pub fn new(i1: usize, i2: usize, j1: usize, j2: usize, alpha: f64) -> Result<Self> {
        if i1 == i2 || j1 == j2 {
            return Err(Error::InvalidParameter(format!(
                "loop atom needs distinct rows and columns, got ({i1},{i2})x({j1},{j2})"
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
        }
        Ok(Self { i1, i2, j1, j2, alpha })
    }

    /// Negative cell first, then the three positive cells.
    pub fn cells(&self) -> [(usize, usize); 4] {
        [
            (self.i1, self.j1),
            (self.i1, self.j2),
            (self.i2, self.j1),
            (self.i2, self.j2),
        ]
    }

    pub fn weights(&self) -> [f64; 4] {
        [-self.alpha, 1.0, 1.0, 1.0]
    }

    pub fn add_to(&self, w: &mut WeightMatrix) {
        for ((i, j), x) in self.cells().into_iter().zip(self.weights()) {
            w[(i, j)] += x;
        }
    }

    /// The atom as its own `n × m` matrix.
    pub fn matrix(&self, n: usize, m: usize) -> WeightMatrix {
        let mut w = WeightMatrix::zeros(n, m);
        self.add_to(&mut w);
        w
    }
}

/// Splits a frustrated cycle into loop atoms.
///
/// The cycle is `rows[0] - cols[0] - rows[1] - cols[1] - ... - cols[l-1] - rows[0]`;
/// its edges are numbered along that walk, so edge `2k` is
/// `(rows[k], cols[k])` and edge `2k+1` is `(rows[k+1], cols[k])`. Edge
/// `negative` carries `-α`, all others `+1`.
///
/// Returns `l - 1` atoms. Consecutive atoms share a chord through the vertex
/// at one end of the negative edge, where a `-1` and a `+1` cancel, so the
/// atoms sum to the cycle exactly.
pub fn decompose_loop(rows: &[usize], cols: &[usize], negative: usize, alpha: f64) -> Result<Vec<LoopAtom>> {
    let l = rows.len();
    if l < 2 || cols.len() != l {
        return Err(Error::InvalidParameter(format!(
            "cycle needs l >= 2 rows and as many columns, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    let distinct = |xs: &[usize]| {
        let mut s = xs.to_vec();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    };
    if !distinct(rows) || !distinct(cols) {
        return Err(Error::InvalidParameter("cycle repeats a vertex".into()));
    }
    if negative >= 2 * l {
        return Err(Error::InvalidParameter(format!(
            "negative edge {negative} out of range 0..{}",
            2 * l
        )));
    }

    // Vertex walk; relabel so the negative edge closes the walk (c'[l-1] -> r'[0]).
    let walk: Vec<usize> = (0..2 * l)
        .map(|t| if t % 2 == 0 { rows[t / 2] } else { cols[t / 2] })
        .collect();
    let at = |t: isize| walk[t.rem_euclid(2 * l as isize) as usize];
    let p = negative as isize;
    let seq: Vec<usize> = if negative % 2 == 0 {
        (0..2 * l as isize).map(|k| at(p - k)).collect()
    } else {
        (0..2 * l as isize).map(|k| at(p + 1 + k)).collect()
    };
    let r: Vec<usize> = seq.iter().step_by(2).copied().collect();
    let c: Vec<usize> = seq.iter().skip(1).step_by(2).copied().collect();

    let mut atoms = Vec::with_capacity(l - 1);
    for k in (2..=l).rev() {
        let a = if k == l { alpha } else { 1.0 };
        atoms.push(LoopAtom::new(r[0], r[k - 1], c[k - 1], c[k - 2], a)?);
    }
    Ok(atoms)
}
