use super::{apply, atom_weights, attempt_budget, GenParams, LoopAtom};
use crate::rbm::WeightMatrix;
use crate::rng::Rng;
use crate::{Error, Result};
use rand::seq::IndexedRandom;
use rand::Rng as _;

/// Drops `N` atoms anywhere on the matrix.
///
/// Each atom picks a column `j1`, then an ordered row pair (negative row,
/// positive row) whose cells in `j1` accept the new signs, then a second
/// column whose cells in both rows accept `+1`. A step with no candidate
/// restarts the atom.
pub(super) fn place_loops(p: &GenParams, rng: &mut Rng) -> Result<WeightMatrix> {
    let (n, m) = (p.n, p.m);
    let rule = p.placement();
    let mut w = WeightMatrix::zeros(n, m);
    let requested = p.n_loops();
    let budget = attempt_budget(n, m);
    let mut neg_rows = Vec::with_capacity(n);
    let mut pos_rows = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(m);

    for placed in 0..requested {
        let mut attempts = 0;
        let atom = loop {
            if attempts == budget {
                return Err(Error::Saturated {
                    kind: "random",
                    placed,
                    requested,
                    attempts,
                });
            }
            attempts += 1;

            let j1 = rng.random_range(0..m);
            neg_rows.clear();
            pos_rows.clear();
            let mut both = 0;
            for i in 0..n {
                let (ng, ps) = (rule.negative_ok(w[(i, j1)]), rule.positive_ok(w[(i, j1)]));
                if ng {
                    neg_rows.push(i);
                }
                if ps {
                    pos_rows.push(i);
                }
                both += (ng && ps) as usize;
            }
            if neg_rows.len() * pos_rows.len() == both {
                continue;
            }
            let (ineg, ipos) = loop {
                let a = *neg_rows.choose(rng).expect("nonempty");
                let b = *pos_rows.choose(rng).expect("nonempty");
                if a != b {
                    break (a, b);
                }
            };

            cols.clear();
            cols.extend((0..m).filter(|&j| {
                j != j1 && rule.positive_ok(w[(ineg, j)]) && rule.positive_ok(w[(ipos, j)])
            }));
            let Some(&j2) = cols.choose(rng) else { continue };
            break LoopAtom {
                i1: ineg,
                i2: ipos,
                j1,
                j2,
                alpha: p.alpha,
            };
        };
        let weights = atom_weights(p.alpha, p.jitter, rng);
        apply(&mut w, &atom.cells(), &weights);
    }
    Ok(w)
}
