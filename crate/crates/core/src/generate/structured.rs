use super::{apply, atom_weights, attempt_budget, block_sizes, fits, GenParams, LoopAtom};
use crate::rbm::WeightMatrix;
use crate::rng::Rng;
use crate::{Error, Result};
use rand::Rng as _;
use std::ops::Range;

/// Index ranges for the four atom vertices of one loop family.
struct Family {
    kind: &'static str,
    i1: Range<usize>,
    i2: Range<usize>,
    j1: Range<usize>,
    j2: Range<usize>,
}

/// Places left, upper and center loops (in that order) with every negative
/// edge inside the top-left block `B1`.
///
/// - left: `i1` top, `i2` bottom, `j1, j2` left
/// - upper: `i1, i2` top, `j1` left, `j2` right
/// - center: `i1` top, `i2` bottom, `j1` left, `j2` right
pub(super) fn place_loops(p: &GenParams, rng: &mut Rng) -> Result<WeightMatrix> {
    let (n, m) = (p.n, p.m);
    let (n1, m1) = block_sizes(n, m, p.d);
    let [c_left, c_upper, c_center] = p.resolved_loop_mix();
    if c_left > 0 && m1 < 2 {
        return Err(Error::InvalidParameter(format!(
            "left loops need at least two left columns, block has {m1}"
        )));
    }
    if c_upper > 0 && n1 < 2 {
        return Err(Error::InvalidParameter(format!(
            "upper loops need at least two top rows, block has {n1}"
        )));
    }
    let families = [
        (
            Family {
                kind: "left",
                i1: 0..n1,
                i2: n1..n,
                j1: 0..m1,
                j2: 0..m1,
            },
            c_left,
        ),
        (
            Family {
                kind: "upper",
                i1: 0..n1,
                i2: 0..n1,
                j1: 0..m1,
                j2: m1..m,
            },
            c_upper,
        ),
        (
            Family {
                kind: "center",
                i1: 0..n1,
                i2: n1..n,
                j1: 0..m1,
                j2: m1..m,
            },
            c_center,
        ),
    ];

    let rule = p.placement();
    let budget = attempt_budget(n, m);
    let mut w = WeightMatrix::zeros(n, m);
    for (fam, count) in families {
        for placed in 0..count {
            let mut attempts = 0;
            let atom = loop {
                if attempts == budget {
                    return Err(Error::Saturated {
                        kind: fam.kind,
                        placed,
                        requested: count,
                        attempts,
                    });
                }
                attempts += 1;
                let i1 = rng.random_range(fam.i1.clone());
                let i2 = rng.random_range(fam.i2.clone());
                let j1 = rng.random_range(fam.j1.clone());
                let j2 = rng.random_range(fam.j2.clone());
                if i1 == i2 || j1 == j2 {
                    continue;
                }
                let atom = LoopAtom {
                    i1,
                    i2,
                    j1,
                    j2,
                    alpha: p.alpha,
                };
                if fits(&w, &atom.cells(), rule) {
                    break atom;
                }
            };
            let weights = atom_weights(p.alpha, p.jitter, rng);
            apply(&mut w, &atom.cells(), &weights);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{block_sums, GenParams};
    use crate::rng::stream;

    #[test]
    fn negative_weight_stays_in_top_left_block() {
        let p = GenParams::structured(20, 16, 0.2, 2.0, 0.4, 1).unwrap();
        let w = place_loops(&p, &mut stream(1, 0)).unwrap();
        let (n1, m1) = block_sizes(20, 16, 0.4);
        for (i, j, x) in w.iter() {
            if x < 0.0 {
                assert!(i < n1 && j < m1);
            }
        }
    }

    #[test]
    fn block_sums_for_unit_mix() {
        let p = GenParams::structured(10, 10, 0.0, 0.3, 0.5, 2)
            .unwrap()
            .with_alpha(1.0)
            .unwrap()
            .with_loop_mix([1, 1, 1])
            .unwrap();
        let w = place_loops(&p, &mut stream(2, 0)).unwrap();
        assert_eq!(block_sums(&w, 0.5), [-1.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn narrow_blocks_are_rejected() {
        let p = GenParams::structured(2, 2, 0.1, 2.0, 0.5, 0).unwrap();
        assert!(place_loops(&p, &mut stream(0, 0)).is_err());
    }
}
