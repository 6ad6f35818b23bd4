//! Structured instance with a planted metastable cluster: flipping the
//! B1 ∪ B4 blocks costs exactly 2ε(N1+N2+N3) for α = 1 − ε.

use frustrated_loops::generate::{b1_b4_state, block_sums, generate};
use frustrated_loops::rbm::{distance, gauge_fix};
use frustrated_loops::GenParams;

fn main() -> frustrated_loops::Result<()> {
    let (n, rho, d) = (30, 1.0, 0.2);
    for eps in [0.0, 0.05, 0.2] {
        let p = GenParams::structured(n, n, 0.2, rho, d, 11)?.with_alpha(1.0 - eps)?;
        let inst = generate(&p)?;
        let planted = inst.planted.clone().unwrap();
        let gauged = gauge_fix(&inst, &planted)?;
        let meta = gauged.meta.clone().unwrap();
        let mix = meta.loop_mix.unwrap();

        let flip = b1_b4_state(n, n, d);
        let gap = gauged.energy(&flip)? - gauged.ground_energy.unwrap();
        let predicted = 2.0 * eps * mix.iter().sum::<usize>() as f64;
        let dist = distance(&flip, &frustrated_loops::SpinState::all_up(n, n))?;
        println!(
            "eps={eps:<5} loops(left,upper,center)={mix:?} gap={gap:.9} predicted={predicted:.9} distance={dist:.3}"
        );
        println!("          block sums B1..B4 = {:?}", block_sums(&gauged.weights, d));
    }
    Ok(())
}
