//! Generate a random frustrated-loop instance and check its certificate.
//!
//! cargo run --example generate_random -- [n] [f] [rho] [seed]

use frustrated_loops::generate::generate;
use frustrated_loops::rbm::{brute_force_ground_state, frustration_index, gauge_fix};
use frustrated_loops::GenParams;

fn main() -> frustrated_loops::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let n: usize = arg(0, "12").parse().expect("n");
    let f: f64 = arg(1, "0.15").parse().expect("f");
    let rho: f64 = arg(2, "0.5").parse().expect("rho");
    let seed: u64 = arg(3, "1").parse().expect("seed");

    let inst = generate(&GenParams::random(n, n, f, rho, seed)?)?;
    let planted = inst.planted.clone().expect("generator plants a state");
    let meta = inst.meta.as_ref().expect("generator records metadata");
    println!("n = m = {n}, N = {} loops, alpha = {:.4}", meta.n_loops, meta.alpha);
    println!("certified ground energy  {:.6}", inst.ground_energy.unwrap());
    println!("energy of planted state  {:.6}", inst.energy(&planted)?);

    let gauged = gauge_fix(&inst, &planted)?;
    println!("frustration index        {:.12} (requested {f})", frustration_index(&gauged)?);

    if n <= 20 {
        let (_, e) = brute_force_ground_state(&inst)?;
        println!("brute-force optimum      {e:.6}");
    }
    Ok(())
}
