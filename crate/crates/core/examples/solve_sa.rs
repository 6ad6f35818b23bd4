//! Solve planted instances with simulated annealing and report N_tot.

use frustrated_loops::generate::generate;
use frustrated_loops::solve::solve_planted;
use frustrated_loops::{AnnealSchedule, GenParams};

fn main() -> frustrated_loops::Result<()> {
    let (n, rho) = (30, 0.47);
    for f in [0.05, 0.15, 0.23] {
        let inst = generate(&GenParams::random(n, n, f, rho, 100)?)?;
        let sched = AnnealSchedule::default_for(n, f, rho, 7);
        let rec = solve_planted(&inst, &sched)?;
        println!(
            "f={f:<5} n_sweep={:<4} found={} runs={:<4} N_tot={}",
            sched.n_sweep, rec.found, rec.runs_used, rec.n_tot
        );
    }
    Ok(())
}
