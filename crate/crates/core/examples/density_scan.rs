//! Easy-hard-easy profile: p95 of N_tot against loop density.
//!
//! cargo run --release --example density_scan -- [samples]

use frustrated_loops::bench::{density_scan, rho_peak_reference, PeakStatistic, PointSpec, SchedulePolicy};

fn main() -> frustrated_loops::Result<()> {
    let samples: usize = std::env::args().nth(1).map_or(40, |s| s.parse().expect("samples"));
    let n = 20;
    let rhos: Vec<f64> = (0..8).map(|k| 0.3 + 0.05 * k as f64).collect();
    let scan = density_scan(
        &PointSpec::random(n, 0.05, 0.0),
        &rhos,
        samples,
        2024,
        &SchedulePolicy::default(),
        PeakStatistic::P95,
    )?;
    for p in &scan.points {
        println!("rho={:.2} p50={:>8.1} p95={:>8.1}", p.spec.rho, p.stats.p50, p.stats.p95);
    }
    println!("peak at rho={:.2}; reference fit {:.4}", scan.peak_rho, rho_peak_reference(n));
    Ok(())
}
