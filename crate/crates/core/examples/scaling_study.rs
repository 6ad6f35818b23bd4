//! Geometric-mean N_tot against size at the reference peak density, with
//! power-law and exponential fits.
//!
//! cargo run --release --example scaling_study -- [samples]

use frustrated_loops::bench::{scaling_study, SchedulePolicy};

fn main() -> frustrated_loops::Result<()> {
    let samples: usize = std::env::args().nth(1).map_or(30, |s| s.parse().expect("samples"));
    let study = scaling_study(0.05, &[20, 30, 40, 50], samples, 9, &SchedulePolicy::default())?;
    for (n, g) in study.sizes.iter().zip(&study.geo_means) {
        println!("n={n:<3} geo_mean N_tot={g:.1}");
    }
    let (p, e) = (&study.power_law, &study.exponential);
    println!("power law   {:.4} * n^{:.3}   rss {:.4}", p.a, p.b, p.rss);
    println!("exponential {:.4} * e^({:.4} n) rss {:.4}", e.a, e.b, e.rss);
    Ok(())
}
