//! Closed-form predictors.

use frustrated_loops::analyze::{
    expected_frustration_decay, expected_local_minima, expected_min_poisson, gap_variance,
    local_field_dispersion,
};

fn main() -> frustrated_loops::Result<()> {
    for lambda in [0.5, 1.0, 4.0, 10.0, 40.0] {
        let (e, method) = expected_min_poisson(lambda);
        println!("lambda={lambda:<5} E[min]={e:.6} (lambda/4 = {:.2}, {method:?})", lambda / 4.0);
    }
    for big_n in [10, 100, 1000, 10_000] {
        println!("N={big_n:<6} expected f on 50x50 = {:.5}", expected_frustration_decay(50, 50, big_n)?);
    }
    for alpha in [0.1, 0.5, 1.0] {
        let est = expected_local_minima(40, alpha)?;
        println!("alpha={alpha} expected local minima (n=40) = {:.5}", est.value);
    }
    println!("gap variance n=m=20, d=0.25: {}", gap_variance(20, 20, 0.25, 0.0, 1.0)?);
    for d in [0.2, 0.5, 0.8] {
        let disp = local_field_dispersion(1000, 1000, 0.01, 0.7, d)?;
        println!("d={d} local field mean {:.3} c_v {:.3}", disp.mean, disp.c_v.unwrap());
    }
    Ok(())
}
