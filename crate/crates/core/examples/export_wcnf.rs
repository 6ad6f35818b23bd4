//! Export a generated instance as weighted CNF and read it back.

use frustrated_loops::convert::rbm_to_max2sat_with_offset;
use frustrated_loops::convert::wcnf::{read_wcnf, wcnf_to_instance, write_wcnf, WcnfMeta, DEFAULT_SCALE};
use frustrated_loops::generate::generate;
use frustrated_loops::GenParams;

fn main() -> frustrated_loops::Result<()> {
    let inst = generate(&GenParams::random(6, 6, 0.1, 0.5, 3)?)?;
    let (sat, offset) = rbm_to_max2sat_with_offset(&inst);
    let mut buf = Vec::new();
    write_wcnf(&sat, DEFAULT_SCALE, &WcnfMeta::from_instance(&inst, offset), &mut buf)?;
    let text = String::from_utf8(buf).expect("ascii");
    for line in text.lines().take(14) {
        println!("{line}");
    }
    println!("... {} clauses", sat.clauses.len());

    let (back, meta) = read_wcnf(text.as_bytes(), DEFAULT_SCALE)?;
    let round = wcnf_to_instance(&back, &meta)?;
    let max_err = round
        .weights
        .as_slice()
        .iter()
        .zip(inst.weights.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("round-trip max coupling error {max_err:.3e}");
    Ok(())
}
