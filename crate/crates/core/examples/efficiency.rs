//! Efficiency certificate for S_n with star transpositions.

use uniform_channel::gip::{bernoulli_separation, efficiency_report};

fn main() -> uniform_channel::Result<()> {
    for n in 3..=8 {
        let report = efficiency_report(n, None, n > 7)?;
        println!(
            "n = {n}: N = {}, b = {}, beta = {}, gap = {:.6} ({:?})",
            report.num_qubits, report.b, report.beta, report.spectral_gap, report.gap_source
        );
        for c in &report.checks {
            println!("  {:<32} {:>12.4} vs {:>10.4}  {}", c.name, c.value, c.bound, if c.pass { "ok" } else { "FAIL" });
        }
        let sep = bernoulli_separation(n, 0.05)?;
        println!("  SWAP-test samples to separate at alpha = 0.05: {:e}", sep.samples);
    }
    Ok(())
}
