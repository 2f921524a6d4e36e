//! How fast Q_N^l approaches the uniform channel QU on S_3.

use uniform_channel::channel::{approx_errors, iterations_for_epsilon, seeded_rng, share, DensityMatrix};
use uniform_channel::gip::efficiency_report;
use uniform_channel::group_rep::{star_generators, symmetric_group};

fn main() -> uniform_channel::Result<()> {
    let n = 3;
    let group = share(symmetric_group(n)?);
    let gens = star_generators(n)?;
    let rho = DensityMatrix::random_pure(group.dim(), &mut seeded_rng(7))?;
    let constants = efficiency_report(n, None, false)?.constants();

    println!("b = {}, beta = {}, N = {}", constants.b, constants.beta, constants.num_qubits);
    println!("{:>3} {:>14} {:>14} {:>14}", "l", "error", "sqrt|G| r^l", "exp bound");
    for row in approx_errors(group, &gens, &rho, 30, Some(constants))? {
        let paper = row.paper_bound.map_or("-".to_string(), |p| format!("{p:.6e}"));
        println!(
            "{:>3} {:>14.6e} {:>14.6e} {:>14}",
            row.l, row.error, row.spectral_bound, paper
        );
    }
    for eps in [1e-1, 1e-3, 1e-6] {
        let l = iterations_for_epsilon(eps, constants.b, constants.beta, constants.num_qubits)?;
        println!("epsilon = {eps:e}: l = {l}");
    }
    Ok(())
}
