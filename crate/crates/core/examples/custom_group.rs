//! The uniform channel of a group given by unitary generators.

use uniform_channel::cayley::{build_cayley, laplacian_spectrum};
use uniform_channel::channel::{qn_channel, share, uniform_channel, DensityMatrix};
use uniform_channel::group_rep::{enumerate_from_generators, klein_four_generators, GeneratorSet};

fn main() -> uniform_channel::Result<()> {
    let gens = klein_four_generators();
    let group = share(enumerate_from_generators(&gens, 64)?);
    let set = GeneratorSet::new(gens);
    println!("|G| = {} on {} qubits", group.len(), group.num_qubits());

    let spectrum = laplacian_spectrum(&build_cayley(&group, &set)?)?;
    println!("Laplacian spectrum {:?}", spectrum.laplacian_eigenvalues.unwrap_or_default());

    let rho = DensityMatrix::basis(group.dim(), 0)?;
    let qu = uniform_channel(group.clone()).apply(&rho)?;
    let qn = qn_channel(group, &set)?.apply(&rho)?;
    println!("QU(|00><00|) diagonal {:?}", (0..4).map(|y| qu.diagonal_entry(y)).collect::<Vec<_>>());
    println!("Q_N(|00><00|) diagonal {:?}", (0..4).map(|y| qn.diagonal_entry(y)).collect::<Vec<_>>());
    Ok(())
}
