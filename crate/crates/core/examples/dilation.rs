//! Q_N as a controlled unitary on system ⊗ environment followed by a
//! partial trace, in both environment regimes.

use uniform_channel::channel::{
    build_dilation, max_abs, qn_channel, seeded_rng, share, DensityMatrix,
};
use uniform_channel::group_rep::{
    enumerate_from_generators, klein_four_generators, star_generators, symmetric_group,
    GeneratorSet,
};

fn report(name: &str, group: uniform_channel::group_rep::FiniteGroup, gens: GeneratorSet) -> uniform_channel::Result<()> {
    let group = share(group);
    let dilation = build_dilation(&group, &gens)?;
    let qn = qn_channel(group.clone(), &gens)?;
    let mut rng = seeded_rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let rho = DensityMatrix::random_mixed(group.dim(), &mut rng)?;
        let diff = dilation.apply(&rho)?.matrix() - qn.apply_kraus(&rho)?.matrix();
        worst = worst.max(max_abs(&diff));
    }
    println!(
        "{name}: |S| = {}, env dim = {}, regime = {:?}, max deviation = {worst:e}",
        gens.len(),
        dilation.env_dim,
        dilation.regime
    );
    Ok(())
}

fn main() -> uniform_channel::Result<()> {
    report("S_3 star", symmetric_group(3)?, star_generators(3)?)?;
    report("S_4 star", symmetric_group(4)?, star_generators(4)?)?;
    let klein = klein_four_generators();
    report("Klein four", enumerate_from_generators(&klein, 16)?, GeneratorSet::new(klein))?;
    Ok(())
}
