//! Laplacian and walk spectra of S_n with star transpositions.
//!
//! ```text
//! cargo run --release --example cayley_spectrum -- 5
//! ```

use uniform_channel::cayley::{build_cayley, laplacian_spectrum};
use uniform_channel::group_rep::{star_generators, symmetric_group};

fn main() -> uniform_channel::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let group = symmetric_group(n)?;
    let graph = build_cayley(&group, &star_generators(n)?)?;
    let spectrum = laplacian_spectrum(&graph)?;

    println!("S_{n}: |G| = {}, |S| = {}", graph.group_size(), graph.degree());
    if let Some(lambdas) = &spectrum.laplacian_eigenvalues {
        let mut distinct: Vec<(f64, usize)> = Vec::new();
        for &l in lambdas {
            match distinct.last_mut() {
                Some((v, m)) if (l - *v).abs() < 1e-6 => *m += 1,
                _ => distinct.push((l.round(), 1)),
            }
        }
        println!("Laplacian eigenvalues (value x multiplicity):");
        for (v, m) in distinct {
            println!("  {v:>4} x {m}");
        }
    }
    println!("spectral gap        {:.12}", spectrum.spectral_gap);
    println!("nonprincipal radius {:.12}", spectrum.nonprincipal_radius);
    println!("bound 1 - gap/(|S|+1) = {:.12}", spectrum.radius_bound());
    Ok(())
}
