//! Cayley graphs `Γ(G,S)`, their Laplacian and walk-matrix spectra, and
//! the mixing of the lazy walk `M = (I + A)/(1 + |S|)` toward uniform.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group_rep::{FiniteGroup, GeneratorSet};

/// Default vertex cap for [`build_cayley`].
pub const DEFAULT_GRAPH_CAP: usize = 10080;
/// Default order cap for the dense symmetric eigensolve.
pub const DEFAULT_DENSE_EIGEN_CAP: usize = 5040;
/// Tolerance for eigenvalue assertions.
pub const EIGEN_TOL: f64 = 1e-8;
/// Tolerance for probability sums.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// An undirected `|S|`-regular Cayley graph over the canonical element order.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group_size: usize,
    generators: Vec<usize>,
    /// `neighbors[g][s] = generators[s] ∘ g`
    neighbors: Vec<Vec<usize>>,
}

impl CayleyGraph {
    pub fn group_size(&self) -> usize {
        self.group_size
    }

    /// `|S|`
    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    /// Group indices of the generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn neighbors(&self, g: usize) -> &[usize] {
        &self.neighbors[g]
    }

    /// Dense 0/1 adjacency; entry `(g, hg)` is 1 for `h ∈ S`.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.group_size;
        let mut a = DMatrix::zeros(n, n);
        for (g, row) in self.neighbors.iter().enumerate() {
            for &hg in row {
                a[(g, hg)] += 1.0;
            }
        }
        a
    }

    /// `|S| I - A`
    pub fn laplacian_matrix(&self) -> DMatrix<f64> {
        let n = self.group_size;
        DMatrix::identity(n, n) * self.degree() as f64 - self.adjacency_matrix()
    }

    /// `(I + A)/(1 + |S|)`
    pub fn walk_matrix(&self) -> DMatrix<f64> {
        let n = self.group_size;
        (DMatrix::identity(n, n) + self.adjacency_matrix()) / (1.0 + self.degree() as f64)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.group_size];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(g) = stack.pop() {
            for &h in &self.neighbors[g] {
                if !seen[h] {
                    seen[h] = true;
                    count += 1;
                    stack.push(h);
                }
            }
        }
        count == self.group_size
    }
}

pub fn build_cayley(group: &FiniteGroup, generators: &GeneratorSet) -> Result<CayleyGraph> {
    build_cayley_with_cap(group, generators, DEFAULT_GRAPH_CAP)
}

pub fn build_cayley_with_cap(
    group: &FiniteGroup,
    generators: &GeneratorSet,
    cap: usize,
) -> Result<CayleyGraph> {
    if group.len() > cap {
        return Err(Error::SizeLimit(format!(
            "Cayley graph on {} vertices exceeds cap {cap}",
            group.len()
        )));
    }
    let gens = generators.resolve(group)?;
    let neighbors = (0..group.len())
        .map(|g| gens.iter().map(|&h| group.compose(h, g)).collect())
        .collect();
    let graph = CayleyGraph {
        group_size: group.len(),
        generators: gens,
        neighbors,
    };
    // resolve() already ran the BFS closure; this guards the adjacency itself
    debug_assert!(graph.is_connected());
    Ok(graph)
}

/// Spectral data of `L = |S| I - A` and `M`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralSummary {
    /// Ascending; `None` when only the gap was computed iteratively.
    pub laplacian_eigenvalues: Option<Vec<f64>>,
    /// `(|S|+1-λ_j)/(|S|+1)` in the same order as the Laplacian list.
    pub walk_eigenvalues: Option<Vec<f64>>,
    /// Smallest nonzero Laplacian eigenvalue, `λ₂`.
    pub spectral_gap: f64,
    /// Largest `|μ|` over the non-principal walk eigenvalues.
    pub nonprincipal_radius: f64,
    pub degree: usize,
    pub group_size: usize,
    pub iterative: bool,
}

impl SpectralSummary {
    /// `max(1 - gap/(|S|+1), 1 - 2/(|S|+1))`, the bound on every
    /// non-principal `|μ|`.
    pub fn radius_bound(&self) -> f64 {
        let d = self.degree as f64 + 1.0;
        f64::max(1.0 - self.spectral_gap / d, 1.0 - 2.0 / d)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub dense_cap: usize,
    /// Past `dense_cap`, estimate the gap and radius by deflated power
    /// iteration instead of failing.
    pub iterative_fallback: bool,
    pub max_iterations: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            dense_cap: DEFAULT_DENSE_EIGEN_CAP,
            iterative_fallback: false,
            max_iterations: 20_000,
        }
    }
}

pub fn laplacian_spectrum(graph: &CayleyGraph) -> Result<SpectralSummary> {
    laplacian_spectrum_with(graph, SpectrumOptions::default())
}

pub fn laplacian_spectrum_with(
    graph: &CayleyGraph,
    options: SpectrumOptions,
) -> Result<SpectralSummary> {
    if graph.group_size() > options.dense_cap {
        if options.iterative_fallback {
            return Ok(iterative_spectrum(graph, options.max_iterations));
        }
        return Err(Error::SizeLimit(format!(
            "dense eigensolve of order {} exceeds cap {}",
            graph.group_size(),
            options.dense_cap
        )));
    }
    let mut lambdas: Vec<f64> = graph
        .laplacian_matrix()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    lambdas.sort_by(f64::total_cmp);
    let d = graph.degree() as f64 + 1.0;
    let mus: Vec<f64> = lambdas.iter().map(|l| (d - l) / d).collect();
    let spectral_gap = lambdas
        .iter()
        .copied()
        .find(|&l| l > EIGEN_TOL)
        .unwrap_or(0.0);
    let nonprincipal_radius = mus.iter().skip(1).map(|m| m.abs()).fold(0.0, f64::max);
    Ok(SpectralSummary {
        laplacian_eigenvalues: Some(lambdas),
        walk_eigenvalues: Some(mus),
        spectral_gap,
        nonprincipal_radius,
        degree: graph.degree(),
        group_size: graph.group_size(),
        iterative: false,
    })
}

fn walk_raw(graph: &CayleyGraph, v: &[f64], out: &mut [f64]) {
    let d = graph.degree() as f64 + 1.0;
    for (g, o) in out.iter_mut().enumerate() {
        let s: f64 = graph.neighbors[g].iter().map(|&h| v[h]).sum();
        *o = (v[g] + s) / d;
    }
}

/// Largest eigenvalue of `shift·I + scale·M` restricted to `𝟙^⊥`, via
/// power iteration with a Rayleigh quotient readout.
fn deflated_power(graph: &CayleyGraph, shift: f64, scale: f64, iters: usize) -> f64 {
    let n = graph.group_size();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let mut w = vec![0.0; n];
    let project = |v: &mut [f64]| {
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    };
    project(&mut v);
    let mut estimate = 0.0;
    for _ in 0..iters {
        walk_raw(graph, &v, &mut w);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi = shift * vi + scale * *wi;
        }
        let rayleigh: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        project(&mut w);
        std::mem::swap(&mut v, &mut w);
        if (rayleigh - estimate).abs() < 1e-14 {
            return rayleigh;
        }
        estimate = rayleigh;
    }
    estimate
}

fn iterative_spectrum(graph: &CayleyGraph, iters: usize) -> SpectralSummary {
    let d = graph.degree() as f64 + 1.0;
    // (I + M)/2 has spectrum in [0, 1]; its top non-principal eigenvalue is (1 + μ₂)/2
    let top = deflated_power(graph, 0.5, 0.5, iters);
    let mu2 = 2.0 * top - 1.0;
    // (I - M)/2 picks out the most negative μ
    let bottom = 1.0 - 2.0 * deflated_power(graph, 0.5, -0.5, iters);
    SpectralSummary {
        laplacian_eigenvalues: None,
        walk_eigenvalues: None,
        spectral_gap: d * (1.0 - mu2),
        nonprincipal_radius: f64::max(mu2.abs(), bottom.abs()),
        degree: graph.degree(),
        group_size: graph.group_size(),
        iterative: true,
    }
}

/// A probability vector over canonical group indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDistribution {
    weights: Vec<f64>,
}

impl GroupDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("empty distribution".into()));
        }
        if let Some(w) = weights.iter().find(|w| **w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidInput(format!("negative or non-finite weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    pub(crate) fn from_raw(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn uniform(size: usize) -> Self {
        Self {
            weights: vec![1.0 / size as f64; size],
        }
    }

    pub fn delta(size: usize, index: usize) -> Self {
        let mut weights = vec![0.0; size];
        weights[index] = 1.0;
        Self { weights }
    }

    /// The normalized characteristic vector of `members`.
    pub fn indicator(size: usize, members: &[usize]) -> Result<Self> {
        let mut weights = vec![0.0; size];
        for &m in members {
            if m >= size {
                return Err(Error::InvalidInput(format!("index {m} out of range {size}")));
            }
            weights[m] = 1.0;
        }
        let count = weights.iter().filter(|w| **w > 0.0).count();
        if count == 0 {
            return Err(Error::InvalidInput("empty indicator set".into()));
        }
        weights.iter_mut().for_each(|w| *w /= count as f64);
        Ok(Self { weights })
    }

    /// A random point of the simplex (normalized exponentials).
    pub fn random<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..size).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        Self {
            weights: raw.into_iter().map(|w| w / total).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, g: usize) -> f64 {
        self.weights[g]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Euclidean distance to the uniform distribution.
    pub fn distance_to_uniform(&self) -> f64 {
        let u = 1.0 / self.len() as f64;
        self.weights
            .iter()
            .map(|w| (w - u) * (w - u))
            .sum::<f64>()
            .sqrt()
    }
}

/// `M(G,S)·u`.
pub fn walk_apply(graph: &CayleyGraph, u: &GroupDistribution) -> Result<GroupDistribution> {
    if u.len() != graph.group_size() {
        return Err(Error::DimensionMismatch {
            expected: graph.group_size(),
            got: u.len(),
        });
    }
    let mut out = vec![0.0; u.len()];
    walk_raw(graph, &u.weights, &mut out);
    Ok(GroupDistribution::from_raw(out))
}

/// `M(G,S)^l·u`.
pub fn walk_power(graph: &CayleyGraph, u: &GroupDistribution, l: usize) -> Result<GroupDistribution> {
    let mut current = u.clone();
    for _ in 0..l {
        current = walk_apply(graph, &current)?;
    }
    Ok(current)
}

/// The constants `b, β` of the efficiency definition, evaluated at `N` qubits.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScaleConstants {
    pub b: f64,
    pub beta: f64,
    pub num_qubits: usize,
}

impl ScaleConstants {
    /// `b·N^β`
    pub fn scale(&self) -> f64 {
        self.b * (self.num_qubits as f64).powf(self.beta)
    }

    /// `1 - 1/(bN^β + 1)²`
    pub fn contraction(&self) -> f64 {
        let k = self.scale() + 1.0;
        1.0 - 1.0 / (k * k)
    }

    /// Checks the walk-related inequalities: `log|G|`, `|S|` and `1/gap`
    /// all at most `bN^β`.
    pub fn holds_for(&self, spectrum: &SpectralSummary) -> bool {
        let k = self.scale();
        self.b > 0.0
            && self.beta > 0.0
            && (spectrum.group_size as f64).ln() <= k
            && spectrum.degree as f64 <= k
            && spectrum.spectral_gap > 0.0
            && 1.0 / spectrum.spectral_gap <= k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MixingReport {
    /// `‖M^l u - 𝟙/|G|‖₂`
    pub deviation: f64,
    /// `nonprincipal_radius^l`
    pub spectral_bound: f64,
    /// `(1 - 1/(bN^β+1)²)^l` and `exp(-l/(bN^β+1)²)` when the constants hold.
    pub paper_bound: Option<(f64, f64)>,
}

pub fn mixing_deviation(
    graph: &CayleyGraph,
    spectrum: &SpectralSummary,
    u: &GroupDistribution,
    l: usize,
    constants: Option<ScaleConstants>,
) -> Result<MixingReport> {
    let deviation = walk_power(graph, u, l)?.distance_to_uniform();
    let spectral_bound = spectrum.nonprincipal_radius.powi(l as i32);
    let paper_bound = constants.filter(|c| c.holds_for(spectrum)).map(|c| {
        let k = c.scale() + 1.0;
        (c.contraction().powi(l as i32), (-(l as f64) / (k * k)).exp())
    });
    Ok(MixingReport {
        deviation,
        spectral_bound,
        paper_bound,
    })
}

/// Full eigen-decomposition of the walk matrix, used to cross-check the
/// affine map from the Laplacian spectrum.
pub fn walk_matrix_eigenvalues(graph: &CayleyGraph) -> Vec<f64> {
    let mut mus: Vec<f64> = graph.walk_matrix().symmetric_eigenvalues().iter().copied().collect();
    mus.sort_by(|a, b| b.total_cmp(a));
    mus
}
