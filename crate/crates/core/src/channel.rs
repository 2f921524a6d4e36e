//! Quantum channels that are convex mixtures of group conjugations.
//!
//! A channel is stored as `(group, mixture)`; its Kraus family
//! `{√u_g · g}` and its environment dilation are derived on demand. Dense
//! states are capped at [`DENSE_DIM_CAP`]; permutation groups also get a
//! diagonal fast path that never leaves the computational basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, StandardNormal};
use serde::Serialize;

use crate::cayley::{
    build_cayley, laplacian_spectrum, walk_apply, GroupDistribution, ScaleConstants,
    STOCHASTIC_TOL,
};
use crate::error::{Error, Result};
use crate::group_rep::{Action, FiniteGroup, GeneratorSet};

/// Largest dense matrix order (system, or environment ⊗ system).
pub const DENSE_DIM_CAP: usize = 4096;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalue floor for positivity; looser than Hermiticity because
/// repeated conjugation accumulates eigensolver noise.
pub const PSD_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_dense_dim(dim: usize) -> Result<()> {
    if dim > DENSE_DIM_CAP {
        return Err(Error::SizeLimit(format!(
            "dense matrix of order {dim} exceeds the {DENSE_DIM_CAP} budget"
        )));
    }
    Ok(())
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// A dense density matrix on `2^N` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.ncols(),
            });
        }
        check_dense_dim(dim)?;
        let defect = hermitian_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidInput(format!("trace is {trace}, not 1")));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    fn unchecked(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ` (normalized here if needed).
    pub fn pure(state: &DVector<Complex64>) -> Result<Self> {
        check_dense_dim(state.len())?;
        let norm = state.norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        let psi = state / Complex64::new(norm, 0.0);
        Ok(Self::unchecked(&psi * psi.adjoint()))
    }

    /// `|x⟩⟨x|`
    pub fn basis(dim: usize, x: usize) -> Result<Self> {
        check_dense_dim(dim)?;
        if x >= dim {
            return Err(Error::InvalidInput(format!("basis index {x} out of range {dim}")));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(x, x)] = ONE;
        Ok(Self::unchecked(m))
    }

    /// `I / dim`
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dense_dim(dim)?;
        Ok(Self::unchecked(
            DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        ))
    }

    /// Haar-random pure state from complex Gaussian amplitudes.
    pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let v = DVector::from_fn(dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        Self::pure(&v)
    }

    /// `G G† / tr(G G†)` for a complex Gaussian `G` (full rank).
    pub fn random_mixed<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        check_dense_dim(dim)?;
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let m = &g * g.adjoint();
        let tr = m.trace();
        Ok(Self::unchecked(m / tr))
    }

    pub fn from_diagonal(diag: &DiagonalDensity) -> Result<Self> {
        check_dense_dim(diag.dim())?;
        let mut m = DMatrix::zeros(diag.dim(), diag.dim());
        for (&x, &p) in diag.support() {
            m[(x, x)] = Complex64::new(p, 0.0);
        }
        Ok(Self::unchecked(m))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }

    /// `⟨y|ρ|y⟩`
    pub fn diagonal_entry(&self, y: usize) -> f64 {
        self.matrix[(y, y)].re
    }
}

/// A diagonal density matrix stored as its probability map.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalDensity {
    dim: usize,
    support: BTreeMap<usize, f64>,
}

impl DiagonalDensity {
    pub fn new(dim: usize, support: BTreeMap<usize, f64>) -> Result<Self> {
        if let Some((&x, _)) = support.iter().find(|(&x, _)| x >= dim) {
            return Err(Error::InvalidInput(format!("basis index {x} out of range {dim}")));
        }
        if let Some((_, &p)) = support.iter().find(|(_, &p)| p.is_nan() || p < 0.0) {
            return Err(Error::InvalidInput(format!("negative probability {p}")));
        }
        let total: f64 = support.values().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidInput(format!("probabilities sum to {total}")));
        }
        Ok(Self { dim, support })
    }

    /// `|x⟩⟨x|`
    pub fn delta(dim: usize, x: usize) -> Result<Self> {
        Self::new(dim, BTreeMap::from([(x, 1.0)]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &BTreeMap<usize, f64> {
        &self.support
    }

    /// `λ_y = ⟨y|ρ|y⟩`
    pub fn entry(&self, y: usize) -> f64 {
        self.support.get(&y).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.support.values().sum()
    }
}

/// Which branch of the environment construction applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DilationRegime {
    /// `|S| + 1 = 2^m`: the environment is `m` qubits in `|+⟩^{⊗m}`.
    PowerOfTwo,
    /// `2^{m-1} < |S| + 1 < 2^m`: uniform superposition over the first
    /// `|S| + 1` environment states.
    Padded,
}

/// `Q(u)(ρ) = Σ_g u_g g ρ g†`.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    group: Arc<FiniteGroup>,
    mixture: GroupDistribution,
}

impl QuantumChannel {
    pub fn new(group: Arc<FiniteGroup>, mixture: GroupDistribution) -> Result<Self> {
        if mixture.len() != group.len() {
            return Err(Error::DimensionMismatch {
                expected: group.len(),
                got: mixture.len(),
            });
        }
        Ok(Self { group, mixture })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn mixture(&self) -> &GroupDistribution {
        &self.mixture
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mixture
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(g, &w)| (g, w))
    }

    /// `{√u_g · g}` over the support of the mixture.
    pub fn kraus_operators(&self) -> Result<Vec<DMatrix<Complex64>>> {
        check_dense_dim(self.dim())?;
        Ok(self
            .support()
            .map(|(g, w)| self.group.element(g).to_dense() * Complex64::new(w.sqrt(), 0.0))
            .collect())
    }

    /// `max |Σ A†A - I|` over the Kraus family.
    pub fn kraus_completeness_defect(&self) -> Result<f64> {
        let dim = self.dim();
        let sum = self
            .kraus_operators()?
            .iter()
            .fold(DMatrix::zeros(dim, dim), |acc, a| acc + a.adjoint() * a);
        Ok(max_abs(&(sum - DMatrix::identity(dim, dim))))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        let dim = self.dim();
        let src = rho.matrix();
        let mut out = DMatrix::zeros(dim, dim);
        for (g, w) in self.support() {
            let weight = Complex64::new(w, 0.0);
            match self.group.element(g).action() {
                Action::DenseUnitary(u) => {
                    out += (u * src * u.adjoint()) * weight;
                }
                _ => {
                    let p = self.group.element(g).to_basis_permutation()?;
                    for c in 0..dim {
                        let pc = p[c];
                        for r in 0..dim {
                            out[(p[r], pc)] += src[(r, c)] * weight;
                        }
                    }
                }
            }
        }
        Ok(DensityMatrix::unchecked(out))
    }

    /// Pushes the diagonal through each permutation; needs a permutation group.
    pub fn apply_diagonal(&self, rho: &DiagonalDensity) -> Result<DiagonalDensity> {
        if !self.group.is_permutation_group() {
            return Err(Error::Unsupported(
                "diagonal fast path needs a basis-permutation group".into(),
            ));
        }
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        let mut support = BTreeMap::new();
        for (g, w) in self.support() {
            let elem = self.group.element(g);
            for (&x, &p) in rho.support() {
                let y = elem.map_index(x).expect("permutation element");
                *support.entry(y).or_insert(0.0) += w * p;
            }
        }
        Ok(DiagonalDensity {
            dim: rho.dim,
            support,
        })
    }

    /// Generic `Σ A ρ A†` through the Kraus family.
    pub fn apply_kraus(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self
            .kraus_operators()?
            .iter()
            .fold(DMatrix::zeros(self.dim(), self.dim()), |acc, a| {
                acc + a * rho.matrix() * a.adjoint()
            });
        Ok(DensityMatrix::unchecked(out))
    }

    /// `l`-fold application.
    pub fn apply_iterated(&self, rho: &DensityMatrix, l: usize) -> Result<DensityMatrix> {
        let mut current = rho.clone();
        for _ in 0..l {
            current = self.apply(&current)?;
        }
        Ok(current)
    }

    pub fn apply_diagonal_iterated(&self, rho: &DiagonalDensity, l: usize) -> Result<DiagonalDensity> {
        let mut current = rho.clone();
        for _ in 0..l {
            current = self.apply_diagonal(&current)?;
        }
        Ok(current)
    }

    /// The mixture of `self^l`, by repeated convolution.
    pub fn power(&self, l: usize) -> Result<QuantumChannel> {
        let mut acc = identity_channel(self.group.clone());
        for _ in 0..l {
            acc = compose(self, &acc)?;
        }
        Ok(acc)
    }
}

/// The channel with all weight on the identity.
pub fn identity_channel(group: Arc<FiniteGroup>) -> QuantumChannel {
    let mixture = GroupDistribution::delta(group.len(), group.identity_index());
    QuantumChannel { group, mixture }
}

/// `QU`: uniform weight `1/|G|`.
pub fn uniform_channel(group: Arc<FiniteGroup>) -> QuantumChannel {
    let mixture = GroupDistribution::uniform(group.len());
    QuantumChannel { group, mixture }
}

/// `Q_N`: uniform weight on `{id} ∪ S`.
pub fn qn_channel(group: Arc<FiniteGroup>, generators: &GeneratorSet) -> Result<QuantumChannel> {
    let mut members = generators.resolve(&group)?;
    members.push(group.identity_index());
    let mixture = GroupDistribution::indicator(group.len(), &members)?;
    Ok(QuantumChannel { group, mixture })
}

/// `a ∘ b`, i.e. `b` applied first. The mixture is the group convolution
/// `w_{gh} += a_g b_h`.
pub fn compose(a: &QuantumChannel, b: &QuantumChannel) -> Result<QuantumChannel> {
    if !Arc::ptr_eq(&a.group, &b.group) {
        return Err(Error::InvalidInput(
            "channels are defined over different groups".into(),
        ));
    }
    let group = &a.group;
    let mut weights = vec![0.0; group.len()];
    for (g, wa) in a.support() {
        for (h, wb) in b.support() {
            weights[group.compose(g, h)] += wa * wb;
        }
    }
    Ok(QuantumChannel {
        group: a.group.clone(),
        mixture: GroupDistribution::from_raw(weights),
    })
}

/// `B(h)u`: the mixture of `Q(δ_h) ∘ Q(u)`, with `v_g = u_{h⁻¹g}`.
pub fn left_translate(group: &FiniteGroup, h: usize, u: &GroupDistribution) -> GroupDistribution {
    let mut weights = vec![0.0; group.len()];
    for (g, &w) in u.weights().iter().enumerate() {
        weights[group.compose(h, g)] = w;
    }
    GroupDistribution::from_raw(weights)
}

/// The mixture of `Q_N^l` computed as `M^l δ_id` on the Cayley graph.
pub fn qn_power_mixture(
    group: &FiniteGroup,
    generators: &GeneratorSet,
    l: usize,
) -> Result<GroupDistribution> {
    let graph = build_cayley(group, generators)?;
    let mut u = GroupDistribution::delta(group.len(), group.identity_index());
    for _ in 0..l {
        u = walk_apply(&graph, &u)?;
    }
    Ok(u)
}

/// The environment realization of `Q_N`.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub env_dim: usize,
    pub env_state: DMatrix<Complex64>,
    /// `diag(g₀ = id, g₁, …, g_{e-1})`, identity blocks past `|S|`.
    pub total_unitary: DMatrix<Complex64>,
    pub regime: DilationRegime,
    pub active_blocks: usize,
    blocks: Vec<DMatrix<Complex64>>,
}

impl Dilation {
    pub fn system_dim(&self) -> usize {
        self.blocks[0].nrows()
    }

    /// The controlled gate `V_a`: acts as `g_a` on the system when the
    /// environment reads `|a⟩`, identity otherwise.
    pub fn controlled_gate(&self, a: usize) -> DMatrix<Complex64> {
        let d = self.system_dim();
        let mut v = DMatrix::identity(self.env_dim * d, self.env_dim * d);
        v.view_mut((a * d, a * d), (d, d)).copy_from(&self.blocks[a]);
        v
    }

    /// `tr_env U (ρ_env ⊗ ρ) U†`
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.system_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.system_dim(),
                got: rho.dim(),
            });
        }
        partial_trace_env(&self.joint_state(rho), self.env_dim)
    }

    /// `U (ρ_env ⊗ ρ) U†` before tracing out.
    pub fn joint_state(&self, rho: &DensityMatrix) -> DMatrix<Complex64> {
        let joint = self.env_state.kronecker(rho.matrix());
        &self.total_unitary * joint * self.total_unitary.adjoint()
    }
}

pub fn build_dilation(group: &FiniteGroup, generators: &GeneratorSet) -> Result<Dilation> {
    let members = generators.resolve(group)?;
    let active_blocks = members.len() + 1;
    let env_dim = active_blocks.next_power_of_two().max(2);
    let d = group.dim();
    check_dense_dim(env_dim * d)?;
    let regime = if active_blocks == env_dim {
        DilationRegime::PowerOfTwo
    } else {
        DilationRegime::Padded
    };
    let identity = DMatrix::<Complex64>::identity(d, d);
    let mut blocks = vec![identity.clone()];
    blocks.extend(members.iter().map(|&g| group.element(g).to_dense()));
    blocks.resize(env_dim, identity);

    let amp = Complex64::new(1.0 / (active_blocks as f64).sqrt(), 0.0);
    let phi = DVector::from_fn(env_dim, |a, _| if a < active_blocks { amp } else { ZERO });
    let env_state = &phi * phi.adjoint();

    let mut total_unitary = DMatrix::zeros(env_dim * d, env_dim * d);
    for (a, block) in blocks.iter().enumerate() {
        total_unitary.view_mut((a * d, a * d), (d, d)).copy_from(block);
    }
    Ok(Dilation {
        env_dim,
        env_state,
        total_unitary,
        regime,
        active_blocks,
        blocks,
    })
}

/// Traces out the leading `env_dim`-dimensional factor: the sum of the
/// diagonal `d × d` blocks.
pub fn partial_trace_env(rho_tot: &DMatrix<Complex64>, env_dim: usize) -> Result<DensityMatrix> {
    let total = rho_tot.nrows();
    if env_dim == 0 || !total.is_multiple_of(env_dim) || total != rho_tot.ncols() {
        return Err(Error::InvalidInput(format!(
            "order {}x{} does not factor as {env_dim} ⊗ system",
            rho_tot.nrows(),
            rho_tot.ncols()
        )));
    }
    let d = total / env_dim;
    let mut out = DMatrix::zeros(d, d);
    for a in 0..env_dim {
        out += rho_tot.view((a * d, a * d), (d, d));
    }
    Ok(DensityMatrix::unchecked(out))
}

/// Nuclear norm `Σ |λ_i|` of a Hermitian matrix.
pub fn trace_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    let defect = hermitian_defect(a);
    if defect > HERMITIAN_TOL {
        return Err(Error::InvalidInput(format!(
            "trace norm needs a Hermitian matrix (defect {defect:e})"
        )));
    }
    Ok(hermitian_eigenvalues(a).iter().map(|l| l.abs()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxError {
    pub l: usize,
    /// `‖QU(ρ) - Q_N^l(ρ)‖₁`
    pub error: f64,
    /// `Σ_g |v_{g,l}|` for `v_l = M^l δ_id - 𝟙/|G|`
    pub deviation_l1: f64,
    /// `√|G| · ‖v_l‖₂`
    pub deviation_l2_scaled: f64,
    /// `√|G| · radius^l`
    pub spectral_bound: f64,
    /// `exp(bN^β/2 - l/(bN^β+1)²)` when the constants hold for the instance.
    pub paper_bound: Option<f64>,
}

/// Trace-norm distance between `QU(ρ)` and `Q_N^l(ρ)` for `l = 0..=max_l`,
/// with the bounds it is compared against.
pub fn approx_errors(
    group: Arc<FiniteGroup>,
    generators: &GeneratorSet,
    rho: &DensityMatrix,
    max_l: usize,
    constants: Option<ScaleConstants>,
) -> Result<Vec<ApproxError>> {
    let graph = build_cayley(&group, generators)?;
    let spectrum = laplacian_spectrum(&graph)?;
    let target = uniform_channel(group.clone()).apply(rho)?;
    let qn = qn_channel(group.clone(), generators)?;
    let constants = constants.filter(|c| c.holds_for(&spectrum));
    let size = group.len() as f64;

    let mut current = rho.clone();
    let mut mixture = GroupDistribution::delta(group.len(), group.identity_index());
    let mut rows = Vec::with_capacity(max_l + 1);
    for l in 0..=max_l {
        if l > 0 {
            current = qn.apply(&current)?;
            mixture = walk_apply(&graph, &mixture)?;
        }
        let diff = target.matrix() - current.matrix();
        let v: Vec<f64> = mixture.weights().iter().map(|w| w - 1.0 / size).collect();
        let paper_bound = constants.map(|c| {
            let k = c.scale();
            (k / 2.0 - l as f64 / ((k + 1.0) * (k + 1.0))).exp()
        });
        rows.push(ApproxError {
            l,
            error: trace_norm(&diff)?,
            deviation_l1: v.iter().map(|x| x.abs()).sum(),
            deviation_l2_scaled: size.sqrt() * v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            spectral_bound: size.sqrt() * spectrum.nonprincipal_radius.powi(l as i32),
            paper_bound,
        });
    }
    Ok(rows)
}

/// A single `l` of [`approx_errors`].
pub fn approx_error(
    group: Arc<FiniteGroup>,
    generators: &GeneratorSet,
    rho: &DensityMatrix,
    l: usize,
    constants: Option<ScaleConstants>,
) -> Result<ApproxError> {
    Ok(*approx_errors(group, generators, rho, l, constants)?
        .last()
        .expect("at least one row"))
}

/// Smallest integer `l ≥ ½(1+δ)·K·(K+1)²` with `K = bN^β` and
/// `δ = (2/K)·log(1/ε)`, which drives the trace-norm bound below `ε`.
pub fn iterations_for_epsilon(epsilon: f64, b: f64, beta: f64, num_qubits: usize) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(b > 0.0 && beta > 0.0) || num_qubits == 0 {
        return Err(Error::InvalidInput("b, beta and N must be positive".into()));
    }
    let k = b * (num_qubits as f64).powf(beta);
    let delta = 2.0 / k * (1.0 / epsilon).ln();
    let l = 0.5 * (1.0 + delta) * k * (k + 1.0) * (k + 1.0);
    let rounded = l.round();
    let l = if (l - rounded).abs() <= 1e-9 * rounded.max(1.0) {
        rounded
    } else {
        l.ceil()
    };
    Ok(l as u64)
}

/// `tr(ρη)`, real and clamped into `[0, 1]` when within tolerance.
pub fn trace_product(rho: &DensityMatrix, eta: &DensityMatrix) -> Result<f64> {
    if rho.dim() != eta.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: eta.dim(),
        });
    }
    let (a, b) = (rho.matrix(), eta.matrix());
    let mut t = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    if t.im.abs() > HERMITIAN_TOL {
        return Err(Error::InvalidInput(format!("tr(ρη) has imaginary part {}", t.im)));
    }
    let re = t.re;
    if (-TRACE_TOL..0.0).contains(&re) {
        return Ok(0.0);
    }
    if re > 1.0 && re <= 1.0 + TRACE_TOL {
        return Ok(1.0);
    }
    Ok(re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwapTestOutcome {
    pub samples: u64,
    pub zero_count: u64,
    /// `(1 + tr ρη)/2`
    pub zero_probability: f64,
    /// `2·zero_count/samples - 1`
    pub estimate: f64,
}

impl SwapTestOutcome {
    pub fn frequency(&self) -> f64 {
        self.zero_count as f64 / self.samples as f64
    }

    /// Binomial standard error of the outcome-0 frequency.
    pub fn standard_error(&self) -> f64 {
        let p = self.zero_probability;
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Seeded Bernoulli draws with the controlled-SWAP circuit's outcome-0
/// probability.
pub fn swap_test_simulate(
    rho: &DensityMatrix,
    eta: &DensityMatrix,
    samples: u64,
    seed: u64,
) -> Result<SwapTestOutcome> {
    if samples == 0 {
        return Err(Error::InvalidInput("swap test needs at least one sample".into()));
    }
    let overlap = trace_product(rho, eta)?;
    let zero_probability = (1.0 + overlap) / 2.0;
    let zero_count = bernoulli_count(zero_probability, samples, seed)?;
    Ok(SwapTestOutcome {
        samples,
        zero_count,
        zero_probability,
        estimate: 2.0 * zero_count as f64 / samples as f64 - 1.0,
    })
}

/// Number of successes in `samples` seeded Bernoulli(`p`) draws.
pub fn bernoulli_count(p: f64, samples: u64, seed: u64) -> Result<u64> {
    let dist = Bernoulli::new(p.clamp(0.0, 1.0))
        .map_err(|e| Error::InvalidInput(format!("bad probability {p}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples).filter(|_| dist.sample(&mut rng)).count() as u64)
}

/// Outcome-0 probability of the full circuit `H · CSWAP · H` on
/// `|0⟩⟨0| ⊗ ρ ⊗ η`, by explicit density-matrix evolution.
///
/// The joint order is `2d²`, so this is restricted to tiny subsystems.
pub fn swap_test_circuit_probability(rho: &DensityMatrix, eta: &DensityMatrix) -> Result<f64> {
    let d = rho.dim();
    if eta.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: eta.dim(),
        });
    }
    let total = 2 * d * d;
    check_dense_dim(total)?;
    if total > 512 {
        return Err(Error::SizeLimit(format!(
            "explicit SWAP-test circuit of order {total} is limited to 512"
        )));
    }
    let h = DMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]) / Complex64::new(2f64.sqrt(), 0.0);
    let h_full = h.kronecker(&DMatrix::identity(d * d, d * d));
    // block-diag(I, SWAP) with the ancilla as the leading factor
    let mut cswap = DMatrix::zeros(total, total);
    for i in 0..d * d {
        cswap[(i, i)] = ONE;
        let (a, b) = (i / d, i % d);
        cswap[(d * d + b * d + a, d * d + i)] = ONE;
    }
    let circuit = &h_full * cswap * &h_full;
    let mut anc = DMatrix::zeros(2, 2);
    anc[(0, 0)] = ONE;
    let input = anc.kronecker(&rho.matrix().kronecker(eta.matrix()));
    let out = &circuit * input * circuit.adjoint();
    Ok((0..d * d).map(|i| out[(i, i)].re).sum())
}

/// Deterministic RNG for state generation in examples and reports.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Wraps a group in the shared handle channels expect.
pub fn share(group: FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(group)
}
