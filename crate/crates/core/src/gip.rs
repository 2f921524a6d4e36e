//! Graph isomorphism through the action of `S_n` on edge qubits.
//!
//! A graph on `n` labeled vertices is a basis index `x` of `N = C(n,2)`
//! qubits. The uniform channel of `S_n` sends `|x⟩⟨x|` to the diagonal state
//! with weight `|Aut(G(x))|/n!` on each graph isomorphic to `G(x)`. The lazy
//! star-transposition walk `Q_N^l` approximates that state; reading one
//! diagonal entry then decides isomorphism and recovers `|Aut|`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::cayley::{
    build_cayley, laplacian_spectrum_with, ScaleConstants, SpectrumOptions, EIGEN_TOL,
};
use crate::channel::{bernoulli_count, DiagonalDensity};
use crate::error::{Error, Result};
use crate::group_rep::{
    edge_count, edge_index, edge_pairs, neighbor_swap_decomposition, star_generators,
    star_transpositions, symmetric_group, FiniteGroup, GroupElement, MAX_SYMMETRIC_DEGREE,
};

/// A labeled graph as an edge-bit integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GraphCode {
    pub n: usize,
    pub x: u64,
}

impl GraphCode {
    pub fn new(n: usize, x: u64) -> Result<Self> {
        let bits = edge_count(n);
        if n < 1 || bits > 63 || (bits < 64 && x >> bits != 0) {
            return Err(Error::InvalidInput(format!(
                "graph code {x} does not fit {bits} edge bits (n = {n})"
            )));
        }
        Ok(Self { n, x })
    }

    pub fn num_qubits(&self) -> usize {
        edge_count(self.n)
    }

    pub fn index(&self) -> usize {
        self.x as usize
    }

    /// Parses `"n:x"`.
    pub fn parse_raw(spec: &str) -> Result<Self> {
        let (n, x) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected <n>:<code>, got {spec:?}")))?;
        let n = n.trim().parse().map_err(|e| Error::Parse(format!("bad n {n:?}: {e}")))?;
        let x = x.trim().parse().map_err(|e| Error::Parse(format!("bad code {x:?}: {e}")))?;
        Self::new(n, x)
    }
}

impl fmt::Display for GraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.x)
    }
}

/// Sets bit `k` for each edge; vertices are 1-based and `i < j`.
pub fn encode_graph(n: usize, edges: &[(usize, usize)]) -> Result<GraphCode> {
    if edge_count(n) > 63 {
        return Err(Error::SizeLimit(format!("{n} vertices need more than 63 edge bits")));
    }
    let mut x = 0u64;
    for &(i, j) in edges {
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::InvalidInput(format!(
                "edge ({i}, {j}) must satisfy 1 <= i < j <= {n}"
            )));
        }
        let bit = 1u64 << edge_index(i - 1, j - 1, n);
        if x & bit != 0 {
            return Err(Error::InvalidInput(format!("duplicate edge ({i}, {j})")));
        }
        x |= bit;
    }
    GraphCode::new(n, x)
}

/// Edge list in canonical order, 1-based.
pub fn decode_graph(code: GraphCode) -> Vec<(usize, usize)> {
    edge_pairs(code.n)
        .into_iter()
        .enumerate()
        .filter(|(k, _)| code.x >> k & 1 == 1)
        .map(|(_, (i, j))| (i + 1, j + 1))
        .collect()
}

/// Reads the graph file format: first line `n`, then one `i j` edge per
/// line. `#` starts a comment; blank lines are skipped.
pub fn parse_graph_file(text: &str) -> Result<GraphCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, line)| (no + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("graph file is empty".into()))?;
    let n: usize = header
        .parse()
        .map_err(|e| Error::Parse(format!("line 1: bad vertex count {header:?}: {e}")))?;
    let mut edges = Vec::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [i, j] = fields[..] else {
            return Err(Error::Parse(format!("line {no}: expected two vertices, got {line:?}")));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {no}: bad vertex {s:?}: {e}")))
        };
        edges.push((parse(i)?, parse(j)?));
    }
    encode_graph(n, &edges).map_err(|e| Error::Parse(e.to_string()))
}

/// `S_n` on edge qubits with its star generators, shared by the pipeline.
#[derive(Debug, Clone)]
pub struct SymmetricAction {
    n: usize,
    group: FiniteGroup,
    star: Vec<GroupElement>,
}

impl SymmetricAction {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_SYMMETRIC_DEGREE {
            return Err(Error::SizeLimit(format!(
                "brute-force orbit over {n}! permutations exceeds the n <= {MAX_SYMMETRIC_DEGREE} budget"
            )));
        }
        let group = symmetric_group(n)?;
        let star = star_generators(n)?.members().to_vec();
        Ok(Self { n, group, star })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_order(&self) -> u64 {
        self.group.len() as u64
    }

    fn check(&self, code: GraphCode) -> Result<usize> {
        if code.n != self.n {
            return Err(Error::InvalidInput(format!(
                "graph has {} vertices, pipeline is set up for {}",
                code.n, self.n
            )));
        }
        Ok(code.index())
    }

    /// Sorted orbit of `x` by applying every permutation.
    pub fn orbit(&self, code: GraphCode) -> Result<Vec<usize>> {
        let x = self.check(code)?;
        crate::group_rep::orbit(&self.group, x)
    }

    /// `|Aut(G(x))|` by brute force.
    pub fn stabilizer_order(&self, code: GraphCode) -> Result<u64> {
        let x = self.check(code)?;
        Ok(crate::group_rep::stabilizer(&self.group, x)?.len() as u64)
    }

    /// `ρ(x) = QU(|x⟩⟨x|)` with exact weights: each orbit point `y`
    /// collects `#{σ : σx = y}/n!`.
    pub fn rho_x_exact(&self, code: GraphCode) -> Result<BTreeMap<usize, Ratio<u64>>> {
        let x = self.check(code)?;
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for g in self.group.elements() {
            *counts.entry(g.map_index(x).expect("permutation")).or_default() += 1;
        }
        let order = self.group_order();
        Ok(counts
            .into_iter()
            .map(|(y, c)| (y, Ratio::new(c, order)))
            .collect())
    }

    pub fn rho_x(&self, code: GraphCode) -> Result<DiagonalDensity> {
        let exact = self.rho_x_exact(code)?;
        DiagonalDensity::new(
            1usize << code.num_qubits(),
            exact
                .into_iter()
                .map(|(y, w)| (y, *w.numer() as f64 / *w.denom() as f64))
                .collect(),
        )
    }

    /// `λ_y = ⟨y|ρ(x)|y⟩` as the pair `(|H(x)|, n!)`, or `(0, n!)` off the orbit.
    pub fn lambda_y(&self, x: GraphCode, y: GraphCode) -> Result<ExactLambda> {
        let yi = self.check(y)?;
        let orbit = self.orbit(x)?;
        let numerator = if orbit.binary_search(&yi).is_ok() {
            self.stabilizer_order(x)?
        } else {
            0
        };
        Ok(ExactLambda {
            numerator,
            denominator: self.group_order(),
        })
    }

    /// The distribution of `Q_N^l(|x⟩⟨x|)` over the orbit of `x`.
    ///
    /// The star transpositions permute the orbit, so the walk runs on
    /// `|orb(x)|` points instead of `2^N`.
    pub fn walk_distribution(&self, code: GraphCode, l: u64) -> Result<OrbitWalk> {
        let orbit = self.orbit(code)?;
        let position: HashMap<usize, usize> =
            orbit.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let moves: Vec<Vec<usize>> = orbit
            .iter()
            .map(|&z| {
                self.star
                    .iter()
                    .map(|h| position[&h.map_index(z).expect("permutation")])
                    .collect()
            })
            .collect();
        let weight = 1.0 / self.n as f64;
        let mut p = vec![0.0; orbit.len()];
        p[position[&code.index()]] = 1.0;
        let mut next = vec![0.0; orbit.len()];
        for _ in 0..l {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (z, &mass) in p.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                let share = mass * weight;
                next[z] += share;
                for &w in &moves[z] {
                    next[w] += share;
                }
            }
            std::mem::swap(&mut p, &mut next);
        }
        Ok(OrbitWalk {
            orbit,
            position,
            probabilities: p,
        })
    }

    /// `⟨y|Q_N^l(|x⟩⟨x|)|y⟩`
    pub fn qn_walk_entry(&self, x: GraphCode, y: GraphCode, l: u64) -> Result<f64> {
        self.check(y)?;
        Ok(self.walk_distribution(x, l)?.entry(y.index()))
    }

    /// Reads the diagonal entry exactly (the measurement oracle), scales by
    /// `n!` and thresholds at 1/2.
    pub fn decide_isomorphic(&self, x1: GraphCode, x2: GraphCode, l: Option<u64>) -> Result<GipDecision> {
        let l = l.unwrap_or_else(|| default_iterations(self.n));
        let raw_entry = self.qn_walk_entry(x1, x2, l)?;
        let scaled = raw_entry * self.group_order() as f64;
        let isomorphic = scaled > 0.5;
        let brute_isomorphic = self.orbit(x1)?.binary_search(&x2.index()).is_ok();
        let brute_automorphisms = self.stabilizer_order(x1)?;
        let automorphism_count = isomorphic.then(|| scaled.round() as u64);
        let consistent = isomorphic == brute_isomorphic
            && automorphism_count.is_none_or(|c| c == brute_automorphisms);
        Ok(GipDecision {
            x1,
            x2,
            l,
            raw_entry,
            scaled,
            verdict: if isomorphic {
                Verdict::Isomorphic
            } else {
                Verdict::NonIsomorphic
            },
            automorphism_count,
            brute_force_isomorphic: brute_isomorphic,
            brute_force_automorphisms: brute_automorphisms,
            consistent,
        })
    }
}

/// `l = n³`
pub fn default_iterations(n: usize) -> u64 {
    (n as u64).pow(3)
}

#[derive(Debug, Clone)]
pub struct OrbitWalk {
    pub orbit: Vec<usize>,
    position: HashMap<usize, usize>,
    pub probabilities: Vec<f64>,
}

impl OrbitWalk {
    /// Mass at basis index `y`; exactly 0 off the orbit.
    pub fn entry(&self, y: usize) -> f64 {
        self.position.get(&y).map_or(0.0, |&i| self.probabilities[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactLambda {
    pub numerator: u64,
    pub denominator: u64,
}

impl ExactLambda {
    pub fn as_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Isomorphic,
    NonIsomorphic,
}

#[derive(Debug, Clone, Serialize)]
pub struct GipDecision {
    pub x1: GraphCode,
    pub x2: GraphCode,
    pub l: u64,
    /// `⟨x₂|Q_N^l(|x₁⟩⟨x₁|)|x₂⟩`
    pub raw_entry: f64,
    /// `n! · raw_entry`
    pub scaled: f64,
    pub verdict: Verdict,
    /// Nearest integer to `scaled` when isomorphic.
    pub automorphism_count: Option<u64>,
    pub brute_force_isomorphic: bool,
    pub brute_force_automorphisms: u64,
    /// Verdict and count agree with the brute-force oracle.
    pub consistent: bool,
}

pub fn rho_x(n: usize, x: u64) -> Result<DiagonalDensity> {
    SymmetricAction::new(n)?.rho_x(GraphCode::new(n, x)?)
}

pub fn lambda_y(n: usize, x: u64, y: u64) -> Result<ExactLambda> {
    SymmetricAction::new(n)?.lambda_y(GraphCode::new(n, x)?, GraphCode::new(n, y)?)
}

pub fn qn_walk_entry(n: usize, x: u64, y: u64, l: u64) -> Result<f64> {
    SymmetricAction::new(n)?.qn_walk_entry(GraphCode::new(n, x)?, GraphCode::new(n, y)?, l)
}

pub fn decide_isomorphic(n: usize, x1: u64, x2: u64, l: Option<u64>) -> Result<GipDecision> {
    SymmetricAction::new(n)?.decide_isomorphic(GraphCode::new(n, x1)?, GraphCode::new(n, x2)?, l)
}

/// `√(n!)·e^{-l/n}`, the walk-entry error bound.
pub fn walk_entry_bound(n: usize, l: u64) -> f64 {
    let order: f64 = (1..=n).map(|k| k as f64).product();
    order.sqrt() * (-(l as f64) / n as f64).exp()
}

/// One inequality of the efficiency certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }

    fn less_than(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            pass: value < bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapSource {
    Dense,
    Iterative,
    /// Taken as 1 from the known star-transposition spectrum, not computed.
    Cited,
}

#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyReport {
    pub n: usize,
    pub num_qubits: usize,
    pub b: f64,
    pub beta: f64,
    pub scale: f64,
    pub spectral_gap: f64,
    pub gap_source: GapSource,
    /// Max adjacent-swap count over the star generators.
    pub max_generator_gates: usize,
    /// Max adjacent-swap count over every transposition.
    pub max_transposition_swaps: usize,
    pub checks: Vec<Check>,
}

impl EfficiencyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn constants(&self) -> ScaleConstants {
        ScaleConstants {
            b: self.b,
            beta: self.beta,
            num_qubits: self.num_qubits,
        }
    }
}

/// Gap computation up to this degree (7! = 5040 vertices via power iteration).
pub const MAX_GAP_DEGREE: usize = 7;

/// Evaluates every inequality of the efficiency definition for `S_n` with
/// the star generators. When `constants` is `None`, `β = 1` and `b` is the
/// smallest multiple of 1/4 that satisfies all of them.
pub fn efficiency_report(
    n: usize,
    constants: Option<(f64, f64)>,
    cite_gap: bool,
) -> Result<EfficiencyReport> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("efficiency report needs n >= 3, got {n}")));
    }
    let num_qubits = edge_count(n);
    let (spectral_gap, gap_source) = if n <= MAX_GAP_DEGREE {
        let group = symmetric_group(n)?;
        let graph = build_cayley(&group, &star_generators(n)?)?;
        let spectrum = laplacian_spectrum_with(
            &graph,
            SpectrumOptions {
                dense_cap: 720,
                iterative_fallback: true,
                ..Default::default()
            },
        )?;
        let source = if spectrum.iterative {
            GapSource::Iterative
        } else {
            GapSource::Dense
        };
        (spectrum.spectral_gap, source)
    } else if cite_gap {
        (1.0, GapSource::Cited)
    } else {
        return Err(Error::SizeLimit(format!(
            "spectral gap of S_{n} needs a {}-vertex eigensolve; pass the cite flag to use λ₂ = 1",
            (1..=n as u128).product::<u128>()
        )));
    };

    let log_order: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let degree = (n - 1) as f64;
    let max_generator_gates = star_transpositions(n)?
        .iter()
        .map(|t| {
            let (p, q) = transposition_pair(t);
            neighbor_swap_decomposition(p, q, n).map(|d| d.total_count)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let mut max_transposition_swaps = 0;
    for p in 1..n {
        for q in p + 1..=n {
            max_transposition_swaps =
                max_transposition_swaps.max(neighbor_swap_decomposition(p, q, n)?.total_count);
        }
    }
    let swap_limit = (n * (n - 1) * (n - 2)) as f64;

    let needed = [log_order, degree, 1.0 / spectral_gap, max_generator_gates as f64];
    let (b, beta) = constants.unwrap_or_else(|| {
        let worst = needed.iter().copied().fold(0.0, f64::max) / num_qubits as f64;
        ((worst * 4.0).ceil() / 4.0, 1.0)
    });
    let scale = b * (num_qubits as f64).powf(beta);
    let nf = n as f64;
    let two_n = 2.0 * num_qubits as f64;

    let checks = vec![
        Check::at_most("log_group_order", log_order, scale),
        Check::less_than("log_group_order_vs_n_log_n", log_order, nf * nf.ln()),
        Check::less_than(
            "log_group_order_vs_edge_bound",
            log_order,
            0.5 * two_n.sqrt() * two_n.ln(),
        ),
        Check::at_most("generator_count", degree, scale),
        Check::at_most("inverse_spectral_gap", 1.0 / spectral_gap, scale),
        Check::at_most("generator_gate_count", max_generator_gates as f64, scale),
        Check::less_than("transposition_swap_count", max_transposition_swaps as f64, swap_limit),
        Check {
            name: "spectral_gap_is_one".into(),
            value: spectral_gap,
            bound: 1.0,
            pass: (spectral_gap - 1.0).abs()
                <= if gap_source == GapSource::Iterative { 1e-6 } else { EIGEN_TOL },
        },
    ];
    Ok(EfficiencyReport {
        n,
        num_qubits,
        b,
        beta,
        scale,
        spectral_gap,
        gap_source,
        max_generator_gates,
        max_transposition_swaps,
        checks,
    })
}

fn transposition_pair(t: &crate::group_rep::VertexPermutation) -> (usize, usize) {
    let moved: Vec<usize> = (0..t.degree()).filter(|&v| t.image(v) != v).collect();
    (moved[0] + 1, moved[1] + 1)
}

/// Sample count for telling `Bernoulli(1/2 + 1/(2·n!))` from `Bernoulli(1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernoulliSeparation {
    pub n: usize,
    pub alpha: f64,
    /// `z_{1-α}`
    pub z: f64,
    /// `1/(2·n!)`
    pub delta: f64,
    pub p_null: f64,
    pub p_alt: f64,
    /// `⌈(2 z_{1-α})² · p̄(1-p̄) / Δ²⌉` with `p̄ = 1/2`.
    pub samples: f64,
}

pub fn bernoulli_separation(n: usize, alpha: f64) -> Result<BernoulliSeparation> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1/2), got {alpha}")));
    }
    let z = Normal::standard().inverse_cdf(1.0 - alpha);
    let order: f64 = (1..=n).map(|k| k as f64).product();
    let delta = 1.0 / (2.0 * order);
    let samples = ((2.0 * z).powi(2) * 0.25 / (delta * delta)).ceil();
    Ok(BernoulliSeparation {
        n,
        alpha,
        z,
        delta,
        p_null: 0.5,
        p_alt: 0.5 + delta,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalSeparation {
    pub trials: u64,
    pub mean_null: f64,
    pub mean_alt: f64,
    pub combined_standard_error: f64,
    /// `(mean_alt - mean_null) / combined_standard_error`
    pub z_score: f64,
}

/// Draws `trials` samples at each of the two Bernoulli parameters.
pub fn bernoulli_empirical(n: usize, trials: u64, seed: u64) -> Result<EmpiricalSeparation> {
    let sep = bernoulli_separation(n, 0.05)?;
    let null = bernoulli_count(sep.p_null, trials, seed)? as f64 / trials as f64;
    let alt = bernoulli_count(sep.p_alt, trials, seed.wrapping_add(1))? as f64 / trials as f64;
    let se = ((null * (1.0 - null) + alt * (1.0 - alt)) / trials as f64).sqrt();
    Ok(EmpiricalSeparation {
        trials,
        mean_null: null,
        mean_alt: alt,
        combined_standard_error: se,
        z_score: (alt - null) / se,
    })
}
