//! Finite groups of unitaries acting on N-qubit basis states.
//!
//! The main instance is the symmetric group `S_n` acting on `N = C(n,2)`
//! edge qubits: a vertex relabeling `σ` permutes vertex pairs, and therefore
//! permutes the bits of a graph code `x`. Elements can also be explicit
//! basis permutations or dense unitaries, enumerated from a generator list.
//!
//! Edge bits use one canonical ordering shared by every module: pairs
//! `(i, j)` with `i < j`, sorted lexicographically, the `k`-th pair owning
//! bit `k`. Pair `(1, 2)` is the least significant bit.

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest vertex count for which `S_n` is enumerated (8! = 40320).
pub const MAX_SYMMETRIC_DEGREE: usize = 8;
/// Largest qubit count for which explicit basis-index arrays are built.
pub const MAX_INDEX_QUBITS: usize = 24;
/// Unitarity tolerance, `max |U†U - I|`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Two unitaries within this entrywise distance are the same group element.
pub const DEDUP_TOL: f64 = 1e-8;

/// Number of vertex pairs on `n` vertices.
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit position of the pair `{a, b}` (0-based vertices, `a != b`).
pub fn edge_index(a: usize, b: usize, n: usize) -> usize {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs in canonical order, 0-based.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(edge_count(n));
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// A permutation of `n` vertices, stored 0-based.
///
/// External constructors take 1-based one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexPermutation {
    map: Vec<usize>,
}

impl VertexPermutation {
    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    /// Builds from 1-based one-line notation, e.g. `[2, 1, 3]` for `τ₁₂` on 3 vertices.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &v in one_line {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidInput(format!(
                    "{one_line:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v - 1] = true;
            map.push(v - 1);
        }
        Ok(Self { map })
    }

    pub(crate) fn from_zero_based(map: Vec<usize>) -> Self {
        Self { map }
    }

    /// The transposition `τ_{p,q}` (1-based vertex labels).
    pub fn transposition(p: usize, q: usize, n: usize) -> Result<Self> {
        if p == q || p == 0 || q == 0 || p > n || q > n {
            return Err(Error::InvalidInput(format!(
                "invalid transposition ({p} {q}) on {n} vertices"
            )));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(p - 1, q - 1);
        Ok(Self { map })
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// Image of a 0-based vertex.
    pub fn image(&self, v: usize) -> usize {
        self.map[v]
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            map: other.map.iter().map(|&v| self.map[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (v, &w) in self.map.iter().enumerate() {
            inv[w] = v;
        }
        Self { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(v, &w)| v == w)
    }
}

/// The induced permutation of edge bits: entry `k` is the bit position that
/// edge `k` moves to under `σ`.
pub fn edge_permutation(sigma: &VertexPermutation) -> Vec<usize> {
    let n = sigma.degree();
    edge_pairs(n)
        .into_iter()
        .map(|(i, j)| edge_index(sigma.image(i), sigma.image(j), n))
        .collect()
}

fn permute_bits(x: usize, bit_map: &[usize]) -> usize {
    let mut y = 0usize;
    let mut rest = x;
    while rest != 0 {
        let k = rest.trailing_zeros() as usize;
        y |= 1 << bit_map[k];
        rest &= rest - 1;
    }
    y
}

/// How a group element acts on the `2^N`-dimensional space.
#[derive(Debug, Clone)]
pub enum Action {
    /// Explicit image array over all basis indices.
    BasisPermutation(Vec<usize>),
    /// A vertex relabeling acting on edge bits. Equivalent to a basis
    /// permutation but stored in `O(N)` space, so `S_8` on 28 qubits fits.
    EdgeRelabel {
        sigma: VertexPermutation,
        bit_map: Vec<usize>,
    },
    DenseUnitary(DMatrix<Complex64>),
}

#[derive(Debug, Clone)]
pub struct GroupElement {
    num_qubits: usize,
    action: Action,
}

/// Hash key for permutation-type elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ElementKey {
    Vertex(Vec<usize>),
    Basis(Vec<usize>),
}

impl GroupElement {
    /// An explicit basis permutation; `images.len()` must be a power of two.
    pub fn basis_permutation(images: Vec<usize>) -> Result<Self> {
        let dim = images.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "basis permutation length {dim} is not a power of two"
            )));
        }
        let mut seen = vec![false; dim];
        for &y in &images {
            if y >= dim || seen[y] {
                return Err(Error::InvalidInput(
                    "basis permutation is not a bijection".into(),
                ));
            }
            seen[y] = true;
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            action: Action::BasisPermutation(images),
        })
    }

    /// A dense unitary on `2^N` dimensions, checked to `UNITARY_TOL`.
    pub fn unitary(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "unitary must be square with power-of-two order, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = (matrix.adjoint() * &matrix - DMatrix::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > UNITARY_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix is not unitary: max |U†U - I| = {defect:e}"
            )));
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            action: Action::DenseUnitary(matrix),
        })
    }

    /// `P(σ)` acting on the `C(n,2)` edge qubits, stored compactly.
    pub fn edge_relabel(sigma: VertexPermutation) -> Self {
        let bit_map = edge_permutation(&sigma);
        Self {
            num_qubits: bit_map.len(),
            action: Action::EdgeRelabel { sigma, bit_map },
        }
    }

    pub fn identity_like(&self) -> Self {
        match &self.action {
            Action::BasisPermutation(p) => Self {
                num_qubits: self.num_qubits,
                action: Action::BasisPermutation((0..p.len()).collect()),
            },
            Action::EdgeRelabel { sigma, .. } => {
                Self::edge_relabel(VertexPermutation::identity(sigma.degree()))
            }
            Action::DenseUnitary(m) => Self {
                num_qubits: self.num_qubits,
                action: Action::DenseUnitary(DMatrix::identity(m.nrows(), m.ncols())),
            },
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn is_permutation(&self) -> bool {
        !matches!(self.action, Action::DenseUnitary(_))
    }

    /// The vertex permutation behind an edge-relabel element.
    pub fn vertex_permutation(&self) -> Option<&VertexPermutation> {
        match &self.action {
            Action::EdgeRelabel { sigma, .. } => Some(sigma),
            _ => None,
        }
    }

    /// Image of basis index `x`; `None` for dense unitaries.
    pub fn map_index(&self, x: usize) -> Option<usize> {
        match &self.action {
            Action::BasisPermutation(p) => p.get(x).copied(),
            Action::EdgeRelabel { bit_map, .. } => Some(permute_bits(x, bit_map)),
            Action::DenseUnitary(_) => None,
        }
    }

    /// Materializes the explicit basis-index array.
    pub fn to_basis_permutation(&self) -> Result<Vec<usize>> {
        match &self.action {
            Action::BasisPermutation(p) => Ok(p.clone()),
            Action::EdgeRelabel { bit_map, .. } => {
                if self.num_qubits > MAX_INDEX_QUBITS {
                    return Err(Error::SizeLimit(format!(
                        "basis array of length 2^{} exceeds the 2^{MAX_INDEX_QUBITS} budget",
                        self.num_qubits
                    )));
                }
                Ok((0..1usize << self.num_qubits)
                    .map(|x| permute_bits(x, bit_map))
                    .collect())
            }
            Action::DenseUnitary(_) => Err(Error::Unsupported(
                "dense unitary has no basis permutation".into(),
            )),
        }
    }

    /// The `2^N × 2^N` matrix of this element.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.action {
            Action::DenseUnitary(m) => m.clone(),
            _ => {
                let dim = self.dim();
                let mut m = DMatrix::zeros(dim, dim);
                for x in 0..dim {
                    let y = self.map_index(x).expect("permutation element");
                    m[(y, x)] = Complex64::new(1.0, 0.0);
                }
                m
            }
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        match (&self.action, &other.action) {
            (Action::EdgeRelabel { sigma: a, .. }, Action::EdgeRelabel { sigma: b, .. }) => {
                Ok(Self::edge_relabel(a.compose(b)))
            }
            (Action::DenseUnitary(_), _) | (_, Action::DenseUnitary(_)) => Ok(Self {
                num_qubits: self.num_qubits,
                action: Action::DenseUnitary(self.to_dense() * other.to_dense()),
            }),
            _ => {
                let a = self.to_basis_permutation()?;
                let b = other.to_basis_permutation()?;
                Ok(Self {
                    num_qubits: self.num_qubits,
                    action: Action::BasisPermutation(b.iter().map(|&x| a[x]).collect()),
                })
            }
        }
    }

    pub fn inverse(&self) -> Self {
        let action = match &self.action {
            Action::BasisPermutation(p) => {
                let mut inv = vec![0; p.len()];
                for (x, &y) in p.iter().enumerate() {
                    inv[y] = x;
                }
                Action::BasisPermutation(inv)
            }
            Action::EdgeRelabel { sigma, .. } => {
                return Self::edge_relabel(sigma.inverse());
            }
            Action::DenseUnitary(m) => Action::DenseUnitary(m.adjoint()),
        };
        Self {
            num_qubits: self.num_qubits,
            action,
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.action {
            Action::BasisPermutation(p) => p.iter().enumerate().all(|(x, &y)| x == y),
            Action::EdgeRelabel { sigma, .. } => sigma.is_identity(),
            Action::DenseUnitary(m) => {
                max_entry_distance(m, &DMatrix::identity(m.nrows(), m.ncols())) <= DEDUP_TOL
            }
        }
    }

    /// Max entrywise distance between the two actions as matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self.key(), other.key()) {
            (Some(a), Some(b)) if a == b => 0.0,
            (Some(ElementKey::Vertex(_)), Some(ElementKey::Vertex(_))) => 1.0,
            (Some(ElementKey::Basis(_)), Some(ElementKey::Basis(_))) => 1.0,
            _ => max_entry_distance(&self.to_dense(), &other.to_dense()),
        }
    }

    fn key(&self) -> Option<ElementKey> {
        match &self.action {
            Action::BasisPermutation(p) => Some(ElementKey::Basis(p.clone())),
            Action::EdgeRelabel { sigma, .. } => Some(ElementKey::Vertex(sigma.map.clone())),
            Action::DenseUnitary(_) => None,
        }
    }
}

fn max_entry_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// A finite group with a canonical element order.
///
/// Products are computed on demand and resolved back to indices, so no
/// `|G|²` table is stored.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    elements: Vec<GroupElement>,
    identity_index: usize,
    inverses: Vec<usize>,
    lookup: HashMap<ElementKey, usize>,
}

impl FiniteGroup {
    fn from_elements(elements: Vec<GroupElement>) -> Result<Self> {
        let mut lookup = HashMap::new();
        for (i, g) in elements.iter().enumerate() {
            if let Some(key) = g.key() {
                lookup.insert(key, i);
            }
        }
        let identity_index = elements
            .iter()
            .position(GroupElement::is_identity)
            .ok_or_else(|| Error::InvalidInput("element list has no identity".into()))?;
        let mut group = Self {
            elements,
            identity_index,
            inverses: Vec::new(),
            lookup,
        };
        let inverses = (0..group.len())
            .map(|i| {
                let inv = group.elements[i].inverse();
                group
                    .index_of(&inv)
                    .ok_or_else(|| Error::InvalidInput("element list is not closed under inversion".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        group.inverses = inverses;
        Ok(group)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn num_qubits(&self) -> usize {
        self.elements[0].num_qubits()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Whether every element is a basis permutation.
    pub fn is_permutation_group(&self) -> bool {
        self.elements.iter().all(GroupElement::is_permutation)
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        if let Some(key) = g.key() {
            return self.lookup.get(&key).copied();
        }
        self.elements
            .iter()
            .position(|h| g.distance(h) <= DEDUP_TOL)
    }

    /// Index of `elements[i] ∘ elements[j]`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let product = self.elements[i]
            .compose(&self.elements[j])
            .expect("group elements share one dimension");
        self.index_of(&product)
            .expect("finite group is closed under composition")
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    fn require_permutations(&self) -> Result<()> {
        if self.is_permutation_group() {
            Ok(())
        } else {
            Err(Error::Unsupported(
                "orbit and stabilizer need basis-permutation elements".into(),
            ))
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All `n!` vertex permutations in lexicographic one-line order, acting on
/// the `C(n,2)` edge qubits. The identity is index 0.
pub fn symmetric_group(n: usize) -> Result<FiniteGroup> {
    if !(2..=MAX_SYMMETRIC_DEGREE).contains(&n) {
        return Err(Error::SizeLimit(format!(
            "symmetric group degree must be in 2..={MAX_SYMMETRIC_DEGREE}; n = {n} gives n! = {} elements",
            if n <= 20 { factorial(n).to_string() } else { "astronomically many".into() }
        )));
    }
    let mut elements = Vec::with_capacity(factorial(n));
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        elements.push(GroupElement::edge_relabel(VertexPermutation::from_zero_based(
            current.clone(),
        )));
        if !next_permutation(&mut current) {
            break;
        }
    }
    FiniteGroup::from_elements(elements)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A generating set `S`, held as elements so it can exist before the group
/// is enumerated.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    members: Vec<GroupElement>,
}

impl GeneratorSet {
    pub fn new(members: Vec<GroupElement>) -> Self {
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    /// Whether the inverse of every member is again a member.
    pub fn is_symmetric(&self) -> bool {
        self.missing_inverse().is_none()
    }

    fn missing_inverse(&self) -> Option<usize> {
        self.members.iter().enumerate().find_map(|(i, g)| {
            let inv = g.inverse();
            (!self.members.iter().any(|h| inv.distance(h) <= DEDUP_TOL)).then_some(i)
        })
    }

    /// Member indices in `group`, after checking that `S` is symmetric,
    /// identity-free and generating.
    pub fn resolve(&self, group: &FiniteGroup) -> Result<Vec<usize>> {
        let indices = self
            .members
            .iter()
            .enumerate()
            .map(|(i, g)| group.index_of(g).ok_or(Error::NotInGroup(i)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = indices.iter().position(|&g| g == group.identity_index()) {
            return Err(Error::ContainsIdentity(i));
        }
        if let Some(i) = self.missing_inverse() {
            return Err(Error::NotSymmetric(i));
        }
        let reached = closure_size(group, &indices);
        if reached != group.len() {
            return Err(Error::NotGenerating {
                reached,
                total: group.len(),
            });
        }
        Ok(indices)
    }
}

/// BFS from the identity along left multiplication by the given members.
fn closure_size(group: &FiniteGroup, members: &[usize]) -> usize {
    let mut seen = vec![false; group.len()];
    let mut queue = VecDeque::from([group.identity_index()]);
    seen[group.identity_index()] = true;
    let mut count = 1;
    while let Some(g) = queue.pop_front() {
        for &h in members {
            let hg = group.compose(h, g);
            if !seen[hg] {
                seen[hg] = true;
                count += 1;
                queue.push_back(hg);
            }
        }
    }
    count
}

/// The star transpositions `τ_{1,n}, …, τ_{n-1,n}`.
pub fn star_transpositions(n: usize) -> Result<Vec<VertexPermutation>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("star generators need n >= 2, got {n}")));
    }
    (1..n).map(|i| VertexPermutation::transposition(i, n, n)).collect()
}

/// The star transpositions as edge-qubit group elements. Each is an
/// involution, so the set is symmetric.
pub fn star_generators(n: usize) -> Result<GeneratorSet> {
    Ok(GeneratorSet::new(
        star_transpositions(n)?
            .into_iter()
            .map(GroupElement::edge_relabel)
            .collect(),
    ))
}

/// `P(σ)` as an explicit basis-index array on `2^{C(n,2)}` indices.
pub fn basis_permutation(sigma: &VertexPermutation) -> Result<GroupElement> {
    let n_qubits = edge_count(sigma.degree());
    if n_qubits > MAX_INDEX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "{n_qubits} edge qubits exceed the {MAX_INDEX_QUBITS}-qubit index-array budget"
        )));
    }
    GroupElement::edge_relabel(sigma.clone())
        .to_basis_permutation()
        .and_then(GroupElement::basis_permutation)
}

/// The orbit of basis index `x`, sorted ascending.
pub fn orbit(group: &FiniteGroup, x: usize) -> Result<Vec<usize>> {
    group.require_permutations()?;
    let mut points: Vec<usize> = group
        .elements()
        .iter()
        .map(|g| g.map_index(x).expect("permutation element"))
        .collect();
    points.sort_unstable();
    points.dedup();
    Ok(points)
}

/// Indices of the elements fixing `x`.
pub fn stabilizer(group: &FiniteGroup, x: usize) -> Result<Vec<usize>> {
    group.require_permutations()?;
    Ok(group
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.map_index(x) == Some(x))
        .map(|(i, _)| i)
        .collect())
}

/// BFS closure of a generator list from the identity.
///
/// Elements are indexed in discovery order; each popped element `g` is
/// extended by `s ∘ g` for generators `s` in list order.
pub fn enumerate_from_generators(gens: &[GroupElement], cap: usize) -> Result<FiniteGroup> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidInput("generator list is empty".into()))?;
    if gens.iter().any(|g| g.num_qubits() != first.num_qubits()) {
        return Err(Error::InvalidInput(
            "generators act on different qubit counts".into(),
        ));
    }
    let mut elements = vec![first.identity_like()];
    let mut keys: HashMap<ElementKey, usize> = HashMap::new();
    if let Some(k) = elements[0].key() {
        keys.insert(k, 0);
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let product = s.compose(&elements[g])?;
            let known = match product.key() {
                Some(k) => keys.contains_key(&k),
                None => find_unitary(&elements, &product)?.is_some(),
            };
            if known {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::Overflow { cap });
            }
            if let Some(k) = product.key() {
                keys.insert(k, elements.len());
            }
            queue.push_back(elements.len());
            elements.push(product);
        }
    }
    FiniteGroup::from_elements(elements)
}

fn find_unitary(elements: &[GroupElement], candidate: &GroupElement) -> Result<Option<usize>> {
    for (i, h) in elements.iter().enumerate() {
        let d = candidate.distance(h);
        if d <= UNITARY_TOL {
            return Ok(Some(i));
        }
        if d <= DEDUP_TOL {
            return Err(Error::Ambiguity { distance: d });
        }
    }
    Ok(None)
}

/// `X⊗I`, `I⊗X` and `X⊗X` as dense two-qubit unitaries.
///
/// They generate the Klein four-group; the set is symmetric with `|S| = 3`,
/// the smallest generating set whose `|S| + 1` is a power of two.
pub fn klein_four_generators() -> Vec<GroupElement> {
    let x = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let i = DMatrix::<Complex64>::identity(2, 2);
    [x.kronecker(&i), i.kronecker(&x), x.kronecker(&x)]
        .into_iter()
        .map(|m| GroupElement::unitary(m).expect("Pauli products are unitary"))
        .collect()
}

/// Adjacent-qubit swaps realizing `P(τ_{p,q})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapDecomposition {
    /// Each entry `(k, k + 1)` swaps two neighboring edge bits.
    pub swaps: Vec<(usize, usize)>,
    pub total_count: usize,
}

impl SwapDecomposition {
    /// Replays the swaps on the bits of `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.swaps.iter().fold(x, |y, &(a, b)| {
            let (ba, bb) = ((y >> a) & 1, (y >> b) & 1);
            if ba == bb {
                y
            } else {
                y ^ ((1 << a) | (1 << b))
            }
        })
    }
}

/// Decomposes `P(τ_{p,q})` (1-based, `p < q`) into neighboring swaps.
///
/// For each `k ∉ {p, q}` the bits of `{k,p}` and `{k,q}` are exchanged by
/// bubbling one bit up to the other position and the other back down,
/// `2d - 1` swaps for distance `d`. The total stays below `3!·C(n,3)`.
pub fn neighbor_swap_decomposition(p: usize, q: usize, n: usize) -> Result<SwapDecomposition> {
    if p == q || p == 0 || q > n || p > q {
        return Err(Error::InvalidInput(format!(
            "invalid transposition ({p} {q}) on {n} vertices; need 1 <= p < q <= n"
        )));
    }
    let (p0, q0) = (p - 1, q - 1);
    let mut swaps = Vec::new();
    for k in (0..n).filter(|&k| k != p0 && k != q0) {
        let a = edge_index(k, p0, n);
        let b = edge_index(k, q0, n);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for pos in lo..hi {
            swaps.push((pos, pos + 1));
        }
        for pos in (lo..hi - 1).rev() {
            swaps.push((pos, pos + 1));
        }
    }
    let total_count = swaps.len();
    Ok(SwapDecomposition { swaps, total_count })
}
