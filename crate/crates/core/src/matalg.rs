//! Finite-dimensional C*-algebras `⊕ₖ M_{d_k}`: block-diagonal elements,
//! central elements, operator matrices over the algebra and their positivity.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockStructure {
    dims: Vec<usize>,
}

impl TryFrom<Vec<usize>> for BlockStructure {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<BlockStructure> for Vec<usize> {
    fn from(s: BlockStructure) -> Self {
        s.dims
    }
}

impl BlockStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Config(format!("invalid block dimensions {dims:?}")));
        }
        Ok(BlockStructure { dims })
    }

    /// `ℂ^n` as the diagonal algebra `C(X)`, `|X| = n`.
    pub fn diagonal(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn matrix(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Block dimensions sorted with multiplicity; isomorphic algebras agree.
    pub fn canonical_dims(&self) -> Vec<usize> {
        let mut d = self.dims.clone();
        d.sort_unstable();
        d
    }

    /// All matrix units `E_{ij}` of every block, as `(block, i, j)`.
    pub fn matrix_unit_indices(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (k, &d) in self.dims.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    out.push((k, i, j));
                }
            }
        }
        out
    }

    pub fn matrix_units(&self) -> Vec<AlgebraElement> {
        self.matrix_unit_indices()
            .into_iter()
            .map(|(k, i, j)| AlgebraElement::matrix_unit(self, k, i, j))
            .collect()
    }
}

/// A block-diagonal matrix. Blocks are kept in the order of the structure.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(s: &BlockStructure, blocks: Vec<CMatrix>) -> Result<Self> {
        let ok = blocks.len() == s.num_blocks()
            && blocks
                .iter()
                .zip(s.dims())
                .all(|(b, &d)| b.nrows() == d && b.ncols() == d);
        if !ok {
            return Err(Error::StructureMismatch);
        }
        Ok(AlgebraElement { blocks })
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<CMatrix>) -> Self {
        AlgebraElement { blocks }
    }

    pub fn zero(s: &BlockStructure) -> Self {
        AlgebraElement {
            blocks: s.dims().iter().map(|&d| CMatrix::zeros(d, d)).collect(),
        }
    }

    pub fn identity(s: &BlockStructure) -> Self {
        AlgebraElement {
            blocks: s.dims().iter().map(|&d| CMatrix::identity(d, d)).collect(),
        }
    }

    pub fn matrix_unit(s: &BlockStructure, k: usize, i: usize, j: usize) -> Self {
        let mut a = Self::zero(s);
        a.blocks[k][(i, j)] = C64::new(1.0, 0.0);
        a
    }

    /// Entries drawn uniformly from the unit square in each coordinate.
    pub fn random<R: Rng + ?Sized>(s: &BlockStructure, rng: &mut R) -> Self {
        AlgebraElement {
            blocks: s
                .dims()
                .iter()
                .map(|&d| {
                    CMatrix::from_fn(d, d, |_, _| {
                        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                })
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn structure(&self) -> BlockStructure {
        BlockStructure {
            dims: self.blocks.iter().map(|b| b.nrows()).collect(),
        }
    }

    pub fn conforms(&self, s: &BlockStructure) -> bool {
        self.blocks.len() == s.num_blocks()
            && self.blocks.iter().zip(s.dims()).all(|(b, &d)| b.nrows() == d)
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    /// Multiply block `k` by the `k`-th scalar of `c`.
    pub fn scale_central(&self, c: &CentralElement) -> Self {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(c.scalars())
                .map(|(b, &z)| b * z)
                .collect(),
        }
    }

    /// Operator norm (largest singular value over all blocks).
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.singular_values().max())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of the whole block-diagonal matrix.
    pub fn frobenius(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius()
    }

    pub fn trace(&self, k: usize) -> C64 {
        self.blocks[k].trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.distance(&self.adjoint()) <= tol
    }

    /// The block-diagonal matrix of size `total_dim`.
    pub fn to_dense(&self) -> CMatrix {
        let n: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let mut m = CMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            let d = b.nrows();
            m.view_mut((off, off), (d, d)).copy_from(b);
            off += d;
        }
        m
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect(),
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|a| -a).collect(),
        }
    }
}

/// An element of the center: one scalar per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CentralElement {
    scalars: Vec<C64>,
}

impl CentralElement {
    pub fn new(scalars: Vec<C64>) -> Self {
        CentralElement { scalars }
    }

    pub fn real(values: &[f64]) -> Self {
        CentralElement {
            scalars: values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn constant(k: usize, z: C64) -> Self {
        CentralElement { scalars: vec![z; k] }
    }

    pub fn ones(k: usize) -> Self {
        Self::constant(k, C64::new(1.0, 0.0))
    }

    pub fn zeros(k: usize) -> Self {
        Self::constant(k, C64::new(0.0, 0.0))
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        CentralElement {
            scalars: (0..k)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        }
    }

    pub fn scalars(&self) -> &[C64] {
        &self.scalars
    }

    pub fn len(&self) -> usize {
        self.scalars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scalars.is_empty()
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, z: C64) -> Self {
        self.map(|w| w * z)
    }

    pub fn exp(&self) -> Self {
        self.map(|z| z.exp())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        CentralElement {
            scalars: self.scalars.iter().map(|&z| f(z)).collect(),
        }
    }

    /// `max_k |c_k|`, the C*-norm.
    pub fn norm(&self) -> f64 {
        self.scalars.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_one(&self, tol: f64) -> bool {
        self.scalars.iter().all(|z| (z - 1.0).norm() <= tol)
    }

    /// Positive in the C*-sense: every scalar real and nonnegative.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.scalars.iter().all(|z| z.im.abs() <= tol && z.re >= -tol)
    }

    pub fn min_real(&self) -> f64 {
        self.scalars.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }
}

impl Add for &CentralElement {
    type Output = CentralElement;
    fn add(self, rhs: &CentralElement) -> CentralElement {
        CentralElement {
            scalars: self.scalars.iter().zip(&rhs.scalars).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CentralElement {
    type Output = CentralElement;
    fn sub(self, rhs: &CentralElement) -> CentralElement {
        CentralElement {
            scalars: self.scalars.iter().zip(&rhs.scalars).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CentralElement {
    type Output = CentralElement;
    fn mul(self, rhs: &CentralElement) -> CentralElement {
        CentralElement {
            scalars: self.scalars.iter().zip(&rhs.scalars).map(|(a, b)| a * b).collect(),
        }
    }
}

impl Neg for &CentralElement {
    type Output = CentralElement;
    fn neg(self) -> CentralElement {
        self.map(|z| -z)
    }
}

pub fn is_central(a: &AlgebraElement, tol: f64) -> bool {
    a.blocks().iter().all(|b| {
        let d = b.nrows();
        let mean = b.trace() / d as f64;
        (b - CMatrix::identity(d, d) * mean).norm() <= tol
    })
}

pub fn embed_central(c: &CentralElement, s: &BlockStructure) -> Result<AlgebraElement> {
    if c.len() != s.num_blocks() {
        return Err(Error::StructureMismatch);
    }
    Ok(AlgebraElement::identity(s).scale_central(c))
}

pub fn extract_central(a: &AlgebraElement, tol: f64) -> Result<CentralElement> {
    if !is_central(a, tol) {
        return Err(Error::NotCentral);
    }
    Ok(CentralElement::new(
        a.blocks()
            .iter()
            .map(|b| b.trace() / b.nrows() as f64)
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
enum Entries {
    Central(Vec<CentralElement>),
    General(Vec<AlgebraElement>),
}

/// An `n × n` matrix with entries in the algebra, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    n: usize,
    structure: BlockStructure,
    entries: Entries,
}

impl OperatorMatrix {
    pub fn new(s: &BlockStructure, n: usize, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.len() != n * n || entries.iter().any(|e| !e.conforms(s)) {
            return Err(Error::StructureMismatch);
        }
        Ok(OperatorMatrix {
            n,
            structure: s.clone(),
            entries: Entries::General(entries),
        })
    }

    /// A matrix whose entries are all central; positivity then splits into
    /// one `n × n` scalar problem per block.
    pub fn from_central(s: &BlockStructure, n: usize, entries: Vec<CentralElement>) -> Result<Self> {
        if entries.len() != n * n || entries.iter().any(|e| e.len() != s.num_blocks()) {
            return Err(Error::StructureMismatch);
        }
        Ok(OperatorMatrix {
            n,
            structure: s.clone(),
            entries: Entries::Central(entries),
        })
    }

    pub fn from_fn(
        s: &BlockStructure,
        n: usize,
        mut f: impl FnMut(usize, usize) -> AlgebraElement,
    ) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(s, n, entries)
    }

    pub fn identity(s: &BlockStructure, n: usize) -> Self {
        let k = s.num_blocks();
        let entries = (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    CentralElement::ones(k)
                } else {
                    CentralElement::zeros(k)
                }
            })
            .collect();
        OperatorMatrix {
            n,
            structure: s.clone(),
            entries: Entries::Central(entries),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn flat_dim(&self) -> usize {
        self.n * self.structure.total_dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> AlgebraElement {
        match &self.entries {
            Entries::Central(e) => AlgebraElement::identity(&self.structure)
                .scale_central(&e[i * self.n + j]),
            Entries::General(e) => e[i * self.n + j].clone(),
        }
    }

    pub fn central_entry(&self, i: usize, j: usize) -> Option<&CentralElement> {
        match &self.entries {
            Entries::Central(e) => Some(&e[i * self.n + j]),
            Entries::General(_) => None,
        }
    }

    pub fn is_central_valued(&self) -> bool {
        matches!(self.entries, Entries::Central(_))
    }

    /// The `n·d_k` square matrix of block `k` of every entry.
    pub fn block_slice(&self, k: usize) -> CMatrix {
        let n = self.n;
        match &self.entries {
            Entries::Central(e) => CMatrix::from_fn(n, n, |i, j| e[i * n + j].scalars()[k]),
            Entries::General(e) => {
                let d = self.structure.dim(k);
                let mut m = CMatrix::zeros(n * d, n * d);
                for i in 0..n {
                    for j in 0..n {
                        m.view_mut((i * d, j * d), (d, d))
                            .copy_from(e[i * n + j].block(k));
                    }
                }
                m
            }
        }
    }

    /// The full `(n·total_dim)²` complex matrix.
    pub fn to_dense(&self) -> CMatrix {
        let n = self.n;
        let t = self.structure.total_dim();
        let mut m = CMatrix::zeros(n * t, n * t);
        for i in 0..n {
            for j in 0..n {
                m.view_mut((i * t, j * t), (t, t))
                    .copy_from(&self.entry(i, j).to_dense());
            }
        }
        m
    }

    /// `P* M P` for an `n × m` scalar matrix `P`.
    pub fn compress(&self, p: &CMatrix) -> Result<OperatorMatrix> {
        if p.nrows() != self.n {
            return Err(Error::StructureMismatch);
        }
        let m = p.ncols();
        let s = &self.structure;
        let mut out = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let mut acc = AlgebraElement::zero(s);
                for i in 0..self.n {
                    for j in 0..self.n {
                        let w = p[(i, a)].conj() * p[(j, b)];
                        if w != C64::new(0.0, 0.0) {
                            acc = &acc + &self.entry(i, j).scale(w);
                        }
                    }
                }
                out.push(acc);
            }
        }
        OperatorMatrix::new(s, m, out)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.n != other.n || self.structure != other.structure {
            return Err(Error::StructureMismatch);
        }
        let n = self.n;
        match (&self.entries, &other.entries) {
            (Entries::Central(a), Entries::Central(b)) => Ok(OperatorMatrix {
                n,
                structure: self.structure.clone(),
                entries: Entries::Central(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            }),
            _ => OperatorMatrix::from_fn(&self.structure, n, |i, j| {
                &self.entry(i, j) - &other.entry(i, j)
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Positivity {
    pub positive: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Spectral norm of the Hermitian part.
    pub norm: f64,
    pub hermitian_deviation: f64,
    pub flat_dim: usize,
}

/// Eigenvalue bounds of the Hermitian part of a square complex matrix, and
/// the Frobenius norm of its anti-Hermitian part.
pub fn hermitian_spectrum(m: &CMatrix) -> (f64, f64, f64) {
    let adj = m.adjoint();
    let dev = (m - &adj).norm();
    let h = (m + &adj) * C64::new(0.5, 0.0);
    let ev = h.symmetric_eigenvalues();
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi, dev)
}

/// Positivity in `M_n(A)`. The flattened matrix is block diagonal after a
/// permutation, one block of size `n·d_k` per algebra block, so each is
/// decomposed separately.
pub fn is_positive(m: &OperatorMatrix, tol: f64) -> Result<Positivity> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut dev: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..m.structure.num_blocks() {
        let b = m.block_slice(k);
        scale = scale.max(b.iter().map(|z| z.norm()).fold(0.0, f64::max));
        let (l, h, d) = hermitian_spectrum(&b);
        lo = lo.min(l);
        hi = hi.max(h);
        dev = dev.max(d);
    }
    if m.n == 0 {
        lo = 0.0;
        hi = 0.0;
    }
    if dev > tol * (1.0 + scale) {
        return Err(Error::NotHermitian(dev));
    }
    let norm = lo.abs().max(hi.abs());
    Ok(Positivity {
        positive: lo >= -tol * (1.0 + norm),
        lambda_min: lo,
        lambda_max: hi,
        norm,
        hermitian_deviation: dev,
        flat_dim: m.flat_dim(),
    })
}

/// Tensor product `A₁ ⊗ A₂` with block `(i,j)` at index `i·K₂ + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorAlgebra {
    pub left: BlockStructure,
    pub right: BlockStructure,
    pub structure: BlockStructure,
}

pub fn tensor_algebra(s1: &BlockStructure, s2: &BlockStructure) -> TensorAlgebra {
    let dims = s1
        .dims()
        .iter()
        .flat_map(|&d| s2.dims().iter().map(move |&e| d * e))
        .collect();
    TensorAlgebra {
        left: s1.clone(),
        right: s2.clone(),
        structure: BlockStructure { dims },
    }
}

impl TensorAlgebra {
    pub fn block_index(&self, i: usize, j: usize) -> usize {
        i * self.right.num_blocks() + j
    }

    /// `a ⊗ b`.
    pub fn tensor(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut blocks = Vec::with_capacity(self.structure.num_blocks());
        for ai in a.blocks() {
            for bj in b.blocks() {
                blocks.push(ai.kronecker(bj));
            }
        }
        AlgebraElement { blocks }
    }

    /// `a ⊗ 1`
    pub fn embed_left(&self, a: &AlgebraElement) -> AlgebraElement {
        self.tensor(a, &AlgebraElement::identity(&self.right))
    }

    /// `1 ⊗ b`
    pub fn embed_right(&self, b: &AlgebraElement) -> AlgebraElement {
        self.tensor(&AlgebraElement::identity(&self.left), b)
    }

    pub fn central_left(&self, c: &CentralElement) -> CentralElement {
        let k2 = self.right.num_blocks();
        CentralElement::new(
            c.scalars()
                .iter()
                .flat_map(|&z| std::iter::repeat_n(z, k2))
                .collect(),
        )
    }

    pub fn central_right(&self, c: &CentralElement) -> CentralElement {
        let k1 = self.left.num_blocks();
        CentralElement::new((0..k1).flat_map(|_| c.scalars().iter().copied()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_operator_matrix_is_positive() {
        let s = BlockStructure::new(vec![2, 1]).unwrap();
        let p = is_positive(&OperatorMatrix::identity(&s, 3), DEFAULT_TOL).unwrap();
        assert!(p.positive);
        assert!((p.lambda_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_scalar_matrix() {
        let s = BlockStructure::matrix(1).unwrap();
        let entries = [1.0, 2.0, 2.0, 1.0].map(|x| CentralElement::real(&[x])).to_vec();
        let m = OperatorMatrix::from_central(&s, 2, entries).unwrap();
        let p = is_positive(&m, DEFAULT_TOL).unwrap();
        assert!(!p.positive);
        assert!((p.lambda_min + 1.0).abs() < 1e-12);
        assert!((p.lambda_max - 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let s = BlockStructure::matrix(1).unwrap();
        let entries = [1.0, 2.0, 0.0, 1.0].map(|x| CentralElement::real(&[x])).to_vec();
        let m = OperatorMatrix::from_central(&s, 2, entries).unwrap();
        assert!(matches!(is_positive(&m, DEFAULT_TOL), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn random_gram_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = BlockStructure::new(vec![2, 3]).unwrap();
        for n in 1..6 {
            let vs: Vec<AlgebraElement> =
                (0..n).map(|_| AlgebraElement::random(&s, &mut rng)).collect();
            let m = OperatorMatrix::from_fn(&s, n, |i, j| &vs[i].adjoint() * &vs[j]).unwrap();
            let p = is_positive(&m, DEFAULT_TOL).unwrap();
            assert!(p.positive, "n = {n}, lambda_min = {}", p.lambda_min);
        }
    }

    #[test]
    fn per_block_spectrum_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = BlockStructure::new(vec![1, 2, 2]).unwrap();
        let n = 3;
        let vs: Vec<AlgebraElement> = (0..n).map(|_| AlgebraElement::random(&s, &mut rng)).collect();
        let m = OperatorMatrix::from_fn(&s, n, |i, j| {
            &(&vs[i].adjoint() * &vs[j]) - &AlgebraElement::identity(&s).scale(c(0.7))
        })
        .unwrap();
        let p = is_positive(&m, DEFAULT_TOL).unwrap();
        let (lo, hi, _) = hermitian_spectrum(&m.to_dense());
        assert!((p.lambda_min - lo).abs() < 1e-10);
        assert!((p.lambda_max - hi).abs() < 1e-10);
    }

    #[test]
    fn centrality() {
        let s = BlockStructure::new(vec![1, 2]).unwrap();
        let z = embed_central(&CentralElement::real(&[2.0, -1.0]), &s).unwrap();
        assert!(is_central(&z, 1e-12));
        let e12 = AlgebraElement::matrix_unit(&s, 1, 0, 1);
        assert!(!is_central(&e12, 1e-12));
        assert_eq!(extract_central(&e12, 1e-12), Err(Error::NotCentral));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let diag = BlockStructure::diagonal(4).unwrap();
        assert!(is_central(&AlgebraElement::random(&diag, &mut rng), 1e-12));
    }

    #[test]
    fn central_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = BlockStructure::new(vec![3, 1, 2]).unwrap();
        for _ in 0..20 {
            let c = CentralElement::random(3, &mut rng);
            let back = extract_central(&embed_central(&c, &s).unwrap(), 1e-12).unwrap();
            assert!(back.distance(&c) < 1e-14);
        }
        let one = CentralElement::ones(3);
        assert_eq!(extract_central(&AlgebraElement::identity(&s), 0.0).unwrap(), one);
    }

    #[test]
    fn central_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(CentralElement::zeros(2).exp().is_one(0.0));
        for _ in 0..50 {
            let a = CentralElement::random(3, &mut rng);
            let b = CentralElement::random(3, &mut rng);
            let lhs = (&a + &b).exp();
            let rhs = &a.exp() * &b.exp();
            assert!(lhs.distance(&rhs) < 1e-12);
            let q: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..5.0)).collect();
            let t = rng.random_range(0.01..10.0);
            let h = CentralElement::real(&q).map(|z| -t * z * z).exp();
            assert!(h.norm() <= 1.0);
        }
    }

    #[test]
    fn tensor_embeddings_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s1 = BlockStructure::new(vec![2, 1]).unwrap();
        let s2 = BlockStructure::new(vec![2]).unwrap();
        let t = tensor_algebra(&s1, &s2);
        assert_eq!(t.structure.dims(), &[4, 2]);
        let m22 = tensor_algebra(&BlockStructure::matrix(2).unwrap(), &s2);
        assert_eq!(m22.structure.dims(), &[4]);
        for _ in 0..10 {
            let a = AlgebraElement::random(&s1, &mut rng);
            let b = AlgebraElement::random(&s2, &mut rng);
            let (la, rb) = (t.embed_left(&a), t.embed_right(&b));
            assert!((&la * &rb).distance(&(&rb * &la)) < 1e-12);
            let ab = t.tensor(&a, &b);
            for i in 0..2 {
                let k = t.block_index(i, 0);
                assert!((ab.trace(k) - a.trace(i) * b.trace(0)).norm() < 1e-12);
            }
            let a2 = AlgebraElement::random(&s1, &mut rng);
            let prod = t.embed_left(&(&a * &a2));
            assert!(prod.distance(&(&la * &t.embed_left(&a2))) < 1e-12);
            assert!(t.embed_left(&a.adjoint()).distance(&la.adjoint()) < 1e-12);
        }
        let one = t.embed_left(&AlgebraElement::identity(&s1));
        assert_eq!(one, AlgebraElement::identity(&t.structure));
    }

    #[test]
    fn central_tensor_embeddings_agree_with_general_ones() {
        let s1 = BlockStructure::new(vec![1, 2]).unwrap();
        let s2 = BlockStructure::new(vec![1, 1, 3]).unwrap();
        let t = tensor_algebra(&s1, &s2);
        let c1 = CentralElement::real(&[2.0, 3.0]);
        let c2 = CentralElement::real(&[5.0, 7.0, 11.0]);
        let l = embed_central(&t.central_left(&c1), &t.structure).unwrap();
        assert_eq!(l, t.embed_left(&embed_central(&c1, &s1).unwrap()));
        let r = embed_central(&t.central_right(&c2), &t.structure).unwrap();
        assert_eq!(r, t.embed_right(&embed_central(&c2, &s2).unwrap()));
    }
}
