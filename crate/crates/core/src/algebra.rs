//! Multi-matrix algebras, their elements, and positive functionals.
//!
//! An algebra `M = M_{n_1} ⊕ … ⊕ M_{n_K}` is described by its block sizes.
//! Elements are [`BlockMatrix`] values: one dense complex matrix per central
//! block. The same type doubles as a vector of `L²(M)` under the
//! Hilbert–Schmidt inner product, and (with rectangular blocks) as a row or
//! column vector of an amplified module.
//!
//! The trace on each block is the ordinary matrix trace, so minimal
//! projections have trace one.

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, HERMITIAN_RTOL, ONE, ZERO};

/// `⊕_k M_{n_k}`, given by its ordered list of block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiMatrixAlgebra {
    blocks: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: &[usize]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::validation("an algebra needs at least one block"));
        }
        if let Some(k) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::validation(format!("block {k} has size 0")));
        }
        Ok(Self {
            blocks: blocks.to_vec(),
        })
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self, k: usize) -> usize {
        self.blocks[k]
    }

    /// `Σ n_k²`, the complex dimension of the algebra and of `L²(M)`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// `Σ n_k`, the dimension of the defining representation.
    pub fn defining_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn is_factor(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `M_m(M) ≅ ⊕_k M_{m n_k}`.
    ///
    /// Row/column index `(i, a)` of the `m × m` matrix over block `k` sits at
    /// position `i · n_k + a`.
    pub fn amplification(&self, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::validation("amplification needs at least one copy"));
        }
        Self::new(&self.blocks.iter().map(|n| n * copies).collect::<Vec<_>>())
    }

    pub fn zero(&self) -> BlockMatrix {
        BlockMatrix::from_blocks(self.blocks.iter().map(|&n| CMatrix::zeros(n, n)).collect())
    }

    pub fn identity(&self) -> BlockMatrix {
        BlockMatrix::from_blocks(
            self.blocks
                .iter()
                .map(|&n| CMatrix::identity(n, n))
                .collect(),
        )
    }

    /// The matrix unit `e^{(k)}_{ij}`.
    pub fn matrix_unit(&self, k: usize, i: usize, j: usize) -> BlockMatrix {
        let mut x = self.zero();
        x.blocks[k][(i, j)] = ONE;
        x
    }

    /// All matrix units `(k, i, j)` in block-major, row-major order.
    pub fn matrix_units(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out.push((k, i, j));
                }
            }
        }
        out
    }

    pub fn contains(&self, x: &BlockMatrix) -> bool {
        x.blocks.len() == self.blocks.len()
            && x.blocks
                .iter()
                .zip(&self.blocks)
                .all(|(b, &n)| b.nrows() == n && b.ncols() == n)
    }

    pub fn check_element(&self, x: &BlockMatrix) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::mismatch(format!(
                "element with block shapes {:?} does not belong to the algebra with blocks {:?}",
                x.shapes(),
                self.blocks
            )))
        }
    }

    /// Canonical trace `Σ_k Tr(x_k)`.
    pub fn trace(&self, x: &BlockMatrix) -> Result<C64> {
        self.check_element(x)?;
        Ok(x.trace())
    }

    /// `Σ_k w_k Tr(x_k)`.
    pub fn weighted_trace(&self, x: &BlockMatrix, weights: &[f64]) -> Result<C64> {
        self.check_element(x)?;
        if weights.len() != self.blocks.len() {
            return Err(Error::validation("one trace weight per block is required"));
        }
        Ok(x.blocks
            .iter()
            .zip(weights)
            .fold(ZERO, |acc, (b, &w)| acc + b.trace() * w))
    }
}

/// A list of dense complex matrices, one per central block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    blocks: Vec<CMatrix>,
}

/// An element of a multi-matrix algebra.
pub type AlgebraElement = BlockMatrix;
/// A vector of `L²(M)` (or of an amplified row/column module).
pub type HsVector = BlockMatrix;

impl BlockMatrix {
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Self {
        Self { blocks }
    }

    pub fn zeros(shapes: &[(usize, usize)]) -> Self {
        Self::from_blocks(shapes.iter().map(|&(r, c)| CMatrix::zeros(r, c)).collect())
    }

    /// Real diagonal element, one list of diagonal entries per block.
    pub fn diagonal(diags: &[&[f64]]) -> Self {
        Self::from_blocks(
            diags
                .iter()
                .map(|d| {
                    let n = d.len();
                    CMatrix::from_fn(n, n, |i, j| if i == j { linalg::c(d[i]) } else { ZERO })
                })
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.nrows(), b.ncols())).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self::from_blocks(self.blocks.iter().map(f).collect())
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|b| b.adjoint())
    }

    /// Entrywise complex conjugate in the matrix-unit basis.
    pub fn conj(&self) -> Self {
        self.map_blocks(|b| b.conjugate())
    }

    pub fn transpose(&self) -> Self {
        self.map_blocks(|b| b.transpose())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_blocks(|b| b * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(linalg::c(s))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.blocks.len() != rhs.blocks.len()
            || self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .any(|(a, b)| a.ncols() != b.nrows())
        {
            return Err(Error::mismatch(format!(
                "cannot multiply block shapes {:?} by {:?}",
                self.shapes(),
                rhs.shapes()
            )));
        }
        Ok(Self::from_blocks(
            self.blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        ))
    }

    fn check_same_shape(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.shapes() != rhs.shapes() {
            return Err(Error::mismatch(format!(
                "cannot {op} block shapes {:?} and {:?}",
                self.shapes(),
                rhs.shapes()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "add")?;
        Ok(Self::from_blocks(
            self.blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "subtract")?;
        Ok(Self::from_blocks(
            self.blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// Hilbert–Schmidt inner product `⟨self, other⟩ = Σ_k Tr(other_k* self_k)`,
    /// linear in `self`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other, "pair")?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .fold(ZERO, |acc, (x, y)| acc + x * y.conj()))
    }

    pub fn hs_norm_sqr(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub fn hs_norm(&self) -> f64 {
        linalg::sqrt(self.hs_norm_sqr())
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn op_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::operator_norm)
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().fold(ZERO, |acc, b| acc + b.trace())
    }

    /// HS distance; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).hs_norm()
    }

    /// Coordinates in the matrix-unit basis: block-major, row-major.
    pub fn flatten(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.len());
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    out.push(b[(i, j)]);
                }
            }
        }
        out
    }

    /// Inverse of [`BlockMatrix::flatten`].
    pub fn from_flat(shapes: &[(usize, usize)], data: &[C64]) -> Result<Self> {
        let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
        if total != data.len() {
            return Err(Error::validation(format!(
                "expected {total} coordinates, got {}",
                data.len()
            )));
        }
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(shapes.len());
        for &(r, c) in shapes {
            blocks.push(CMatrix::from_fn(r, c, |i, j| data[offset + i * c + j]));
            offset += r * c;
        }
        Ok(Self::from_blocks(blocks))
    }

    pub fn is_hermitian(&self, rtol: f64) -> bool {
        let scale = self.hs_norm();
        self.blocks.iter().all(|b| b.nrows() == b.ncols())
            && self.distance(&self.adjoint()) <= rtol * scale
    }
}

impl Mul for &BlockMatrix {
    type Output = BlockMatrix;

    /// Blockwise product. Panics on incompatible shapes; use
    /// [`BlockMatrix::try_mul`] for untrusted input.
    fn mul(self, rhs: &BlockMatrix) -> BlockMatrix {
        self.try_mul(rhs).expect("block shapes must be compatible")
    }
}

impl Add for &BlockMatrix {
    type Output = BlockMatrix;

    fn add(self, rhs: &BlockMatrix) -> BlockMatrix {
        self.try_add(rhs).expect("block shapes must agree")
    }
}

impl Sub for &BlockMatrix {
    type Output = BlockMatrix;

    fn sub(self, rhs: &BlockMatrix) -> BlockMatrix {
        self.try_sub(rhs).expect("block shapes must agree")
    }
}

/// Per-block eigendecomposition of a Hermitian element.
///
/// An eigenvalue counts toward the rank iff it exceeds `rtol · λ_max`, where
/// `λ_max` is the largest eigenvalue magnitude over all blocks and `rtol` is
/// the process-wide [`linalg::rank_rtol`] at construction time. Functions of
/// the element are evaluated on those eigenvalues only and vanish on the
/// rest, which gives the pseudo-inverse convention for negative powers.
#[derive(Clone, Debug)]
pub struct SpectralData {
    eigenvalues: Vec<Vec<f64>>,
    eigenvectors: Vec<CMatrix>,
    ranks: Vec<usize>,
    threshold: f64,
}

pub fn spectral(h: &BlockMatrix) -> Result<SpectralData> {
    if h.blocks.iter().any(|b| b.nrows() != b.ncols()) {
        return Err(Error::validation(
            "spectral decomposition needs square blocks",
        ));
    }
    if !h.is_hermitian(HERMITIAN_RTOL) {
        return Err(Error::validation("element is not Hermitian"));
    }
    let (eigenvalues, eigenvectors): (Vec<_>, Vec<_>) =
        h.blocks.iter().map(linalg::hermitian_eigen).unzip();
    let scale = eigenvalues
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let threshold = linalg::rank_rtol() * scale;
    let ranks = eigenvalues
        .iter()
        .map(|vals| vals.iter().filter(|&&v| v > threshold).count())
        .collect();
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
        ranks,
        threshold,
    })
}

impl SpectralData {
    /// Nonincreasing eigenvalues, per block.
    pub fn eigenvalues(&self) -> &[Vec<f64>] {
        &self.eigenvalues
    }

    /// Unitary eigenvector matrices (columns), per block.
    pub fn eigenvectors(&self) -> &[CMatrix] {
        &self.eigenvectors
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `U diag(λ) U*`.
    pub fn reassemble(&self) -> BlockMatrix {
        self.apply_all(|v| v)
    }

    fn apply_all(&self, f: impl Fn(f64) -> f64) -> BlockMatrix {
        BlockMatrix::from_blocks(
            self.eigenvalues
                .iter()
                .zip(&self.eigenvectors)
                .map(|(vals, vecs)| {
                    let mapped: Vec<f64> = vals.iter().map(|&v| f(v)).collect();
                    linalg::reassemble(&mapped, vecs)
                })
                .collect(),
        )
    }

    /// `f(h)` with `f` applied on the support and zero elsewhere.
    pub fn on_support(&self, f: impl Fn(f64) -> f64) -> BlockMatrix {
        let t = self.threshold;
        self.apply_all(|v| if v > t { f(v) } else { 0.0 })
    }

    /// `h^t` on the support (pseudo-inverse for negative `t`).
    pub fn power(&self, t: f64) -> BlockMatrix {
        self.on_support(|v| libm::pow(v, t))
    }

    pub fn sqrt(&self) -> BlockMatrix {
        self.on_support(linalg::sqrt)
    }

    pub fn inverse_sqrt(&self) -> BlockMatrix {
        self.on_support(|v| 1.0 / linalg::sqrt(v))
    }

    pub fn pseudo_inverse(&self) -> BlockMatrix {
        self.on_support(|v| 1.0 / v)
    }

    /// Orthogonal projection onto the range.
    pub fn support(&self) -> BlockMatrix {
        self.on_support(|_| 1.0)
    }
}

/// A positive functional `φ(x) = Σ_k Tr(h_k x_k)` given by its density `h`.
#[derive(Clone, Debug)]
pub struct PositiveFunctional {
    algebra: MultiMatrixAlgebra,
    density: BlockMatrix,
    spectral: SpectralData,
    support: BlockMatrix,
    sqrt_density: BlockMatrix,
    inverse_sqrt_density: BlockMatrix,
    faithful: bool,
}

/// Build `φ = Tr(h ·)`.
///
/// Eigenvalues of `h` in `[−tol, 0)` are clamped to zero; anything more
/// negative, or a non-Hermitian `h`, is rejected with [`Error::NotPositive`].
pub fn functional_from_density(
    algebra: &MultiMatrixAlgebra,
    h: BlockMatrix,
) -> Result<PositiveFunctional> {
    algebra.check_element(&h)?;
    if !h.is_hermitian(HERMITIAN_RTOL) {
        return Err(Error::NotPositive("density is not Hermitian".into()));
    }
    let spectral = spectral(&h)?;
    let scale = spectral
        .eigenvalues
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let min = spectral.min_eigenvalue();
    let tol = linalg::rank_rtol() * scale;
    if min < -tol {
        return Err(Error::NotPositive(format!("density has eigenvalue {min}")));
    }
    let density = if min < 0.0 {
        spectral.apply_all(|v| v.max(0.0))
    } else {
        h
    };
    let support = spectral.support();
    let sqrt_density = spectral.sqrt();
    let inverse_sqrt_density = spectral.inverse_sqrt();
    let faithful = spectral
        .ranks
        .iter()
        .zip(algebra.blocks())
        .all(|(r, n)| r == n);
    Ok(PositiveFunctional {
        algebra: algebra.clone(),
        density,
        spectral,
        support,
        sqrt_density,
        inverse_sqrt_density,
        faithful,
    })
}

impl PositiveFunctional {
    /// The canonical trace `Tr`, density `1`.
    pub fn trace(algebra: &MultiMatrixAlgebra) -> Self {
        functional_from_density(algebra, algebra.identity()).expect("identity is a valid density")
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn density(&self) -> &BlockMatrix {
        &self.density
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    /// Support projection `s(φ)`.
    pub fn support(&self) -> &BlockMatrix {
        &self.support
    }

    pub fn support_ranks(&self) -> &[usize] {
        &self.spectral.ranks
    }

    /// `φ^{1/2} = h^{1/2}`, the GNS cyclic vector.
    pub fn sqrt_density(&self) -> &BlockMatrix {
        &self.sqrt_density
    }

    /// `h^{-1/2}` on the support, zero on the kernel.
    pub fn inverse_sqrt_density(&self) -> &BlockMatrix {
        &self.inverse_sqrt_density
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn eval(&self, x: &BlockMatrix) -> Result<C64> {
        self.algebra.check_element(x)?;
        Ok((&self.density * x).trace())
    }

    /// `φ(y* x)`.
    pub fn sesquilinear(&self, x: &BlockMatrix, y: &BlockMatrix) -> Result<C64> {
        self.eval(&(&y.adjoint() * x))
    }
}
