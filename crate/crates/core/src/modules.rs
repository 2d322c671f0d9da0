//! Module classification by multiplicity vectors.
//!
//! Every normal nondegenerate representation of `M = ⊕_k M_{n_k}` is a
//! direct sum of copies of the irreducibles `C^{n_k}`; the multiplicity
//! vector is a complete isomorphism invariant, and direct sum adds
//! multiplicities. [`ModuleClass`] is the symbolic side (multiplicities may
//! be infinite), [`ConcreteModule`] realizes a finite class as a row module
//! `R²(M)q` or column module `p C²(M)` truncated to finitely many copies, and
//! [`Representation`] holds an arbitrary representation by the images of all
//! matrix units.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};
use core::str::FromStr;

use crate::algebra::{BlockMatrix, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ONE, SPAN_RTOL};

/// Absolute tolerance used when checking matrix-unit relations and
/// projection identities.
pub const RELATION_TOL: f64 = 1e-9;

/// A nonnegative integer or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedNat {
    Finite(u64),
    Infinite,
}

impl ExtendedNat {
    pub const ZERO: Self = ExtendedNat::Finite(0);

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedNat::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Finite(n) => Some(n),
            ExtendedNat::Infinite => None,
        }
    }

    /// Multiplication by a finite count, with `0 · ∞ = 0`.
    pub fn scale(self, by: u64) -> Self {
        match self {
            _ if by == 0 => ExtendedNat::ZERO,
            ExtendedNat::Finite(n) => ExtendedNat::Finite(n.saturating_mul(by)),
            ExtendedNat::Infinite => ExtendedNat::Infinite,
        }
    }
}

impl Mul for ExtendedNat {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        match (self, other) {
            (ExtendedNat::Finite(0), _) | (_, ExtendedNat::Finite(0)) => ExtendedNat::ZERO,
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => {
                ExtendedNat::Finite(a.saturating_mul(b))
            }
            _ => ExtendedNat::Infinite,
        }
    }
}

impl Add for ExtendedNat {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => {
                ExtendedNat::Finite(a.saturating_add(b))
            }
            _ => ExtendedNat::Infinite,
        }
    }
}

impl From<u64> for ExtendedNat {
    fn from(n: u64) -> Self {
        ExtendedNat::Finite(n)
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(n) => write!(f, "{n}"),
            ExtendedNat::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(ExtendedNat::Infinite),
            t => t
                .parse::<u64>()
                .map(ExtendedNat::Finite)
                .map_err(|_| Error::validation(format!("not an extended natural: {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Isomorphism class of a left or right module: one extended natural per
/// central block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleClass {
    algebra: MultiMatrixAlgebra,
    side: Side,
    multiplicities: Vec<ExtendedNat>,
}

impl ModuleClass {
    pub fn new(
        algebra: &MultiMatrixAlgebra,
        side: Side,
        multiplicities: Vec<ExtendedNat>,
    ) -> Result<Self> {
        if multiplicities.len() != algebra.num_blocks() {
            return Err(Error::validation(format!(
                "{} multiplicities given for an algebra with {} blocks",
                multiplicities.len(),
                algebra.num_blocks()
            )));
        }
        Ok(Self {
            algebra: algebra.clone(),
            side,
            multiplicities,
        })
    }

    pub fn finite(
        algebra: &MultiMatrixAlgebra,
        side: Side,
        multiplicities: &[u64],
    ) -> Result<Self> {
        Self::new(
            algebra,
            side,
            multiplicities.iter().map(|&m| m.into()).collect(),
        )
    }

    pub fn zero(algebra: &MultiMatrixAlgebra, side: Side) -> Self {
        Self::new(algebra, side, vec![ExtendedNat::ZERO; algebra.num_blocks()])
            .expect("length matches")
    }

    /// The absorbing class `R²(M)`: infinite multiplicity in every block.
    pub fn infinite(algebra: &MultiMatrixAlgebra, side: Side) -> Self {
        Self::new(
            algebra,
            side,
            vec![ExtendedNat::Infinite; algebra.num_blocks()],
        )
        .expect("length matches")
    }

    /// `L²(M)`: multiplicity `n_k` in block `k`.
    pub fn standard(algebra: &MultiMatrixAlgebra, side: Side) -> Self {
        Self::new(
            algebra,
            side,
            algebra
                .blocks()
                .iter()
                .map(|&n| ExtendedNat::Finite(n as u64))
                .collect(),
        )
        .expect("length matches")
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn multiplicities(&self) -> &[ExtendedNat] {
        &self.multiplicities
    }

    pub fn finite_multiplicities(&self) -> Result<Vec<usize>> {
        self.multiplicities
            .iter()
            .map(|m| {
                m.finite().map(|v| v as usize).ok_or_else(|| {
                    Error::Unsupported("infinite multiplicity has no concrete realization".into())
                })
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == ExtendedNat::ZERO)
    }

    /// Single block with multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        let nonzero: Vec<_> = self
            .multiplicities
            .iter()
            .filter(|&&m| m != ExtendedNat::ZERO)
            .collect();
        nonzero.len() == 1 && *nonzero[0] == ExtendedNat::Finite(1)
    }

    /// Hilbert-space dimension `Σ n_k m_k`.
    pub fn dimension(&self) -> ExtendedNat {
        self.multiplicities
            .iter()
            .zip(self.algebra.blocks())
            .fold(ExtendedNat::ZERO, |acc, (&m, &n)| acc + m.scale(n as u64))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::mismatch("module classes over different algebras"));
        }
        if self.side != other.side {
            return Err(Error::mismatch(
                "cannot combine a left and a right module class",
            ));
        }
        Ok(())
    }
}

/// Direct sum of isomorphism classes.
pub fn monoid_add(a: &ModuleClass, b: &ModuleClass) -> Result<ModuleClass> {
    a.check_compatible(b)?;
    ModuleClass::new(
        &a.algebra,
        a.side,
        a.multiplicities
            .iter()
            .zip(&b.multiplicities)
            .map(|(&x, &y)| x + y)
            .collect(),
    )
}

/// Complex dimension of the intertwiner space, `Σ_k m_k m'_k`.
pub fn hom_dimension(a: &ModuleClass, b: &ModuleClass) -> Result<ExtendedNat> {
    a.check_compatible(b)?;
    Ok(a.multiplicities
        .iter()
        .zip(&b.multiplicities)
        .fold(ExtendedNat::ZERO, |acc, (&x, &y)| acc + x * y))
}

/// A representation of `M` on `C^d`, given by the images of all matrix units.
#[derive(Clone, Debug)]
pub struct Representation {
    algebra: MultiMatrixAlgebra,
    dim: usize,
    // images[k][i * n_k + j] = π(e^{(k)}_{ij})
    images: Vec<Vec<CMatrix>>,
}

impl Representation {
    /// Validates shapes, `π(e_ij) π(e_pq) = δ_jp π(e_iq)` (and zero across
    /// blocks), `π(e_ij)* = π(e_ji)`, and `Σ π(e_ii) = 1`.
    pub fn new(
        algebra: &MultiMatrixAlgebra,
        dim: usize,
        images: Vec<Vec<CMatrix>>,
    ) -> Result<Self> {
        if images.len() != algebra.num_blocks() {
            return Err(Error::NotARepresentation(format!(
                "expected images for {} blocks, got {}",
                algebra.num_blocks(),
                images.len()
            )));
        }
        for (k, (imgs, &n)) in images.iter().zip(algebra.blocks()).enumerate() {
            if imgs.len() != n * n {
                return Err(Error::NotARepresentation(format!(
                    "block {k} needs {} matrix-unit images, got {}",
                    n * n,
                    imgs.len()
                )));
            }
            if imgs.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
                return Err(Error::NotARepresentation(format!(
                    "block {k} has an image that is not {dim}×{dim}"
                )));
            }
        }
        let rep = Self {
            algebra: algebra.clone(),
            dim,
            images,
        };
        let residual = rep.relation_residual();
        if residual > RELATION_TOL * (1.0 + linalg::sqrt(dim as f64)) {
            return Err(Error::NotARepresentation(format!(
                "matrix-unit relations violated (residual {residual:e})"
            )));
        }
        Ok(rep)
    }

    /// `⊕_k ⊕_{t < m_k} C^{n_k}` with basis ordered by `(k, t, i)`.
    pub fn canonical(algebra: &MultiMatrixAlgebra, multiplicities: &[usize]) -> Result<Self> {
        if multiplicities.len() != algebra.num_blocks() {
            return Err(Error::validation("one multiplicity per block is required"));
        }
        let dim: usize = multiplicities
            .iter()
            .zip(algebra.blocks())
            .map(|(m, n)| m * n)
            .sum();
        let mut images = Vec::with_capacity(algebra.num_blocks());
        let mut offset = 0;
        for (&n, &m) in algebra.blocks().iter().zip(multiplicities) {
            let mut imgs = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut e = CMatrix::zeros(dim, dim);
                    for t in 0..m {
                        e[(offset + t * n + i, offset + t * n + j)] = ONE;
                    }
                    imgs.push(e);
                }
            }
            images.push(imgs);
            offset += n * m;
        }
        Ok(Self {
            algebra: algebra.clone(),
            dim,
            images,
        })
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, k: usize, i: usize, j: usize) -> &CMatrix {
        &self.images[k][i * self.algebra.block_size(k) + j]
    }

    pub fn images(&self) -> &[Vec<CMatrix>] {
        &self.images
    }

    /// Every matrix-unit image, block-major, row-major.
    pub fn all_images(&self) -> Vec<CMatrix> {
        self.images.iter().flatten().cloned().collect()
    }

    /// `π(x) = Σ x^{(k)}_{ij} π(e^{(k)}_{ij})`.
    pub fn apply(&self, x: &BlockMatrix) -> Result<CMatrix> {
        self.algebra.check_element(x)?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (k, i, j) in self.algebra.matrix_units() {
            let coeff = x.block(k)[(i, j)];
            if coeff != linalg::ZERO {
                out += self.image(k, i, j) * coeff;
            }
        }
        Ok(out)
    }

    /// `x ↦ U π(x) U*` for a unitary `U`.
    pub fn conjugated_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(Error::mismatch("unitary has the wrong size"));
        }
        let images = self
            .images
            .iter()
            .map(|imgs| imgs.iter().map(|e| u * e * u.adjoint()).collect())
            .collect();
        Self::new(&self.algebra, self.dim, images)
    }

    /// Largest Frobenius violation of the matrix-unit relations.
    pub fn relation_residual(&self) -> f64 {
        let units = self.algebra.matrix_units();
        let mut worst: f64 = 0.0;
        let mut sum_diag = CMatrix::zeros(self.dim, self.dim);
        for &(k, i, j) in &units {
            let a = self.image(k, i, j);
            worst = worst.max(linalg::frobenius(&(a.adjoint() - self.image(k, j, i))));
            if i == j {
                sum_diag += a;
            }
            for &(l, p, q) in &units {
                let prod = a * self.image(l, p, q);
                let r = if k == l && j == p {
                    linalg::frobenius(&(prod - self.image(k, i, q)))
                } else {
                    linalg::frobenius(&prod)
                };
                worst = worst.max(r);
            }
        }
        worst.max(linalg::frobenius(
            &(sum_diag - CMatrix::identity(self.dim, self.dim)),
        ))
    }
}

/// Output of [`decompose`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub class: ModuleClass,
    /// Unitary `W` with `W* π(x) W = π_canonical(x)`.
    pub intertwiner: CMatrix,
    /// Largest deviation of `W* π(e_ij) W` from the canonical images, and of
    /// `W* W` from the identity.
    pub residual: f64,
}

/// Multiplicities and a canonical-form intertwiner for a representation.
///
/// `m_k = rank π(e^{(k)}_{11})`. With `{v_t}` an orthonormal basis of the
/// range of `π(e^{(k)}_{11})`, chosen by pivoted Gram–Schmidt over its
/// columns, the columns `π(e^{(k)}_{i1}) v_t` ordered by `(k, t, i)` form the
/// unitary.
pub fn decompose(rep: &Representation) -> Result<Decomposition> {
    let algebra = &rep.algebra;
    let d = rep.dim;
    let mut multiplicities = Vec::with_capacity(algebra.num_blocks());
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(d);
    for (k, &n) in algebra.blocks().iter().enumerate() {
        let p = rep.image(k, 0, 0);
        let range = linalg::span_basis((0..d).map(|j| linalg::column(p, j)).collect(), SPAN_RTOL);
        multiplicities.push(range.len() as u64);
        for v in &range {
            let v = nalgebra::DVector::from_column_slice(v);
            for i in 0..n {
                columns.push((rep.image(k, i, 0) * &v).iter().copied().collect());
            }
        }
    }
    if columns.len() != d {
        return Err(Error::NotARepresentation(format!(
            "multiplicities account for dimension {}, representation has {d}",
            columns.len()
        )));
    }
    let w = linalg::from_columns(d, &columns);
    let counts: Vec<usize> = multiplicities.iter().map(|&m| m as usize).collect();
    let canonical = Representation::canonical(algebra, &counts)?;
    let mut residual = linalg::frobenius(&(w.adjoint() * &w - CMatrix::identity(d, d)));
    for (k, i, j) in algebra.matrix_units() {
        let got = w.adjoint() * rep.image(k, i, j) * &w;
        residual = residual.max(linalg::frobenius(&(got - canonical.image(k, i, j))));
    }
    Ok(Decomposition {
        class: ModuleClass::finite(algebra, Side::Left, &multiplicities)?,
        intertwiner: w,
        residual,
    })
}

/// Numerical `dim Hom(π_a, π_b)`: solves `T π_a(e) = π_b(e) T` over all
/// matrix units `e`.
pub fn intertwiner_dimension(a: &Representation, b: &Representation) -> Result<usize> {
    if a.algebra != b.algebra {
        return Err(Error::mismatch("representations of different algebras"));
    }
    Ok(linalg::intertwiner_dimension(
        &a.all_images(),
        &b.all_images(),
        1e-9,
    ))
}

/// A module realized inside finitely many copies of the standard form.
///
/// * Left modules are `R²(M)q`: vectors are rows `(ξ_1 … ξ_m)`, stored per
///   block as an `n_k × m n_k` matrix, with `ξ = ξ q`.
/// * Right modules are `p C²(M)`: columns stored per block as `m n_k × n_k`
///   matrices, with `ξ = p ξ`.
///
/// The projection lives in the amplification `M_m(M) ≅ ⊕_k M_{m n_k}`.
#[derive(Clone, Debug)]
pub struct ConcreteModule {
    algebra: MultiMatrixAlgebra,
    side: Side,
    copies: usize,
    projection: BlockMatrix,
    multiplicities: Vec<usize>,
}

impl ConcreteModule {
    pub fn new(
        algebra: &MultiMatrixAlgebra,
        side: Side,
        copies: usize,
        projection: BlockMatrix,
    ) -> Result<Self> {
        let amp = algebra.amplification(copies)?;
        amp.check_element(&projection)?;
        let scale = 1.0 + projection.hs_norm();
        if projection.distance(&projection.adjoint()) > RELATION_TOL * scale
            || projection.distance(&(&projection * &projection)) > RELATION_TOL * scale
        {
            return Err(Error::validation(
                "module projection is not a Hermitian idempotent",
            ));
        }
        // trace of a projection is its rank
        let multiplicities = projection
            .blocks()
            .iter()
            .map(|b| libm::round(b.trace().re).max(0.0) as usize)
            .collect();
        Ok(Self {
            algebra: algebra.clone(),
            side,
            copies,
            projection,
            multiplicities,
        })
    }

    pub fn row(algebra: &MultiMatrixAlgebra, copies: usize, q: BlockMatrix) -> Result<Self> {
        Self::new(algebra, Side::Left, copies, q)
    }

    pub fn column(algebra: &MultiMatrixAlgebra, copies: usize, p: BlockMatrix) -> Result<Self> {
        Self::new(algebra, Side::Right, copies, p)
    }

    /// Diagonal realization of a finite class with the fewest copies that
    /// fit: `m = max(1, max_k ⌈m_k / n_k⌉)`.
    pub fn canonical(class: &ModuleClass) -> Result<Self> {
        let mults = class.finite_multiplicities()?;
        let algebra = class.algebra();
        let copies = mults
            .iter()
            .zip(algebra.blocks())
            .map(|(&m, &n)| m.div_ceil(n))
            .max()
            .unwrap_or(0)
            .max(1);
        let diags: Vec<Vec<f64>> = mults
            .iter()
            .zip(algebra.blocks())
            .map(|(&m, &n)| {
                (0..copies * n)
                    .map(|i| if i < m { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let refs: Vec<&[f64]> = diags.iter().map(|d| d.as_slice()).collect();
        Self::new(algebra, class.side(), copies, BlockMatrix::diagonal(&refs))
    }

    /// `L²(M)` itself as a left or right module.
    pub fn standard(algebra: &MultiMatrixAlgebra, side: Side) -> Self {
        Self::new(algebra, side, 1, algebra.identity()).expect("identity is a projection")
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn projection(&self) -> &BlockMatrix {
        &self.projection
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn class(&self) -> ModuleClass {
        ModuleClass::new(
            &self.algebra,
            self.side,
            self.multiplicities
                .iter()
                .map(|&m| ExtendedNat::Finite(m as u64))
                .collect(),
        )
        .expect("length matches")
    }

    pub fn dimension(&self) -> usize {
        self.multiplicities
            .iter()
            .zip(self.algebra.blocks())
            .map(|(m, n)| m * n)
            .sum()
    }

    /// Shapes of the per-block matrices holding one vector.
    pub fn vector_shapes(&self) -> Vec<(usize, usize)> {
        self.algebra
            .blocks()
            .iter()
            .map(|&n| match self.side {
                Side::Left => (n, self.copies * n),
                Side::Right => (self.copies * n, n),
            })
            .collect()
    }

    /// Orthogonal projection of an ambient vector onto the module.
    pub fn project(&self, v: &BlockMatrix) -> Result<BlockMatrix> {
        match self.side {
            Side::Left => v.try_mul(&self.projection),
            Side::Right => self.projection.try_mul(v),
        }
    }

    pub fn contains(&self, v: &BlockMatrix) -> bool {
        v.shapes() == self.vector_shapes()
            && self
                .project(v)
                .map(|w| w.distance(v) <= RELATION_TOL * (1.0 + v.hs_norm()))
                .unwrap_or(false)
    }

    /// The module action: `a ξ` on left modules, `ξ a` on right modules.
    pub fn act(&self, a: &BlockMatrix, v: &BlockMatrix) -> Result<BlockMatrix> {
        self.algebra.check_element(a)?;
        match self.side {
            Side::Left => a.try_mul(v),
            Side::Right => v.try_mul(a),
        }
    }

    /// Action of the commutant: `ξ ↦ ξ (q x q)` on `R²(M)q` and
    /// `ξ ↦ (p x p) ξ` on `p C²(M)`, for `x ∈ M_m(M)`.
    pub fn commutant_act(&self, x: &BlockMatrix, v: &BlockMatrix) -> Result<BlockMatrix> {
        let cut = &(&self.projection * x) * &self.projection;
        match self.side {
            Side::Left => v.try_mul(&cut),
            Side::Right => cut.try_mul(v),
        }
    }

    /// Projected matrix units of the ambient row/column space, in order.
    pub fn spanning_set(&self) -> Vec<BlockMatrix> {
        let shapes = self.vector_shapes();
        let mut out = Vec::new();
        for (k, &(r, c)) in shapes.iter().enumerate() {
            for i in 0..r {
                for j in 0..c {
                    let mut blocks = BlockMatrix::zeros(&shapes).into_blocks();
                    blocks[k][(i, j)] = ONE;
                    let unit = BlockMatrix::from_blocks(blocks);
                    out.push(self.project(&unit).expect("shapes match"));
                }
            }
        }
        out
    }

    /// Deterministic orthonormal basis of the module.
    pub fn basis(&self) -> Vec<BlockMatrix> {
        let shapes = self.vector_shapes();
        let cands = self.spanning_set().iter().map(|v| v.flatten()).collect();
        linalg::span_basis(cands, SPAN_RTOL)
            .iter()
            .map(|v| BlockMatrix::from_flat(&shapes, v).expect("shapes match"))
            .collect()
    }

    /// The module as a [`Representation`] in its orthonormal basis.
    ///
    /// Right modules are representations of the opposite algebra; they are
    /// turned into representations of `M` through the transpose
    /// `e_ij ↦ e_ji`, i.e. `π(e_ij) ξ = ξ e_ji`.
    pub fn representation(&self) -> Representation {
        let basis = self.basis();
        let d = basis.len();
        let mut images = Vec::with_capacity(self.algebra.num_blocks());
        for (k, &n) in self.algebra.blocks().iter().enumerate() {
            let mut imgs = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let unit = match self.side {
                        Side::Left => self.algebra.matrix_unit(k, i, j),
                        Side::Right => self.algebra.matrix_unit(k, j, i),
                    };
                    let moved: Vec<BlockMatrix> = basis
                        .iter()
                        .map(|b| self.act(&unit, b).expect("shapes match"))
                        .collect();
                    imgs.push(CMatrix::from_fn(d, d, |s, t| {
                        moved[t].hs_inner(&basis[s]).expect("shapes match")
                    }));
                }
            }
            images.push(imgs);
        }
        Representation {
            algebra: self.algebra.clone(),
            dim: d,
            images,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(blocks: &[usize]) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::new(blocks).unwrap()
    }

    #[test]
    fn extended_nat_arithmetic() {
        let two = ExtendedNat::Finite(2);
        assert_eq!(two + ExtendedNat::Infinite, ExtendedNat::Infinite);
        assert_eq!(two + ExtendedNat::Finite(3), ExtendedNat::Finite(5));
        assert_eq!(ExtendedNat::Infinite.scale(0), ExtendedNat::ZERO);
        assert_eq!("inf".parse::<ExtendedNat>().unwrap(), ExtendedNat::Infinite);
        assert_eq!("7".parse::<ExtendedNat>().unwrap(), ExtendedNat::Finite(7));
        assert!("x".parse::<ExtendedNat>().is_err());
        assert_eq!(alloc::format!("{}", ExtendedNat::Infinite), "inf");
    }

    #[test]
    fn defining_representation_of_two_block_algebra() {
        let a = alg(&[2, 3]);
        let rep = Representation::canonical(&a, &[1, 1]).unwrap();
        assert_eq!(rep.dim(), 5);
        let dec = decompose(&rep).unwrap();
        assert_eq!(dec.class.multiplicities(), &[1u64.into(), 1u64.into()]);
        assert!(dec.residual < 1e-12);
    }

    #[test]
    fn two_copies_of_c3() {
        let a = alg(&[3]);
        let rep = Representation::canonical(&a, &[2]).unwrap();
        assert_eq!(rep.dim(), 6);
        assert_eq!(
            decompose(&rep).unwrap().class.multiplicities(),
            &[2u64.into()]
        );
    }

    #[test]
    fn conjugated_representation_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = alg(&[2, 3]);
        let base = Representation::canonical(&a, &[2, 1]).unwrap();
        let u = random::unitary(&mut rng, 7);
        let rep = base.conjugated_by(&u).unwrap();
        let dec = decompose(&rep).unwrap();
        assert_eq!(dec.class.multiplicities(), &[2u64.into(), 1u64.into()]);
        assert!(dec.residual <= 1e-9);
        // conjugating back reproduces the input
        let back = base.conjugated_by(&dec.intertwiner).unwrap();
        for (x, y) in back.all_images().iter().zip(rep.all_images()) {
            assert!(linalg::frobenius(&(x - y)) <= 1e-9);
        }
    }

    #[test]
    fn broken_relations_are_rejected() {
        let a = alg(&[2]);
        let rep = Representation::canonical(&a, &[1]).unwrap();
        let mut images = rep.images().to_vec();
        images[0][1] = images[0][1].clone() * C64::new(2.0, 0.0);
        assert!(matches!(
            Representation::new(&a, 2, images),
            Err(Error::NotARepresentation(_))
        ));
        let degenerate = vec![vec![CMatrix::zeros(2, 2); 4]];
        assert!(matches!(
            Representation::new(&a, 2, degenerate),
            Err(Error::NotARepresentation(_))
        ));
        assert!(Representation::new(&a, 2, vec![]).is_err());
    }

    #[test]
    fn hom_dimension_examples() {
        let m3 = alg(&[3]);
        let l2 = ModuleClass::standard(&m3, Side::Left);
        assert_eq!(hom_dimension(&l2, &l2).unwrap(), ExtendedNat::Finite(9));
        let a = alg(&[2, 3]);
        let x = ModuleClass::finite(&a, Side::Left, &[1, 2]).unwrap();
        let y = ModuleClass::finite(&a, Side::Left, &[2, 1]).unwrap();
        assert_eq!(hom_dimension(&x, &y).unwrap(), ExtendedNat::Finite(4));
        let zero = ModuleClass::zero(&a, Side::Left);
        assert_eq!(hom_dimension(&zero, &y).unwrap(), ExtendedNat::ZERO);
    }

    #[test]
    fn hom_dimension_matches_linear_system_oracle() {
        let a = alg(&[2, 3]);
        let ra = Representation::canonical(&a, &[1, 2]).unwrap();
        let rb = Representation::canonical(&a, &[2, 1]).unwrap();
        assert_eq!(intertwiner_dimension(&ra, &rb).unwrap(), 4);
    }

    #[test]
    fn hom_dimension_rejects_mismatch() {
        let a = ModuleClass::finite(&alg(&[2]), Side::Left, &[1]).unwrap();
        let b = ModuleClass::finite(&alg(&[3]), Side::Left, &[1]).unwrap();
        let c = ModuleClass::finite(&alg(&[2]), Side::Right, &[1]).unwrap();
        assert!(matches!(hom_dimension(&a, &b), Err(Error::Mismatch(_))));
        assert!(matches!(monoid_add(&a, &c), Err(Error::Mismatch(_))));
    }

    #[test]
    fn monoid_examples() {
        let a = alg(&[1, 1]);
        let x = ModuleClass::finite(&a, Side::Left, &[1, 0]).unwrap();
        let y = ModuleClass::finite(&a, Side::Left, &[0, 1]).unwrap();
        assert_eq!(
            monoid_add(&x, &y).unwrap(),
            ModuleClass::finite(&a, Side::Left, &[1, 1]).unwrap()
        );
        let m = alg(&[3]);
        let two = ModuleClass::finite(&m, Side::Left, &[2]).unwrap();
        let inf = ModuleClass::infinite(&m, Side::Left);
        assert_eq!(monoid_add(&two, &inf).unwrap(), inf);
        assert_eq!(
            monoid_add(&two, &ModuleClass::zero(&m, Side::Left)).unwrap(),
            two
        );
    }

    #[test]
    fn irreducibility() {
        let a = alg(&[2, 3]);
        assert!(ModuleClass::finite(&a, Side::Left, &[0, 1])
            .unwrap()
            .is_irreducible());
        assert!(!ModuleClass::finite(&a, Side::Left, &[1, 1])
            .unwrap()
            .is_irreducible());
        assert!(!ModuleClass::zero(&a, Side::Left).is_irreducible());
    }

    #[test]
    fn infinite_class_has_no_concrete_module() {
        let inf = ModuleClass::infinite(&alg(&[2]), Side::Left);
        assert!(matches!(
            ConcreteModule::canonical(&inf),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn concrete_module_representation_decomposes_to_its_class() {
        let a = alg(&[2, 3]);
        for side in [Side::Left, Side::Right] {
            let class = ModuleClass::finite(&a, side, &[3, 1]).unwrap();
            let module = ConcreteModule::canonical(&class).unwrap();
            assert_eq!(module.copies(), 2);
            assert_eq!(module.dimension(), 9);
            assert_eq!(module.basis().len(), 9);
            let dec = decompose(&module.representation()).unwrap();
            assert_eq!(dec.class.multiplicities(), class.multiplicities());
        }
    }

    #[test]
    fn commutant_action_commutes_with_module_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = alg(&[2]);
        for side in [Side::Left, Side::Right] {
            let module =
                ConcreteModule::canonical(&ModuleClass::finite(&a, side, &[3]).unwrap()).unwrap();
            let amp = a.amplification(module.copies()).unwrap();
            let x = random::element(&mut rng, &amp);
            let m = random::element(&mut rng, &a);
            let v = module
                .project(&random::block_matrix(&mut rng, &module.vector_shapes()))
                .unwrap();
            let lhs = module
                .act(&m, &module.commutant_act(&x, &v).unwrap())
                .unwrap();
            let rhs = module
                .commutant_act(&x, &module.act(&m, &v).unwrap())
                .unwrap();
            assert!(lhs.distance(&rhs) < 1e-12);
        }
    }

    #[test]
    fn non_projection_rejected() {
        let a = alg(&[2]);
        let q = BlockMatrix::diagonal(&[&[1.0, 0.5]]);
        assert!(matches!(
            ConcreteModule::row(&a, 1, q),
            Err(Error::Validation(_))
        ));
    }
}
