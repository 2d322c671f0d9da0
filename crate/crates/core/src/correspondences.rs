//! Bimodules through their multiplicity matrices.
//!
//! An `M`–`N` bimodule over multi-matrix algebras is a direct sum of the
//! irreducibles `C^{n_k} ⊗ C^{m_l}`; the `K × L` matrix of multiplicities is
//! its full invariant. Relative tensor product becomes matrix product,
//! the contragredient becomes transpose, and the induced map on module
//! classes is `q ↦ c q`.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{BlockMatrix, MultiMatrixAlgebra, PositiveFunctional};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::modules::{ConcreteModule, ExtendedNat, ModuleClass, Representation, Side};
use crate::rtp::rtp_module;

/// Nonnegative integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::validation(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::validation("ragged matrix rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = alloc::vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                data.push((0..self.cols).map(|l| self.get(i, l) * rhs.get(l, j)).sum());
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// `c v` over the extended naturals.
    pub fn apply(&self, v: &[ExtendedNat]) -> Result<Vec<ExtendedNat>> {
        if v.len() != self.cols {
            return Err(Error::mismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ExtendedNat::ZERO, |acc, (&c, &m)| acc + m.scale(c))
            })
            .collect())
    }

    /// Same matrix with rows and columns relabeled: entry `(i, j)` of the
    /// result is `self[(row_perm[i], col_perm[j])]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for &i in row_perm {
            for &j in col_perm {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(
            self.rows,
            self.cols,
            |i, j| linalg::c(self.get(i, j) as f64),
        )
    }
}

/// Class of an `M`–`N` bimodule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BimoduleMatrix {
    left: MultiMatrixAlgebra,
    right: MultiMatrixAlgebra,
    matrix: IntMatrix,
}

impl BimoduleMatrix {
    pub fn new(
        left: &MultiMatrixAlgebra,
        right: &MultiMatrixAlgebra,
        matrix: IntMatrix,
    ) -> Result<Self> {
        if matrix.rows() != left.num_blocks() || matrix.cols() != right.num_blocks() {
            return Err(Error::validation(format!(
                "multiplicity matrix is {}x{} but the algebras have {} and {} blocks",
                matrix.rows(),
                matrix.cols(),
                left.num_blocks(),
                right.num_blocks()
            )));
        }
        Ok(Self {
            left: left.clone(),
            right: right.clone(),
            matrix,
        })
    }

    /// `L²(M)` as an `M`–`M` bimodule.
    pub fn identity(algebra: &MultiMatrixAlgebra) -> Self {
        Self {
            left: algebra.clone(),
            right: algebra.clone(),
            matrix: IntMatrix::identity(algebra.num_blocks()),
        }
    }

    pub fn left(&self) -> &MultiMatrixAlgebra {
        &self.left
    }

    pub fn right(&self) -> &MultiMatrixAlgebra {
        &self.right
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `Σ_{k,l} n_k c_{kl} m_l`.
    pub fn dimension(&self) -> usize {
        let mut d = 0;
        for (k, &n) in self.left.blocks().iter().enumerate() {
            for (l, &m) in self.right.blocks().iter().enumerate() {
                d += n * self.matrix.get(k, l) as usize * m;
            }
        }
        d
    }

    /// The bimodule viewed as a left `M`-module.
    pub fn left_class(&self) -> ModuleClass {
        let m: Vec<u64> = self.right.blocks().iter().map(|&b| b as u64).collect();
        let mults = (0..self.matrix.rows())
            .map(|k| self.matrix.row(k).iter().zip(&m).map(|(c, m)| c * m).sum())
            .collect::<Vec<u64>>();
        ModuleClass::finite(&self.left, Side::Left, &mults).expect("length matches")
    }

    /// The bimodule viewed as a right `N`-module.
    pub fn right_class(&self) -> ModuleClass {
        let t = self.matrix.transpose();
        let n: Vec<u64> = self.left.blocks().iter().map(|&b| b as u64).collect();
        let mults = (0..t.rows())
            .map(|l| t.row(l).iter().zip(&n).map(|(c, n)| c * n).sum())
            .collect::<Vec<u64>>();
        ModuleClass::finite(&self.right, Side::Right, &mults).expect("length matches")
    }

    /// `H ⊠_N K` for `H` an `M`–`N` and `K` an `N`–`P` bimodule.
    pub fn compose(&self, other: &BimoduleMatrix) -> Result<BimoduleMatrix> {
        if self.right != other.left {
            return Err(Error::mismatch(
                "middle algebras of the composed bimodules differ",
            ));
        }
        Ok(BimoduleMatrix {
            left: self.left.clone(),
            right: other.right.clone(),
            matrix: self.matrix.try_mul(&other.matrix)?,
        })
    }

    /// The conjugate `N`–`M` bimodule.
    pub fn contragredient(&self) -> BimoduleMatrix {
        BimoduleMatrix {
            left: self.right.clone(),
            right: self.left.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    /// Induced map on module classes, `[q] ↦ c [q]`.
    pub fn apply(&self, class: &ModuleClass) -> Result<ModuleClass> {
        if class.algebra() != &self.right {
            return Err(Error::mismatch(
                "class is not over the right algebra of the bimodule",
            ));
        }
        ModuleClass::new(
            &self.left,
            class.side(),
            self.matrix.apply(class.multiplicities())?,
        )
    }

    pub fn realize(&self) -> ConcreteBimodule {
        ConcreteBimodule::new(self)
    }
}

/// Function form of [`BimoduleMatrix::compose`].
pub fn compose(a: &BimoduleMatrix, b: &BimoduleMatrix) -> Result<BimoduleMatrix> {
    a.compose(b)
}

/// Function form of [`BimoduleMatrix::contragredient`].
pub fn contragredient(a: &BimoduleMatrix) -> BimoduleMatrix {
    a.contragredient()
}

/// Function form of [`BimoduleMatrix::apply`].
pub fn bimodule_morphism_apply(a: &BimoduleMatrix, class: &ModuleClass) -> Result<ModuleClass> {
    a.apply(class)
}

/// Dimension of `H ⊗_N K` computed by the analytic relative tensor product
/// of `H` as a right `N`-module and `K` as a left `N`-module.
pub fn concrete_composition_dimension(
    h: &BimoduleMatrix,
    k: &BimoduleMatrix,
    functional: &PositiveFunctional,
) -> Result<usize> {
    if h.right() != k.left() || functional.algebra() != h.right() {
        return Err(Error::mismatch(
            "middle algebras of the composed bimodules differ",
        ));
    }
    let right = ConcreteModule::canonical(&h.right_class())?;
    let left = ConcreteModule::canonical(&k.left_class())?;
    Ok(rtp_module(&right, &left, functional)?.dimension())
}

/// `⊕_{k,l} ⊕_{t < c_{kl}} HS(C^{m_l}, C^{n_k})` with `x·ξ·y = x_k ξ y_l` on
/// each summand.
#[derive(Clone, Debug)]
pub struct ConcreteBimodule {
    class: BimoduleMatrix,
    /// `(k, l)` for every summand, in row-major order of `(k, l, t)`.
    summands: Vec<(usize, usize)>,
}

impl ConcreteBimodule {
    pub fn new(class: &BimoduleMatrix) -> Self {
        let mut summands = Vec::new();
        for k in 0..class.left.num_blocks() {
            for l in 0..class.right.num_blocks() {
                for _ in 0..class.matrix.get(k, l) {
                    summands.push((k, l));
                }
            }
        }
        Self {
            class: class.clone(),
            summands,
        }
    }

    pub fn class(&self) -> &BimoduleMatrix {
        &self.class
    }

    /// Shape of each summand of a vector.
    pub fn vector_shapes(&self) -> Vec<(usize, usize)> {
        self.summands
            .iter()
            .map(|&(k, l)| {
                (
                    self.class.left.block_size(k),
                    self.class.right.block_size(l),
                )
            })
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.vector_shapes().iter().map(|(r, c)| r * c).sum()
    }

    fn check_vector(&self, v: &BlockMatrix) -> Result<()> {
        if v.shapes() != self.vector_shapes() {
            return Err(Error::mismatch(
                "vector does not match the bimodule summands",
            ));
        }
        Ok(())
    }

    /// `x · ξ · y`.
    pub fn act(&self, x: &BlockMatrix, v: &BlockMatrix, y: &BlockMatrix) -> Result<BlockMatrix> {
        self.class.left.check_element(x)?;
        self.class.right.check_element(y)?;
        self.check_vector(v)?;
        Ok(BlockMatrix::from_blocks(
            self.summands
                .iter()
                .zip(v.blocks())
                .map(|(&(k, l), b)| x.block(k) * b * y.block(l))
                .collect(),
        ))
    }

    fn action_matrix(&self, f: impl Fn(&BlockMatrix) -> Result<BlockMatrix>) -> Result<CMatrix> {
        let shapes = self.vector_shapes();
        let d = self.dimension();
        let mut out = CMatrix::zeros(d, d);
        let mut e = alloc::vec![linalg::ZERO; d];
        for j in 0..d {
            e[j] = linalg::ONE;
            let img = f(&BlockMatrix::from_flat(&shapes, &e)?)?.flatten();
            for (i, z) in img.into_iter().enumerate() {
                out[(i, j)] = z;
            }
            e[j] = linalg::ZERO;
        }
        Ok(out)
    }

    /// Matrix of `ξ ↦ x ξ` in the flattened summand basis.
    pub fn left_action_matrix(&self, x: &BlockMatrix) -> Result<CMatrix> {
        let one = self.class.right.identity();
        self.action_matrix(|v| self.act(x, v, &one))
    }

    /// Matrix of `ξ ↦ ξ y`.
    pub fn right_action_matrix(&self, y: &BlockMatrix) -> Result<CMatrix> {
        let one = self.class.left.identity();
        self.action_matrix(|v| self.act(&one, v, y))
    }

    /// `(dim L(M)', dim R(N)')`; both actions are mutual commutants exactly
    /// when these equal `(dim N, dim M)` and every summand occurs once per
    /// block pair of a bijection.
    pub fn commutant_dimensions(&self) -> Result<(usize, usize)> {
        // e_{1j} and e_{j1} generate each block as a *-algebra
        let generates = |&(_, i, j): &(usize, usize, usize)| i == 0 || j == 0;
        let left: Vec<CMatrix> = self
            .class
            .left
            .matrix_units()
            .into_iter()
            .filter(generates)
            .map(|(k, i, j)| self.left_action_matrix(&self.class.left.matrix_unit(k, i, j)))
            .collect::<Result<_>>()?;
        let right: Vec<CMatrix> = self
            .class
            .right
            .matrix_units()
            .into_iter()
            .filter(generates)
            .map(|(k, i, j)| self.right_action_matrix(&self.class.right.matrix_unit(k, i, j)))
            .collect::<Result<_>>()?;
        Ok((
            linalg::intertwiner_dimension(&left, &left, 1e-9),
            linalg::intertwiner_dimension(&right, &right, 1e-9),
        ))
    }

    /// Whether the left and right actions generate each other's commutants.
    pub fn is_equivalence(&self) -> Result<bool> {
        let (l, r) = self.commutant_dimensions()?;
        Ok(l == self.class.right.dim() && r == self.class.left.dim() && self.class.dimension() > 0)
    }

    /// Realization of `H̄`: `ξ̄` is stored by its entrywise conjugate and
    /// identified with `ξ* ∈ HS(C^{n_k}, C^{m_l})`, so that
    /// `y · ξ̄ · x = conj(x* ξ y*)` becomes `y ξ* x`.
    pub fn contragredient(&self) -> ConcreteBimodule {
        ConcreteBimodule::new(&self.class.contragredient())
    }

    /// Image of `ξ̄` (given by the entrywise conjugate of `ξ`) in the
    /// contragredient realization.
    pub fn conjugate_vector(&self, conj_xi: &BlockMatrix) -> Result<BlockMatrix> {
        self.check_vector(conj_xi)?;
        let bar = self.contragredient();
        // summand (k, l, t) of H becomes (l, k, t) of H̄
        let mut out: Vec<Option<CMatrix>> = alloc::vec![None; self.summands.len()];
        for (s, &(k, l)) in self.summands.iter().enumerate() {
            let t = self.summands[..s].iter().filter(|&&p| p == (k, l)).count();
            let target = bar
                .summands
                .iter()
                .enumerate()
                .filter(|(_, &p)| p == (l, k))
                .nth(t)
                .map(|(i, _)| i)
                .expect("transposed multiplicity");
            out[target] = Some(conj_xi.block(s).transpose());
        }
        Ok(BlockMatrix::from_blocks(
            out.into_iter().map(|b| b.expect("filled")).collect(),
        ))
    }
}

/// Decision for Morita equivalence with a witnessing bimodule.
#[derive(Clone, Debug)]
pub struct MoritaDecision {
    pub equivalent: bool,
    /// Order-preserving block bijection, realized as `⊕_k HS(C^{m_k}, C^{n_k})`.
    pub witness: Option<BimoduleMatrix>,
}

/// Multi-matrix algebras are Morita equivalent exactly when they have the
/// same number of central blocks.
pub fn morita_equivalent(m: &MultiMatrixAlgebra, n: &MultiMatrixAlgebra) -> MoritaDecision {
    if m.num_blocks() != n.num_blocks() {
        return MoritaDecision {
            equivalent: false,
            witness: None,
        };
    }
    let witness = BimoduleMatrix::new(m, n, IntMatrix::identity(m.num_blocks())).expect("square");
    MoritaDecision {
        equivalent: true,
        witness: Some(witness),
    }
}

/// Unital inclusion `N ⊂ M` with `Λ_{kl}` copies of the `l`-th block of `N`
/// inside the `k`-th block of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion {
    sub: MultiMatrixAlgebra,
    ambient: MultiMatrixAlgebra,
    lambda: IntMatrix,
}

impl Inclusion {
    pub fn new(
        sub: &MultiMatrixAlgebra,
        ambient: &MultiMatrixAlgebra,
        lambda: IntMatrix,
    ) -> Result<Self> {
        if lambda.rows() != ambient.num_blocks() || lambda.cols() != sub.num_blocks() {
            return Err(Error::validation(format!(
                "inclusion matrix is {}x{}, expected {}x{}",
                lambda.rows(),
                lambda.cols(),
                ambient.num_blocks(),
                sub.num_blocks()
            )));
        }
        for (k, &n) in ambient.blocks().iter().enumerate() {
            let size: u64 = lambda
                .row(k)
                .iter()
                .zip(sub.blocks())
                .map(|(&c, &m)| c * m as u64)
                .sum();
            if size != n as u64 {
                return Err(Error::validation(format!(
                    "block size mismatch in ambient block {k}: Σ_l Λ_kl m_l = {size}, but n_k = {n}"
                )));
            }
        }
        for l in 0..sub.num_blocks() {
            if (0..ambient.num_blocks()).all(|k| lambda.get(k, l) == 0) {
                return Err(Error::validation(format!(
                    "block {l} of the subalgebra is not embedded"
                )));
            }
        }
        Ok(Self {
            sub: sub.clone(),
            ambient: ambient.clone(),
            lambda,
        })
    }

    pub fn sub(&self) -> &MultiMatrixAlgebra {
        &self.sub
    }

    pub fn ambient(&self) -> &MultiMatrixAlgebra {
        &self.ambient
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    /// `_M L²(M)_N`.
    pub fn bimodule(&self) -> BimoduleMatrix {
        BimoduleMatrix {
            left: self.ambient.clone(),
            right: self.sub.clone(),
            matrix: self.lambda.clone(),
        }
    }

    /// `_M L²(M) ⊠_N L²(M)_M`, acting on classes over `M` by `Λ Λᵀ`.
    pub fn index_morphism(&self) -> BimoduleMatrix {
        let b = self.bimodule();
        b.compose(&b.contragredient())
            .expect("middle algebra matches")
    }

    /// Spectral radius of `Λ Λᵀ`; for a factor ambient algebra the morphism
    /// is multiplication by this integer.
    pub fn index(&self) -> f64 {
        let m = self.index_morphism();
        if self.ambient.is_factor() {
            return m.matrix().get(0, 0) as f64;
        }
        let (vals, _) = linalg::hermitian_eigen(&m.matrix().to_cmatrix());
        vals[0]
    }

    /// Embedding `N → M` block by block: the `k`-th block of the image is the
    /// canonical representation of `N` with multiplicities `Λ_{k·}`.
    pub fn embedding(&self) -> Vec<Representation> {
        (0..self.ambient.num_blocks())
            .map(|k| {
                let mults: Vec<usize> = self.lambda.row(k).iter().map(|&c| c as usize).collect();
                Representation::canonical(&self.sub, &mults).expect("length matches")
            })
            .collect()
    }

    pub fn embed(&self, y: &BlockMatrix) -> Result<BlockMatrix> {
        self.sub.check_element(y)?;
        Ok(BlockMatrix::from_blocks(
            self.embedding()
                .iter()
                .map(|rep| rep.apply(y))
                .collect::<Result<_>>()?,
        ))
    }

    /// Relabel the blocks of both algebras.
    pub fn relabeled(&self, ambient_perm: &[usize], sub_perm: &[usize]) -> Result<Self> {
        let amb: Vec<usize> = ambient_perm
            .iter()
            .map(|&k| self.ambient.block_size(k))
            .collect();
        let sub: Vec<usize> = sub_perm.iter().map(|&l| self.sub.block_size(l)).collect();
        Self::new(
            &MultiMatrixAlgebra::new(&sub)?,
            &MultiMatrixAlgebra::new(&amb)?,
            self.lambda.permuted(ambient_perm, sub_perm),
        )
    }
}

/// Function form of [`Inclusion::index`].
pub fn index(inclusion: &Inclusion) -> f64 {
    inclusion.index()
}
