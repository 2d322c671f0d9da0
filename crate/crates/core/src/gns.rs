//! GNS construction, the standard form, and left-bounded vectors.
//!
//! For `φ = Tr(h ·)` the GNS space is realized inside `L²(M)` as
//! `L²(M) s(φ)` with `x φ^{1/2} = x h^{1/2}`, so that
//! `⟨x φ^{1/2}, y φ^{1/2}⟩ = Tr(h^{1/2} y* x h^{1/2}) = φ(y* x)`.

use alloc::vec::Vec;

use crate::algebra::{BlockMatrix, MultiMatrixAlgebra, PositiveFunctional};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, SPAN_RTOL};
use crate::modules::ConcreteModule;

/// Relative tolerance for `ξ s(φ) = ξ`.
pub const DOMAIN_RTOL: f64 = 1e-9;

/// `L²(M)` with the Hilbert–Schmidt inner product and the two
/// multiplication actions.
#[derive(Clone, Debug)]
pub struct StandardForm {
    algebra: MultiMatrixAlgebra,
}

impl StandardForm {
    pub fn new(algebra: &MultiMatrixAlgebra) -> Self {
        Self {
            algebra: algebra.clone(),
        }
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn inner(&self, x: &BlockMatrix, y: &BlockMatrix) -> Result<C64> {
        self.algebra.check_element(x)?;
        self.algebra.check_element(y)?;
        x.hs_inner(y)
    }

    fn action_matrix(&self, f: impl Fn(&BlockMatrix) -> BlockMatrix) -> CMatrix {
        let d = self.dim();
        let shapes = self.algebra.zero().shapes();
        let cols: Vec<Vec<C64>> = (0..d)
            .map(|j| {
                let mut e = alloc::vec![linalg::ZERO; d];
                e[j] = linalg::ONE;
                f(&BlockMatrix::from_flat(&shapes, &e).expect("shape")).flatten()
            })
            .collect();
        linalg::from_columns(d, &cols)
    }

    /// Matrix of `ξ ↦ a ξ` in the matrix-unit basis.
    pub fn left_action_matrix(&self, a: &BlockMatrix) -> Result<CMatrix> {
        self.algebra.check_element(a)?;
        Ok(self.action_matrix(|v| a * v))
    }

    /// Matrix of `ξ ↦ ξ a` in the matrix-unit basis.
    pub fn right_action_matrix(&self, a: &BlockMatrix) -> Result<CMatrix> {
        self.algebra.check_element(a)?;
        Ok(self.action_matrix(|v| v * a))
    }

    /// Numerical dimension of the commutant of the left action, obtained by
    /// solving `T L(e) = L(e) T` over all matrix units.
    pub fn left_commutant_dimension(&self) -> usize {
        let gens: Vec<CMatrix> = self
            .algebra
            .matrix_units()
            .into_iter()
            .map(|(k, i, j)| {
                self.left_action_matrix(&self.algebra.matrix_unit(k, i, j))
                    .expect("own matrix unit")
            })
            .collect();
        linalg::intertwiner_dimension(&gens, &gens, 1e-9)
    }
}

/// The GNS representation of a positive functional.
#[derive(Clone, Debug)]
pub struct GnsRepresentation {
    functional: PositiveFunctional,
    dimension: usize,
}

pub fn gns(functional: &PositiveFunctional) -> GnsRepresentation {
    let dimension = functional
        .support_ranks()
        .iter()
        .zip(functional.algebra().blocks())
        .map(|(r, n)| r * n)
        .sum();
    GnsRepresentation {
        functional: functional.clone(),
        dimension,
    }
}

impl GnsRepresentation {
    pub fn functional(&self) -> &PositiveFunctional {
        &self.functional
    }

    /// `Σ_k n_k rank(h_k)`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The cyclic vector `φ^{1/2}`.
    pub fn cyclic_vector(&self) -> &BlockMatrix {
        self.functional.sqrt_density()
    }

    /// `x φ^{1/2}`.
    pub fn vector(&self, x: &BlockMatrix) -> Result<BlockMatrix> {
        self.functional.algebra().check_element(x)?;
        Ok(x * self.functional.sqrt_density())
    }

    /// Orthonormal basis of `M φ^{1/2}`, built from the vectors
    /// `e_ij φ^{1/2}`.
    pub fn carrier_basis(&self) -> Vec<BlockMatrix> {
        let alg = self.functional.algebra();
        let shapes = alg.zero().shapes();
        let cands = alg
            .matrix_units()
            .into_iter()
            .map(|(k, i, j)| (&alg.matrix_unit(k, i, j) * self.functional.sqrt_density()).flatten())
            .collect();
        linalg::span_basis(cands, SPAN_RTOL)
            .iter()
            .map(|v| BlockMatrix::from_flat(&shapes, v).expect("shape"))
            .collect()
    }

    /// `|⟨x φ^{1/2}, y φ^{1/2}⟩ − φ(y* x)|`.
    pub fn gns_identity_residual(&self, x: &BlockMatrix, y: &BlockMatrix) -> Result<f64> {
        let lhs = self.vector(x)?.hs_inner(&self.vector(y)?)?;
        let rhs = self.functional.sesquilinear(x, y)?;
        Ok((lhs - rhs).norm())
    }

    /// `φ^{1/2}` is separating exactly when `φ` is faithful.
    pub fn is_separating(&self) -> bool {
        self.functional.is_faithful()
    }
}

/// A `φ`-left-bounded vector `ξ = a φ^{1/2}` with `a = a s(φ)`.
///
/// Everything here is finite-dimensional, so the only obstruction is the
/// support condition `ξ s(φ) = ξ`. The operator `π_ℓ^φ(ξ) : φ^{1/2} x ↦ ξ x`
/// is left multiplication by the symbol `a = ξ h^{-1/2}`. Rectangular
/// blocks (column-module vectors) are allowed as long as each block has
/// `n_k` columns.
#[derive(Clone, Debug)]
pub struct LeftBoundedVector {
    vector: BlockMatrix,
    symbol: BlockMatrix,
}

pub(crate) fn check_right_support(functional: &PositiveFunctional, xi: &BlockMatrix) -> Result<()> {
    let alg = functional.algebra();
    if xi.num_blocks() != alg.num_blocks()
        || xi
            .blocks()
            .iter()
            .zip(alg.blocks())
            .any(|(b, &n)| b.ncols() != n)
    {
        return Err(Error::mismatch("vector blocks must have n_k columns"));
    }
    let gap = (xi * functional.support()).distance(xi);
    if gap > DOMAIN_RTOL * xi.hs_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::domain(alloc::format!(
            "vector is not left bounded: ‖ξ s(φ) − ξ‖ = {gap:e}"
        )));
    }
    Ok(())
}

pub fn left_bounded(
    functional: &PositiveFunctional,
    xi: &BlockMatrix,
) -> Result<LeftBoundedVector> {
    check_right_support(functional, xi)?;
    Ok(LeftBoundedVector {
        vector: xi.clone(),
        symbol: xi * functional.inverse_sqrt_density(),
    })
}

impl LeftBoundedVector {
    pub fn vector(&self) -> &BlockMatrix {
        &self.vector
    }

    /// `a = ξ h^{-1/2}`.
    pub fn symbol(&self) -> &BlockMatrix {
        &self.symbol
    }

    /// `π_ℓ^φ(ξ)(φ^{1/2} x) = ξ x`.
    pub fn apply(&self, x: &BlockMatrix) -> Result<BlockMatrix> {
        self.vector.try_mul(x)
    }

    /// `π_ℓ^φ(ξ) ζ = a ζ` on an arbitrary vector of `L²(M)`.
    pub fn apply_vector(&self, zeta: &BlockMatrix) -> Result<BlockMatrix> {
        self.symbol.try_mul(zeta)
    }

    pub fn operator_norm(&self) -> f64 {
        self.symbol.op_norm()
    }
}

/// `R²(M) q` truncated to `copies` rows, `q` a projection in `M_copies(M)`.
pub fn row_module(
    algebra: &MultiMatrixAlgebra,
    copies: usize,
    q: BlockMatrix,
) -> Result<ConcreteModule> {
    ConcreteModule::row(algebra, copies, q)
}
