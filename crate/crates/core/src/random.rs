//! Random test objects: Gaussian matrices, Haar-ish unitaries, densities.
//!
//! Generic over any [`rand::Rng`], so callers pick the generator and seed.

use alloc::vec::Vec;

use rand::Rng;

use crate::algebra::{BlockMatrix, MultiMatrixAlgebra};
use crate::linalg::{self, CMatrix, C64};

/// Standard normal sample (Box–Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    linalg::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let g = matrix(rng, n, n);
        let cols = (0..n).map(|j| linalg::column(&g, j)).collect();
        let basis = linalg::span_basis(cols, 1e-6);
        if basis.len() == n {
            return linalg::from_columns(n, &basis);
        }
    }
}

/// Element with independent complex Gaussian entries in every block.
pub fn element<R: Rng + ?Sized>(rng: &mut R, algebra: &MultiMatrixAlgebra) -> BlockMatrix {
    BlockMatrix::from_blocks(
        algebra
            .blocks()
            .iter()
            .map(|&n| matrix(rng, n, n))
            .collect(),
    )
}

/// Random element with the given block shapes.
pub fn block_matrix<R: Rng + ?Sized>(rng: &mut R, shapes: &[(usize, usize)]) -> BlockMatrix {
    BlockMatrix::from_blocks(shapes.iter().map(|&(r, c)| matrix(rng, r, c)).collect())
}

/// `U diag(λ) U*` per block with `λ` uniform in `[lo, hi]`.
pub fn positive_definite<R: Rng + ?Sized>(
    rng: &mut R,
    algebra: &MultiMatrixAlgebra,
    lo: f64,
    hi: f64,
) -> BlockMatrix {
    BlockMatrix::from_blocks(
        algebra
            .blocks()
            .iter()
            .map(|&n| {
                let vals: Vec<f64> = (0..n)
                    .map(|_| lo + (hi - lo) * rng.random::<f64>())
                    .collect();
                linalg::reassemble(&vals, &unitary(rng, n))
            })
            .collect(),
    )
}

/// Faithful density with spectrum in `[0.1, 2]`.
pub fn faithful_density<R: Rng + ?Sized>(rng: &mut R, algebra: &MultiMatrixAlgebra) -> BlockMatrix {
    positive_definite(rng, algebra, 0.1, 2.0)
}

/// Density of prescribed rank per block, nonzero eigenvalues in `[0.1, 2]`.
pub fn density_with_ranks<R: Rng + ?Sized>(
    rng: &mut R,
    algebra: &MultiMatrixAlgebra,
    ranks: &[usize],
) -> BlockMatrix {
    BlockMatrix::from_blocks(
        algebra
            .blocks()
            .iter()
            .zip(ranks)
            .map(|(&n, &r)| {
                let vals: Vec<f64> = (0..n)
                    .map(|i| {
                        if i < r {
                            0.1 + 1.9 * rng.random::<f64>()
                        } else {
                            0.0
                        }
                    })
                    .collect();
                linalg::reassemble(&vals, &unitary(rng, n))
            })
            .collect(),
    )
}
