//! Dense complex linear algebra shared by the algebraic modules.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Vectors that are compared
//! for linear dependence (module bases, tensor spans) are handled as flat
//! `Vec<C64>` so that the Gram–Schmidt loops stay allocation-light.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::sync::atomic::Ordering as AtomicOrdering;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Default relative threshold for spectral rank: `λ > rtol · λ_max`.
pub const DEFAULT_RANK_RTOL: f64 = 1e-10;

/// Relative threshold for `‖h − h*‖ ≤ tol · ‖h‖`.
pub const HERMITIAN_RTOL: f64 = 1e-10;

/// Relative threshold below which a Gram–Schmidt residual counts as zero.
pub const SPAN_RTOL: f64 = 1e-8;

#[cfg(target_has_atomic = "64")]
mod rtol_cell {
    use core::sync::atomic::AtomicU64;

    pub static BITS: AtomicU64 = AtomicU64::new(super::DEFAULT_RANK_RTOL.to_bits());

    pub fn decode(bits: u64) -> f64 {
        f64::from_bits(bits)
    }

    pub fn encode(x: f64) -> u64 {
        x.to_bits()
    }
}

// Targets without 64-bit atomics keep the tolerance as f32.
#[cfg(not(target_has_atomic = "64"))]
mod rtol_cell {
    use core::sync::atomic::AtomicU32;

    pub static BITS: AtomicU32 = AtomicU32::new(0x2edb_e6ff); // 1e-10_f32

    pub fn decode(bits: u32) -> f64 {
        f32::from_bits(bits) as f64
    }

    pub fn encode(x: f64) -> u32 {
        (x.clamp(f32::MIN_POSITIVE as f64, f32::MAX as f64) as f32).to_bits()
    }
}

/// Current process-wide rank tolerance.
pub fn rank_rtol() -> f64 {
    rtol_cell::decode(rtol_cell::BITS.load(AtomicOrdering::Relaxed))
}

/// Replace the process-wide rank tolerance. Non-finite or non-positive
/// values are ignored.
pub fn set_rank_rtol(rtol: f64) {
    if rtol.is_finite() && rtol > 0.0 {
        rtol_cell::BITS.store(rtol_cell::encode(rtol), AtomicOrdering::Relaxed);
    }
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    sqrt(m.iter().map(|z| z.norm_sqr()).sum())
}

pub fn is_hermitian(m: &CMatrix, rtol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let scale = frobenius(m);
    frobenius(&(m - m.adjoint())) <= rtol * scale
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are returned nonincreasing; column `i` of the matrix is the
/// eigenvector for eigenvalue `i`. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    s
}

/// Largest singular value (operator norm); zero for empty matrices.
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `U diag(values) U*`.
pub fn reassemble(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (col, &v) in values.iter().enumerate() {
        for r in 0..n {
            scaled[(r, col)] *= v;
        }
    }
    &scaled * vectors.adjoint()
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    // ⟨a, b⟩ conjugate-linear in the second slot
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x * y.conj())
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    sqrt(a.iter().map(|z| z.norm_sqr()).sum())
}

fn subtract_projection(v: &mut [C64], onto: &[C64]) {
    let coeff = dot(v, onto);
    for (x, u) in v.iter_mut().zip(onto) {
        *x -= coeff * u;
    }
}

/// Orthonormal basis of the span of `candidates`.
///
/// Right-looking modified Gram–Schmidt with column pivoting: at every step
/// the remaining candidate with the largest residual is taken (ties go to
/// the lowest index), reorthogonalized once against the basis found so far,
/// and normalized. The process stops when every residual is at most
/// `rtol · max_i ‖candidate_i‖`. The output is deterministic for a given
/// input order.
pub fn span_basis(candidates: Vec<Vec<C64>>, rtol: f64) -> Vec<Vec<C64>> {
    let scale = candidates.iter().map(|v| norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let cutoff = rtol * scale;
    let mut remaining = candidates;
    let mut norms: Vec<f64> = remaining.iter().map(|v| norm(v)).collect();
    let mut alive = vec![true; remaining.len()];
    let mut basis: Vec<Vec<C64>> = Vec::new();
    loop {
        let mut pivot = None;
        let mut best = cutoff;
        for (i, &nv) in norms.iter().enumerate() {
            if alive[i] && nv > best {
                best = nv;
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { break };
        alive[p] = false;
        let mut v = core::mem::take(&mut remaining[p]);
        for b in &basis {
            subtract_projection(&mut v, b);
        }
        let nv = norm(&v);
        if nv <= cutoff {
            continue;
        }
        let inv = 1.0 / nv;
        v.iter_mut().for_each(|x| *x *= inv);
        for (i, w) in remaining.iter_mut().enumerate() {
            if alive[i] {
                subtract_projection(w, &v);
                norms[i] = norm(w);
            }
        }
        basis.push(v);
    }
    basis
}

pub fn span_rank(candidates: Vec<Vec<C64>>, rtol: f64) -> usize {
    span_basis(candidates, rtol).len()
}

/// Residual of `v` after orthogonal projection onto an orthonormal basis.
pub fn residual_from_span(v: &[C64], basis: &[Vec<C64>]) -> f64 {
    let mut w = v.to_vec();
    for b in basis {
        subtract_projection(&mut w, b);
    }
    for b in basis {
        subtract_projection(&mut w, b);
    }
    norm(&w)
}

/// Column `j` of `m` as a flat vector.
pub fn column(m: &CMatrix, j: usize) -> Vec<C64> {
    m.column(j).iter().copied().collect()
}

/// Matrix whose columns are the given vectors (all of length `rows`).
pub fn from_columns(rows: usize, cols: &[Vec<C64>]) -> CMatrix {
    CMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

/// Dimension of `{T : T A_i = B_i T for all i}`, with `T` of shape
/// `dim(B) × dim(A)`.
///
/// The constraint `T A − B T = 0` is linear in `vec(T)`; with column-major
/// vectorization it reads `(Aᵀ ⊗ I − I ⊗ B) vec(T) = 0`. The solution
/// dimension is the nullity of the stacked system, obtained from the
/// eigenvalues of its Gram matrix; eigenvalues at most `rtol` times the
/// largest count as zero. The Gram matrix squares the conditioning, so
/// `rtol` applies to squared singular values.
pub fn intertwiner_dimension(a: &[CMatrix], b: &[CMatrix], rtol: f64) -> usize {
    assert_eq!(a.len(), b.len(), "generator lists must pair up");
    let da = a.first().map_or(0, |m| m.nrows());
    let db = b.first().map_or(0, |m| m.nrows());
    let unknowns = da * db;
    if unknowns == 0 {
        return 0;
    }
    let id_a = CMatrix::identity(da, da);
    let id_b = CMatrix::identity(db, db);
    let mut gram = CMatrix::zeros(unknowns, unknowns);
    for (ga, gb) in a.iter().zip(b) {
        let sys = ga.transpose().kronecker(&id_b) - id_a.kronecker(gb);
        gram += sys.adjoint() * &sys;
    }
    let values = ((&gram + gram.adjoint()) * c(0.5)).symmetric_eigenvalues();
    let top = values.max().max(0.0);
    if top == 0.0 {
        return unknowns;
    }
    let cutoff = rtol * top;
    values.iter().filter(|&&v| v <= cutoff).count()
}
