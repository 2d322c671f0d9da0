//! Norms of the tensor-lift and bilinear maps, and truncated divergent
//! sequences.
//!
//! The tensor-lift map sends `Σ ξ_i ⊗ η_i` in the Hilbert tensor square of
//! `L²(M)` to `Σ ξ_i h^{-1/2} η_i`. Its norm on a factor is `Tr(h^{-1})^{1/2}`;
//! on simple tensors alone the supremum is only `λ_min(h)^{-1/2}`. On `M_N`
//! with eigenvalues `λ_n` the tensors
//! `T_k = Σ_{n ≤ k} (s_k λ_n)^{-1} e_{1n} h^{1/2} ⊗ e_{n1}`, `s_k = Σ_{n ≤ k} 1/λ_n`,
//! all map to `e_{11}` while `‖T_k‖² = 1/s_k`. The demos here are finite
//! truncations: they certify the per-`k` values, not the limit.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    functional_from_density, BlockMatrix, MultiMatrixAlgebra, PositiveFunctional,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ONE, ZERO};
use crate::rtp::rtp_vector;

/// Largest block size for which the tensor-lift map is assembled explicitly.
pub const ASSEMBLY_LIMIT: usize = 6;
/// Relative tolerance of the matrix-free singular value iteration.
pub const POWER_RTOL: f64 = 1e-10;
/// Required agreement between the analytic and optimized bilinear norms.
pub const BILINEAR_TOL: f64 = 1e-8;
/// Distance from `e_{11}` accepted as an exact image (rounding only).
pub const IMAGE_TOL: f64 = 1e-12;
/// Accepted relative deviation of `‖T_k‖²` from `1/s_k`.
pub const NORM_IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    Assembled,
    MatrixFree,
}

#[derive(Clone, Debug)]
pub struct TensorMapReport {
    pub algebra: MultiMatrixAlgebra,
    pub density: BlockMatrix,
    pub measured: f64,
    /// `max_k Tr(h_k^{-1})^{1/2}`.
    pub predicted: f64,
    /// `|measured − predicted|`.
    pub residual: f64,
    /// `(dim L², dim L² ⊗ L²)`.
    pub map_shape: (usize, usize),
    pub method: NormMethod,
    /// Unit vector of the tensor square achieving the norm, as a
    /// `dim L² × dim L²` coefficient matrix over `e_a ⊗ e_b`.
    pub extremizer: CMatrix,
}

impl TensorMapReport {
    pub fn relative_error(&self) -> f64 {
        self.residual / self.predicted
    }

    /// The extremizer written as `Σ_b ξ_b ⊗ e_b`.
    pub fn extremizer_pairs(&self) -> Vec<(BlockMatrix, BlockMatrix)> {
        let shapes = square_shapes(&self.algebra);
        let d = self.extremizer.nrows();
        (0..d)
            .map(|b| {
                let xi = BlockMatrix::from_flat(&shapes, &linalg::column(&self.extremizer, b))
                    .expect("shape");
                let mut e = vec![ZERO; d];
                e[b] = ONE;
                (xi, BlockMatrix::from_flat(&shapes, &e).expect("shape"))
            })
            .collect()
    }
}

fn square_shapes(alg: &MultiMatrixAlgebra) -> Vec<(usize, usize)> {
    alg.blocks().iter().map(|&n| (n, n)).collect()
}

/// `Σ_i ξ_i ⊗_φ η_i`.
pub fn apply_tensor_map(
    functional: &PositiveFunctional,
    pairs: &[(BlockMatrix, BlockMatrix)],
) -> Result<BlockMatrix> {
    let mut acc = functional.algebra().zero();
    for (xi, eta) in pairs {
        acc = acc.try_add(&rtp_vector(functional, xi, eta)?)?;
    }
    Ok(acc)
}

fn require_faithful(functional: &PositiveFunctional) -> Result<()> {
    if !functional.is_faithful() {
        return Err(Error::domain(
            "density is singular: the map is only defined on the left-bounded domain",
        ));
    }
    Ok(())
}

fn block_offsets(alg: &MultiMatrixAlgebra) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(alg.num_blocks());
    let mut o = 0;
    for &n in alg.blocks() {
        offsets.push(o);
        o += n * n;
    }
    offsets
}

/// Predicted norm `max_k Tr(h_k^{-1})^{1/2}`.
pub fn predicted_tensor_norm(functional: &PositiveFunctional) -> Result<f64> {
    require_faithful(functional)?;
    Ok(functional
        .spectral()
        .eigenvalues()
        .iter()
        .map(|vals| linalg::sqrt(vals.iter().map(|l| 1.0 / l).sum()))
        .fold(0.0, f64::max))
}

/// `A X` for a tensor `X` given as its coefficient matrix.
fn lift(alg: &MultiMatrixAlgebra, g: &BlockMatrix, x: &CMatrix) -> Vec<C64> {
    let offsets = block_offsets(alg);
    let d = x.nrows();
    let mut out = vec![ZERO; d];
    for (b, &n) in alg.blocks().iter().enumerate() {
        let o = offsets[b];
        let gb = g.block(b);
        for i in 0..n {
            for l in 0..n {
                let mut s = ZERO;
                for j in 0..n {
                    for k in 0..n {
                        s += gb[(j, k)] * x[(o + i * n + j, o + k * n + l)];
                    }
                }
                out[o + i * n + l] = s;
            }
        }
    }
    out
}

/// `A* ζ` as a coefficient matrix.
fn lift_adjoint(alg: &MultiMatrixAlgebra, g: &BlockMatrix, zeta: &[C64]) -> CMatrix {
    let offsets = block_offsets(alg);
    let d = zeta.len();
    let mut out = CMatrix::zeros(d, d);
    for (b, &n) in alg.blocks().iter().enumerate() {
        let o = offsets[b];
        let gb = g.block(b);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        out[(o + i * n + j, o + k * n + l)] =
                            gb[(j, k)].conj() * zeta[o + i * n + l];
                    }
                }
            }
        }
    }
    out
}

/// The tensor-lift map as a `d × d²` matrix, column `a d + b` holding the
/// image of `e_a ⊗ e_b`.
pub fn assemble_tensor_map(functional: &PositiveFunctional) -> CMatrix {
    let alg = functional.algebra();
    let g = functional.inverse_sqrt_density();
    let d = alg.dim();
    let mut out = CMatrix::zeros(d, d * d);
    let mut x = CMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            x[(a, b)] = ONE;
            for (r, z) in lift(alg, g, &x).into_iter().enumerate() {
                out[(r, a * d + b)] = z;
            }
            x[(a, b)] = ZERO;
        }
    }
    out
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = linalg::norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Largest singular value of the tensor-lift map with a top right singular
/// vector.
pub fn tensor_map_norm(functional: &PositiveFunctional) -> Result<TensorMapReport> {
    require_faithful(functional)?;
    let alg = functional.algebra();
    let g = functional.inverse_sqrt_density();
    let d = alg.dim();
    let largest = alg.blocks().iter().copied().max().unwrap_or(0);
    let (measured, left, method) = if largest <= ASSEMBLY_LIMIT {
        let a = assemble_tensor_map(functional);
        let gram = &a * a.adjoint();
        let (vals, vecs) = linalg::hermitian_eigen(&gram);
        (
            linalg::sqrt(vals[0].max(0.0)),
            linalg::column(&vecs, 0),
            NormMethod::Assembled,
        )
    } else {
        let mut v: Vec<C64> = (0..d).map(|i| linalg::c(1.0 / (1.0 + i as f64))).collect();
        normalize(&mut v);
        let mut sigma_sq = 0.0;
        for _ in 0..10_000 {
            let mut w = lift(alg, g, &lift_adjoint(alg, g, &v));
            let next = linalg::dot(&v, &w).re;
            normalize(&mut w);
            v = w;
            let done = (next - sigma_sq).abs() <= POWER_RTOL * next;
            sigma_sq = next;
            if done {
                break;
            }
        }
        (linalg::sqrt(sigma_sq.max(0.0)), v, NormMethod::MatrixFree)
    };
    let mut extremizer = lift_adjoint(alg, g, &left);
    let scale = linalg::frobenius(&extremizer);
    if scale > 0.0 {
        extremizer /= linalg::c(scale);
    }
    let predicted = predicted_tensor_norm(functional)?;
    Ok(TensorMapReport {
        algebra: alg.clone(),
        density: functional.density().clone(),
        measured,
        predicted,
        residual: (measured - predicted).abs(),
        map_shape: (d, d * d),
        method,
        extremizer,
    })
}

#[derive(Clone, Debug)]
pub struct BilinearReport {
    /// `λ_min(h)^{-1/2}`.
    pub analytic: f64,
    /// Best value found over rank-one pairs `ξ = u v*`, `η = v w*`.
    pub optimized: f64,
    pub xi: BlockMatrix,
    pub eta: BlockMatrix,
}

impl BilinearReport {
    pub fn value(&self) -> f64 {
        self.analytic
    }
}

/// Minimal eigenpair of a positive definite matrix by inverse iteration.
fn min_eigenvector(h: &CMatrix) -> Result<Vec<C64>> {
    let n = h.nrows();
    let inv = h
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::domain("density block is not invertible"))?;
    let mut v: Vec<C64> = (0..n).map(|i| linalg::c(1.0 + i as f64)).collect();
    normalize(&mut v);
    let mut last = f64::INFINITY;
    for _ in 0..100_000 {
        let col = CMatrix::from_column_slice(n, 1, &v);
        let mut w = linalg::column(&(&inv * col), 0);
        normalize(&mut w);
        let hw = linalg::column(&(h * CMatrix::from_column_slice(n, 1, &w)), 0);
        let rq = linalg::dot(&hw, &w).re;
        v = w;
        if (last - rq).abs() <= 1e-15 * rq {
            break;
        }
        last = rq;
    }
    Ok(v)
}

/// `sup ‖ξ h^{-1/2} η‖` over unit Hilbert–Schmidt vectors.
pub fn bilinear_map_norm(functional: &PositiveFunctional) -> Result<BilinearReport> {
    require_faithful(functional)?;
    let alg = functional.algebra();
    let lambda_min = functional.spectral().min_eigenvalue();
    let analytic = 1.0 / linalg::sqrt(lambda_min);
    let mut best: Option<(f64, BlockMatrix, BlockMatrix)> = None;
    for (k, &n) in alg.blocks().iter().enumerate() {
        let v = min_eigenvector(functional.density().block(k))?;
        let vcol = CMatrix::from_column_slice(n, 1, &v);
        let mut e1 = CMatrix::zeros(n, 1);
        e1[(0, 0)] = ONE;
        let mut xi = alg.zero().into_blocks();
        let mut eta = alg.zero().into_blocks();
        xi[k] = &e1 * vcol.adjoint();
        eta[k] = &vcol * e1.adjoint();
        let (xi, eta) = (BlockMatrix::from_blocks(xi), BlockMatrix::from_blocks(eta));
        let value = rtp_vector(functional, &xi, &eta)?.hs_norm();
        if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
            best = Some((value, xi, eta));
        }
    }
    let (optimized, xi, eta) = best.expect("at least one block");
    if (optimized - analytic).abs() > BILINEAR_TOL * analytic {
        return Err(Error::Tolerance(format!(
            "rank-one optimum {optimized} differs from λ_min^(-1/2) = {analytic}"
        )));
    }
    Ok(BilinearReport {
        analytic,
        optimized,
        xi,
        eta,
    })
}

/// Eigenvalue sequences `λ_1, λ_2, …` for the diagonal density on `M_N`.
#[derive(Clone, Debug, PartialEq)]
pub enum EigenvalueRule {
    /// `1/n`.
    Harmonic,
    /// `r^n`.
    Geometric(f64),
    /// `1/n³`.
    InverseCube,
    Constant(f64),
    Custom(Vec<f64>),
}

impl EigenvalueRule {
    pub fn values(&self, n: usize) -> Result<Vec<f64>> {
        let vals: Vec<f64> = match self {
            EigenvalueRule::Harmonic => (1..=n).map(|i| 1.0 / i as f64).collect(),
            EigenvalueRule::Geometric(r) => (1..=n).map(|i| libm::pow(*r, i as f64)).collect(),
            EigenvalueRule::InverseCube => {
                (1..=n).map(|i| 1.0 / libm::pow(i as f64, 3.0)).collect()
            }
            EigenvalueRule::Constant(c) => vec![*c; n],
            EigenvalueRule::Custom(v) => {
                if v.len() < n {
                    return Err(Error::validation(format!(
                        "{} eigenvalues given, {n} needed",
                        v.len()
                    )));
                }
                v[..n].to_vec()
            }
        };
        if vals.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::validation("eigenvalues must be finite and positive"));
        }
        Ok(vals)
    }

    /// Whether `Σ 1/λ_n` diverges; `None` for a finite custom list.
    pub fn reciprocal_sum_diverges(&self) -> Option<bool> {
        match self {
            EigenvalueRule::Harmonic
            | EigenvalueRule::InverseCube
            | EigenvalueRule::Constant(_) => Some(true),
            EigenvalueRule::Geometric(r) => Some(*r <= 1.0),
            EigenvalueRule::Custom(_) => None,
        }
    }

    /// Whether `λ_n → 0`; `None` for a finite custom list.
    pub fn tends_to_zero(&self) -> Option<bool> {
        match self {
            EigenvalueRule::Harmonic | EigenvalueRule::InverseCube => Some(true),
            EigenvalueRule::Geometric(r) => Some(*r < 1.0),
            EigenvalueRule::Constant(_) => Some(false),
            EigenvalueRule::Custom(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DivergenceRecord {
    pub k: usize,
    pub s_k: f64,
    pub norm_sq: f64,
    pub image: BlockMatrix,
    pub image_residual: f64,
}

#[derive(Clone, Debug)]
pub struct DivergenceTrace {
    pub truncation: usize,
    pub eigenvalues: Vec<f64>,
    pub records: Vec<DivergenceRecord>,
    pub warning: Option<String>,
}

impl DivergenceTrace {
    /// Largest `|‖T_k‖² − 1/s_k|` relative to `1/s_k`.
    pub fn max_norm_error(&self) -> f64 {
        self.records
            .iter()
            .map(|r| (r.norm_sq * r.s_k - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_image_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.image_residual)
            .fold(0.0, f64::max)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].norm_sq < w[0].norm_sq)
    }
}

fn diagonal_functional(vals: &[f64]) -> Result<PositiveFunctional> {
    let alg = MultiMatrixAlgebra::full(vals.len())?;
    let phi = functional_from_density(&alg, BlockMatrix::diagonal(&[vals]))?;
    if !phi.is_faithful() {
        return Err(Error::domain(
            "eigenvalue spread exceeds the rank tolerance; reduce the truncation",
        ));
    }
    Ok(phi)
}

fn check_truncation(n: usize, k_max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::validation("truncation must be positive"));
    }
    if k_max > n {
        return Err(Error::validation(format!(
            "k_max = {k_max} exceeds the truncation N = {n}"
        )));
    }
    Ok(())
}

/// `T_1, …, T_{k_max}` on `M_N` with `h = diag(λ_1, …, λ_N)`.
pub fn divergence_demo(rule: &EigenvalueRule, n: usize, k_max: usize) -> Result<DivergenceTrace> {
    check_truncation(n, k_max)?;
    let lambda = rule.values(n)?;
    let phi = diagonal_functional(&lambda)?;
    let alg = phi.algebra().clone();
    let root = phi.sqrt_density();
    // per-n simple tensor e_{1n} h^{1/2} ⊗ e_{n1}, its image, and the Gram matrix
    let xis: Vec<BlockMatrix> = (0..k_max)
        .map(|i| &alg.matrix_unit(0, 0, i) * root)
        .collect();
    let etas: Vec<BlockMatrix> = (0..k_max).map(|i| alg.matrix_unit(0, i, 0)).collect();
    let images: Vec<BlockMatrix> = xis
        .iter()
        .zip(&etas)
        .map(|(x, e)| rtp_vector(&phi, x, e))
        .collect::<Result<_>>()?;
    let mut gram = CMatrix::zeros(k_max, k_max);
    for i in 0..k_max {
        for j in 0..k_max {
            gram[(i, j)] = xis[i].hs_inner(&xis[j])? * etas[i].hs_inner(&etas[j])?;
        }
    }
    let target = alg.matrix_unit(0, 0, 0);
    let mut records = Vec::with_capacity(k_max);
    let mut s_k = 0.0;
    for k in 1..=k_max {
        s_k += 1.0 / lambda[k - 1];
        let coef: Vec<f64> = lambda[..k].iter().map(|l| 1.0 / (s_k * l)).collect();
        let mut image = alg.zero();
        for (c, img) in coef.iter().zip(&images) {
            image = &image + &img.scale_real(*c);
        }
        let mut norm_sq = 0.0;
        for i in 0..k {
            for j in 0..k {
                norm_sq += coef[i] * coef[j] * gram[(i, j)].re;
            }
        }
        let image_residual = image.distance(&target);
        records.push(DivergenceRecord {
            k,
            s_k,
            norm_sq,
            image,
            image_residual,
        });
    }
    let warning = match rule.reciprocal_sum_diverges() {
        Some(true) => None,
        Some(false) => Some(String::from(
            "Σ 1/λ_n converges: ‖T_k‖² stays above 1/Σ 1/λ_n, witnessing boundedness",
        )),
        None => Some(String::from(
            "custom eigenvalues: divergence of Σ 1/λ_n is not decided",
        )),
    };
    Ok(DivergenceTrace {
        truncation: n,
        eigenvalues: lambda,
        records,
        warning,
    })
}

#[derive(Clone, Debug)]
pub struct IsometryRecord {
    pub n: usize,
    pub lambda: f64,
    /// `‖n e_{1n} h^{1/2}‖² = n² λ_n`.
    pub left_norm_sq: f64,
    /// `‖(1/n) e_{n1}‖² = 1/n²`.
    pub right_norm_sq: f64,
    pub image_residual: f64,
}

#[derive(Clone, Debug)]
pub struct IsometryTrace {
    pub truncation: usize,
    pub records: Vec<IsometryRecord>,
    /// Whether `n² λ_n` strictly decreases along the records.
    pub decays: bool,
    pub warning: Option<String>,
}

impl IsometryTrace {
    pub fn max_image_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.image_residual)
            .fold(0.0, f64::max)
    }
}

/// Pairs `(n e_{1n} h^{1/2}, (1/n) e_{n1})`, both shrinking in norm while
/// their fused product stays `e_{11}`.
pub fn isometry_pair_demo(rule: &EigenvalueRule, n: usize, k_max: usize) -> Result<IsometryTrace> {
    check_truncation(n, k_max)?;
    let lambda = rule.values(n)?;
    let phi = diagonal_functional(&lambda)?;
    let alg = phi.algebra().clone();
    let target = alg.matrix_unit(0, 0, 0);
    let mut records = Vec::with_capacity(k_max);
    for i in 1..=k_max {
        let s = i as f64;
        let xi = (&alg.matrix_unit(0, 0, i - 1) * phi.sqrt_density()).scale_real(s);
        let eta = alg.matrix_unit(0, i - 1, 0).scale_real(1.0 / s);
        let image = rtp_vector(&phi, &xi, &eta)?;
        records.push(IsometryRecord {
            n: i,
            lambda: lambda[i - 1],
            left_norm_sq: xi.hs_norm_sqr(),
            right_norm_sq: eta.hs_norm_sqr(),
            image_residual: image.distance(&target),
        });
    }
    let decays = records
        .windows(2)
        .all(|w| w[1].left_norm_sq < w[0].left_norm_sq);
    let warning = if decays {
        None
    } else {
        Some(String::from(
            "n² λ_n does not decay: the pairs stay bounded",
        ))
    };
    Ok(IsometryTrace {
        truncation: n,
        records,
        decays,
        warning,
    })
}
