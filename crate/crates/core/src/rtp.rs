//! The relative tensor product at vector and module level.
//!
//! For a φ-left-bounded `ξ` the fused vector is `ξ ⊗_φ η = (ξ h^{-1/2}) η`.
//! With `H = p C²(M)` and `K = R²(M) q` the products land in
//! `p L²(M_{m×m'}(M)) q`, stored per block as an `m n_k × m' n_k` matrix,
//! and their span has dimension `Σ_k r_k m_k`.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{BlockMatrix, MultiMatrixAlgebra, PositiveFunctional};
use crate::error::{Error, Result};
use crate::gns::{check_right_support, left_bounded};
use crate::linalg::{self, CMatrix, C64, SPAN_RTOL};
use crate::modules::{ConcreteModule, ModuleClass, Side};

fn check_left_factor_shape(functional: &PositiveFunctional, eta: &BlockMatrix) -> Result<()> {
    let alg = functional.algebra();
    if eta.num_blocks() != alg.num_blocks()
        || eta
            .blocks()
            .iter()
            .zip(alg.blocks())
            .any(|(b, &n)| b.nrows() != n)
    {
        return Err(Error::mismatch("right factor blocks must have n_k rows"));
    }
    Ok(())
}

/// `ξ ⊗_φ η = (ξ h^{-1/2}) η`, defined when `ξ s(φ) = ξ`.
pub fn rtp_vector(
    functional: &PositiveFunctional,
    xi: &BlockMatrix,
    eta: &BlockMatrix,
) -> Result<BlockMatrix> {
    check_right_support(functional, xi)?;
    check_left_factor_shape(functional, eta)?;
    Ok(&(xi * functional.inverse_sqrt_density()) * eta)
}

/// `h^{1/2} a h^{-1/2}`, the element for which
/// `(ξ a) ⊗_φ η = ξ ⊗_φ (h^{1/2} a h^{-1/2} η)`. It equals `a` exactly when
/// `a` commutes with `h`.
pub fn balancing_twist(functional: &PositiveFunctional, a: &BlockMatrix) -> Result<BlockMatrix> {
    functional
        .sqrt_density()
        .try_mul(a)?
        .try_mul(functional.inverse_sqrt_density())
}

/// `⟨π_ℓ^φ(ξ₂)* π_ℓ^φ(ξ₁) η₁, η₂⟩`.
///
/// `π_ℓ^φ(ξ₂)* π_ℓ^φ(ξ₁) = L(a₂* a₁)` with `a_i = ξ_i h^{-1/2}`, an element
/// of `M`. The result agrees with the Hilbert–Schmidt pairing of the two
/// fused vectors.
pub fn rtp_inner_product(
    functional: &PositiveFunctional,
    xi1: &BlockMatrix,
    eta1: &BlockMatrix,
    xi2: &BlockMatrix,
    eta2: &BlockMatrix,
) -> Result<C64> {
    let a1 = left_bounded(functional, xi1)?;
    let a2 = left_bounded(functional, xi2)?;
    check_left_factor_shape(functional, eta1)?;
    check_left_factor_shape(functional, eta2)?;
    let middle = a2.symbol().adjoint().try_mul(a1.symbol())?;
    middle.try_mul(eta1)?.hs_inner(eta2)
}

/// Change-of-weight element `c = h^{-1/2} g^{1/2}` for `φ = Tr(h ·)`,
/// `ψ = Tr(g ·)`, satisfying `(ξ c) ⊗_ψ η = ξ ⊗_φ η`.
#[derive(Clone, Debug)]
pub struct CocycleElement {
    element: BlockMatrix,
}

pub fn change_of_weight(
    phi: &PositiveFunctional,
    psi: &PositiveFunctional,
) -> Result<CocycleElement> {
    if phi.algebra() != psi.algebra() {
        return Err(Error::mismatch("functionals on different algebras"));
    }
    if !phi.is_faithful() || !psi.is_faithful() {
        return Err(Error::validation(
            "change of weight needs faithful functionals",
        ));
    }
    Ok(CocycleElement {
        element: phi.inverse_sqrt_density() * psi.sqrt_density(),
    })
}

impl CocycleElement {
    pub fn element(&self) -> &BlockMatrix {
        &self.element
    }

    /// `ξ ↦ ξ c`.
    pub fn convert(&self, xi: &BlockMatrix) -> Result<BlockMatrix> {
        xi.try_mul(&self.element)
    }

    pub fn is_hermitian(&self, rtol: f64) -> bool {
        self.element.is_hermitian(rtol)
    }
}

/// `H ⊗_φ K` realized as a subspace of `p L²(M_{m×m'}(M)) q`.
#[derive(Clone, Debug)]
pub struct RtpSpace {
    functional: PositiveFunctional,
    left_factor: ConcreteModule,
    right_factor: ConcreteModule,
    basis: Vec<BlockMatrix>,
    expected_dimension: usize,
    restricted: bool,
}

/// Dimension law `Σ_k r_k m_k`, restricted to the blocks where `s(φ)` is
/// nonzero.
fn dimension_law(h: &ConcreteModule, k: &ConcreteModule, functional: &PositiveFunctional) -> usize {
    h.multiplicities()
        .iter()
        .zip(k.multiplicities())
        .zip(functional.support_ranks())
        .filter(|(_, &s)| s > 0)
        .map(|((r, m), _)| r * m)
        .sum()
}

/// Module-level relative tensor product of a right module `H` and a left
/// module `K`.
///
/// The carrier is the span of `ξ ⊗_φ η` over a basis of left-bounded vectors
/// of `H` (obtained from `p E h^{1/2}` for matrix units `E`) and a basis of
/// `K`. A non-faithful `φ` restricts `H` to `H s(φ)`; [`RtpSpace::tensor`]
/// still rejects explicit vectors outside that subspace.
pub fn rtp_module(
    h: &ConcreteModule,
    k: &ConcreteModule,
    functional: &PositiveFunctional,
) -> Result<RtpSpace> {
    if h.side() != Side::Right || k.side() != Side::Left {
        return Err(Error::mismatch(
            "rtp_module takes a right module and a left module",
        ));
    }
    if h.algebra() != functional.algebra() || k.algebra() != functional.algebra() {
        return Err(Error::mismatch(
            "modules and functional over different algebras",
        ));
    }
    let sqrt = functional.sqrt_density();
    let h_shapes = h.vector_shapes();
    let h_cands = h
        .spanning_set()
        .iter()
        .map(|e| (e * sqrt).flatten())
        .collect();
    let h_basis: Vec<BlockMatrix> = linalg::span_basis(h_cands, SPAN_RTOL)
        .iter()
        .map(|v| BlockMatrix::from_flat(&h_shapes, v).expect("shape"))
        .collect();
    let k_basis = k.basis();
    let mut products = Vec::with_capacity(h_basis.len() * k_basis.len());
    for xi in &h_basis {
        let a = xi * functional.inverse_sqrt_density();
        for eta in &k_basis {
            products.push((&a * eta).flatten());
        }
    }
    let shapes = carrier_shapes(h, k);
    let basis = linalg::span_basis(products, SPAN_RTOL)
        .iter()
        .map(|v| BlockMatrix::from_flat(&shapes, v).expect("shape"))
        .collect();
    Ok(RtpSpace {
        functional: functional.clone(),
        left_factor: h.clone(),
        right_factor: k.clone(),
        basis,
        expected_dimension: dimension_law(h, k, functional),
        restricted: !functional.is_faithful(),
    })
}

/// [`rtp_module`] on the canonical realizations of two finite classes.
pub fn rtp_module_from_classes(
    h: &ModuleClass,
    k: &ModuleClass,
    functional: &PositiveFunctional,
) -> Result<RtpSpace> {
    rtp_module(
        &ConcreteModule::canonical(h)?,
        &ConcreteModule::canonical(k)?,
        functional,
    )
}

fn carrier_shapes(h: &ConcreteModule, k: &ConcreteModule) -> Vec<(usize, usize)> {
    h.algebra()
        .blocks()
        .iter()
        .map(|&n| (h.copies() * n, k.copies() * n))
        .collect()
}

impl RtpSpace {
    /// Numerical span rank of the fused simple tensors.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `Σ_k r_k m_k` from the multiplicity vectors.
    pub fn expected_dimension(&self) -> usize {
        self.expected_dimension
    }

    /// Whether `H` was cut down to `H s(φ)`.
    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        self.functional.algebra()
    }

    pub fn functional(&self) -> &PositiveFunctional {
        &self.functional
    }

    pub fn left_factor(&self) -> &ConcreteModule {
        &self.left_factor
    }

    pub fn right_factor(&self) -> &ConcreteModule {
        &self.right_factor
    }

    /// Orthonormal carrier basis, each element of shape `m n_k × m' n_k`.
    pub fn basis(&self) -> &[BlockMatrix] {
        &self.basis
    }

    /// `ξ ⊗_φ η` for explicit module vectors.
    pub fn tensor(&self, xi: &BlockMatrix, eta: &BlockMatrix) -> Result<BlockMatrix> {
        if !self.left_factor.contains(xi) {
            return Err(Error::validation("ξ is not a vector of the right module H"));
        }
        if !self.right_factor.contains(eta) {
            return Err(Error::validation("η is not a vector of the left module K"));
        }
        rtp_vector(&self.functional, xi, eta)
    }

    /// Coordinates of `v` in the carrier basis.
    pub fn coordinates(&self, v: &BlockMatrix) -> Result<Vec<C64>> {
        self.basis.iter().map(|b| v.hs_inner(b)).collect()
    }

    /// Distance from `v` to the carrier.
    pub fn residual(&self, v: &BlockMatrix) -> Result<f64> {
        let coords = self.coordinates(v)?;
        let mut w = v.clone();
        for (b, c) in self.basis.iter().zip(coords) {
            w = &w - &b.scale(c);
        }
        Ok(w.hs_norm())
    }

    pub fn contains(&self, v: &BlockMatrix) -> bool {
        self.residual(v)
            .map(|r| r <= 1e-9 * (1.0 + v.hs_norm()))
            .unwrap_or(false)
    }

    fn action(&self, f: impl Fn(&BlockMatrix) -> Result<BlockMatrix>) -> Result<CMatrix> {
        let d = self.basis.len();
        let moved: Vec<BlockMatrix> = self.basis.iter().map(&f).collect::<Result<_>>()?;
        for v in &moved {
            let r = self.residual(v)?;
            if r > 1e-8 * (1.0 + v.hs_norm()) {
                return Err(Error::Tolerance(format!(
                    "carrier not invariant (residual {r:e})"
                )));
            }
        }
        let mut out = CMatrix::zeros(d, d);
        for (t, v) in moved.iter().enumerate() {
            for (s, b) in self.basis.iter().enumerate() {
                out[(s, t)] = v.hs_inner(b)?;
            }
        }
        Ok(out)
    }

    /// Matrix, in the carrier basis, of the left action of `x ∈ M_m(M)` cut
    /// down to the commutant `p M_m(M) p` of `H`.
    pub fn left_commutant_action(&self, x: &BlockMatrix) -> Result<CMatrix> {
        let p = self.left_factor.projection();
        let cut = p.try_mul(x)?.try_mul(p)?;
        self.action(|v| cut.try_mul(v))
    }

    /// Matrix of the right action of `y ∈ M_{m'}(M)` cut down to `q M_{m'}(M) q`.
    pub fn right_commutant_action(&self, y: &BlockMatrix) -> Result<CMatrix> {
        let q = self.right_factor.projection();
        let cut = q.try_mul(y)?.try_mul(q)?;
        self.action(|v| v.try_mul(&cut))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::functional_from_density;
    use crate::gns::StandardForm;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(blocks: &[usize]) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::new(blocks).unwrap()
    }

    #[test]
    fn tracial_rtp_is_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = alg(&[2, 3]);
        let tr = PositiveFunctional::trace(&a);
        let xi = random::element(&mut rng, &a);
        let eta = random::element(&mut rng, &a);
        assert!(rtp_vector(&tr, &xi, &eta).unwrap().distance(&(&xi * &eta)) < 1e-14);
    }

    #[test]
    fn rtp_vector_hand_example() {
        let m2 = alg(&[2]);
        let phi = functional_from_density(&m2, BlockMatrix::diagonal(&[&[4.0, 1.0]])).unwrap();
        let out = rtp_vector(&phi, &m2.matrix_unit(0, 0, 0), &m2.matrix_unit(0, 0, 1)).unwrap();
        assert!(out.distance(&m2.matrix_unit(0, 0, 1).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn rtp_vector_domain_error() {
        let m2 = alg(&[2]);
        let phi = functional_from_density(&m2, BlockMatrix::diagonal(&[&[1.0, 0.0]])).unwrap();
        let r = rtp_vector(&phi, &m2.matrix_unit(0, 0, 1), &m2.identity());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn inner_product_unit_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = alg(&[3]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let root = phi.sqrt_density().clone();
        let eta = random::element(&mut rng, &a);
        let ip = rtp_inner_product(&phi, &root, &eta, &root, &eta).unwrap();
        assert!((ip - linalg::c(eta.hs_norm_sqr())).norm() < 1e-12);
    }

    #[test]
    fn inner_product_matches_hs_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = alg(&[3]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        for _ in 0..20 {
            let v: Vec<BlockMatrix> = (0..4).map(|_| random::element(&mut rng, &a)).collect();
            let ip = rtp_inner_product(&phi, &v[0], &v[1], &v[2], &v[3]).unwrap();
            let direct = rtp_vector(&phi, &v[0], &v[1])
                .unwrap()
                .hs_inner(&rtp_vector(&phi, &v[2], &v[3]).unwrap())
                .unwrap();
            assert!((ip - direct).norm() < 1e-10);
        }
    }

    #[test]
    fn inner_product_of_block_disjoint_vectors_vanishes() {
        let a = alg(&[2, 2]);
        let tr = PositiveFunctional::trace(&a);
        let xi1 = a.matrix_unit(0, 0, 1);
        let xi2 = a.matrix_unit(1, 1, 0);
        let eta = a.identity();
        assert_eq!(
            rtp_inner_product(&tr, &xi1, &eta, &xi2, &eta).unwrap(),
            linalg::ZERO
        );
    }

    #[test]
    fn cocycle_examples() {
        let m2 = alg(&[2]);
        let phi = functional_from_density(&m2, BlockMatrix::diagonal(&[&[4.0, 1.0]])).unwrap();
        let same = change_of_weight(&phi, &phi).unwrap();
        assert!(same.element().distance(&m2.identity()) < 1e-14);
        let tr = PositiveFunctional::trace(&m2);
        let c = change_of_weight(&phi, &tr).unwrap();
        assert!(c.element().distance(&BlockMatrix::diagonal(&[&[0.5, 1.0]])) < 1e-15);
        let singular = functional_from_density(&m2, BlockMatrix::diagonal(&[&[1.0, 0.0]])).unwrap();
        assert!(change_of_weight(&singular, &tr).is_err());
    }

    #[test]
    fn cocycle_hermiticity_depends_on_commutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = alg(&[3]);
        let h = random::faithful_density(&mut rng, &a);
        // g = h² commutes with h
        let phi = functional_from_density(&a, h.clone()).unwrap();
        let commuting = functional_from_density(&a, &h * &h).unwrap();
        let c = change_of_weight(&phi, &commuting).unwrap();
        assert!(c.is_hermitian(1e-10));
        assert!(crate::spectral(c.element()).unwrap().min_eigenvalue() > 0.0);
        let other = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        assert!(!change_of_weight(&phi, &other).unwrap().is_hermitian(1e-6));
    }

    #[test]
    fn cocycle_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = alg(&[2, 3]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let psi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let c = change_of_weight(&phi, &psi).unwrap();
        for _ in 0..10 {
            let xi = random::element(&mut rng, &a);
            let eta = random::element(&mut rng, &a);
            let lhs = rtp_vector(&psi, &c.convert(&xi).unwrap(), &eta).unwrap();
            assert!(lhs.distance(&rtp_vector(&phi, &xi, &eta).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn balancing_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = alg(&[2, 2]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let tr = PositiveFunctional::trace(&a);
        let h = phi.density().clone();
        // centralizer element: a polynomial in h
        let central = &(&h * &h) + &h.scale(C64::new(0.0, 2.0));
        for _ in 0..10 {
            let xi = random::element(&mut rng, &a);
            let eta = random::element(&mut rng, &a);
            let m = random::element(&mut rng, &a);
            let close =
                |l: &BlockMatrix, r: &BlockMatrix| l.distance(r) < 1e-10 * (1.0 + l.hs_norm());
            let lhs = rtp_vector(&phi, &(&xi * &m), &eta).unwrap();
            let twisted = balancing_twist(&phi, &m).unwrap();
            assert!(close(
                &lhs,
                &rtp_vector(&phi, &xi, &(&twisted * &eta)).unwrap()
            ));
            // on symbols x = ξ h^{-1/2} the relation is literal
            let x = &xi * phi.inverse_sqrt_density();
            let via_symbol = rtp_vector(&phi, &(&(&x * &m) * phi.sqrt_density()), &eta).unwrap();
            assert!(close(
                &via_symbol,
                &rtp_vector(&phi, &xi, &(&m * &eta)).unwrap()
            ));
            assert!(close(
                &rtp_vector(&phi, &(&xi * &central), &eta).unwrap(),
                &rtp_vector(&phi, &xi, &(&central * &eta)).unwrap()
            ));
            assert!(close(
                &rtp_vector(&tr, &(&xi * &m), &eta).unwrap(),
                &rtp_vector(&tr, &xi, &(&m * &eta)).unwrap()
            ));
        }
    }

    #[test]
    fn naive_balancing_fails_off_the_centralizer() {
        let m2 = alg(&[2]);
        let phi = functional_from_density(&m2, BlockMatrix::diagonal(&[&[4.0, 1.0]])).unwrap();
        let (xi, eta, e12) = (m2.identity(), m2.identity(), m2.matrix_unit(0, 0, 1));
        let lhs = rtp_vector(&phi, &(&xi * &e12), &eta).unwrap();
        let rhs = rtp_vector(&phi, &xi, &(&e12 * &eta)).unwrap();
        // h^{1/2} e12 h^{-1/2} = 2 e12
        assert!(lhs.distance(&rhs.scale_real(2.0)) < 1e-15);
    }

    #[test]
    fn standard_form_normalization() {
        for n in 1..=3 {
            let a = alg(&[n]);
            let space = rtp_module(
                &ConcreteModule::standard(&a, Side::Right),
                &ConcreteModule::standard(&a, Side::Left),
                &PositiveFunctional::trace(&a),
            )
            .unwrap();
            assert_eq!(space.dimension(), n * n);
            assert_eq!(space.expected_dimension(), n * n);
        }
    }

    #[test]
    fn absorption_by_standard_form() {
        let a = alg(&[2]);
        let h = ModuleClass::finite(&a, Side::Right, &[2]).unwrap();
        let k = ModuleClass::finite(&a, Side::Left, &[1]).unwrap();
        let space = rtp_module_from_classes(&h, &k, &PositiveFunctional::trace(&a)).unwrap();
        assert_eq!(space.dimension(), 2);
    }

    #[test]
    fn two_block_dimension_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = alg(&[2, 3]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let h = ModuleClass::finite(&a, Side::Right, &[1, 2]).unwrap();
        let k = ModuleClass::finite(&a, Side::Left, &[3, 1]).unwrap();
        let space = rtp_module_from_classes(&h, &k, &phi).unwrap();
        assert_eq!(space.dimension(), 5);
        assert_eq!(space.expected_dimension(), 5);
    }

    #[test]
    fn infinite_class_is_unsupported() {
        let a = alg(&[2]);
        let h = ModuleClass::infinite(&a, Side::Right);
        let k = ModuleClass::finite(&a, Side::Left, &[1]).unwrap();
        let r = rtp_module_from_classes(&h, &k, &PositiveFunctional::trace(&a));
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn wrong_sides_rejected() {
        let a = alg(&[2]);
        let l = ConcreteModule::standard(&a, Side::Left);
        assert!(matches!(
            rtp_module(&l, &l, &PositiveFunctional::trace(&a)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn non_faithful_restriction() {
        let a = alg(&[2, 2]);
        // support only in the first block
        let phi = functional_from_density(&a, BlockMatrix::diagonal(&[&[1.0, 0.0], &[0.0, 0.0]]))
            .unwrap();
        let h = ConcreteModule::standard(&a, Side::Right);
        let k = ConcreteModule::standard(&a, Side::Left);
        let space = rtp_module(&h, &k, &phi).unwrap();
        assert!(space.is_restricted());
        assert_eq!(space.dimension(), 4);
        assert_eq!(space.expected_dimension(), 4);
        // explicit vector outside H s(φ)
        assert!(matches!(
            space.tensor(&a.matrix_unit(0, 0, 1), &a.identity()),
            Err(Error::Domain(_))
        ));
        assert!(space.contains(
            &space
                .tensor(&a.matrix_unit(0, 0, 0), &a.identity())
                .unwrap()
        ));
    }

    #[test]
    fn standard_form_commutant_actions_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = alg(&[3]);
        let space = rtp_module(
            &ConcreteModule::standard(&a, Side::Right),
            &ConcreteModule::standard(&a, Side::Left),
            &functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap(),
        )
        .unwrap();
        // unitary from carrier coordinates to matrix-unit coordinates
        let u = linalg::from_columns(
            9,
            &space
                .basis()
                .iter()
                .map(|b| b.flatten())
                .collect::<Vec<_>>(),
        );
        let sf = StandardForm::new(&a);
        let x = random::element(&mut rng, &a);
        let left = space.left_commutant_action(&x).unwrap();
        assert!(
            linalg::frobenius(&(&u * left * u.adjoint() - sf.left_action_matrix(&x).unwrap()))
                < 1e-10
        );
        let right = space.right_commutant_action(&x).unwrap();
        assert!(
            linalg::frobenius(&(&u * right * u.adjoint() - sf.right_action_matrix(&x).unwrap()))
                < 1e-10
        );
    }

    #[test]
    fn weight_independence_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a = alg(&[2, 1]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let psi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let h = ModuleClass::finite(&a, Side::Right, &[2, 1]).unwrap();
        let k = ModuleClass::finite(&a, Side::Left, &[1, 2]).unwrap();
        let sp = rtp_module_from_classes(&h, &k, &phi).unwrap();
        let sq = rtp_module_from_classes(&h, &k, &psi).unwrap();
        assert_eq!(sp.dimension(), sq.dimension());
        // map ξ ⊗_φ η ↦ (ξ c) ⊗_ψ η, expressed between the two carrier bases
        let c = change_of_weight(&phi, &psi).unwrap();
        let hm = sp.left_factor().clone();
        let km = sp.right_factor().clone();
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        for xi in hm.basis() {
            for eta in km.basis() {
                sources.push(rtp_vector(&phi, &xi, &eta).unwrap());
                targets.push(rtp_vector(&psi, &c.convert(&xi).unwrap(), &eta).unwrap());
            }
        }
        for (s, t) in sources.iter().zip(&targets) {
            assert!(s.distance(t) < 1e-9);
        }
        let d = sp.dimension();
        let mut map = CMatrix::zeros(d, d);
        for (i, bi) in sq.basis().iter().enumerate() {
            for (j, bj) in sp.basis().iter().enumerate() {
                map[(i, j)] = bj.hs_inner(bi).unwrap();
            }
        }
        assert!(linalg::frobenius(&(map.adjoint() * &map - CMatrix::identity(d, d))) < 1e-9);
    }

    #[test]
    fn contragredient_of_standard_form() {
        // H̄ represented by entrywise conjugates ζ = conj(ξ); ζ ↦ ζᵀ = ξ* turns
        // n ζ m = conj(m* ξ n*) into n ξ* m, so H̄ ≅ L²(M) as a right module.
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = alg(&[2, 3]);
        let phi = functional_from_density(&a, random::faithful_density(&mut rng, &a)).unwrap();
        let xi = random::element(&mut rng, &a);
        let (n, m) = (random::element(&mut rng, &a), random::element(&mut rng, &a));
        let zeta = xi.conj();
        let acted = (&(&m.adjoint() * &xi) * &n.adjoint()).conj();
        assert!(
            acted
                .transpose()
                .distance(&(&(&n * &zeta.transpose()) * &m))
                < 1e-12
        );
        let bar: Vec<BlockMatrix> = ConcreteModule::standard(&a, Side::Left)
            .basis()
            .iter()
            .map(|b| b.conj().transpose())
            .collect();
        let cands = bar
            .iter()
            .flat_map(|x| {
                ConcreteModule::standard(&a, Side::Left)
                    .basis()
                    .into_iter()
                    .map(move |y| (x.clone(), y))
            })
            .map(|(x, y)| rtp_vector(&phi, &x, &y).unwrap().flatten())
            .collect();
        assert_eq!(linalg::span_rank(cands, SPAN_RTOL), a.dim());
    }
}
