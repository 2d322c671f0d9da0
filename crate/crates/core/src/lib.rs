//! Relative tensor products over finite-dimensional von Neumann algebras.
//!
//! Every finite-dimensional von Neumann algebra is a multi-matrix algebra
//! `M_{n_1} ⊕ … ⊕ M_{n_K}`. This crate realizes, for such algebras, the GNS
//! construction and standard form, the classification of modules by
//! multiplicity vectors, the vector-level relative tensor product
//! `ξ ⊗_φ η = (ξ φ^{-1/2}) η`, its module-level span, correspondences as
//! integer multiplicity matrices (composition, contragredient, Morita
//! equivalence, index), and numerical certificates for the norm of the
//! tensor-lift map.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod analysis;
pub mod correspondences;
mod error;
pub mod gns;
pub mod linalg;
pub mod modules;
pub mod random;
pub mod rtp;

pub use algebra::{
    functional_from_density, spectral, AlgebraElement, BlockMatrix, HsVector, MultiMatrixAlgebra,
    PositiveFunctional, SpectralData,
};
pub use error::{Error, Result};
pub use linalg::{rank_rtol, set_rank_rtol, CMatrix, C64};
