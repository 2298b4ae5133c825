//! Exterior algebra on flat ℝ^m and holonomy-group decompositions of 2-forms,
//! with rotability classification of constant-coefficient Hermitian-Yang-Mills
//! curvature models on unit-volume flat tori.
//!
//! # Conventions
//!
//! Every module in this crate uses the following conventions; they are fixed
//! here once and nowhere else.
//!
//! * Coordinates are orthonormal and the orientation is `dx_1 ∧ … ∧ dx_m`.
//! * Basis monomials `dx_S` (S a strictly increasing index set) are declared
//!   orthonormal. Consequently `|ω_J|² = m/2` for the Kähler form of any
//!   orthogonal complex structure `J` (norm 2 on ℝ⁸).
//! * A complex structure is an orthogonal matrix `J` with `J² = −Id`; its
//!   Kähler form is `ω(x, y) = ⟨Jx, y⟩`.
//! * Contraction with `ω_J` is `Λ_J a = ⟨a, ω_J⟩`, so `Λ_J ω_J = m/2`
//!   (no unit normalization). `hym_check` reports λ′ in this convention.
//! * Matrix-valued forms take values in anti-hermitian r×r matrices; the
//!   inner product on coefficients is the Killing pairing `⟨B, C⟩ = −Tr(BC)`,
//!   which on anti-hermitian matrices equals the Frobenius pairing.
//! * The flat torus ℝ^m/ℤ^m has unit volume, so cup-product integrals of
//!   constant forms are plain top-degree coefficients (`top_coefficient`).
//!
//! Core math is generic over the scalar type via [`Real`] (f32/f64); the
//! `*64` aliases below are the concrete types the CLI and the serialized
//! formats use.

pub mod error;
pub mod exterior;
pub mod k3_product;
pub mod kahler;
pub mod linalg;
pub mod matrix_form;
pub mod models;
pub mod quaternionic;
pub mod sampling;
pub mod scalar;
pub mod spin7;
pub mod verification;

pub use error::{Error, Result};
pub use exterior::{FormIndex, KForm};
pub use kahler::ComplexStructure;
pub use matrix_form::{CMatrix, MatrixValuedForm};
pub use scalar::Real;

/// Default tolerances (relative unless stated otherwise).
pub mod tols {
    /// Default relative tolerance for residual checks.
    pub const DEFAULT: f64 = 1e-9;
    /// Equality-detection threshold for calibration sweeps; looser than
    /// `DEFAULT` because the functionals aggregate many wedge terms.
    pub const EQUALITY: f64 = 1e-7;
    /// Eigenvalue cutoff for integer rank counting of projectors.
    pub const RANK_CUTOFF: f64 = 1e-8;
    /// Reconstruction residual bound for orthogonal decompositions.
    pub const RECONSTRUCTION: f64 = 1e-10;
    /// Principal-angle bound for subspace equality tests.
    pub const PRINCIPAL_ANGLE: f64 = 1e-8;
}

pub type KForm64 = KForm<f64>;
pub type MatrixValuedForm64 = MatrixValuedForm<f64>;
pub type ComplexStructure64 = ComplexStructure<f64>;
pub type QuaternionicTriple64 = quaternionic::QuaternionicTriple<f64>;
pub type SU4Structure64 = spin7::SU4Structure<f64>;
pub type ProductStructure64 = k3_product::ProductStructure<f64>;
pub type CurvatureModel64 = models::CurvatureModel<f64>;
