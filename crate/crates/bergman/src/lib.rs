//! Exact computation with weighted composition operators on the weighted
//! Bergman space of the open right half-plane.
//!
//! The space `A²_ℓ(Π⁺)` carries the reproducing kernel
//! `K_z(x) = 2^ℓ(1+ℓ)/(x + conj(z))^{ℓ+2}`, and every operator this crate
//! works with maps finite spans of kernels to finite spans of kernels.
//! That closure property is what makes the whole toolkit exact: operators,
//! adjoints and conjugations are evaluated by span rewriting, never by
//! numerical integration. A separate quadrature oracle re-derives the same
//! inner products from the defining area integral so each identity can be
//! certified by two independent routes.
//!
//! Module map:
//! - [`types`]: weight index, half-plane points, Möbius maps, symbol pairs
//!   and kernel spans.
//! - [`kernel`]: kernel evaluation and the exact Hilbert-space algebra.
//! - [`maps`]: the half-plane self-map criterion, fixed points, Cayley
//!   transform and Denjoy–Wolff iteration.
//! - [`operators`]: weighted composition operators on spans, adjoints,
//!   conjugations, boundedness predicates.
//! - [`classify`]: membership tests for the hermitian / unitary / conjugate-
//!   selfadjoint families and the structural consequences.
//! - [`quadrature`]: adaptive two-dimensional quadrature over the half-plane
//!   with certified truncation error, used as an independent oracle.
//! - [`lebesgue`]: the Laplace-transform bridge to the weighted Lebesgue
//!   space on the positive half-line.
//! - [`sampling`]: deterministic counter-based sampling for reproducible
//!   probe points and parameter draws.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classify;
pub mod kernel;
pub mod lebesgue;
pub mod maps;
pub mod operators;
pub mod quadrature;
pub mod sampling;
pub mod types;

pub use num_complex::Complex64;

pub use types::{
    HalfPlanePoint, KernelSpan, KernelTerm, MapSymbol, MoebiusMap, SymbolPair, WeightIndex,
    WeightSymbol,
};

/// Relative tolerance for parameter equality and membership tests.
///
/// Double-precision parameters supplied through JSON cannot support tighter
/// matching; every coefficient comparison in the crate goes through this
/// constant scaled by the magnitudes involved.
pub const EPS_PARAM: f64 = 1e-10;

/// Three-way outcome of a banded inequality test.
///
/// Strict/non-strict boundaries in the family conditions are meaningful, so
/// values within `EPS_PARAM` of a boundary are reported as `Boundary` rather
/// than silently classified on either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Below,
    Boundary,
    Above,
}

/// Classifies `x` against 0 with a two-sided band of half-width `eps`.
pub fn band(x: f64, eps: f64) -> Band {
    if x > eps {
        Band::Above
    } else if x < -eps {
        Band::Below
    } else {
        Band::Boundary
    }
}

pub(crate) mod num {
    use num_complex::Complex64;

    /// Integer power by binary exponentiation.
    ///
    /// Kernel exponents are always the integer `ℓ+2`, and integer powers keep
    /// the multiplicativity `(xy)^n = x^n y^n` exact, so no power in this
    /// crate ever goes through `log`/`exp` and its branch cut.
    pub fn cpowu(base: Complex64, exp: u32) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut b = base;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc *= b;
            }
            b *= b;
            e >>= 1;
        }
        acc
    }

    /// `base^{-exp}` for nonzero `base`.
    pub fn cpowu_neg(base: Complex64, exp: u32) -> Complex64 {
        cpowu(base, exp).inv()
    }

    pub fn magnitude(values: &[Complex64]) -> f64 {
        let mut m = 0.0f64;
        for v in values {
            m = m.max(v.norm());
        }
        m
    }

    /// Relative complex equality: `|x - y| <= eps * max(1, |x|, |y|)`.
    pub fn approx_eq(x: Complex64, y: Complex64, eps: f64) -> bool {
        (x - y).norm() <= eps * 1.0f64.max(x.norm()).max(y.norm())
    }

    /// Relative distance used in residual reports.
    pub fn rel_dist(x: Complex64, y: Complex64) -> f64 {
        (x - y).norm() / 1.0f64.max(x.norm()).max(y.norm())
    }

    pub fn is_real(x: Complex64, eps: f64) -> bool {
        x.im.abs() <= eps * 1.0f64.max(x.norm())
    }
}
