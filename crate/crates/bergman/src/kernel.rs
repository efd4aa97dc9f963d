//! Exact evaluation and Hilbert-space algebra on finite spans of
//! reproducing kernels.
//!
//! The kernel of `A²_ℓ(Π⁺)` at `z` is `K_z(x) = 2^ℓ(1+ℓ)/(x + conj(z))^{ℓ+2}`
//! and satisfies `⟨h, K_z⟩ = h(z)`. Inner products of spans therefore reduce
//! to kernel evaluations; nothing in this module integrates anything. The
//! quadrature module re-derives these values from the area integral as an
//! independent check.

use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::num::cpowu;
use crate::types::{HalfPlanePoint, KernelSpan, WeightIndex};

/// `K_z(x) = 2^ℓ(1+ℓ)/(x + conj(z))^{ℓ+2}`.
///
/// Both points lie strictly in the half-plane, so `Re(x + conj(z)) > 0` and
/// the denominator never vanishes.
pub fn kernel_eval(ell: WeightIndex, z: HalfPlanePoint, x: HalfPlanePoint) -> Complex64 {
    kernel_eval_complex(ell, z.value(), x.value())
}

/// Kernel evaluation on raw complex values; callers guarantee
/// `Re(x + conj(z)) > 0`.
pub fn kernel_eval_complex(ell: WeightIndex, z: Complex64, x: Complex64) -> Complex64 {
    ell.kernel_constant() / cpowu(x + z.conj(), ell.exponent())
}

/// `h(x)` for a span `h = Σ cᵢ K_{zᵢ}`; the empty span evaluates to 0.
pub fn span_eval(h: &KernelSpan, x: HalfPlanePoint) -> Complex64 {
    span_eval_complex(h, x.value())
}

pub fn span_eval_complex(h: &KernelSpan, x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in h.terms() {
        acc += t.coeff * kernel_eval_complex(h.ell(), t.point.value(), x);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpanError {
    /// The two spans carry different weight indices.
    WeightMismatch { lhs: u32, rhs: u32 },
    /// `⟨h,h⟩` came out with an imaginary residue above the allowed bound.
    NumericalInconsistency { residue: f64, bound: f64 },
}

impl fmt::Display for SpanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanError::WeightMismatch { lhs, rhs } => {
                write!(f, "weight index mismatch: {lhs} vs {rhs}")
            }
            SpanError::NumericalInconsistency { residue, bound } => {
                write!(f, "norm^2 imaginary residue {residue:e} exceeds {bound:e}")
            }
        }
    }
}

impl core::error::Error for SpanError {}

/// Exact inner product `⟨h₁, h₂⟩ = Σᵢⱼ cᵢ conj(dⱼ) K_{zᵢ}(wⱼ)`.
///
/// Reproduces evaluation through `⟨h, K_z⟩ = h(z)` by the same arithmetic
/// path, which is what the reproducing-property tests pin down.
pub fn inner_product(h1: &KernelSpan, h2: &KernelSpan) -> Result<Complex64, SpanError> {
    if h1.ell() != h2.ell() {
        return Err(SpanError::WeightMismatch {
            lhs: h1.ell().0,
            rhs: h2.ell().0,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for s in h1.terms() {
        for t in h2.terms() {
            acc += s.coeff * t.coeff.conj() * kernel_eval(h1.ell(), s.point, t.point);
        }
    }
    Ok(acc)
}

/// `‖h‖ = sqrt(Re⟨h,h⟩)`.
///
/// The imaginary residue of `⟨h,h⟩` must stay below `1e-14` of the term
/// magnitude of the double sum; a larger residue means the span invariants
/// were violated upstream.
pub fn bergman_norm(h: &KernelSpan) -> Result<f64, SpanError> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0f64;
    for s in h.terms() {
        for t in h.terms() {
            let term = s.coeff * t.coeff.conj() * kernel_eval(h.ell(), s.point, t.point);
            acc += term;
            mass += term.norm();
        }
    }
    let bound = 1e-14 * mass.max(f64::MIN_POSITIVE);
    if acc.im.abs() > bound {
        return Err(SpanError::NumericalInconsistency {
            residue: acc.im.abs(),
            bound,
        });
    }
    // Tiny negative real parts are roundoff from cancellation.
    if acc.re < 0.0 {
        if acc.re.abs() > bound {
            return Err(SpanError::NumericalInconsistency {
                residue: acc.re.abs(),
                bound,
            });
        }
        return Ok(0.0);
    }
    Ok(acc.re.sqrt())
}

/// Closed-form `‖K_z‖² = 2^ℓ(1+ℓ)/(2 Re z)^{ℓ+2}`.
pub fn kernel_norm_sq(ell: WeightIndex, z: HalfPlanePoint) -> f64 {
    ell.kernel_constant() / (2.0 * z.value().re).powi(ell.exponent() as i32)
}

/// Structural distance between two spans, relative to their coefficient
/// scale.
///
/// Terms are paired by nearest point; the residual is the largest relative
/// coefficient or point discrepancy, with unpaired terms counting at full
/// weight. This is strict where a norm of the difference would lose half
/// the significant digits to cancellation.
pub fn span_residual(lhs: &KernelSpan, rhs: &KernelSpan) -> f64 {
    let scale = lhs
        .coeff_scale()
        .max(rhs.coeff_scale())
        .max(f64::MIN_POSITIVE);
    let mut residual = 0.0f64;
    let mut used = alloc::vec![false; rhs.terms().len()];
    for s in lhs.terms() {
        let zs = s.point.value();
        let mut best: Option<(usize, f64)> = None;
        for (j, t) in rhs.terms().iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (t.point.value() - zs).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= 1e-3 * 1.0f64.max(zs.norm()) => {
                used[j] = true;
                let t = &rhs.terms()[j];
                residual = residual
                    .max(d / 1.0f64.max(zs.norm()))
                    .max((s.coeff - t.coeff).norm() / scale);
            }
            _ => residual = residual.max(s.coeff.norm() / scale),
        }
    }
    for (j, t) in rhs.terms().iter().enumerate() {
        if !used[j] {
            residual = residual.max(t.coeff.norm() / scale);
        }
    }
    residual
}
