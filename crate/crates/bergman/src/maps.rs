//! Analytic self-map machinery for the right half-plane: the closed-form
//! self-map criterion for linear fractional maps, a grid falsifier that
//! cross-checks it, fixed points, the Cayley transform and Denjoy–Wolff
//! iteration.
//!
//! A non-affine map is analyzed through its decomposition
//! `φ(z) = -p - q/(z - u)`. Writing subscripts 1/2 for real and imaginary
//! parts, `φ` maps `Π⁺` into itself exactly when
//!
//! - either `Re p = Im q = 0`, `Re q < 0`, `Re u ≤ 0`, or
//! - `Re p < 0` and `Re u ≤ (Re q + |q|)/(2 Re p)`.
//!
//! Affine maps `z ↦ uz + v` are self-maps exactly when `u > 0` is real and
//! `Re v ≥ 0`, or `u = 0` and `v` is interior. The classification modules
//! delegate every admissibility side condition to this single predicate
//! instead of re-transcribing per-family inequality lists, and the grid
//! falsifier guards the predicate itself.

use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::num::magnitude;
use crate::types::{DomainError, HalfPlanePoint, MapSymbol, MoebiusMap};
use crate::{band, Band, EPS_PARAM};

/// Which clause of the self-map criterion decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfMapBranch {
    /// Affine clause (`c = 0`, including constant maps).
    AffineBranch,
    /// `Re p = Im q = 0, Re q < 0, Re u ≤ 0`.
    SpecialBranch1,
    /// `Re p < 0 ≤ -Re u + (Re q + |q|)/(2 Re p)`.
    SpecialBranch2,
    /// A deciding quantity sits within the `EPS_PARAM` band of a strict/
    /// non-strict boundary; the verdict is reported but not certified.
    Boundary,
}

/// Outcome of [`self_map_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfMapVerdict {
    pub is_self_map: bool,
    pub branch: SelfMapBranch,
    /// Interior point whose image has `Re ≤ EPS_PARAM`; present exactly when
    /// `is_self_map` is false.
    pub witness: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapsError {
    DegenerateMap,
    IdentityMap,
    /// The closed-form predicate and the grid falsifier disagree.
    InternalInconsistency {
        predicate: bool,
        counterexample: Option<Complex64>,
    },
    PreconditionViolation(&'static str),
    Divergent { iterations: usize },
    Domain(DomainError),
}

impl fmt::Display for MapsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapsError::DegenerateMap => write!(f, "degenerate map"),
            MapsError::IdentityMap => write!(f, "identity map: every point is fixed"),
            MapsError::InternalInconsistency { predicate, counterexample } => write!(
                f,
                "self-map predicate ({predicate}) contradicts the grid falsifier ({counterexample:?})"
            ),
            MapsError::PreconditionViolation(why) => write!(f, "precondition violated: {why}"),
            MapsError::Divergent { iterations } => {
                write!(f, "iteration did not converge after {iterations} steps")
            }
            MapsError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MapsError {}

impl From<DomainError> for MapsError {
    fn from(e: DomainError) -> Self {
        MapsError::Domain(e)
    }
}

/// Closed-form self-map verdict for a composition symbol.
pub fn self_map_check(g: &MapSymbol) -> SelfMapVerdict {
    match g {
        MapSymbol::Constant(v) => affine_verdict(Complex64::new(0.0, 0.0), *v),
        MapSymbol::Moebius(m) => match m.as_affine() {
            Some((u, v)) => affine_verdict(u, v),
            None => {
                let sf = m.special_form().expect("non-affine map has a special form");
                special_verdict(sf.p, sf.q, sf.u)
            }
        },
    }
}

/// Outcome of one banded condition: whether it holds and whether the value
/// sat inside the ambiguity band.
#[derive(Clone, Copy)]
struct Cond {
    holds: bool,
    flagged: bool,
}

/// Closed condition `x ≥ 0`: values violated by less than the band width are
/// admitted by closure but flagged.
fn cond_nonneg(x: f64, eps: f64) -> Cond {
    match band(x, eps) {
        Band::Above => Cond { holds: true, flagged: false },
        Band::Boundary => Cond { holds: true, flagged: x < 0.0 },
        Band::Below => Cond { holds: false, flagged: false },
    }
}

/// Strict condition `x < 0`: the verdict follows the literal sign, but any
/// value inside the band is flagged as near-degenerate.
fn cond_strict_neg(x: f64, eps: f64) -> Cond {
    match band(x, eps) {
        Band::Below => Cond { holds: true, flagged: false },
        Band::Boundary => Cond { holds: x < 0.0, flagged: true },
        Band::Above => Cond { holds: false, flagged: false },
    }
}

fn affine_verdict(u: Complex64, v: Complex64) -> SelfMapVerdict {
    let scale_u = 1.0f64.max(u.norm());
    let scale_v = 1.0f64.max(v.norm());
    let u_real = u.im.abs() <= EPS_PARAM * scale_u;
    let u_zero = u.norm() <= EPS_PARAM * scale_u;

    let (ok, flagged) = if u_zero {
        // Constant map: the value must be interior (strict).
        let c = cond_strict_neg(-v.re, EPS_PARAM * scale_v);
        (c.holds, c.flagged)
    } else if !u_real {
        (false, false)
    } else {
        // u > 0 strict, Re v >= 0 closed.
        let slope = cond_strict_neg(-u.re, EPS_PARAM * scale_u);
        let shift = cond_nonneg(v.re, EPS_PARAM * scale_v);
        (slope.holds && shift.holds, slope.flagged || (slope.holds && shift.flagged))
    };

    SelfMapVerdict {
        is_self_map: ok,
        branch: if flagged {
            SelfMapBranch::Boundary
        } else {
            SelfMapBranch::AffineBranch
        },
        witness: if ok {
            None
        } else {
            Some(affine_witness(u, v, u_real, u_zero))
        },
    }
}

fn affine_witness(u: Complex64, v: Complex64, u_real: bool, u_zero: bool) -> Complex64 {
    if u_zero {
        // Constant with Re v <= 0: every point witnesses.
        return Complex64::new(1.0, 0.0);
    }
    if !u_real {
        // Push the image down the imaginary slope: z = 1 + iT.
        let t = (u.re + v.re.max(0.0) + 1.0) / u.im;
        return Complex64::new(1.0, t);
    }
    if u.re < 0.0 {
        let z1 = 1.0f64.max((v.re + 1.0) / -u.re);
        return Complex64::new(z1, 0.0);
    }
    // u > 0 real, Re v < 0: squeeze toward the boundary.
    Complex64::new(-v.re / (2.0 * u.re), 0.0)
}

fn special_verdict(p: Complex64, q: Complex64, u: Complex64) -> SelfMapVerdict {
    let scale_p = 1.0f64.max(p.norm());
    let scale_q = 1.0f64.max(q.norm());
    let scale_u = 1.0f64.max(u.norm());

    let (ok, flagged, branch) = match band(p.re, EPS_PARAM * scale_p) {
        Band::Boundary => {
            // Branch 1 with p treated as purely imaginary:
            // Im q = 0, Re q < 0, Re u <= 0.
            let q_real = q.im.abs() <= EPS_PARAM * scale_q;
            let neg_q = cond_strict_neg(q.re, EPS_PARAM * scale_q);
            let u_left = cond_nonneg(-u.re, EPS_PARAM * scale_u);
            let ok = q_real && neg_q.holds && u_left.holds;
            let flagged = q_real && (neg_q.flagged || (neg_q.holds && u_left.flagged));
            (ok, flagged, SelfMapBranch::SpecialBranch1)
        }
        Band::Below => {
            // Branch 2: slack = -Re u + (Re q + |q|)/(2 Re p) >= 0, with the
            // exact-equality edge flagged rather than silently admitted.
            let slack = -u.re + (q.re + q.norm()) / (2.0 * p.re);
            let eps = EPS_PARAM * scale_u.max(scale_q / scale_p);
            let ok = slack >= -eps;
            let flagged = slack.abs() <= eps;
            (ok, flagged, SelfMapBranch::SpecialBranch2)
        }
        Band::Above => (false, false, SelfMapBranch::SpecialBranch2),
    };

    SelfMapVerdict {
        is_self_map: ok,
        branch: if flagged { SelfMapBranch::Boundary } else { branch },
        witness: if ok { None } else { Some(special_witness(p, q, u)) },
    }
}

/// Constructs an interior point whose image leaves the half-plane.
///
/// Follows the case analysis of the criterion: each violated clause yields an
/// explicit direction in which `Re φ` drops below `EPS_PARAM`.
fn special_witness(p: Complex64, q: Complex64, u: Complex64) -> Complex64 {
    let scale_p = 1.0f64.max(p.norm());
    let re_p = band(p.re, EPS_PARAM * scale_p);

    let witness = if re_p == Band::Above {
        // Far along the real axis the map tends to -p.
        let r = 1.0f64
            .max(1.0 - u.re)
            .max(10.0 * (q.re.abs() + 1.0) / p.re);
        Complex64::new(u.re + r, u.im)
    } else if re_p == Band::Boundary {
        let x = if u.re <= 0.0 { 1.0f64.max(-u.re + 1.0) } else { 1.0 };
        if q.im.abs() > EPS_PARAM * 1.0f64.max(q.norm()) {
            // Im q != 0: push along the imaginary direction.
            let a = q.re * x;
            let t = a.abs() / q.im.abs() + 1.0 + x;
            Complex64::new(u.re + x, u.im + q.im.signum() * t)
        } else if q.re > 0.0 {
            Complex64::new(u.re + x, u.im)
        } else {
            // Re q < 0 but Re u > 0: probe between the pole and the axis.
            Complex64::new(u.re / 2.0, u.im)
        }
    } else {
        // Re p < 0 with the slack inequality violated: the image disk
        // protrudes; take the midpoint of the protruding interval at the
        // minimizing imaginary offset.
        let s = u.re - q.re / (2.0 * p.re);
        let m = -q.norm() / (2.0 * p.re);
        let lo = (s - m).max(0.0);
        let z1 = 0.5 * (lo + s + m);
        Complex64::new(z1, u.im - q.im / (2.0 * p.re))
    };
    debug_assert!(witness.re > 0.0, "witness must be interior");
    witness
}

/// Evaluates `g` on a 100×100 log-spaced grid over `Re ∈ [1e-3, 1e3]`,
/// `Im ∈ ±[1e-3, 1e3]` and returns the first point whose image has
/// `Re ≤ 0`, skipping points on top of a pole.
pub fn grid_falsifier(g: &MapSymbol) -> Option<Complex64> {
    let pole = match g {
        MapSymbol::Moebius(m) => {
            let (_, _, c, d) = m.coeffs();
            if c.norm() > 0.0 { Some(-d / c) } else { None }
        }
        MapSymbol::Constant(_) => None,
    };
    let n_re = 100usize;
    let n_im = 50usize;
    let (lo, hi) = (1e-3f64, 1e3f64);
    let log_step_re = (hi / lo).ln() / (n_re - 1) as f64;
    let log_step_im = (hi / lo).ln() / (n_im - 1) as f64;
    for i in 0..n_re {
        let re = lo * (log_step_re * i as f64).exp();
        for j in 0..n_im {
            let im = lo * (log_step_im * j as f64).exp();
            for sign in [1.0, -1.0] {
                let z = Complex64::new(re, sign * im);
                if let Some(pole) = pole {
                    if (z - pole).norm() <= 1e-9 * 1.0f64.max(pole.norm()) {
                        continue;
                    }
                }
                if g.eval(z).re <= 0.0 {
                    return Some(z);
                }
            }
        }
    }
    None
}

/// Closed-form verdict cross-checked against the grid falsifier.
///
/// A non-boundary verdict that the grid contradicts is an internal
/// consistency error, never silently resolved in either direction.
pub fn self_map_check_certified(g: &MapSymbol) -> Result<SelfMapVerdict, MapsError> {
    let verdict = self_map_check(g);
    if verdict.branch == SelfMapBranch::Boundary {
        return Ok(verdict);
    }
    let counterexample = grid_falsifier(g);
    if verdict.is_self_map && counterexample.is_some() {
        return Err(MapsError::InternalInconsistency {
            predicate: true,
            counterexample,
        });
    }
    if !verdict.is_self_map {
        let w = verdict.witness.expect("false verdict carries a witness");
        let image_re = g.eval(w).re;
        if image_re > EPS_PARAM {
            return Err(MapsError::InternalInconsistency {
                predicate: false,
                counterexample: Some(w),
            });
        }
    }
    Ok(verdict)
}

/// Fixed points of a Möbius map, classified by their real part.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointReport {
    pub interior: Vec<HalfPlanePoint>,
    pub boundary_or_exterior: Vec<Complex64>,
}

/// Solves `c w² + (d - a) w - b = 0` and classifies the roots:
/// `Re > EPS_PARAM` interior, `|Re| ≤ EPS_PARAM` boundary, else exterior.
pub fn fixed_points(m: &MoebiusMap) -> Result<FixedPointReport, MapsError> {
    if m.is_identity() {
        return Err(MapsError::IdentityMap);
    }
    let (a, b, c, d) = m.coeffs();
    let scale = magnitude(&[a, b, c, d]);
    let mut roots: Vec<Complex64> = Vec::new();
    if c.norm() <= EPS_PARAM * scale {
        // Linear: (d - a) w = b.
        let slope = d - a;
        if slope.norm() > EPS_PARAM * scale {
            roots.push(b / slope);
        }
        // Translation: no finite fixed point.
    } else {
        let bq = d - a;
        let disc = (bq * bq + 4.0 * c * b).sqrt();
        // Pick the sign that avoids cancellation in -B ± sqrt(disc).
        let denom = if (-bq - disc).norm() >= (-bq + disc).norm() {
            -bq - disc
        } else {
            -bq + disc
        };
        if denom.norm() > 0.0 {
            let r1 = denom / (2.0 * c);
            roots.push(r1);
            let prod = -b / c;
            if r1.norm() > 0.0 {
                let r2 = prod / r1;
                if (r2 - r1).norm() > EPS_PARAM * 1.0f64.max(r1.norm()) {
                    roots.push(r2);
                }
            }
        } else {
            // disc = 0 and B = 0: double root at 0.
            roots.push(Complex64::new(0.0, 0.0));
        }
    }
    let mut report = FixedPointReport {
        interior: Vec::new(),
        boundary_or_exterior: Vec::new(),
    };
    for r in roots {
        if r.re > EPS_PARAM * 1.0f64.max(r.norm()) {
            let p = HalfPlanePoint::new(r)?;
            debug_assert!((m.eval(r) - r).norm() <= 1e-8 * (1.0 + r.norm()));
            report.interior.push(p);
        } else {
            report.boundary_or_exterior.push(r);
        }
    }
    Ok(report)
}

/// Cayley transform `γ(z) = (1 - z)/(1 + z)` from the open unit disk onto
/// the right half-plane.
pub fn cayley(z: Complex64) -> Result<HalfPlanePoint, DomainError> {
    if z.norm() >= 1.0 {
        return Err(DomainError::NotInDisk(z));
    }
    HalfPlanePoint::new((Complex64::new(1.0, 0.0) - z) / (Complex64::new(1.0, 0.0) + z))
}

/// Inverse Cayley transform; `γ` is an involution, so the formula is its own
/// inverse.
pub fn cayley_inv(p: HalfPlanePoint) -> Complex64 {
    let z = p.value();
    (Complex64::new(1.0, 0.0) - z) / (Complex64::new(1.0, 0.0) + z)
}

/// Result of a convergent Denjoy–Wolff iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DenjoyWolff {
    pub point: HalfPlanePoint,
    pub iterations: usize,
    /// Iterates, recorded when tracing is requested.
    pub trace: Vec<Complex64>,
}

/// Iterates `g` from `start` until successive iterates are within `tol`.
///
/// Preconditions: `g` is a self-map in the bounded composition form
/// `w ↦ μw + w₀` (`μ > 0` real, `Re w₀ ≥ 0`) and is not the identity. When
/// an interior fixed point exists the limit agrees with it within `10·tol`;
/// without one the iteration runs out of budget and reports divergence.
pub fn denjoy_wolff(
    m: &MoebiusMap,
    start: HalfPlanePoint,
    tol: f64,
    max_iter: usize,
    record_trace: bool,
) -> Result<DenjoyWolff, MapsError> {
    if m.is_identity() {
        return Err(MapsError::PreconditionViolation("identity map fixes every point"));
    }
    let verdict = self_map_check(&MapSymbol::Moebius(*m));
    if !verdict.is_self_map {
        return Err(MapsError::PreconditionViolation("not a self-map of the half-plane"));
    }
    let (mu, w0) = m
        .as_affine()
        .ok_or(MapsError::PreconditionViolation(
            "bounded composition operators require the affine form",
        ))?;
    if mu.im.abs() > EPS_PARAM * 1.0f64.max(mu.norm()) || mu.re <= 0.0 || w0.re < -EPS_PARAM {
        return Err(MapsError::PreconditionViolation(
            "bounded composition operators require mu > 0 and Re w0 >= 0",
        ));
    }

    let mut trace = Vec::new();
    let mut z = start.value();
    if record_trace {
        trace.push(z);
    }
    for n in 1..=max_iter {
        let next = m.eval(z);
        if record_trace {
            trace.push(next);
        }
        let step = (next - z).norm();
        z = next;
        if step <= tol {
            if z.re <= 0.0 {
                return Err(MapsError::Divergent { iterations: n });
            }
            let limit = HalfPlanePoint::new(z)?;
            // The limit must be a fixed point the quadratic solve also finds.
            if let Ok(report) = fixed_points(m) {
                if let Some(alpha) = report.interior.first() {
                    if (alpha.value() - z).norm() > 10.0 * tol * (1.0 + z.norm()) {
                        return Err(MapsError::InternalInconsistency {
                            predicate: true,
                            counterexample: Some(z),
                        });
                    }
                }
            }
            return Ok(DenjoyWolff {
                point: limit,
                iterations: n,
                trace,
            });
        }
    }
    Err(MapsError::Divergent {
        iterations: max_iter,
    })
}
