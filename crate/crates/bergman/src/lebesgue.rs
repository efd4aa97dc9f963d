//! The Laplace-transform bridge to the weighted Lebesgue space on the
//! positive half-line.
//!
//! With the transform convention `L(𝐡)(z) = ∫₀^∞ 𝐡(t) e^{-zt} dt`, the
//! kernel `K_z` is the transform of `(2^ℓ/ℓ!) t^{ℓ+1} e^{-t·conj(z)}`, and
//! the Bergman space is isometrically isomorphic to the space of
//! measurable functions with `∫ |𝐡(t)|² Γ(1+ℓ)/(2^ℓ t^{1+ℓ}) dt < ∞`.
//! Everything this module touches stays inside finite sums of exponential
//! monomials `c · t^{ℓ+1} e^{-rt}`, where norms, transforms and pulled-back
//! operators all have closed forms; the numeric half-line integrals exist
//! only to certify those closed forms independently.

use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::num::{cpowu, rel_dist};
use crate::operators::wco_apply;
use crate::quadrature::{integrate_halfline, QuadError, QuadResult, QuadratureConfig};
use crate::sampling::CounterRng;
use crate::types::{
    HalfPlanePoint, KernelSpan, MapSymbol, MoebiusMap, SymbolPair, WeightIndex, WeightSymbol,
};

/// One term `coeff · t^{ℓ+1} e^{-rate·t}` with `Re(rate) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialMonomial {
    pub coeff: Complex64,
    pub rate: Complex64,
}

/// Finite sum of exponential monomials sharing the weight index.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSum {
    ell: WeightIndex,
    terms: Vec<ExponentialMonomial>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LebesgueError {
    /// A term's rate has `Re ≤ 0` and is not integrable against the weight.
    NonIntegrableRate(Complex64),
    /// Transform evaluation point with `Re(rate + z) ≤ 0`.
    DomainViolation(Complex64),
    PreconditionViolation(&'static str),
}

impl fmt::Display for LebesgueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LebesgueError::NonIntegrableRate(r) => {
                write!(f, "rate {}+{}i has nonpositive real part", r.re, r.im)
            }
            LebesgueError::DomainViolation(z) => {
                write!(f, "transform undefined at {}+{}i", z.re, z.im)
            }
            LebesgueError::PreconditionViolation(why) => write!(f, "precondition violated: {why}"),
        }
    }
}

impl core::error::Error for LebesgueError {}

impl ExponentialSum {
    pub fn new(
        ell: WeightIndex,
        terms: Vec<ExponentialMonomial>,
    ) -> Result<Self, LebesgueError> {
        for t in &terms {
            if t.rate.re <= 0.0 {
                return Err(LebesgueError::NonIntegrableRate(t.rate));
            }
        }
        Ok(Self { ell, terms })
    }

    pub fn zero(ell: WeightIndex) -> Self {
        Self {
            ell,
            terms: Vec::new(),
        }
    }

    pub fn ell(&self) -> WeightIndex {
        self.ell
    }

    pub fn terms(&self) -> &[ExponentialMonomial] {
        &self.terms
    }

    /// Pointwise value `Σ cᵢ t^{ℓ+1} e^{-rᵢ t}` for `t > 0`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let tp = t.powi(self.ell.exponent() as i32 - 1);
        self.terms
            .iter()
            .map(|m| m.coeff * tp * (-m.rate * t).exp())
            .sum()
    }
}

/// `K_z = L((2^ℓ/ℓ!) t^{ℓ+1} e^{-t·conj(z)})`.
pub fn kernel_preimage(ell: WeightIndex, z: HalfPlanePoint) -> ExponentialSum {
    ExponentialSum {
        ell,
        terms: alloc::vec![ExponentialMonomial {
            coeff: Complex64::new(ell.two_pow_ell() / ell.factorial(), 0.0),
            rate: z.value().conj(),
        }],
    }
}

/// Linear extension of the preimage to spans.
pub fn span_preimage(h: &KernelSpan) -> ExponentialSum {
    let base = h.ell().two_pow_ell() / h.ell().factorial();
    ExponentialSum {
        ell: h.ell(),
        terms: h
            .terms()
            .iter()
            .map(|t| ExponentialMonomial {
                coeff: t.coeff * base,
                rate: t.point.value().conj(),
            })
            .collect(),
    }
}

/// Closed-form Laplace transform `Σ cᵢ (ℓ+1)!/(rᵢ+z)^{ℓ+2}`.
///
/// For kernel preimages this reproduces kernel evaluation exactly.
pub fn laplace_closed(em: &ExponentialSum, z: Complex64) -> Result<Complex64, LebesgueError> {
    let exp = em.ell.exponent();
    let gamma = em.ell.factorial() * (em.ell.0 as f64 + 1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in &em.terms {
        let s = m.rate + z;
        if s.re <= 0.0 {
            return Err(LebesgueError::DomainViolation(z));
        }
        acc += m.coeff * gamma / cpowu(s, exp);
    }
    Ok(acc)
}

/// Closed-form squared norm
/// `Γ(1+ℓ)(ℓ+1)!/2^ℓ · Σᵢⱼ cᵢ conj(cⱼ)/(rᵢ+conj(rⱼ))^{ℓ+2}`.
pub fn lebesgue_norm_sq(em: &ExponentialSum) -> f64 {
    let exp = em.ell.exponent();
    let gamma = em.ell.factorial() * em.ell.factorial() * (em.ell.0 as f64 + 1.0)
        / em.ell.two_pow_ell();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in &em.terms {
        for b in &em.terms {
            acc += a.coeff * b.coeff.conj() / cpowu(a.rate + b.rate.conj(), exp);
        }
    }
    (gamma * acc.re).max(0.0)
}

/// `sqrt` of [`lebesgue_norm_sq`].
pub fn lebesgue_norm(em: &ExponentialSum) -> f64 {
    lebesgue_norm_sq(em).sqrt()
}

/// `∫_T^∞ t^n e^{-st} dt = (n!/s^{n+1}) e^{-sT} Σ_{k≤n} (sT)^k/k!`.
fn exp_tail(n: u32, s: f64, t: f64) -> f64 {
    let mut fact = 1.0f64;
    for k in 2..=n as u64 {
        fact *= k as f64;
    }
    let mut series = 0.0f64;
    let mut term = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            term *= s * t / k as f64;
        }
        series += term;
    }
    fact * s.powi(-(n as i32) - 1) * (-s * t).exp() * series
}

/// Numeric squared norm through adaptive half-line quadrature with an
/// exponential tail bound; the independent check of [`lebesgue_norm_sq`].
pub fn lebesgue_norm_sq_numeric(
    em: &ExponentialSum,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    if em.terms.is_empty() {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    let ell = em.ell;
    let weight = ell.factorial() / ell.two_pow_ell();
    let f = move |t: f64| {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let v = em.eval(t);
        Complex64::new(weight * (v.norm_sqr()) * t.powi(-(ell.0 as i32) - 1), 0.0)
    };
    let coeff_sum: f64 = em.terms.iter().map(|m| m.coeff.norm()).sum();
    let min_rate = em
        .terms
        .iter()
        .map(|m| m.rate.re)
        .fold(f64::INFINITY, f64::min);
    let tail = move |t: f64| weight * coeff_sum * coeff_sum * exp_tail(ell.0 + 1, 2.0 * min_rate, t);
    integrate_halfline(&f, &tail, cfg)
}

/// Numeric Laplace transform `∫₀^∞ em(t) e^{-zt} dt`; the independent check
/// of [`laplace_closed`].
pub fn laplace_numeric(
    em: &ExponentialSum,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    if em.terms.is_empty() {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    let f = move |t: f64| {
        if t <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            em.eval(t) * (-z * t).exp()
        }
    };
    let coeff_sum: f64 = em.terms.iter().map(|m| m.coeff.norm()).sum();
    let min_rate = em
        .terms
        .iter()
        .map(|m| m.rate.re)
        .fold(f64::INFINITY, f64::min)
        + z.re;
    let ell = em.ell;
    let tail = move |t: f64| coeff_sum * exp_tail(ell.0 + 1, min_rate, t);
    integrate_halfline(&f, &tail, cfg)
}

/// Pullback of `C_a` through the transform: per term,
/// `coeff ↦ conj(coeff)`, `rate ↦ conj(rate) - ia`.
///
/// At `a = 0` this is plain complex conjugation of the function.
pub fn pullback_conjugation_ca(a: f64, em: &ExponentialSum) -> ExponentialSum {
    let ia = Complex64::new(0.0, a);
    ExponentialSum {
        ell: em.ell,
        terms: em
            .terms
            .iter()
            .map(|m| ExponentialMonomial {
                coeff: m.coeff.conj(),
                rate: m.rate.conj() - ia,
            })
            .collect(),
    }
}

/// Pullback of `C_⋆`: per term,
/// `coeff ↦ conj(coeff)·conj(rate)^{-(ℓ+2)}`, `rate ↦ 1/conj(rate)`.
pub fn pullback_conjugation_cstar(em: &ExponentialSum) -> ExponentialSum {
    let exp = em.ell.exponent();
    ExponentialSum {
        ell: em.ell,
        terms: em
            .terms
            .iter()
            .map(|m| ExponentialMonomial {
                coeff: m.coeff.conj() / cpowu(m.rate.conj(), exp),
                rate: m.rate.conj().inv(),
            })
            .collect(),
    }
}

/// Lebesgue-side weighted composition data transported from the
/// dilation-type Bergman pair `f ≡ θ`, `g(w) = λ(w + ic|b|^{-2/(ℓ+2)}) - ic`:
///
/// `ψ(t) = (θ/λ) e^{-t·ic(λ|b|^{-2/(ℓ+2)}-1)/λ}` and `φ(t) = t/λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueWco {
    pub ell: WeightIndex,
    /// Amplitude of `ψ`.
    pub psi_amp: Complex64,
    /// Rate of `ψ`: `ψ(t) = psi_amp · e^{-psi_rate·t}` (purely imaginary).
    pub psi_rate: Complex64,
    /// `φ(t) = phi_scale⁻¹ … `, i.e. `φ(t) = t/λ` with `phi_scale = λ`.
    pub lambda: f64,
    /// Largest termwise residual of the transport certification.
    pub certification_residual: f64,
}

/// `E_{ψ,φ}` applied to an exponential sum: per term,
/// `(c, r) ↦ (ψ_amp · c / λ^{ℓ+1}, r/λ + ψ_rate)`.
pub fn apply_lebesgue_wco(data: &LebesgueWco, em: &ExponentialSum) -> ExponentialSum {
    let scale = data.lambda.powi(data.ell.exponent() as i32 - 1);
    ExponentialSum {
        ell: em.ell,
        terms: em
            .terms
            .iter()
            .map(|m| ExponentialMonomial {
                coeff: data.psi_amp * m.coeff / scale,
                rate: m.rate / data.lambda + data.psi_rate,
            })
            .collect(),
    }
}

/// Builds the Lebesgue-side operator for the Bergman pair
/// `(f ≡ θ, g = λ(w + ic|b|^{-2/(ℓ+2)}) - ic)` and certifies
/// `L⁻¹ E_{f,g} L = E_{ψ,φ}` on kernel preimages at ten random points.
pub fn pullback_wco(
    ell: WeightIndex,
    theta: Complex64,
    lambda: f64,
    b: Complex64,
    c: f64,
) -> Result<LebesgueWco, LebesgueError> {
    if lambda <= 0.0 {
        return Err(LebesgueError::PreconditionViolation("lambda must be positive"));
    }
    if b.norm() == 0.0 {
        return Err(LebesgueError::PreconditionViolation("b must be nonzero"));
    }
    let exp = ell.exponent();
    let ic = Complex64::new(0.0, c);
    let shift = lambda * b.norm().powf(-2.0 / exp as f64) - 1.0;
    let d = ic * shift;
    let data = LebesgueWco {
        ell,
        psi_amp: theta / lambda,
        psi_rate: d / lambda,
        lambda,
        certification_residual: 0.0,
    };

    // Bergman-side pair: f ≡ θ, g(w) = λ w + d.
    let pair = SymbolPair::new(
        ell,
        WeightSymbol::constant(theta),
        MapSymbol::Moebius(
            MoebiusMap::affine(Complex64::new(lambda, 0.0), d)
                .map_err(|_| LebesgueError::PreconditionViolation("degenerate map"))?,
        ),
    );
    let mut rng = CounterRng::new(0x1eb0);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let z = rng.halfplane_point();
        let image = wco_apply(&pair, &KernelSpan::kernel(ell, z))
            .map_err(|_| LebesgueError::PreconditionViolation("pair not kernel compatible"))?;
        let lhs = span_preimage(&image.result);
        let rhs = apply_lebesgue_wco(&data, &kernel_preimage(ell, z));
        worst = worst.max(sum_residual(&lhs, &rhs));
    }
    Ok(LebesgueWco {
        certification_residual: worst,
        ..data
    })
}

/// Termwise relative distance between two single-term sums (used by the
/// transport certification; kernel preimages stay single-term). Terms with
/// zero coefficient denote the zero function and are ignored.
fn sum_residual(a: &ExponentialSum, b: &ExponentialSum) -> f64 {
    let live = |s: &ExponentialSum| -> Vec<ExponentialMonomial> {
        s.terms.iter().copied().filter(|m| m.coeff.norm() > 0.0).collect()
    };
    let (a, b) = (live(a), live(b));
    if a.len() != b.len() {
        return 1.0;
    }
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        worst = worst.max(rel_dist(x.coeff, y.coeff));
        worst = worst.max(rel_dist(x.rate, y.rate));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{kernel_eval_complex, kernel_norm_sq};
    use crate::num::approx_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hp(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn preimage_examples() {
        // ell = 0, z = 1: t e^{-t}.
        let em = kernel_preimage(WeightIndex(0), hp(1.0, 0.0));
        assert_eq!(em.terms().len(), 1);
        assert!(approx_eq(em.terms()[0].coeff, c(1.0, 0.0), 1e-15));
        assert!(approx_eq(em.terms()[0].rate, c(1.0, 0.0), 1e-15));
        // ell = 2, z = 1+i: 2 t³ e^{-t(1-i)}.
        let em = kernel_preimage(WeightIndex(2), hp(1.0, 1.0));
        assert!(approx_eq(em.terms()[0].coeff, c(2.0, 0.0), 1e-15));
        assert!(approx_eq(em.terms()[0].rate, c(1.0, -1.0), 1e-15));
        // Linearity through spans.
        let h = KernelSpan::single(WeightIndex(0), c(3.0, 0.0), hp(1.0, 0.0));
        let em = span_preimage(&h);
        assert!(approx_eq(em.terms()[0].coeff, c(3.0, 0.0), 1e-15));
    }

    #[test]
    fn closed_transform_matches_kernel() {
        // ∫ t e^{-2t} dt = 1/4 = K_1(1) for ell = 0.
        let em = kernel_preimage(WeightIndex(0), hp(1.0, 0.0));
        let v = laplace_closed(&em, c(1.0, 0.0)).unwrap();
        assert!(approx_eq(v, c(0.25, 0.0), 1e-15));
        // ell = 1: both closed forms give 1/2 at z = 1.
        let em = kernel_preimage(WeightIndex(1), hp(1.0, 0.0));
        let v = laplace_closed(&em, c(1.0, 0.0)).unwrap();
        assert!(approx_eq(v, c(0.5, 0.0), 1e-15));
        // Zero function transforms to 0.
        let zero = ExponentialSum::zero(WeightIndex(1));
        assert_eq!(laplace_closed(&zero, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn transform_consistency_random_points() {
        let mut rng = CounterRng::new(61);
        for ell in [0u32, 1, 2] {
            let ell = WeightIndex(ell);
            for _ in 0..10 {
                let z = rng.halfplane_point();
                let x = rng.halfplane_complex();
                let em = kernel_preimage(ell, z);
                let via_transform = laplace_closed(&em, x).unwrap();
                let via_kernel = kernel_eval_complex(ell, z.value(), x);
                assert!(approx_eq(via_transform, via_kernel, 1e-13));
            }
        }
    }

    #[test]
    fn norm_isometry_closed_forms() {
        // ell = 0, t e^{-t}: ∫ t e^{-2t} dt = 1/4.
        let em = kernel_preimage(WeightIndex(0), hp(1.0, 0.0));
        assert!((lebesgue_norm_sq(&em) - 0.25).abs() <= 1e-15);
        // Preimage norm equals kernel norm for every ell.
        let mut rng = CounterRng::new(67);
        for ell in [0u32, 1, 2] {
            let ell = WeightIndex(ell);
            for _ in 0..20 {
                let z = rng.halfplane_point();
                let em = kernel_preimage(ell, z);
                let lhs = lebesgue_norm_sq(&em);
                let rhs = kernel_norm_sq(ell, z);
                assert!((lhs - rhs).abs() <= 1e-12 * rhs, "{lhs} vs {rhs}");
            }
        }
        // Zero coefficient.
        let zero = ExponentialSum::zero(WeightIndex(1));
        assert_eq!(lebesgue_norm(&zero), 0.0);
    }

    #[test]
    fn numeric_norm_matches_closed_form() {
        let cfg = QuadratureConfig::default();
        let mut rng = CounterRng::new(71);
        for ell in [0u32, 2] {
            let ell = WeightIndex(ell);
            let z = rng.halfplane_point();
            let w = rng.halfplane_point();
            let em = ExponentialSum::new(
                ell,
                alloc::vec![
                    ExponentialMonomial { coeff: c(1.0, -0.5), rate: z.value().conj() },
                    ExponentialMonomial { coeff: c(0.4, 0.9), rate: w.value().conj() },
                ],
            )
            .unwrap();
            let closed = lebesgue_norm_sq(&em);
            let numeric = lebesgue_norm_sq_numeric(&em, &cfg).unwrap();
            assert!(
                (numeric.value.re - closed).abs() <= 1e-6 * closed.max(1e-10),
                "{numeric:?} vs {closed}"
            );
        }
    }

    #[test]
    fn numeric_transform_matches_closed_form() {
        let cfg = QuadratureConfig::default();
        let em = kernel_preimage(WeightIndex(1), hp(0.8, 1.3));
        let z = c(1.1, -0.4);
        let closed = laplace_closed(&em, z).unwrap();
        let numeric = laplace_numeric(&em, z, &cfg).unwrap();
        assert!((numeric.value - closed).norm() <= 1e-6 * closed.norm());
    }

    #[test]
    fn rejects_nonintegrable_rate() {
        assert!(matches!(
            ExponentialSum::new(
                WeightIndex(0),
                alloc::vec![ExponentialMonomial { coeff: c(1.0, 0.0), rate: c(-0.1, 2.0) }],
            ),
            Err(LebesgueError::NonIntegrableRate(_))
        ));
    }

    #[test]
    fn ca_pullback_examples() {
        // a = 0 is plain conjugation.
        let em = ExponentialSum::new(
            WeightIndex(0),
            alloc::vec![ExponentialMonomial { coeff: c(1.0, 1.0), rate: c(1.0, 1.0) }],
        )
        .unwrap();
        let out = pullback_conjugation_ca(0.0, &em);
        assert!(approx_eq(out.terms()[0].coeff, c(1.0, -1.0), 1e-15));
        assert!(approx_eq(out.terms()[0].rate, c(1.0, -1.0), 1e-15));
        // a = 2 fixes the preimage of K_{1+i}.
        let em = kernel_preimage(WeightIndex(0), hp(1.0, 1.0));
        let out = pullback_conjugation_ca(2.0, &em);
        assert!(approx_eq(out.terms()[0].rate, em.terms()[0].rate, 1e-15));
        assert!(approx_eq(out.terms()[0].coeff, em.terms()[0].coeff, 1e-15));
        // Involution.
        let mut rng = CounterRng::new(73);
        for _ in 0..10 {
            let z = rng.halfplane_point();
            let em = kernel_preimage(WeightIndex(2), z);
            let twice = pullback_conjugation_ca(1.3, &pullback_conjugation_ca(1.3, &em));
            assert!(approx_eq(twice.terms()[0].coeff, em.terms()[0].coeff, 1e-14));
            assert!(approx_eq(twice.terms()[0].rate, em.terms()[0].rate, 1e-14));
        }
    }

    #[test]
    fn ca_pullback_matches_bergman_side() {
        // L⁻¹ C_a L on the preimage of K_z equals the preimage of C_a K_z.
        let mut rng = CounterRng::new(79);
        for a in [-1.5f64, 0.0, 2.0] {
            for _ in 0..10 {
                let ell = WeightIndex((rng.next_u64() % 3) as u32);
                let z = rng.halfplane_point();
                let lhs = pullback_conjugation_ca(a, &kernel_preimage(ell, z));
                let conj_point = HalfPlanePoint::new(z.value().conj() + c(0.0, a)).unwrap();
                let rhs = kernel_preimage(ell, conj_point);
                assert!(approx_eq(lhs.terms()[0].coeff, rhs.terms()[0].coeff, 1e-14));
                assert!(approx_eq(lhs.terms()[0].rate, rhs.terms()[0].rate, 1e-14));
            }
        }
    }

    #[test]
    fn cstar_pullback_matches_bergman_side() {
        // L⁻¹ C_⋆ L sends the preimage of K_z to z^{-(ℓ+2)} times the
        // preimage of K_{1/conj(z)}.
        let mut rng = CounterRng::new(83);
        for _ in 0..20 {
            let ell = WeightIndex((rng.next_u64() % 3) as u32);
            let z = rng.halfplane_point();
            let lhs = pullback_conjugation_cstar(&kernel_preimage(ell, z));
            let scalar = cpowu(z.value(), ell.exponent()).inv();
            let point = HalfPlanePoint::new(z.value().conj().inv()).unwrap();
            let pre = kernel_preimage(ell, point);
            assert!(approx_eq(lhs.terms()[0].coeff, scalar * pre.terms()[0].coeff, 1e-13));
            assert!(approx_eq(lhs.terms()[0].rate, pre.terms()[0].rate, 1e-13));
        }
    }

    #[test]
    fn cstar_pullback_isometry_and_involution() {
        let mut rng = CounterRng::new(89);
        for _ in 0..10 {
            let ell = WeightIndex(1);
            let em = ExponentialSum::new(
                ell,
                alloc::vec![
                    ExponentialMonomial {
                        coeff: rng.complex_in_box(2.0),
                        rate: rng.halfplane_complex(),
                    },
                    ExponentialMonomial {
                        coeff: rng.complex_in_box(2.0),
                        rate: rng.halfplane_complex(),
                    },
                ],
            )
            .unwrap();
            let once = pullback_conjugation_cstar(&em);
            let twice = pullback_conjugation_cstar(&once);
            for (a, b) in em.terms().iter().zip(twice.terms()) {
                assert!(approx_eq(a.coeff, b.coeff, 1e-12));
                assert!(approx_eq(a.rate, b.rate, 1e-12));
            }
            // Isometry in the Lebesgue norm.
            assert!(
                (lebesgue_norm_sq(&once) - lebesgue_norm_sq(&em)).abs()
                    <= 1e-11 * lebesgue_norm_sq(&em)
            );
            let ca = pullback_conjugation_ca(0.7, &em);
            assert!(
                (lebesgue_norm_sq(&ca) - lebesgue_norm_sq(&em)).abs()
                    <= 1e-11 * lebesgue_norm_sq(&em)
            );
        }
    }

    #[test]
    fn wco_pullback_identity_case() {
        // λ = 1, c = 0, θ = 1, b = 1: ψ ≡ 1 and φ = id.
        let data = pullback_wco(WeightIndex(0), c(1.0, 0.0), 1.0, c(1.0, 0.0), 0.0).unwrap();
        assert!(approx_eq(data.psi_amp, c(1.0, 0.0), 1e-14));
        assert!(data.psi_rate.norm() <= 1e-14);
        assert!(data.certification_residual <= 1e-12);
    }

    #[test]
    fn wco_pullback_dilation_case() {
        // ell = 0, λ = 2, c = 0, θ = 1, b = 1: the certified amplitude is
        // θ/λ = 1/2 (the composition with t/λ contributes λ^{ℓ+1} relative
        // to the kernel-side scalar θ/λ^{ℓ+2}).
        let data = pullback_wco(WeightIndex(0), c(1.0, 0.0), 2.0, c(1.0, 0.0), 0.0).unwrap();
        assert!(approx_eq(data.psi_amp, c(0.5, 0.0), 1e-14), "{data:?}");
        assert!(data.psi_rate.norm() <= 1e-14);
        assert!(data.certification_residual <= 1e-12);
        // Direct check at z = 1: E_{f,g}K_1 = (1/4)K_{1/2} pulls back to
        // (1/4) t e^{-t/2}, and ψ(t)·(t/2)e^{-t/2} matches with ψ = 1/2.
        let em = kernel_preimage(WeightIndex(0), hp(1.0, 0.0));
        let out = apply_lebesgue_wco(&data, &em);
        assert!(approx_eq(out.terms()[0].coeff, c(0.25, 0.0), 1e-14));
        assert!(approx_eq(out.terms()[0].rate, c(0.5, 0.0), 1e-14));
    }

    #[test]
    fn wco_pullback_with_shift_certifies() {
        let mut rng = CounterRng::new(97);
        for _ in 0..20 {
            let ell = WeightIndex((rng.next_u64() % 3) as u32);
            let theta = rng.complex_nonzero(2.0);
            let lambda = rng.log_uniform(0.3, 3.0);
            let b = rng.complex_nonzero(2.0);
            let c_shift = rng.uniform(-2.0, 2.0);
            let data = pullback_wco(ell, theta, lambda, b, c_shift).unwrap();
            assert!(
                data.certification_residual <= 1e-10,
                "residual {} for ell={} theta={theta} lambda={lambda} b={b} c={c_shift}",
                data.certification_residual,
                ell.0
            );
        }
    }

    #[test]
    fn wco_pullback_rejects_bad_parameters() {
        assert!(pullback_wco(WeightIndex(0), c(1.0, 0.0), -1.0, c(1.0, 0.0), 0.0).is_err());
        assert!(pullback_wco(WeightIndex(0), c(1.0, 0.0), 1.0, c(0.0, 0.0), 0.0).is_err());
    }
}
