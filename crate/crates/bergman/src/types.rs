//! Shared parameter and function representations: weight index, half-plane
//! points, Möbius maps, weight symbols, symbol pairs and kernel spans.
//!
//! All values are immutable after construction and validated by their
//! constructors, so downstream modules can assume the invariants hold.

use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

use crate::num::{approx_eq, cpowu, magnitude};
use crate::EPS_PARAM;

/// Weight index `ℓ ≥ 0` of the Bergman space.
///
/// Every complex power in the crate uses the integer exponent `ℓ+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightIndex(pub u32);

impl WeightIndex {
    /// The kernel exponent `ℓ + 2`.
    pub fn exponent(self) -> u32 {
        self.0 + 2
    }

    /// The kernel normalization `2^ℓ (1 + ℓ)`.
    pub fn kernel_constant(self) -> f64 {
        num_traits::Float::exp2(self.0 as f64) * (1.0 + self.0 as f64)
    }

    /// `2^ℓ` as a float.
    pub fn two_pow_ell(self) -> f64 {
        num_traits::Float::exp2(self.0 as f64)
    }

    /// `ℓ!` as a float; exact for every `ℓ` this crate is used with.
    pub fn factorial(self) -> f64 {
        let mut acc = 1.0f64;
        for k in 2..=self.0 as u64 {
            acc *= k as f64;
        }
        acc
    }
}

/// A point strictly inside the open right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    /// Rejects points with `Re ≤ 0`.
    pub fn new(value: Complex64) -> Result<Self, DomainError> {
        if value.re > 0.0 && value.re.is_finite() && value.im.is_finite() {
            Ok(Self(value))
        } else {
            Err(DomainError::NotInHalfPlane(value))
        }
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl From<HalfPlanePoint> for Complex64 {
    fn from(p: HalfPlanePoint) -> Self {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainError {
    NotInHalfPlane(Complex64),
    NotInDisk(Complex64),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::NotInHalfPlane(z) => {
                write!(f, "point {}+{}i is not in the open right half-plane", z.re, z.im)
            }
            DomainError::NotInDisk(z) => {
                write!(f, "point {}+{}i is not in the open unit disk", z.re, z.im)
            }
        }
    }
}

impl core::error::Error for DomainError {}

/// Linear fractional map `w ↦ (aw + b)/(cw + d)` with `ad - bc ≠ 0`.
///
/// Stored in canonical form: the first coefficient in the order `(c, d, a, b)`
/// whose modulus exceeds the degeneracy threshold is scaled to exactly `1`.
/// Two coefficient tuples describing the same map therefore compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapError {
    /// `|ad - bc|` is below `EPS_PARAM` times the squared coefficient scale.
    DegenerateMap,
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::DegenerateMap => write!(f, "determinant ad - bc vanishes"),
        }
    }
}

impl core::error::Error for MapError {}

impl MoebiusMap {
    /// Builds and canonicalizes a map, rejecting degenerate coefficients.
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, MapError> {
        let scale = magnitude(&[a, b, c, d]);
        let det = a * d - b * c;
        if scale == 0.0 || det.norm() <= EPS_PARAM * scale * scale {
            return Err(MapError::DegenerateMap);
        }
        // Normalize by the first nonzero coefficient in order (c, d, a, b);
        // that coefficient becomes exactly 1, fixing the projective scale.
        let pivot = [c, d, a, b]
            .into_iter()
            .find(|z| z.norm() > EPS_PARAM * scale)
            .expect("nondegenerate map has a nonzero coefficient");
        Ok(Self {
            a: a / pivot,
            b: b / pivot,
            c: c / pivot,
            d: d / pivot,
        })
    }

    /// The identity map `w ↦ w`.
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Affine map `w ↦ u w + v` (requires `u ≠ 0`).
    pub fn affine(u: Complex64, v: Complex64) -> Result<Self, MapError> {
        Self::new(u, v, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// Map in the form `z ↦ -p - q/(z - u)` (requires `q ≠ 0`).
    pub fn special(p: Complex64, q: Complex64, u: Complex64) -> Result<Self, MapError> {
        // -p - q/(z-u) = (-p z + (p u - q)) / (z - u)
        Self::new(-p, p * u - q, Complex64::new(1.0, 0.0), -u)
    }

    pub fn coeffs(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// True when `c = 0` up to the canonical scale, i.e. the map is affine.
    pub fn is_affine(&self) -> bool {
        self.c.norm() <= EPS_PARAM * self.coeff_scale()
    }

    /// Affine decomposition `w ↦ u w + v` when `c = 0`.
    pub fn as_affine(&self) -> Option<(Complex64, Complex64)> {
        if self.is_affine() {
            Some((self.a / self.d, self.b / self.d))
        } else {
            None
        }
    }

    pub fn is_identity(&self) -> bool {
        match self.as_affine() {
            Some((u, v)) => {
                approx_eq(u, Complex64::new(1.0, 0.0), EPS_PARAM)
                    && v.norm() <= EPS_PARAM
            }
            None => false,
        }
    }

    fn coeff_scale(&self) -> f64 {
        magnitude(&[self.a, self.b, self.c, self.d])
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// The composition `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> Result<Self, MapError> {
        let (a1, b1, c1, d1) = self.coeffs();
        let (a2, b2, c2, d2) = other.coeffs();
        Self::new(
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        )
    }

    pub fn inverse(&self) -> Result<Self, MapError> {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// Decomposes a non-affine map as `z ↦ -p - q/(z - u)`.
    ///
    /// `p = -a/c`, `u = -d/c`, `q = (ad - bc)/c²`; the decomposition is
    /// re-checked by evaluating both expressions at two probe points.
    pub fn special_form(&self) -> Option<SpecialForm> {
        if self.is_affine() {
            return None;
        }
        let p = -self.a / self.c;
        let u = -self.d / self.c;
        let q = (self.a * self.d - self.b * self.c) / (self.c * self.c);
        let form = SpecialForm { p, q, u };
        // Probe points chosen away from the pole at z = u.
        for probe in [Complex64::new(1.0, 0.4), Complex64::new(2.0, -0.7)] {
            let z = if (probe - u).norm() < 1e-3 {
                probe + Complex64::new(1.0, 1.0)
            } else {
                probe
            };
            let direct = self.eval(z);
            let via_form = -form.p - form.q / (z - form.u);
            assert!(
                approx_eq(direct, via_form, 1e-9),
                "special form decomposition disagrees with the map"
            );
        }
        Some(form)
    }
}

/// The decomposition `z ↦ -p - q/(z - u)` of a non-affine Möbius map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialForm {
    pub p: Complex64,
    pub q: Complex64,
    pub u: Complex64,
}

/// Composition symbol: either a constant interior value or a genuine
/// Möbius map.
///
/// Constant maps arise as the `g`-symbols of the case-I families; they are
/// determinant-zero limits that a nondegenerate [`MoebiusMap`] cannot
/// represent, so they get their own variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSymbol {
    Constant(Complex64),
    Moebius(MoebiusMap),
}

impl MapSymbol {
    /// Builds a symbol from raw `(a, b, c, d)` coefficients, routing
    /// determinant-zero coefficient tuples that describe a constant function
    /// to the `Constant` variant.
    pub fn from_coeffs(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, MapError> {
        match MoebiusMap::new(a, b, c, d) {
            Ok(m) => Ok(MapSymbol::Moebius(m)),
            Err(MapError::DegenerateMap) => {
                let scale = magnitude(&[a, b, c, d]);
                if scale == 0.0 {
                    return Err(MapError::DegenerateMap);
                }
                // ad = bc: the map is constant wherever it is defined.
                if c.norm() > EPS_PARAM * scale {
                    Ok(MapSymbol::Constant(a / c))
                } else if d.norm() > EPS_PARAM * scale {
                    Ok(MapSymbol::Constant(b / d))
                } else {
                    Err(MapError::DegenerateMap)
                }
            }
        }
    }

    pub fn constant(v: Complex64) -> Self {
        MapSymbol::Constant(v)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            MapSymbol::Constant(v) => *v,
            MapSymbol::Moebius(m) => m.eval(z),
        }
    }

    pub fn as_moebius(&self) -> Option<&MoebiusMap> {
        match self {
            MapSymbol::Moebius(m) => Some(m),
            MapSymbol::Constant(_) => None,
        }
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match self {
            MapSymbol::Constant(v) => Some(*v),
            MapSymbol::Moebius(_) => None,
        }
    }
}

/// Weight symbol `f`: either a constant or `w ↦ c/(a w + b)^{ℓ+2}`.
///
/// The zero symbol (`c = 0`) is representable and flags the zero operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSymbol {
    Constant(Complex64),
    ReciprocalPower {
        c: Complex64,
        a: Complex64,
        b: Complex64,
    },
}

impl WeightSymbol {
    pub fn constant(c: Complex64) -> Self {
        WeightSymbol::Constant(c)
    }

    /// `w ↦ c/(a w + b)^{ℓ+2}`; requires `(a, b) ≠ (0, 0)`.
    pub fn reciprocal_power(
        c: Complex64,
        a: Complex64,
        b: Complex64,
    ) -> Result<Self, WeightSymbolError> {
        if magnitude(&[a, b]) == 0.0 {
            Err(WeightSymbolError::ZeroDenominator)
        } else {
            Ok(WeightSymbol::ReciprocalPower { c, a, b })
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            WeightSymbol::Constant(c) => c.norm() == 0.0,
            WeightSymbol::ReciprocalPower { c, .. } => c.norm() == 0.0,
        }
    }

    pub fn eval(&self, ell: WeightIndex, z: Complex64) -> Complex64 {
        match self {
            WeightSymbol::Constant(c) => *c,
            WeightSymbol::ReciprocalPower { c, a, b } => *c / cpowu(a * z + b, ell.exponent()),
        }
    }

    /// Resolves a `ReciprocalPower` with `a = 0` to the constant it denotes.
    ///
    /// The effective form is what all structural matching works on, so a
    /// disguised constant classifies exactly like a plain one.
    pub fn effective(&self, ell: WeightIndex) -> EffectiveWeight {
        match *self {
            WeightSymbol::Constant(c) => EffectiveWeight::Constant(c),
            WeightSymbol::ReciprocalPower { c, a, b } => {
                let scale = magnitude(&[a, b]);
                if a.norm() <= EPS_PARAM * scale {
                    EffectiveWeight::Constant(c / cpowu(b, ell.exponent()))
                } else {
                    EffectiveWeight::ReciprocalPower { c, a, b }
                }
            }
        }
    }
}

/// A [`WeightSymbol`] with disguised constants resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveWeight {
    Constant(Complex64),
    /// `c/(a w + b)^{ℓ+2}` with `a ≠ 0`.
    ReciprocalPower {
        c: Complex64,
        a: Complex64,
        b: Complex64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSymbolError {
    ZeroDenominator,
}

impl fmt::Display for WeightSymbolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSymbolError::ZeroDenominator => {
                write!(f, "reciprocal-power weight requires (a, b) != (0, 0)")
            }
        }
    }
}

impl core::error::Error for WeightSymbolError {}

/// The unit of classification: weight index `ℓ` and the pair `(f, g)` of a
/// weighted composition expression `h ↦ f · h∘g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolPair {
    pub ell: WeightIndex,
    pub f: WeightSymbol,
    pub g: MapSymbol,
}

impl SymbolPair {
    pub fn new(ell: WeightIndex, f: WeightSymbol, g: MapSymbol) -> Self {
        Self { ell, f, g }
    }

    /// Evaluates the expression `f(z) · h(g(z))` coordinatewise for an
    /// arbitrary evaluable `h`. Used by oracles; the exact operator path
    /// lives in [`crate::operators`].
    pub fn eval_expression(
        &self,
        h: impl Fn(Complex64) -> Complex64,
        z: Complex64,
    ) -> Complex64 {
        self.f.eval(self.ell, z) * h(self.g.eval(z))
    }
}

/// One term `c · K_z` of a kernel span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm {
    pub coeff: Complex64,
    pub point: HalfPlanePoint,
}

/// Finite linear combination `Σ cᵢ K_{zᵢ}` with a fixed weight index.
///
/// The empty span is the zero function. After [`KernelSpan::simplify`] all
/// points are pairwise distinct and terms are sorted, so equal functions
/// have identical representations.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpan {
    ell: WeightIndex,
    terms: Vec<KernelTerm>,
}

impl KernelSpan {
    pub fn zero(ell: WeightIndex) -> Self {
        Self {
            ell,
            terms: Vec::new(),
        }
    }

    pub fn new(ell: WeightIndex, terms: Vec<KernelTerm>) -> Self {
        let mut span = Self { ell, terms };
        span.simplify();
        span
    }

    /// The single-term span `c · K_z`.
    pub fn single(ell: WeightIndex, coeff: Complex64, point: HalfPlanePoint) -> Self {
        Self::new(
            ell,
            alloc::vec![KernelTerm { coeff, point }],
        )
    }

    /// `K_z` itself.
    pub fn kernel(ell: WeightIndex, point: HalfPlanePoint) -> Self {
        Self::single(ell, Complex64::new(1.0, 0.0), point)
    }

    pub fn ell(&self) -> WeightIndex {
        self.ell
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus; 0 for the zero span.
    pub fn coeff_scale(&self) -> f64 {
        let mut m = 0.0f64;
        for t in &self.terms {
            m = m.max(t.coeff.norm());
        }
        m
    }

    /// Merges points equal within `EPS_PARAM` (exact complex addition of
    /// coefficients), drops terms below `1e-15` of the largest coefficient,
    /// and sorts by point for a deterministic representation.
    pub fn simplify(&mut self) {
        let mut merged: Vec<KernelTerm> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            match merged.iter_mut().find(|t| {
                approx_eq(t.point.value(), term.point.value(), EPS_PARAM)
            }) {
                Some(t) => t.coeff += term.coeff,
                None => merged.push(term),
            }
        }
        let scale = merged.iter().fold(0.0f64, |m, t| m.max(t.coeff.norm()));
        merged.retain(|t| t.coeff.norm() >= 1e-15 * scale && t.coeff.norm() > 0.0);
        merged.sort_by(|s, t| {
            let (zs, zt) = (s.point.value(), t.point.value());
            zs.re
                .partial_cmp(&zt.re)
                .unwrap()
                .then(zs.im.partial_cmp(&zt.im).unwrap())
        });
        self.terms = merged;
    }

    /// Returns `self + scale * other`; both spans must share the weight index.
    pub fn add_scaled(&self, other: &KernelSpan, scale: Complex64) -> KernelSpan {
        assert_eq!(self.ell, other.ell, "span arithmetic never changes ell");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| KernelTerm {
            coeff: scale * t.coeff,
            point: t.point,
        }));
        KernelSpan::new(self.ell, terms)
    }

    pub fn sub(&self, other: &KernelSpan) -> KernelSpan {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn scaled(&self, scale: Complex64) -> KernelSpan {
        KernelSpan::new(
            self.ell,
            self.terms
                .iter()
                .map(|t| KernelTerm {
                    coeff: scale * t.coeff,
                    point: t.point,
                })
                .collect(),
        )
    }
}
