//! Deterministic counter-based sampling.
//!
//! All randomness in the crate (probe points, parameter draws, span
//! generation) flows through [`CounterRng`], a splitmix64-style generator
//! addressed by `(seed, counter)`. The same seed produces the same stream on
//! every platform, which keeps reports and test corpora replayable.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::types::{HalfPlanePoint, KernelSpan, KernelTerm, WeightIndex};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// Counter-based pseudo-random generator: draw `k` is a pure function of
/// `(seed, k)`, so streams can be replayed and split without shared state.
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// An independent stream for a labelled subtask.
    pub fn substream(&self, label: u64) -> Self {
        Self {
            seed: mix(self.seed ^ label.wrapping_mul(GOLDEN)),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Log-uniform over `[lo, hi]`, `0 < lo < hi`.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (self.uniform(lo.ln(), hi.ln())).exp()
    }

    pub fn complex_in_box(&mut self, half_width: f64) -> Complex64 {
        Complex64::new(
            self.uniform(-half_width, half_width),
            self.uniform(-half_width, half_width),
        )
    }

    /// Nonzero complex with modulus in roughly `[0.2, half_width]`.
    pub fn complex_nonzero(&mut self, half_width: f64) -> Complex64 {
        loop {
            let z = self.complex_in_box(half_width);
            if z.norm() >= 0.2 {
                return z;
            }
        }
    }

    /// Interior half-plane value with `Re` log-uniform in `[0.1, 3]`.
    pub fn halfplane_complex(&mut self) -> Complex64 {
        Complex64::new(self.log_uniform(0.1, 3.0), self.uniform(-3.0, 3.0))
    }

    pub fn halfplane_point(&mut self) -> HalfPlanePoint {
        HalfPlanePoint::new(self.halfplane_complex()).expect("sampled in the interior")
    }

    /// Random span with `n` terms and coefficients in a moderate box.
    pub fn span(&mut self, ell: WeightIndex, n: usize) -> KernelSpan {
        let terms = (0..n)
            .map(|_| KernelTerm {
                coeff: self.complex_in_box(2.0),
                point: self.halfplane_point(),
            })
            .collect();
        KernelSpan::new(ell, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = CounterRng::new(42);
        let mut b = CounterRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_seeds_diverge() {
        let mut a = CounterRng::new(1);
        let mut b = CounterRng::new(2);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = CounterRng::new(9);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
            let p = rng.halfplane_complex();
            assert!(p.re > 0.0);
        }
    }

    #[test]
    fn pinned_first_draw() {
        // Freezing one value guards against accidental algorithm changes
        // that would silently invalidate every seeded corpus.
        let mut rng = CounterRng::new(0);
        assert_eq!(rng.next_u64(), mix(GOLDEN));
    }
}
