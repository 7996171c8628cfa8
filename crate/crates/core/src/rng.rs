//! Reproducible random data.
//!
//! The generator is PCG-XSH-RR 64/32 (`rand_pcg::Pcg32`): LCG state update
//! `s <- s * 6364136223846793005 + inc` with `inc = 2 * STREAM + 1`, seeded
//! directly with the user seed as the initial state. Uniform doubles take the
//! top 53 bits of two consecutive outputs, as `rand`'s `Standard` does.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_pcg::Pcg32;

use crate::sequence::Sequence;

/// Stream selector passed to the PCG constructor.
pub const STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

#[derive(Debug, Clone)]
pub struct DatumGenerator {
    rng: Pcg32,
}

impl DatumGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Pcg32::new(seed, STREAM),
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform on `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Uniform on the disk of radius `amp < 1`.
    pub fn disk(&mut self, amp: f64) -> Complex64 {
        let r = amp * self.uniform().sqrt();
        Complex64::from_polar(r, 2.0 * PI * self.uniform())
    }

    /// `len` sites starting at `offset`, each uniform on the disk of radius `amp`.
    pub fn sequence(&mut self, offset: i64, len: usize, amp: f64) -> Sequence {
        assert!(amp < 1.0, "amplitude must stay inside the unit disk");
        let values = (0..len).map(|_| self.disk(amp)).collect();
        Sequence::from_trusted(offset, values)
    }
}

/// One-shot helper for [`DatumGenerator::sequence`].
pub fn random_datum(seed: u64, offset: i64, len: usize, amp: f64) -> Sequence {
    DatumGenerator::new(seed).sequence(offset, len, amp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let a = random_datum(7, -3, 9, 0.5);
        assert_eq!(a, random_datum(7, -3, 9, 0.5));
        assert_ne!(a, random_datum(8, -3, 9, 0.5));
        assert!(a.max_modulus() <= 0.5);
        assert_eq!((a.offset(), a.len()), (-3, 9));
    }

    #[test]
    fn ranges() {
        let mut g = DatumGenerator::new(1);
        for _ in 0..100 {
            let u = g.range(0.25, 0.5);
            assert!((0.25..0.5).contains(&u));
            assert!((-2..=2).contains(&g.int(-2, 2)));
        }
    }
}
