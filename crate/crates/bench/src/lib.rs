//! Shared fixtures for the benchmarks.

use al_ist::rng::DatumGenerator;
use al_ist::{LaurentPoly, Sequence};
use num_complex::Complex64;

/// `2n + 1` random sites centred on 0, small enough that the products stay finite.
pub fn window_datum(n: u64, seed: u64) -> Sequence {
    DatumGenerator::new(seed).sequence(-(n as i64), 2 * n as usize + 1, 0.1)
}

/// Dense random polynomial with `len` coefficients.
pub fn random_poly(len: usize, seed: u64) -> LaurentPoly {
    let mut g = DatumGenerator::new(seed);
    let coeffs: Vec<Complex64> = (0..len).map(|_| g.disk(1.0 - 1e-9)).collect();
    LaurentPoly::new(0, coeffs)
}
