//! The truncated time-evolution multiplier and its error bounds.
//!
//! The free flow multiplies scattering data by `exp(i t (z + 1/z))`, whose
//! Laurent coefficients are `i^k J_k(2t)`. Truncating at order `n` and scaling
//! by `1 - delta` with `delta = t^n e^t / n!` gives an analytic polynomial
//! `G = (1 - delta) z^n P` that stays in the Schur class.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Bessel function of the first kind `J_k(x)` by its ascending series.
///
/// Accurate to near machine precision for `x` up to a few tens; beyond that
/// the alternating series loses digits to cancellation.
pub fn bessel_j(k: i64, x: f64) -> f64 {
    let kk = k.unsigned_abs();
    let sign = if k < 0 && kk % 2 == 1 { -1.0 } else { 1.0 };
    if x == 0.0 {
        return if kk == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let lead = (kk as f64 * half.abs().ln() - libm::lgamma(kk as f64 + 1.0)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let lead = if half < 0.0 && kk % 2 == 1 { -lead } else { lead };
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut m = 0.0;
    loop {
        m += 1.0;
        let ratio = q / (m * (m + kk as f64));
        term *= ratio;
        sum += term;
        if ratio.abs() < 1.0 && term.abs() < 1e-18 * sum.abs() + 1e-300 {
            break;
        }
    }
    sign * sum
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `sum_{|k| <= n} i^k J_k(2t) z^k`, the order-`n` truncation of `exp(i t (z + 1/z))`.
pub fn p_poly(n: u64, t: f64) -> LaurentPoly {
    let n = n as i64;
    let coeffs = (-n..=n).map(|k| i_pow(k) * bessel_j(k, 2.0 * t)).collect();
    LaurentPoly::new(-n, coeffs)
}

/// `log(t^n e^t / n!)`; `-inf` at `t = 0`.
pub fn log_delta(n: u64, t: f64) -> f64 {
    if t == 0.0 {
        return f64::NEG_INFINITY;
    }
    n as f64 * t.ln() + t - libm::lgamma(n as f64 + 1.0)
}

fn admissible(n: u64, t: f64) -> bool {
    (n as f64) > t && log_delta(n, t) < 0.0
}

/// The multiplier of order `n` at time `t >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierBundle {
    pub n: u64,
    pub t: f64,
    /// `(1 - delta) z^n P`, an analytic polynomial of degree `2n`.
    pub g: LaurentPoly,
    pub delta: f64,
}

impl MultiplierBundle {
    pub fn new(n: u64, t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "multiplier time must be finite and nonnegative, got {t}"
            )));
        }
        if n == 0 || !admissible(n, t) {
            let mut m = (t.floor() as u64 + 1).max(1);
            while !admissible(m, t) {
                m += 1;
            }
            return Err(Error::InvalidParameters(format!(
                "order n = {n} is not admissible at t = {t}: need n > t and t^n e^t / n! < 1; smallest admissible n is {m}"
            )));
        }
        let delta = log_delta(n, t).exp();
        let g = p_poly(n, t)
            .shift(n as i64)
            .scale(Complex64::new(1.0 - delta, 0.0));
        Ok(Self { n, t, g, delta })
    }
}

/// `6 delta_{n,t} e^{t/r}`: how far `G_{n+1}` can drift from `z G_n` on the circle of radius `r`.
pub fn s_bound(n: u64, t: f64, r: f64) -> f64 {
    (6f64.ln() + log_delta(n, t) + t / r).exp()
}

/// `6 delta_{n,t} e^{2t/r} r^-n`, dominating `sum_{k >= n} s_bound(k) r^-k`.
pub fn tail_bound(n: u64, t: f64, r: f64) -> f64 {
    (6f64.ln() + log_delta(n, t) + 2.0 * t / r - n as f64 * r.ln()).exp()
}
