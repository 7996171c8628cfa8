//! Complex Laurent polynomials with exact degree bookkeeping.
//!
//! A [`LaurentPoly`] stores a dense coefficient block starting at its lowest
//! exponent. Only exact zeros are trimmed from either end, so the degree range
//! of a product or a Schur step is a deterministic function of its inputs.
//! Products switch from schoolbook convolution to zero-padded FFT convolution
//! once the result has more than [`DIRECT_MUL_MAX_SPAN`] coefficients.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Products with at most this many coefficients use direct convolution.
pub const DIRECT_MUL_MAX_SPAN: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// `z^min_deg * (coeffs[0] + coeffs[1] z + ...)`.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly {
    min_deg: i64,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentPoly")
            .field("min_deg", &self.min_deg)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl LaurentPoly {
    /// Builds a polynomial, trimming exact zeros from both ends. An empty or
    /// all-zero block yields the canonical zero polynomial.
    pub fn new(min_deg: i64, mut coeffs: Vec<Complex64>) -> Self {
        let Some(first) = coeffs.iter().position(|c| *c != ZERO) else {
            return Self::zero();
        };
        let last = coeffs.iter().rposition(|c| *c != ZERO).unwrap();
        coeffs.truncate(last + 1);
        if first > 0 {
            coeffs.drain(..first);
        }
        Self {
            min_deg: min_deg + first as i64,
            coeffs,
        }
    }

    pub fn zero() -> Self {
        Self {
            min_deg: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    /// `max_deg - min_deg`.
    pub fn span(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero outside the stored range).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let i = k - self.min_deg;
        if i < 0 || i >= self.coeffs.len() as i64 {
            ZERO
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Value at `z = 0` for polynomials without negative powers.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(0)
    }

    /// Sum of coefficient moduli.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.min_deg, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            min_deg: self.min_deg + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `conj(p(1 / conj(z)))`: coefficients conjugated, exponents negated.
    pub fn conj_flip(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            min_deg: -self.max_deg(),
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }

    /// Removes the `z^0` coefficient and divides by `z`. The caller guarantees
    /// that the constant term is (numerically) zero and that there are no
    /// negative powers.
    pub(crate) fn drop_constant_div_z(mut self) -> Self {
        debug_assert!(self.min_deg >= 0);
        if self.min_deg == 0 {
            self.coeffs[0] = ZERO;
        }
        Self::new(self.min_deg - 1, self.coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == ZERO {
            return match self.min_deg {
                d if d < 0 && !self.is_zero() => Err(Error::Domain(format!(
                    "evaluation at z = 0 of a polynomial with lowest exponent {d}"
                ))),
                0 => Ok(self.coeffs[0]),
                _ => Ok(ZERO),
            };
        }
        let body = self
            .coeffs
            .iter()
            .rev()
            .fold(ZERO, |acc, c| acc * z + c);
        Ok(body * z.powi(self.min_deg as i32))
    }

    /// Values at all nodes of `grid`, via one FFT of the radius-scaled,
    /// wrapped coefficients. Exact for any span: exponents are folded modulo
    /// the grid size, which is what evaluation at roots of unity does.
    pub fn eval_grid(&self, grid: &CircleGrid) -> Vec<Complex64> {
        let m = grid.size();
        let r = grid.radius();
        let mut buf = vec![ZERO; m];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.min_deg + i as i64;
            let w = if r == 1.0 { 1.0 } else { r.powi(e as i32) };
            buf[e.rem_euclid(m as i64) as usize] += c * w;
        }
        inverse_plan(m).process(&mut buf);
        buf
    }

    /// Schoolbook product. Used below the FFT threshold and as a reference.
    pub fn mul_direct(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.min_deg + other.min_deg, out)
    }

    fn mul_fft(&self, other: &Self) -> Self {
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let size = len.next_power_of_two();
        let mut fa = vec![ZERO; size];
        let mut fb = vec![ZERO; size];
        fa[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        fb[..other.coeffs.len()].copy_from_slice(&other.coeffs);
        let fwd = forward_plan(size);
        fwd.process(&mut fa);
        fwd.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x *= y;
        }
        inverse_plan(size).process(&mut fa);
        let norm = 1.0 / size as f64;
        fa.truncate(len);
        for x in &mut fa {
            *x *= norm;
        }
        Self::new(self.min_deg + other.min_deg, fa)
    }

    /// Exact-degree product; FFT-backed above the direct threshold.
    pub fn mul_poly(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.coeffs.len() + other.coeffs.len() - 1 <= DIRECT_MUL_MAX_SPAN {
            self.mul_direct(other)
        } else {
            self.mul_fft(other)
        }
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    /// `self + w * other`.
    pub fn combine(&self, other: &Self, w: Complex64) -> Self {
        if other.is_zero() || w == ZERO {
            return self.clone();
        }
        if self.is_zero() {
            return other.scale(w);
        }
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        let mut out = vec![ZERO; (hi - lo + 1) as usize];
        let s0 = (self.min_deg - lo) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            out[s0 + i] = *c;
        }
        let o0 = (other.min_deg - lo) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            out[o0 + i] += w * c;
        }
        Self::new(lo, out)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_poly(rhs)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.sub_poly(rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// `size` equispaced nodes `radius * exp(2 pi i m / size)` on a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleGrid {
    size: usize,
    radius: f64,
}

impl CircleGrid {
    pub fn new(size: usize, radius: f64) -> Result<Self> {
        if size == 0 || !size.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "grid size must be a power of two, got {size}"
            )));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "grid radius must lie in (0, 1], got {radius}"
            )));
        }
        Ok(Self { size, radius })
    }

    pub fn unit(size: usize) -> Result<Self> {
        Self::new(size, 1.0)
    }

    /// Unit-circle grid with at least `4 * span` nodes (and at least 64).
    pub fn for_span(span: usize) -> Self {
        let size = (4 * span.max(1)).next_power_of_two().max(64);
        Self { size, radius: 1.0 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn node(&self, m: usize) -> Complex64 {
        Complex64::from_polar(self.radius, 2.0 * PI * m as f64 / self.size as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.size).map(|m| self.node(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trims_exact_zeros_only() {
        let p = LaurentPoly::new(-2, vec![ZERO, c(1e-300, 0.0), c(2.0, 0.0), ZERO]);
        assert_eq!(p.min_deg(), -1);
        assert_eq!(p.span(), 1);
        assert_eq!(p.max_deg() - p.min_deg(), p.span() as i64);
        assert_eq!(LaurentPoly::new(5, vec![ZERO, ZERO]), LaurentPoly::zero());
        assert_eq!(LaurentPoly::new(5, vec![]), LaurentPoly::zero());
    }

    #[test]
    fn add_cancels_and_keeps_identity() {
        let one_plus_z = LaurentPoly::new(0, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let minus_z = LaurentPoly::monomial(c(-1.0, 0.0), 1);
        assert_eq!(&one_plus_z + &minus_z, LaurentPoly::one());
        assert_eq!(&one_plus_z + &LaurentPoly::zero(), one_plus_z);

        let s = &LaurentPoly::monomial(c(1.0, 0.0), -1) + &LaurentPoly::monomial(c(1.0, 0.0), 1);
        assert_eq!(s.min_deg(), -1);
        assert_eq!(s.span(), 2);
        assert_eq!(s.coeff(0), ZERO);
    }

    #[test]
    fn difference_of_squares() {
        let a = LaurentPoly::new(0, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let b = LaurentPoly::new(0, vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        let p = &a * &b;
        assert_eq!(p, LaurentPoly::new(0, vec![c(1.0, 0.0), ZERO, c(-1.0, 0.0)]));
        assert_eq!(&a * &LaurentPoly::one(), a);
        assert!((&a * &LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn eval_simple_cases() {
        let three = LaurentPoly::constant(c(3.0, 0.0));
        assert_eq!(three.eval(c(0.3, -2.0)).unwrap(), c(3.0, 0.0));
        assert_eq!(three.eval(ZERO).unwrap(), c(3.0, 0.0));
        let z = LaurentPoly::monomial(c(1.0, 0.0), 1);
        assert_eq!(z.eval(c(0.0, 1.0)).unwrap(), c(0.0, 1.0));
        assert_eq!(z.eval(ZERO).unwrap(), ZERO);
        let inv = LaurentPoly::monomial(c(1.0, 0.0), -1);
        assert!(matches!(inv.eval(ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_fourth_roots() {
        let z = LaurentPoly::monomial(c(1.0, 0.0), 1);
        let g = CircleGrid::unit(4).unwrap();
        let v = z.eval_grid(&g);
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        let k = LaurentPoly::constant(c(0.5, -0.25));
        for v in k.eval_grid(&CircleGrid::new(8, 0.3).unwrap()) {
            assert!((v - c(0.5, -0.25)).norm() < 1e-15);
        }
    }

    #[test]
    fn conj_flip_examples() {
        let p = LaurentPoly::monomial(c(0.0, 1.0), 1);
        assert_eq!(p.conj_flip(), LaurentPoly::monomial(c(0.0, -1.0), -1));
        // 2 + z + 1/z is fixed
        let sym = LaurentPoly::new(-1, vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(sym.conj_flip(), sym);
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(CircleGrid::new(12, 1.0).is_err());
        assert!(CircleGrid::new(16, 0.0).is_err());
        assert!(CircleGrid::new(16, 1.5).is_err());
        assert_eq!(CircleGrid::for_span(100).size(), 512);
    }

    #[test]
    fn drop_constant_shifts_down() {
        let p = LaurentPoly::new(0, vec![c(1e-17, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let q = p.drop_constant_div_z();
        assert_eq!(q, LaurentPoly::monomial(c(2.0, 0.0), 1));
        let m = LaurentPoly::monomial(c(3.0, 0.0), 4).drop_constant_div_z();
        assert_eq!(m, LaurentPoly::monomial(c(3.0, 0.0), 3));
    }
}
