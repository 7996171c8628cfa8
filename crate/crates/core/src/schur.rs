//! Schur's algorithm on rational Schur-class functions.
//!
//! A function `F = P / Q` is carried as two analytic polynomials. One step of
//! the recursion `z F_{k+1} = (F_k - F_k(0)) / (1 - conj(F_k(0)) F_k)` maps
//! `(P, Q)` to `((P - gamma Q) / z, Q - conj(gamma) P)` with `gamma = P(0) / Q(0)`,
//! after which both are rescaled so the denominator is 1 at the origin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{CircleGrid, LaurentPoly};

/// Nodes of the unit-circle grid used to witness `|P| <= |Q|`.
pub const WITNESS_GRID: usize = 1024;

/// Coefficients with `|gamma| >= 1 - STOP_MARGIN` end the recursion.
pub const STOP_MARGIN: f64 = 1e-12;

/// A rational function `num / den` in the Schur class of the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSchur {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Outcome of one Schur step.
#[derive(Debug, Clone, PartialEq)]
pub enum SchurStep {
    /// `gamma = F(0)` and the next iterate.
    Next { gamma: Complex64, next: RationalSchur },
    /// `|F(0)|` reached the unit circle: `F` is a finite Blaschke product
    /// (numerically) and the recursion stops.
    Stop { gamma: Complex64 },
}

impl RationalSchur {
    /// Validates analyticity, `Q(0) != 0` and the grid witness
    /// `|P| <= |Q| + 1e-9 max|Q|`, then rescales so that `Q(0) = 1`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if !num.is_zero() && num.min_deg() < 0 {
            return Err(Error::InvalidInput(format!(
                "numerator has negative power z^{}",
                num.min_deg()
            )));
        }
        if den.min_deg() != 0 || den.constant_term() == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidInput(
                "denominator must be an analytic polynomial with Q(0) != 0".into(),
            ));
        }
        let grid = CircleGrid::unit(WITNESS_GRID).expect("power-of-two grid");
        let p = num.eval_grid(&grid);
        let q = den.eval_grid(&grid);
        let qmax = q.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let excess = p
            .iter()
            .zip(&q)
            .map(|(a, b)| a.norm() - b.norm())
            .fold(f64::NEG_INFINITY, f64::max);
        if excess > 1e-9 * qmax {
            return Err(Error::NotSchurClass { excess });
        }
        Ok(Self::normalized(num, den))
    }

    /// A polynomial Schur function (`Q = 1`).
    pub fn polynomial(p: LaurentPoly) -> Result<Self> {
        Self::new(p, LaurentPoly::one())
    }

    /// The constant function `c`, `|c| <= 1`.
    pub fn constant(c: Complex64) -> Result<Self> {
        Self::polynomial(LaurentPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        let q0 = den.constant_term();
        if q0 == Complex64::new(1.0, 0.0) {
            return Self { num, den };
        }
        let s = q0.inv();
        Self {
            num: num.scale(s),
            den: den.scale(s),
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.num.constant_term() / self.den.constant_term()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        // Both polynomials are analytic, so evaluation cannot fail.
        self.num.eval(z).unwrap() / self.den.eval(z).unwrap()
    }

    pub fn eval_grid(&self, grid: &CircleGrid) -> Vec<Complex64> {
        let p = self.num.eval_grid(grid);
        let q = self.den.eval_grid(grid);
        p.into_iter().zip(q).map(|(a, b)| a / b).collect()
    }

    /// One step of the recursion.
    pub fn step(&self) -> SchurStep {
        let gamma = self.value_at_zero();
        if gamma.norm() >= 1.0 - STOP_MARGIN {
            return SchurStep::Stop { gamma };
        }
        // The constant term of P - gamma Q vanishes by construction; it is
        // dropped rather than trusted to cancel in floating point.
        let num = self.num.combine(&self.den, -gamma).drop_constant_div_z();
        let den = self.den.combine(&self.num, -gamma.conj());
        SchurStep::Next {
            gamma,
            next: Self::normalized(num, den),
        }
    }

    /// The `k`-th Schur iterate `F_k`.
    pub fn iterate(&self, k: usize) -> Result<Self> {
        let mut f = self.clone();
        for step in 0..k {
            f = match f.step() {
                SchurStep::Next { next, .. } => next,
                SchurStep::Stop { gamma } => {
                    return Err(Error::SchurTerminated {
                        step,
                        modulus: gamma.norm(),
                    })
                }
            };
        }
        Ok(f)
    }

    /// The first `m` recurrence coefficients, or fewer if the recursion stops.
    pub fn coefficients(&self, m: usize) -> SchurCoeffs {
        let mut gammas = Vec::with_capacity(m);
        let mut f = self.clone();
        for _ in 0..m {
            match f.step() {
                SchurStep::Next { gamma, next } => {
                    gammas.push(gamma);
                    f = next;
                }
                SchurStep::Stop { gamma } => {
                    return SchurCoeffs {
                        gammas,
                        terminal: Some(gamma),
                    }
                }
            }
        }
        SchurCoeffs {
            gammas,
            terminal: None,
        }
    }
}

/// Recurrence coefficients `F_0(0), F_1(0), ...`, each inside the disk, plus the
/// unimodular value that stopped the recursion, if any.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SchurCoeffs {
    pub gammas: Vec<Complex64>,
    pub terminal: Option<Complex64>,
}

impl SchurCoeffs {
    /// `log prod (1 - |gamma_k|^2)`.
    pub fn log_eta(&self) -> f64 {
        self.gammas.iter().map(|g| (-g.norm_sqr()).ln_1p()).sum()
    }

    /// The Szego product `prod (1 - |gamma_k|^2)`.
    pub fn eta(&self) -> f64 {
        self.log_eta().exp()
    }
}

/// `C(eta, r)` together with its logarithm; `value` is `+inf` when the
/// constant does not fit in a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstant {
    pub log_value: f64,
    pub value: f64,
}

/// `C(eta, r) = exp(log(1/eta) (2 + 1/(1 - sqrt(1 - eta))) (4/(1-r)^2 + 1))`.
pub fn stability_constant(eta: f64, r: f64) -> Result<StabilityConstant> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "eta must lie in (0, 1], got {eta}"
        )));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "r must lie in (0, 1), got {r}"
        )));
    }
    let log_value = log_stability_constant(eta, r);
    Ok(StabilityConstant {
        log_value,
        value: log_value.exp(),
    })
}

pub(crate) fn log_stability_constant(eta: f64, r: f64) -> f64 {
    if eta >= 1.0 {
        return 0.0;
    }
    // 1 / (1 - sqrt(1 - eta)) == (1 + sqrt(1 - eta)) / eta, without cancellation.
    let c_eta = (1.0 + (1.0 - eta).sqrt()) / eta;
    let radial = 4.0 / ((1.0 - r) * (1.0 - r)) + 1.0;
    -eta.ln() * (2.0 + c_eta) * radial
}

/// `sqrt(mean |f|^2)` over `m` equispaced nodes of the circle of radius `r`.
pub fn l2_norm_circle(f: &RationalSchur, r: f64, m: usize) -> Result<f64> {
    let grid = CircleGrid::new(m, r)?;
    Ok(rms(f.eval_grid(&grid).into_iter()))
}

/// `||f - g||_{L^2(r T)}` by the same quadrature.
pub fn l2_distance_circle(f: &RationalSchur, g: &RationalSchur, r: f64, m: usize) -> Result<f64> {
    let grid = CircleGrid::new(m, r)?;
    let a = f.eval_grid(&grid);
    let b = g.eval_grid(&grid);
    Ok(rms(a.into_iter().zip(b).map(|(x, y)| x - y)))
}

/// Largest `|f|` over `m` nodes of the circle of radius `r`.
pub fn max_modulus_circle(f: &RationalSchur, r: f64, m: usize) -> Result<f64> {
    let grid = CircleGrid::new(m, r)?;
    Ok(f.eval_grid(&grid).iter().map(|v| v.norm()).fold(0.0, f64::max))
}

fn rms(values: impl Iterator<Item = Complex64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v.norm_sqr(), n + 1));
    (sum / n as f64).sqrt()
}

/// Both sides of `sum_{k<m} max_{|z|=r} |F_k|^2 <= 4/(1-r)^2 log(1/eta_m)`,
/// where `eta_m` uses the first `m` coefficients and the maximum is sampled on
/// a [`WITNESS_GRID`]-node grid.
pub fn iterate_energy_bound(f: &RationalSchur, r: f64, m: usize) -> Result<(f64, f64)> {
    let grid = CircleGrid::new(WITNESS_GRID, r)?;
    let mut lhs = 0.0;
    let mut log_eta = 0.0;
    let mut cur = f.clone();
    for _ in 0..m {
        let peak = cur
            .eval_grid(&grid)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        lhs += peak * peak;
        match cur.step() {
            SchurStep::Next { gamma, next } => {
                log_eta += (-gamma.norm_sqr()).ln_1p();
                cur = next;
            }
            SchurStep::Stop { .. } => break,
        }
    }
    let rhs = 4.0 / ((1.0 - r) * (1.0 - r)) * (-log_eta);
    Ok((lhs, rhs))
}
