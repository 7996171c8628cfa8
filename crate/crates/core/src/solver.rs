//! End-to-end evolution by scattering: window the datum, transform it, apply
//! the truncated multiplier, and read the evolved value off the Schur
//! recurrence coefficients. Every answer carries a certified error budget.
//!
//! With the window `[n0 - N, n0 + N]` shifted to `[0, 2N]`, the query site sits
//! at offset `j = N`, and the evolved value is the Schur coefficient of
//! `G_{n,t} * conj_flip(b) / a` at index `n + N`, where `n = 2N`.

use std::f64::consts::{E, LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiplier::{log_delta, MultiplierBundle};
use crate::nlft::fc_plus;
use crate::schur::{log_stability_constant, RationalSchur, SchurCoeffs};
use crate::sequence::Sequence;

/// Largest window half-width `select_params` will hand out.
pub const DEFAULT_WINDOW_CAP: u64 = 1_000_000;

/// Radius at which the bounds are evaluated.
const BUDGET_RADIUS: f64 = 0.5;

/// Parameters of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    /// Window half-width `N`.
    pub half_width: u64,
    /// Multiplier order `n = 2N`.
    pub order: u64,
    pub eps: f64,
    pub eta: f64,
    /// Requested time; negative times are solved as `-q0` at `|t|`.
    pub t: f64,
    pub n0: i64,
}

impl SolveParams {
    pub fn time_reflected(&self) -> bool {
        self.t < 0.0
    }
}

/// Certified error components; `total = localization + truncation`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorBudget {
    pub localization: f64,
    pub truncation: f64,
    pub total: f64,
}

impl ErrorBudget {
    fn new(localization: f64, truncation: f64) -> Self {
        Self {
            localization,
            truncation,
            total: localization + truncation,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSolution {
    pub value: Complex64,
    pub budget: ErrorBudget,
    pub params: SolveParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowSolution {
    /// Approximate `q(t, .)` on `[n0 - N/2, n0 + N/2]`.
    pub values: Sequence,
    /// Budget of each entry of `values`, in the same order.
    pub budgets: Vec<ErrorBudget>,
    pub params: SolveParams,
}

/// `N = 5 + floor(4e|t| + log2(C(eta, 1/2) / eps))`, `n = 2N`.
pub fn select_params(t: f64, eps: f64, eta: f64) -> Result<SolveParams> {
    select_params_capped(t, eps, eta, DEFAULT_WINDOW_CAP)
}

pub fn select_params_capped(t: f64, eps: f64, eta: f64, cap: u64) -> Result<SolveParams> {
    if !t.is_finite() {
        return Err(Error::InvalidParameters(format!("time must be finite, got {t}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "eta must lie in (0, 1], got {eta}"
        )));
    }
    let log_c = log_stability_constant(eta, BUDGET_RADIUS);
    let raw = 4.0 * E * t.abs() + (log_c - eps.ln()) / LN_2;
    let requested = 5.0 + raw.floor();
    if !(requested <= cap as f64) {
        return Err(Error::Infeasible {
            requested: if requested.is_finite() {
                requested as u64
            } else {
                u64::MAX
            },
            cap,
            eta,
        });
    }
    let half_width = requested as u64;
    let order = 2 * half_width;
    if !((order as f64) > t.abs() && log_delta(order, t.abs()) < 0.0) {
        return Err(Error::InvalidParameters(format!(
            "multiplier order {order} is not admissible at |t| = {}",
            t.abs()
        )));
    }
    Ok(SolveParams {
        half_width,
        order,
        eps,
        eta,
        t,
        n0: 0,
    })
}

/// Truncation-to-window error bound at offset `j` from the window centre:
/// `4 e^{t/r} C(eta, r) r^{N - |j|} / (1 - r)`.
pub fn localization_bound(eta: f64, r: f64, t: f64, half_width: u64, j: i64) -> f64 {
    let gap = half_width as f64 - j.unsigned_abs() as f64;
    (4f64.ln() + t.abs() / r + log_stability_constant(eta, r) + gap * r.ln() - (1.0 - r).ln())
        .exp()
}

/// Direct truncation bound `sqrt(2) r e^{10t/r^2} r^{N-|j|} / sqrt(1-r^2)`, or
/// `r e^{10t/r^2} l2tail r^{N-|j|}` when the l2 mass outside the window is known.
pub fn localization_bound_direct(t: f64, r: f64, half_width: u64, j: i64, l2tail: Option<f64>) -> f64 {
    let gap = half_width as f64 - j.unsigned_abs() as f64;
    let common = r.ln() + 10.0 * t.abs() / (r * r) + gap * r.ln();
    match l2tail {
        Some(0.0) => 0.0,
        Some(tail) => (common + tail.ln()).exp(),
        None => (common + 0.5 * 2f64.ln() - 0.5 * (-r * r).ln_1p()).exp(),
    }
}

/// Multiplier truncation bound at coefficient index `n + j`:
/// `2^j C(eta, 1/2) 12 e^{5t} / sqrt(2 pi n) (2et/n)^n`.
pub fn t3_bound(eta: f64, t: f64, n: u64, j: i64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    (j as f64 * LN_2 + log_stability_constant(eta, BUDGET_RADIUS) + 12f64.ln() + 5.0 * t
        - 0.5 * (2.0 * PI * nf).ln()
        + nf * (2.0 * E * t / nf).ln())
    .exp()
}

/// First `count` Schur coefficients of `G_{n,t} * conj_flip(b) / a` for a
/// datum supported on `k >= 0` and `t >= 0`. The coefficient at index `n + j`
/// approximates `q(t, j)`.
pub fn multiplier_coefficients(q: &Sequence, t: f64, n: u64, count: usize) -> Result<SchurCoeffs> {
    let g = MultiplierBundle::new(n, t)?.g;
    let f = fc_plus(q)?;
    let f0 = RationalSchur::new(&g * f.num(), f.den().clone())?;
    let coeffs = f0.coefficients(count);
    if let Some(gamma) = coeffs.terminal {
        return Err(Error::SchurTerminated {
            step: coeffs.gammas.len(),
            modulus: gamma.norm(),
        });
    }
    Ok(coeffs)
}

fn resolve_eta(q0: &Sequence, eta: Option<f64>) -> Result<f64> {
    let actual = q0.log_szego_product().exp();
    match eta {
        None => Ok(actual),
        Some(e) if !(e > 0.0 && e <= 1.0) => Err(Error::InvalidParameters(format!(
            "eta must lie in (0, 1], got {e}"
        ))),
        Some(e) if e > actual * (1.0 + 1e-12) => Err(Error::InvalidParameters(format!(
            "eta = {e} exceeds the datum's Szego product {actual}; it must be a lower bound"
        ))),
        Some(e) => Ok(e),
    }
}

struct Pass {
    /// `q(t, n0 - d)` for `d = 0..=depth`.
    values: Vec<Complex64>,
    budgets: Vec<ErrorBudget>,
}

/// Forward pass for `t >= 0`: values at `n0 - d`, `d = 0..=depth`.
fn forward_pass(q0: &Sequence, t: f64, n0: i64, p: &SolveParams, depth: u64) -> Result<Pass> {
    let big_n = p.half_width as i64;
    let lo = n0 - big_n;
    let window = q0.restrict(lo, n0 + big_n).shifted(-lo);
    let tail = q0.l2_outside(lo, n0 + big_n);
    let n = p.order;
    let coeffs = multiplier_coefficients(&window, t, n, (n as i64 + big_n + 1) as usize)?;
    let mut values = Vec::with_capacity(depth as usize + 1);
    let mut budgets = Vec::with_capacity(depth as usize + 1);
    for d in 0..=depth as i64 {
        values.push(coeffs.gammas[(n as i64 + big_n - d) as usize]);
        let loc = localization_bound(p.eta, BUDGET_RADIUS, t, p.half_width, d).min(
            localization_bound_direct(t, BUDGET_RADIUS, p.half_width, d, Some(tail)),
        );
        budgets.push(ErrorBudget::new(loc, t3_bound(p.eta, t, n, big_n - d)));
    }
    Ok(Pass { values, budgets })
}

fn is_zero(q0: &Sequence) -> bool {
    q0.support().is_none()
}

/// Approximates `q(t, n0)` to within `eps` (certified by the returned budget).
pub fn solve_point(q0: &Sequence, t: f64, n0: i64, eps: f64, eta: Option<f64>) -> Result<PointSolution> {
    let eta = resolve_eta(q0, eta)?;
    let mut params = select_params(t, eps, eta)?;
    params.n0 = n0;
    if is_zero(q0) {
        return Ok(PointSolution {
            value: Complex64::new(0.0, 0.0),
            budget: ErrorBudget::default(),
            params,
        });
    }
    if t < 0.0 {
        let pass = forward_pass(&q0.negated(), -t, n0, &params, 0)?;
        return Ok(PointSolution {
            value: -pass.values[0],
            budget: pass.budgets[0],
            params,
        });
    }
    let pass = forward_pass(q0, t, n0, &params, 0)?;
    Ok(PointSolution {
        value: pass.values[0],
        budget: pass.budgets[0],
        params,
    })
}

/// Approximates `q(t, .)` on `[n0 - N/2, n0 + N/2]` with one pass for the
/// left half and one pass on the mirrored datum for the right half.
pub fn solve_window(q0: &Sequence, t: f64, n0: i64, eps: f64, eta: Option<f64>) -> Result<WindowSolution> {
    let eta = resolve_eta(q0, eta)?;
    let mut params = select_params(t, eps, eta)?;
    params.n0 = n0;
    let half = params.half_width / 2;
    let lo = n0 - half as i64;
    let width = 2 * half as usize + 1;
    if is_zero(q0) {
        return Ok(WindowSolution {
            values: Sequence::zeros(lo, width),
            budgets: vec![ErrorBudget::default(); width],
            params,
        });
    }
    let (data, tau, sign) = if t < 0.0 {
        (q0.negated(), -t, -1.0)
    } else {
        (q0.clone(), t, 1.0)
    };
    let mirrored = data.reflected();
    let (left, right) = rayon::join(
        || forward_pass(&data, tau, n0, &params, half),
        || forward_pass(&mirrored, tau, -n0, &params, half),
    );
    let (left, right) = (left?, right?);

    let mut values = Vec::with_capacity(width);
    let mut budgets = Vec::with_capacity(width);
    for d in (0..=half as usize).rev() {
        values.push(left.values[d] * sign);
        budgets.push(left.budgets[d]);
    }
    for d in 1..=half as usize {
        values.push(right.values[d] * sign);
        budgets.push(right.budgets[d]);
    }
    Ok(WindowSolution {
        values: Sequence::from_trusted(lo, values),
        budgets,
        params,
    })
}
