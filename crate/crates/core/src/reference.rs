//! Direct integration of the lattice equation
//! `i dq_n/dt + (1 - |q_n|^2)(q_{n-1} + q_{n+1}) = 0`, written as
//! `dq_n/dt = i (1 - |q_n|^2)(q_{n-1} + q_{n+1})`,
//! on a finite lattice with zero or periodic boundary.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// States with `max |q| >= 1 - MODULUS_GUARD` are rejected.
pub const MODULUS_GUARD: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Sites outside the stored block are held at zero.
    #[default]
    Zero,
    /// The stored block is a ring.
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub q: Sequence,
    pub t: f64,
    pub boundary: Boundary,
}

/// `support radius + ceil(10 (1 + |t|))`.
pub fn default_radius(q0: &Sequence, t: f64) -> u64 {
    q0.support_radius() + (10.0 * (1.0 + t.abs())).ceil() as u64
}

fn rhs_into(q: &[Complex64], boundary: Boundary, out: &mut [Complex64]) {
    let len = q.len();
    let i = Complex64::new(0.0, 1.0);
    for k in 0..len {
        let (left, right) = match boundary {
            Boundary::Zero => (
                if k > 0 { q[k - 1] } else { ZERO },
                if k + 1 < len { q[k + 1] } else { ZERO },
            ),
            Boundary::Periodic => (q[(k + len - 1) % len], q[(k + 1) % len]),
        };
        out[k] = i * (1.0 - q[k].norm_sqr()) * (left + right);
    }
}

/// Time derivative at every stored site.
pub fn al_rhs(s: &LatticeState) -> Vec<Complex64> {
    let mut out = vec![ZERO; s.q.len()];
    rhs_into(s.q.values(), s.boundary, &mut out);
    out
}

/// Log of the conserved product `prod (1 - |q_n|^2)`.
pub fn conserved_product(s: &LatticeState) -> f64 {
    s.q.log_szego_product()
}

fn lattice(q0: &Sequence, radius: Option<u64>, t: f64, boundary: Boundary) -> Result<Sequence> {
    match boundary {
        Boundary::Periodic => {
            if q0.is_empty() {
                return Err(Error::InvalidInput("periodic ring must be nonempty".into()));
            }
            Ok(q0.clone())
        }
        Boundary::Zero => {
            let r = radius.unwrap_or_else(|| default_radius(q0, t));
            if q0.support_radius() > r {
                return Err(Error::InvalidInput(format!(
                    "truncation radius {r} does not cover the datum's support radius {}",
                    q0.support_radius()
                )));
            }
            let r = r as i64;
            let values = (-r..=r).map(|k| q0.get(k)).collect();
            Ok(Sequence::from_trusted(-r, values))
        }
    }
}

fn guard(q: &[Complex64], t: f64) -> Result<()> {
    let m = q.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(m < 1.0 - MODULUS_GUARD) {
        return Err(Error::BlowUp { t, max_modulus: m });
    }
    Ok(())
}

struct Rk4Work {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4Work {
    fn new(len: usize) -> Self {
        Self {
            k1: vec![ZERO; len],
            k2: vec![ZERO; len],
            k3: vec![ZERO; len],
            k4: vec![ZERO; len],
            tmp: vec![ZERO; len],
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn step(&mut self, q: &mut [Complex64], dt: f64, b: Boundary) {
        rhs_into(q, b, &mut self.k1);
        for i in 0..q.len() {
            self.tmp[i] = q[i] + 0.5 * dt * self.k1[i];
        }
        rhs_into(&self.tmp, b, &mut self.k2);
        for i in 0..q.len() {
            self.tmp[i] = q[i] + 0.5 * dt * self.k2[i];
        }
        rhs_into(&self.tmp, b, &mut self.k3);
        for i in 0..q.len() {
            self.tmp[i] = q[i] + dt * self.k3[i];
        }
        rhs_into(&self.tmp, b, &mut self.k4);
        for i in 0..q.len() {
            q[i] += dt / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// Classical RK4 from 0 to `t` (either sign) with step `h`; the last step is
/// shortened to land on `t`. The zero-boundary lattice is `[-R, R]` with `R`
/// defaulting to [`default_radius`]; the periodic ring is the stored block of `q0`.
pub fn rk4_integrate(
    q0: &Sequence,
    t: f64,
    h: f64,
    radius: Option<u64>,
    boundary: Boundary,
) -> Result<LatticeState> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameters(format!("step must be positive, got {h}")));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameters(format!("time must be finite, got {t}")));
    }
    let lat = lattice(q0, radius, t, boundary)?;
    let offset = lat.offset();
    let mut q = lat.values().to_vec();
    let mut work = Rk4Work::new(q.len());
    let dir = t.signum();
    let full = (t.abs() / h).floor() as u64;
    let rest = t.abs() - full as f64 * h;
    for s in 0..full {
        work.step(&mut q, dir * h, boundary);
        guard(&q, dir * (s + 1) as f64 * h)?;
    }
    if rest > 1e-14 * t.abs().max(1.0) {
        work.step(&mut q, dir * rest, boundary);
        guard(&q, t)?;
    }
    Ok(LatticeState {
        q: Sequence::from_trusted(offset, q),
        t,
        boundary,
    })
}

/// RK4 at steps `h` and `h/2`; returns the finer solution and the Richardson
/// estimate `max |q_h - q_{h/2}| / 15` of its error.
pub fn rk4_richardson(
    q0: &Sequence,
    t: f64,
    h: f64,
    radius: Option<u64>,
    boundary: Boundary,
) -> Result<(LatticeState, f64)> {
    let (coarse, fine) = rayon::join(
        || rk4_integrate(q0, t, h, radius, boundary),
        || rk4_integrate(q0, t, 0.5 * h, radius, boundary),
    );
    let (coarse, fine) = (coarse?, fine?);
    let diff = coarse
        .q
        .values()
        .iter()
        .zip(fine.q.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok((fine, diff / 15.0))
}

/// Knobs of the Picard solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    /// Longest sub-interval; `6 * len < 1` makes the integral map a contraction.
    pub max_interval: f64,
    /// Quadrature panels per sub-interval (even).
    pub mesh: usize,
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            max_interval: 1.0 / 12.0,
            mesh: 32,
            tol: 1e-12,
            max_iterations: 200,
        }
    }
}

/// Iterates `Q <- q_start + int_0^s F(Q)` on one sub-interval of length `tau`.
/// Returns the state at the end of the interval after convergence, or after
/// `cap` iterations when `cap` is set.
fn picard_interval(
    start: &[Complex64],
    tau: f64,
    boundary: Boundary,
    opts: &PicardOptions,
    interval: usize,
    cap: Option<usize>,
) -> Result<Vec<Complex64>> {
    let m = opts.mesh;
    let len = start.len();
    let h = tau / m as f64;
    let mut traj: Vec<Vec<Complex64>> = vec![start.to_vec(); m + 1];
    let mut f: Vec<Vec<Complex64>> = vec![vec![ZERO; len]; m + 1];
    let limit = cap.unwrap_or(opts.max_iterations);
    let mut residual = f64::INFINITY;
    for _ in 0..limit {
        for (node, out) in traj.iter().zip(f.iter_mut()) {
            rhs_into(node, boundary, out);
        }
        residual = 0.0;
        let mut acc = vec![ZERO; len];
        // `acc` holds the integral up to the last even node. Even nodes close a
        // Simpson panel; odd nodes use the quadratic through j-1, j, j+1.
        for j in 1..=m {
            for i in 0..len {
                let total = if j % 2 == 0 {
                    acc[i] + h / 3.0 * (f[j - 2][i] + 4.0 * f[j - 1][i] + f[j][i])
                } else {
                    acc[i] + h / 12.0 * (5.0 * f[j - 1][i] + 8.0 * f[j][i] - f[j + 1][i])
                };
                let next = start[i] + total;
                residual = f64::max(residual, (next - traj[j][i]).norm());
                traj[j][i] = next;
                if j % 2 == 0 {
                    acc[i] = total;
                }
            }
        }
        if cap.is_some() || residual <= opts.tol {
            return Ok(traj.pop().unwrap());
        }
    }
    Err(Error::NonContraction {
        interval,
        residual,
        iterations: limit,
    })
}

/// Fixed-point solution of the integral form on sub-intervals no longer than
/// `opts.max_interval`, each iterated until the update falls below `opts.tol`.
pub fn picard_solve_with(
    q0: &Sequence,
    t: f64,
    radius: Option<u64>,
    boundary: Boundary,
    opts: &PicardOptions,
) -> Result<LatticeState> {
    if opts.mesh == 0 || opts.mesh % 2 == 1 {
        return Err(Error::InvalidParameters("Picard mesh must be even and positive".into()));
    }
    let lat = lattice(q0, radius, t, boundary)?;
    let offset = lat.offset();
    let mut q = lat.values().to_vec();
    let pieces = ((t.abs() / opts.max_interval).ceil() as usize).max(1);
    let tau = t / pieces as f64;
    for k in 0..pieces {
        q = picard_interval(&q, tau, boundary, opts, k, None)?;
        guard(&q, tau * (k + 1) as f64)?;
    }
    Ok(LatticeState {
        q: Sequence::from_trusted(offset, q),
        t,
        boundary,
    })
}

pub fn picard_solve(q0: &Sequence, t: f64, radius: Option<u64>) -> Result<LatticeState> {
    picard_solve_with(q0, t, radius, Boundary::Zero, &PicardOptions::default())
}

/// The first Picard iterate on a single interval of length `t`, starting from
/// the constant trajectory `q0`.
pub fn picard_first_iterate(q0: &Sequence, t: f64, radius: Option<u64>) -> Result<LatticeState> {
    let lat = lattice(q0, radius, t, Boundary::Zero)?;
    let q = picard_interval(
        lat.values(),
        t,
        Boundary::Zero,
        &PicardOptions::default(),
        0,
        Some(1),
    )?;
    Ok(LatticeState {
        q: Sequence::from_trusted(lat.offset(), q),
        t,
        boundary: Boundary::Zero,
    })
}
