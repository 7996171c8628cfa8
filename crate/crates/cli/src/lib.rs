//! Job description, validation and dispatch for the `al-ist` binary.

pub mod io;

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use al_ist::multiplier::{p_poly, s_bound, tail_bound, MultiplierBundle};
use al_ist::nlft::{nlft_forward, szego_identity_check};
use al_ist::reference::{rk4_integrate, rk4_richardson, Boundary};
use al_ist::rng::random_datum;
use al_ist::solver::{solve_point, solve_window};
use al_ist::{CircleGrid, LaurentPoly, Sequence};
use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::io::{fmt_f64, sequence_json, to_json, Exact, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Fast solver at `--n0` (or on a window with `--window`).
    Solve,
    /// RK4 snapshot of the lattice at time `--t`.
    Reference,
    /// Fast solver and RK4 side by side, with a pass/fail verdict.
    Compare,
    /// Transfer-matrix coefficients and identity residuals.
    Nlft,
    /// Multiplier coefficients and bounds for `--order` and `--t`.
    Multiplier,
    /// Wall-clock of the transform product against window size.
    Bench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Zero,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Zero => Boundary::Zero,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

/// One invocation. Data come from `--in`, or from `--seed` (with `--sites`
/// and `--amp`) when no file is given.
#[derive(Debug, Clone, Parser)]
#[command(name = "al-ist", version, about = "Ablowitz-Ladik evolution by inverse scattering")]
#[command(allow_negative_numbers = true)]
pub struct JobSpec {
    #[arg(long, value_enum)]
    pub cmd: Command,
    /// Sequence document `{"offset": k, "values": [[re, im], ...]}`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0)]
    pub n0: i64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Lower bound for the Szego product; defaults to the datum's own.
    #[arg(long)]
    pub eta: Option<f64>,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    /// Lattice truncation radius for the reference solver.
    #[arg(long)]
    pub radius: Option<u64>,
    /// Grid size (power of two) for identity checks.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Zero)]
    pub boundary: BoundaryArg,
    /// Solve on the window around `--n0` instead of the single site.
    #[arg(long)]
    pub window: bool,
    /// Multiplier order `n`.
    #[arg(long)]
    pub order: Option<u64>,
    /// Number of sites of a seeded random datum.
    #[arg(long, default_value_t = 5)]
    pub sites: usize,
    /// Amplitude bound of a seeded random datum.
    #[arg(long, default_value_t = 0.5)]
    pub amp: f64,
    /// Largest window half-width exponent for `bench`.
    #[arg(long, default_value_t = 12)]
    pub max_log2: u32,
}

#[derive(Debug)]
pub enum CliError {
    /// Rejected input or parameters (exit 2).
    Validation(String),
    /// A numerical guard tripped during the computation (exit 3).
    Guard(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Guard(m) => write!(f, "numerical guard tripped: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<al_ist::Error> for CliError {
    fn from(e: al_ist::Error) -> Self {
        if e.is_numerical_guard() {
            CliError::Guard(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

/// What a successful run produced: the artifact text and the exit status
/// (`compare` exits 1 when the deviation check fails).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
    /// Human-readable note for stderr.
    pub note: Option<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            status: 0,
            note: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Range checks that do not depend on the datum.
pub fn validate(job: &JobSpec) -> Result<(), CliError> {
    if !job.t.is_finite() {
        return Err(invalid(format!("--t must be finite, got {}", job.t)));
    }
    if !(job.eps > 0.0 && job.eps < 1.0) {
        return Err(invalid(format!("--eps must lie in (0, 1), got {}", job.eps)));
    }
    if let Some(eta) = job.eta {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid(format!("--eta must lie in (0, 1], got {eta}")));
        }
    }
    if !(job.h > 0.0 && job.h.is_finite()) {
        return Err(invalid(format!("--h must be positive, got {}", job.h)));
    }
    if let Some(g) = job.grid {
        if g == 0 || !g.is_power_of_two() {
            return Err(invalid(format!("--grid must be a power of two, got {g}")));
        }
    }
    if !(job.amp > 0.0 && job.amp < 1.0) {
        return Err(invalid(format!("--amp must lie in (0, 1), got {}", job.amp)));
    }
    if job.sites == 0 || job.sites > 1 << 20 {
        return Err(invalid(format!("--sites must lie in 1..=2^20, got {}", job.sites)));
    }
    if !(4..=20).contains(&job.max_log2) {
        return Err(invalid(format!("--max-log2 must lie in 4..=20, got {}", job.max_log2)));
    }
    if job.cmd == Command::Multiplier && job.order.is_none() {
        return Err(invalid("multiplier needs --order"));
    }
    if job.cmd == Command::Multiplier && job.t < 0.0 {
        return Err(invalid("multiplier needs --t >= 0"));
    }
    Ok(())
}

fn datum(job: &JobSpec) -> Result<Sequence, CliError> {
    match (&job.input, job.seed) {
        (Some(path), _) => io::read_sequence(path),
        (None, Some(seed)) => Ok(random_datum(
            seed,
            -(job.sites as i64 / 2),
            job.sites,
            job.amp,
        )),
        (None, None) => Err(invalid("provide a datum with --in or --seed")),
    }
}

/// Validates the job and runs it.
pub fn run(job: &JobSpec) -> Result<Outcome, CliError> {
    validate(job)?;
    match job.cmd {
        Command::Solve => solve(job, &datum(job)?),
        Command::Reference => reference(job, &datum(job)?),
        Command::Compare => compare(job, &datum(job)?),
        Command::Nlft => nlft(job, &datum(job)?),
        Command::Multiplier => multiplier(job),
        Command::Bench => bench(job),
    }
}

fn solve(job: &JobSpec, q0: &Sequence) -> Result<Outcome, CliError> {
    let mut table = Table::new(&[]);
    if job.window {
        let w = solve_window(q0, job.t, job.n0, job.eps, job.eta)?;
        for ((k, v), b) in w.values.iter().zip(&w.budgets) {
            table.push(k, v, b.total, &[]);
        }
    } else {
        let s = solve_point(q0, job.t, job.n0, job.eps, job.eta)?;
        table.push(job.n0, s.value, s.budget.total, &[]);
    }
    Ok(Outcome::ok(table.render()))
}

fn reference(job: &JobSpec, q0: &Sequence) -> Result<Outcome, CliError> {
    let s = rk4_integrate(q0, job.t, job.h, job.radius, job.boundary.into())?;
    Ok(Outcome::ok(sequence_json(&s.q)))
}

fn compare(job: &JobSpec, q0: &Sequence) -> Result<Outcome, CliError> {
    let (fast, slow) = rayon::join(
        || solve_window(q0, job.t, job.n0, job.eps, job.eta),
        || rk4_richardson(q0, job.t, job.h, job.radius, job.boundary.into()),
    );
    let fast = fast?;
    let (reference, ref_err) = slow?;
    let mut table = Table::new(&["ref_re", "ref_im", "deviation"]);
    let mut worst: f64 = 0.0;
    for ((k, v), b) in fast.values.iter().zip(&fast.budgets) {
        let r = reference.q.get(k);
        let d = (v - r).norm();
        worst = worst.max(d);
        table.push(k, v, b.total, &[fmt_f64(r.re), fmt_f64(r.im), fmt_f64(d)]);
    }
    let limit = job.eps + ref_err;
    let pass = worst <= limit;
    Ok(Outcome {
        output: table.render(),
        status: if pass { 0 } else { 1 },
        note: Some(format!(
            "{}: max deviation {:.3e}, limit eps + reference error = {:.3e}",
            if pass { "PASS" } else { "FAIL" },
            worst,
            limit
        )),
    })
}

#[derive(Serialize)]
struct PolyOut {
    min_deg: i64,
    coeffs: Vec<[Exact; 2]>,
}

impl From<&LaurentPoly> for PolyOut {
    fn from(p: &LaurentPoly) -> Self {
        Self {
            min_deg: p.min_deg(),
            coeffs: p.coeffs().iter().map(|c| [Exact(c.re), Exact(c.im)]).collect(),
        }
    }
}

#[derive(Serialize)]
struct NlftOut {
    grid: usize,
    a: PolyOut,
    b: PolyOut,
    a_at_zero: Exact,
    unitarity_defect: Exact,
    szego_circle_mean: Exact,
    szego_site_sum: Exact,
    minus_two_log_a0: Exact,
}

fn nlft(job: &JobSpec, q0: &Sequence) -> Result<Outcome, CliError> {
    let t = nlft_forward(q0)?;
    let grid = match job.grid {
        Some(g) => CircleGrid::unit(g)?,
        None => t.default_grid(),
    };
    let s = szego_identity_check(q0, &grid)?;
    let doc = NlftOut {
        grid: grid.size(),
        a: (&t.a).into(),
        b: (&t.b).into(),
        a_at_zero: Exact(t.a_at_zero().re),
        unitarity_defect: Exact(t.unitarity_defect(&grid)),
        szego_circle_mean: Exact(s.circle_mean),
        szego_site_sum: Exact(s.site_sum),
        minus_two_log_a0: Exact(s.minus_two_log_a0),
    };
    Ok(Outcome::ok(to_json(&doc)))
}

#[derive(Serialize)]
struct MultiplierOut {
    n: u64,
    t: Exact,
    delta: Exact,
    /// Radius at which the two bounds are evaluated.
    r: Exact,
    s_bound: Exact,
    tail_bound: Exact,
    grid: usize,
    max_truncation_error: Exact,
    max_abs_g: Exact,
    g: PolyOut,
}

fn multiplier(job: &JobSpec) -> Result<Outcome, CliError> {
    let n = job.order.expect("validated");
    let b = MultiplierBundle::new(n, job.t)?;
    let grid = CircleGrid::unit(job.grid.unwrap_or((4 * n as usize).next_power_of_two()))?;
    let p = p_poly(n, job.t).eval_grid(&grid);
    let trunc = p
        .iter()
        .zip(grid.nodes())
        .map(|(v, z)| (v - (Complex64::new(0.0, job.t) * (z + z.inv())).exp()).norm())
        .fold(0.0, f64::max);
    let gmax = b.g.eval_grid(&grid).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let r = 0.5;
    let doc = MultiplierOut {
        n,
        t: Exact(job.t),
        delta: Exact(b.delta),
        r: Exact(r),
        s_bound: Exact(s_bound(n, job.t, r)),
        tail_bound: Exact(tail_bound(n, job.t, r)),
        grid: grid.size(),
        max_truncation_error: Exact(trunc),
        max_abs_g: Exact(gmax),
        g: (&b.g).into(),
    };
    Ok(Outcome::ok(to_json(&doc)))
}

fn bench(job: &JobSpec) -> Result<Outcome, CliError> {
    let seed = job.seed.unwrap_or(0);
    let mut out = String::from("N,sites,seconds\n");
    let mut points = Vec::new();
    for k in 6..=job.max_log2 {
        let n = 1u64 << k;
        let q = random_datum(seed ^ n, -(n as i64), 2 * n as usize + 1, 0.1);
        let best = (0..3)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(nlft_forward(&q))?;
                Ok(start.elapsed().as_secs_f64())
            })
            .collect::<Result<Vec<f64>, al_ist::Error>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        out.push_str(&format!("{n},{},{}\n", q.len(), fmt_f64(best)));
        points.push(((n as f64).ln(), best.ln()));
    }
    let m = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    Ok(Outcome {
        output: out,
        status: 0,
        note: Some(format!("fitted log-log exponent {slope:.3}")),
    })
}

/// Sizes the global worker pool from `AL_IST_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("AL_IST_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| invalid(format!("AL_IST_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("cannot size the worker pool: {e}")))
}

/// Writes the artifact to `--out` or stdout.
pub fn emit(job: &JobSpec, text: &str) -> Result<(), CliError> {
    match &job.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
