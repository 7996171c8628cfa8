//! Forward nonlinear Fourier transform of a finitely supported sequence.
//!
//! Each site contributes the factor `(1 - |q|^2)^{-1/2} [[1, conj(q) z^-k], [q z^k, 1]]`
//! and the transform is the ordered product over increasing `k`. Only the top
//! row `(a, b)` is stored; the bottom row is `(conj_flip(b), conj_flip(a))`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{CircleGrid, LaurentPoly};
use crate::schur::RationalSchur;
use crate::sequence::Sequence;

/// Subtrees with at least this many leaves multiply their halves in parallel.
const PARALLEL_LEAVES: usize = 64;

/// Top row `(a, b)` of a matrix `[[a, b], [conj_flip(b), conj_flip(a)]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfer2x2 {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
}

impl Transfer2x2 {
    pub fn identity() -> Self {
        Self {
            a: LaurentPoly::one(),
            b: LaurentPoly::zero(),
        }
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let a = &(&self.a * &rhs.a) + &(&self.b * &rhs.b.conj_flip());
        let b = &(&self.a * &rhs.b) + &(&self.b * &rhs.a.conj_flip());
        Self { a, b }
    }

    /// `a(0)`, the coefficient of `z^0` in `a`.
    pub fn a_at_zero(&self) -> Complex64 {
        self.a.constant_term()
    }

    /// Largest `| |a|^2 - |b|^2 - 1 |` over the grid nodes.
    pub fn unitarity_defect(&self, grid: &CircleGrid) -> f64 {
        let a = self.a.eval_grid(grid);
        let b = self.b.eval_grid(grid);
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x.norm_sqr() - y.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Unit-circle grid with enough nodes to resolve both entries without aliasing.
    pub fn default_grid(&self) -> CircleGrid {
        let lo = self.a.min_deg().min(self.b.min_deg());
        let hi = self.a.max_deg().max(self.b.max_deg());
        CircleGrid::for_span((hi - lo) as usize)
    }
}

/// The single-site factor for `q_k` at site `k`.
pub fn transfer_factor(qk: Complex64, k: i64) -> Result<Transfer2x2> {
    let m = qk.norm_sqr();
    if !(m < 1.0) {
        return Err(Error::Domain(format!(
            "site {k} has modulus {} outside the open unit disk",
            qk.norm()
        )));
    }
    let s = 1.0 / (1.0 - m).sqrt();
    Ok(Transfer2x2 {
        a: LaurentPoly::constant(Complex64::new(s, 0.0)),
        b: LaurentPoly::monomial(qk.conj() * s, -k),
    })
}

fn leaves(q: &Sequence) -> Result<Vec<Transfer2x2>> {
    q.iter()
        .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
        .map(|(k, v)| transfer_factor(v, k))
        .collect()
}

fn tree_product(nodes: &[Transfer2x2]) -> Transfer2x2 {
    match nodes.len() {
        0 => Transfer2x2::identity(),
        1 => nodes[0].clone(),
        len => {
            let (l, r) = nodes.split_at(len / 2);
            let (left, right) = if len >= PARALLEL_LEAVES {
                rayon::join(|| tree_product(l), || tree_product(r))
            } else {
                (tree_product(l), tree_product(r))
            };
            left.compose(&right)
        }
    }
}

/// Ordered product over the nonzero sites, by a balanced product tree.
pub fn nlft_forward(q: &Sequence) -> Result<Transfer2x2> {
    Ok(tree_product(&leaves(q)?))
}

/// Left-to-right product, for cross-checking [`nlft_forward`].
pub fn nlft_forward_naive(q: &Sequence) -> Result<Transfer2x2> {
    Ok(leaves(q)?
        .iter()
        .fold(Transfer2x2::identity(), |acc, f| acc.compose(f)))
}

/// `conj_flip(b) / a` for data supported on the nonnegative sites. Its Schur
/// recurrence coefficients are `q(0), q(1), ...`.
pub fn fc_plus(q: &Sequence) -> Result<RationalSchur> {
    if let Some((lo, _)) = q.support() {
        if lo < 0 {
            return Err(Error::InvalidInput(format!(
                "one-sided transform needs support in k >= 0, found site {lo}"
            )));
        }
    }
    let t = nlft_forward(q)?;
    RationalSchur::new(t.b.conj_flip(), t.a)
}

/// Reflection coefficient `b / a` at the grid nodes.
pub fn reflection_grid(q: &Sequence, grid: &CircleGrid) -> Result<Vec<Complex64>> {
    let t = nlft_forward(q)?;
    Ok(ratio_on_grid(&t, grid))
}

fn ratio_on_grid(t: &Transfer2x2, grid: &CircleGrid) -> Vec<Complex64> {
    let a = t.a.eval_grid(grid);
    let b = t.b.eval_grid(grid);
    b.into_iter().zip(a).map(|(x, y)| x / y).collect()
}

/// Three expressions for the logarithm of the conserved Szego product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzegoCheck {
    /// Grid mean of `log(1 - |b/a|^2)`.
    pub circle_mean: f64,
    /// `sum log(1 - |q(k)|^2)`.
    pub site_sum: f64,
    /// `-2 log a(0)`.
    pub minus_two_log_a0: f64,
}

pub fn szego_identity_check(q: &Sequence, grid: &CircleGrid) -> Result<SzegoCheck> {
    let t = nlft_forward(q)?;
    let r = ratio_on_grid(&t, grid);
    let circle_mean = r.iter().map(|v| (-v.norm_sqr()).ln_1p()).sum::<f64>() / r.len() as f64;
    Ok(SzegoCheck {
        circle_mean,
        site_sum: q.log_szego_product(),
        minus_two_log_a0: -2.0 * t.a_at_zero().re.ln(),
    })
}

/// Largest deviation from the translation law: the reflection coefficient
/// of `k -> q(k - n)` equals `z^-n` times that of `q`.
pub fn shift_check(q: &Sequence, n: i64, grid: &CircleGrid) -> Result<f64> {
    let base = reflection_grid(q, grid)?;
    let moved = reflection_grid(&q.shifted(n), grid)?;
    Ok(base
        .iter()
        .zip(&moved)
        .zip(grid.nodes())
        .map(|((r, s), z)| (s - r * z.powi(-(n as i32))).norm())
        .fold(0.0, f64::max))
}

/// Pseudo-hyperbolic margin beyond which the metric integrand counts as infinite.
const RHO_CLAMP: f64 = 1.0 - 1e-14;

/// `sqrt(-mean log(1 - |(h1 - h2) / (1 - conj(h1) h2)|^2))` over paired grid
/// values; `+inf` once any pseudo-hyperbolic distance reaches the clamp.
pub fn rho_s(h1: &[Complex64], h2: &[Complex64]) -> f64 {
    assert_eq!(h1.len(), h2.len(), "grid value arrays differ in length");
    if h1.is_empty() {
        return 0.0;
    }
    let mut acc = 0.0;
    for (x, y) in h1.iter().zip(h2) {
        let w = ((x - y) / (1.0 - x.conj() * y)).norm();
        if !(w < RHO_CLAMP) {
            return f64::INFINITY;
        }
        acc -= (-w * w).ln_1p();
    }
    (acc / h1.len() as f64).sqrt()
}
