//! Ablowitz-Ladik lattice evolution through the Schur algorithm and the
//! nonlinear Fourier transform, with a direct ODE integrator for cross-checks.

// Negated comparisons are deliberate: NaN must fail every range check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod laurent;
pub mod multiplier;
pub mod nlft;
pub mod reference;
pub mod rng;
pub mod schur;
pub mod sequence;
pub mod solver;

pub use error::{Error, Result};
pub use laurent::{CircleGrid, LaurentPoly};
pub use multiplier::MultiplierBundle;
pub use nlft::Transfer2x2;
pub use schur::{RationalSchur, SchurCoeffs, SchurStep};
pub use sequence::Sequence;
pub use reference::{Boundary, LatticeState};
pub use solver::{ErrorBudget, PointSolution, SolveParams, WindowSolution};
