use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation outside the domain of a function (e.g. a pole at the origin).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parameters outside the admissible range of a construction.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The parameter recipe asks for a window larger than the configured cap.
    #[error("infeasible parameters: window half-width {requested} exceeds cap {cap}; the Szego bound eta = {eta} is too small")]
    Infeasible { requested: u64, cap: u64, eta: f64 },

    /// A function handed to the Schur recursion is not a Schur-class witness.
    #[error("not a Schur-class function: max |P| - |Q| = {excess:.3e} on the unit circle")]
    NotSchurClass { excess: f64 },

    /// The Schur recursion hit a unimodular coefficient where one was not expected.
    #[error("Schur recursion terminated at step {step} with |gamma| = {modulus}")]
    SchurTerminated { step: usize, modulus: f64 },

    /// Lattice integration left the open unit disk.
    #[error("modulus guard tripped at t = {t}: max |q| = {max_modulus} (step too large?)")]
    BlowUp { t: f64, max_modulus: f64 },

    /// Picard iteration failed to contract.
    #[error("Picard iteration stalled on sub-interval {interval}: residual {residual:.3e} after {iterations} iterations")]
    NonContraction {
        interval: usize,
        residual: f64,
        iterations: usize,
    },
}

impl Error {
    /// True for errors raised by a numerical guard during a computation, as
    /// opposed to rejected input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::NotSchurClass { .. }
                | Error::SchurTerminated { .. }
                | Error::BlowUp { .. }
                | Error::NonContraction { .. }
        )
    }
}
