//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, measurement, and protocol routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix expected to be Hermitian failed the symmetry check.
    #[error("matrix is not Hermitian: max |m[i][j] - conj(m[j][i])| = {deviation:.3e}")]
    NonHermitian { deviation: f64 },

    /// A density matrix violated its trace or positivity invariants.
    #[error("invalid quantum state: {reason}")]
    InvalidState { reason: String },

    /// A 2x2 operator expected to be unitary is not.
    #[error("operator is not unitary: max |U U† - 1| = {deviation:.3e}")]
    NonUnitary { deviation: f64 },

    /// A scalar argument fell outside its legal range.
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A measurement outcome has vanishing probability; the conditional
    /// state is undefined.
    #[error("measurement outcome has probability {probability:.3e} < 1e-12; conditional state undefined")]
    DegenerateOutcome { probability: f64 },

    /// Parameters violate a constructor's domain constraints.
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },

    /// A delay or coherence time was non-physical.
    #[error("invalid time: {reason}")]
    InvalidTime { reason: String },

    /// The matrix has support outside the main and anti-diagonal.
    #[error("not an X-state: |entry({row},{col})| = {magnitude:.3e} exceeds 1e-12")]
    NotXState {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    /// The X-state diagonal is not of the symmetric (a, b, b, a) form.
    #[error("not a symmetric X-state: diagonal deviates from (a, b, b, a) by {deviation:.3e}")]
    NotSymmetric { deviation: f64 },

    /// An encoding distribution breaks the positive-coherence ordering
    /// p1 >= p2, p3 >= p4 assumed by the closed forms.
    #[error("encoding distribution violates the p1 >= p2, p3 >= p4 convention: ({p1}, {p2}, {p3}, {p4})")]
    ConventionViolated { p1: f64, p2: f64, p3: f64, p4: f64 },

    /// A Monte Carlo configuration is unusable.
    #[error("invalid transaction config: {reason}")]
    InvalidConfig { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
