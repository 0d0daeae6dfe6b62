//! Quantum correlations and dense-coding advantage for symmetric two-qubit
//! X-states.
//!
//! The crate models a single-photon optical source in which the photon
//! polarization and interferometer path form two qubits. A beam splitter
//! with reflection coefficient `R` and controllable time delays (coherence
//! factors `kappa_h`, `kappa_v`) prepares a symmetric X-state; Pauli
//! operations on the polarization qubit encode a two-bit random variable,
//! and a polarizing-beam-splitter/half-wave-plate circuit decodes it.
//!
//! What the library computes:
//!
//! - entanglement (concurrence, entanglement of formation) and quantum
//!   discord of the family, both in closed form and by brute-force
//!   minimization over projective measurements ([`correlations`]);
//! - Holevo and locally accessible information of the Pauli encoding
//!   ensemble, the quantum advantage of joint over local decoding, and the
//!   discord-consumption bounds ([`protocol`]);
//! - finite-shot Monte Carlo of the encode/decode loop with seeded,
//!   reproducible statistics ([`transactions`]);
//! - parameter-sweep grids and extremum location for the figure data
//!   ([`sweep`]) and a self-checking verification suite ([`verify`]).
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability, and the `xstate-discord` binary for the CLI front end.

pub mod correlations;
pub mod error;
pub mod protocol;
pub mod qcore;
pub mod sweep;
pub mod transactions;
pub mod verify;
pub mod xstate;

pub use correlations::{correlation_report, Branch, CorrelationReport};
pub use error::{Error, Result};
pub use protocol::{advantage, AdvantageReport, BitPair, EncodingDistribution};
pub use qcore::{
    binary_entropy, C64, DensityMatrix, LocalUnitary, MeasurementDirection, Outcome, Qubit,
    QubitState,
};
pub use xstate::{canonicalize, prepared_state, ApparatusParams, XStateParams};
