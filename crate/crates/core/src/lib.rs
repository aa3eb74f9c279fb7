//! Simulation of a single injected T gate spreading under Clifford dynamics, with exact
//! subsystem magic and the magic length scales derived from it.

pub mod channel;
pub mod circuits;
pub mod codestate;
pub mod error;
pub mod harness;
pub mod lengthscales;
pub mod magic_gauge;
pub mod pauli_gf2;
pub mod tableau;

pub use circuits::{Boundary, CircuitSpec, Ensemble, InitialKind, TimeSeriesRecord};
pub use codestate::CodeState;
pub use error::{Error, Result};
pub use lengthscales::{Interval, MlmiSet};
pub use magic_gauge::{MagicClass, PauliSpectrumSummary};
pub use pauli_gf2::{BinaryMatrix, BitSet, Pauli, PauliString, QubitSet};
pub use tableau::{Circuit, CliffordGate, GateOp, GlobalClifford, StabilizerState};
