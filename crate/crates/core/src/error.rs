use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid site list {sites:?} for {n_qubits} qubits: {reason}")]
    BadSites {
        sites: Vec<usize>,
        n_qubits: usize,
        reason: &'static str,
    },

    #[error("invalid Clifford gate: {0}")]
    InvalidGate(String),

    #[error("state is not pure: {generators} generators on {n_qubits} qubits")]
    NotPure { generators: usize, n_qubits: usize },

    #[error("invalid stabilizer state: {0}")]
    InvalidState(String),

    #[error("T gate injects no magic: Z on qubit {site} commutes with every generator")]
    NoMagicInjected { site: usize },

    #[error("magic is not extractable from the region (class {class})")]
    NotExtractable { class: &'static str },

    #[error("no full-magic interval found; the code state is corrupted")]
    NoMagic,

    #[error("dense oracle limited to {cap} qubits, got {n_qubits}")]
    SizeCapExceeded { n_qubits: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("fit needs at least {needed} points in the window, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("only {accepted} realizations injected magic at t = {t}, need {required}")]
    RejectedStarvation {
        t: usize,
        accepted: usize,
        required: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}
