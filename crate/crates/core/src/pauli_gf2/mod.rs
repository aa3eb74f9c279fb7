//! Pauli strings and the symplectic GF(2) linear algebra underneath every algorithm.

mod bitset;
mod matrix;
mod pauli;

pub use bitset::{BitSet, QubitSet};
pub use matrix::{rank_gf2, reduce_support, solve_in_span, BinaryMatrix, ProjectedSpan};
pub use pauli::{Pauli, PauliString};
