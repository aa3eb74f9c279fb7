//! Erasure of qubit subsets on the reference-extended state, coherent information and
//! the channel-capacity proxy.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codestate::{CodeState, ExtendedState};
use crate::error::{Error, Result};
use crate::pauli_gf2::{BitSet, Pauli, PauliString};
use crate::tableau::{GlobalClifford, StabilizerState};

/// How the qubits of `B` are lost.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorChannel {
    /// Partial trace over `B`.
    #[default]
    Erasure,
    /// Measurement of `Z` on every qubit of `B`, outcomes discarded.
    Measurement,
}

impl fmt::Display for ErrorChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorChannel::Erasure => "erasure",
            ErrorChannel::Measurement => "measurement",
        })
    }
}

impl FromStr for ErrorChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "erasure" => Ok(ErrorChannel::Erasure),
            "measurement" => Ok(ErrorChannel::Measurement),
            other => Err(Error::Parse(format!("unknown error channel `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureResult {
    pub erased: Vec<usize>,
    pub coherent_info: i32,
    pub preserved: bool,
}

fn check_erased(ext: &ExtendedState, b: &BitSet) -> Result<()> {
    if b.universe() != ext.system_size() {
        return Err(Error::DimensionMismatch {
            expected: ext.system_size(),
            found: b.universe(),
        });
    }
    Ok(())
}

/// `I_c = S(A) − S(AR)` with `A` the complement of `b` in the system.
fn coherent_info(state: &StabilizerState, b: &BitSet) -> i32 {
    let n = state.n_qubits();
    let r = n - 1;
    let mut a = BitSet::from_indices(n, (0..r).filter(|&q| !b.contains(q)));
    let s_a = state.entropy(&a);
    a.insert(r);
    let s_ar = state.entropy(&a);
    s_a as i32 - s_ar as i32
}

/// Traces out `b` and reports whether the logical qubit survives on the rest.
pub fn erase_and_coherent_info(ext: &ExtendedState, b: &BitSet) -> Result<ErasureResult> {
    check_erased(ext, b)?;
    let ic = coherent_info(ext.state(), b);
    debug_assert!((-1..=1).contains(&ic));
    Ok(ErasureResult {
        erased: b.iter().collect(),
        coherent_info: ic,
        preserved: ic == 1,
    })
}

/// Measures `Z` on every qubit of `b` before evaluating the coherent information of the
/// remaining system.
pub fn measure_and_coherent_info<R: Rng + ?Sized>(
    ext: &ExtendedState,
    b: &BitSet,
    rng: &mut R,
) -> Result<ErasureResult> {
    check_erased(ext, b)?;
    let mut state = ext.state().clone();
    let n = state.n_qubits();
    for q in b.iter() {
        state.measure_pauli(&PauliString::single(n, q, Pauli::Z), rng)?;
    }
    let ic = coherent_info(&state, b);
    Ok(ErasureResult {
        erased: b.iter().collect(),
        coherent_info: ic,
        preserved: ic == 1,
    })
}

/// `|B| = round(f L)`, ties to even.
pub fn erased_count(f: f64, l: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain(format!("f = {f} outside [0, 1]")));
    }
    Ok(((f * l as f64).round_ties_even() as usize).min(l))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub f: f64,
    pub n_erased: usize,
    pub n_samples: usize,
    pub c_tilde: f64,
    /// Binomial standard error of `c_tilde`.
    pub stderr: f64,
}

impl CapacityEstimate {
    /// Whether two estimates agree within `k` combined standard errors. Two exact
    /// estimates (zero error) agree only if equal.
    pub fn agrees_with(&self, other: &CapacityEstimate, k: f64) -> bool {
        let se = self.stderr.hypot(other.stderr);
        (self.c_tilde - other.c_tilde).abs() <= k * se + 1e-12
    }
}

/// Fraction of `n_samples` uniformly random erasures of `round(f L)` qubits that
/// preserve the logical qubit.
pub fn capacity_proxy<R: Rng + ?Sized>(
    cs: &CodeState,
    f: f64,
    n_samples: usize,
    channel: ErrorChannel,
    rng: &mut R,
) -> Result<CapacityEstimate> {
    if n_samples == 0 {
        return Err(Error::EmptyInput("erasure samples"));
    }
    let l = cs.n_qubits();
    let k = erased_count(f, l)?;
    let ext = cs.extend_with_reference();
    let mut hits = 0usize;
    for _ in 0..n_samples {
        let b = BitSet::from_indices(l, index::sample(rng, l, k));
        let res = match channel {
            ErrorChannel::Erasure => erase_and_coherent_info(&ext, &b)?,
            ErrorChannel::Measurement => measure_and_coherent_info(&ext, &b, rng)?,
        };
        hits += res.preserved as usize;
    }
    let c = hits as f64 / n_samples as f64;
    Ok(CapacityEstimate {
        f,
        n_erased: k,
        n_samples,
        c_tilde: c,
        stderr: (c * (1.0 - c) / n_samples as f64).sqrt(),
    })
}

/// T injected into `|+⟩|0…0⟩` on qubit 0, then a uniformly random global Clifford.
pub fn global_random_code<R: Rng + ?Sized>(l: usize, rng: &mut R) -> Result<CodeState> {
    if l < 2 {
        return Err(Error::Domain(format!("L = {l}, need at least 2 qubits")));
    }
    let gens = std::iter::once(PauliString::single(l, 0, Pauli::X))
        .chain((1..l).map(|q| PauliString::single(l, q, Pauli::Z)))
        .collect();
    let mut cs = CodeState::inject_t(&StabilizerState::new(l, gens)?, 0)?;
    cs.apply_global(&GlobalClifford::random(l, rng));
    Ok(cs)
}
