//! Stabilizer states evolved by Clifford conjugation.

mod gate;
mod sampling;

pub use gate::{CliffordGate, LocalPauli};
pub use sampling::{
    clifford_1q_table, clifford_2q_table, sample_clifford_1q, sample_clifford_2q, GlobalClifford,
};

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli_gf2::{solve_in_span, BinaryMatrix, BitSet, PauliString, ProjectedSpan};

/// One gate together with the sites it acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateOp {
    pub gate: CliffordGate,
    pub sites: [usize; 2],
}

impl GateOp {
    pub fn one(gate: CliffordGate, q: usize) -> Self {
        debug_assert_eq!(gate.arity(), 1);
        GateOp {
            gate,
            sites: [q, usize::MAX],
        }
    }

    pub fn two(gate: CliffordGate, a: usize, b: usize) -> Self {
        debug_assert_eq!(gate.arity(), 2);
        GateOp {
            gate,
            sites: [a, b],
        }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites[..self.gate.arity()]
    }

    #[inline]
    pub fn conjugate(&self, p: &mut PauliString) {
        self.gate.conjugate(p, self.sites());
    }
}

/// A sequence of gates, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: CliffordGate, sites: &[usize]) -> Result<()> {
        gate.check_sites(sites, self.n_qubits)?;
        let op = if gate.arity() == 1 {
            GateOp::one(gate, sites[0])
        } else {
            GateOp::two(gate, sites[0], sites[1])
        };
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.ops.extend_from_slice(&other.ops);
    }

    pub fn conjugate(&self, p: &mut PauliString) {
        for op in &self.ops {
            op.conjugate(p);
        }
    }

    /// Union of all gate supports.
    pub fn support(&self) -> BitSet {
        BitSet::from_indices(
            self.n_qubits,
            self.ops.iter().flat_map(|op| op.sites().iter().copied()),
        )
    }
}

/// A (possibly mixed) stabilizer state `∏ (1 + g)/2` up to normalization.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerState {
    n: usize,
    generators: Vec<PauliString>,
}

impl StabilizerState {
    /// Validates that the generators are Hermitian, pairwise commuting and independent.
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n_qubits(),
                });
            }
            if !g.is_hermitian() || g.is_identity_up_to_phase() {
                return Err(Error::InvalidState(format!(
                    "generator {g} is not a non-trivial Hermitian Pauli"
                )));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if a.symplectic(b) != 0 {
                    return Err(Error::InvalidState(format!(
                        "generators {a} and {b} anticommute"
                    )));
                }
            }
        }
        let span = ProjectedSpan::new(&generators, &BitSet::full(n));
        if span.rank() != generators.len() {
            return Err(Error::InvalidState("generators are dependent".into()));
        }
        Ok(StabilizerState { n, generators })
    }

    pub(crate) fn new_unchecked(n: usize, generators: Vec<PauliString>) -> Self {
        StabilizerState { n, generators }
    }

    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        let gens = (0..n)
            .map(|q| PauliString::single(n, q, crate::pauli_gf2::Pauli::Z))
            .collect();
        StabilizerState::new_unchecked(n, gens)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<PauliString> {
        self.generators
    }

    pub fn is_pure(&self) -> bool {
        self.generators.len() == self.n
    }

    pub fn apply_gate(&mut self, gate: &CliffordGate, sites: &[usize]) -> Result<()> {
        gate.check_sites(sites, self.n)?;
        for g in &mut self.generators {
            gate.conjugate(g, sites);
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: circuit.n_qubits(),
            });
        }
        for g in &mut self.generators {
            circuit.conjugate(g);
        }
        Ok(())
    }

    pub fn apply_global(&mut self, u: &GlobalClifford) {
        for g in &mut self.generators {
            *g = u.conjugate(g);
        }
    }

    /// Von Neumann entropy (in bits) of the reduced state on `region`.
    pub fn entropy(&self, region: &BitSet) -> usize {
        entropy_of(&self.generators, region)
    }

    /// Projective measurement of a Hermitian Pauli. Returns the outcome (`+1` or `-1`).
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<i8> {
        if p.n_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.n_qubits(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::InvalidState(format!("{p} is not Hermitian")));
        }
        let anti: Vec<usize> = (0..self.generators.len())
            .filter(|&i| self.generators[i].symplectic(p) == 1)
            .collect();
        if let Some((&k, rest)) = anti.split_first() {
            let pivot = self.generators[k].clone();
            for &j in rest {
                self.generators[j].mul_assign_right(&pivot);
            }
            let outcome: i8 = if rng.random::<bool>() { 1 } else { -1 };
            let mut new = p.clone();
            if outcome < 0 {
                new.negate();
            }
            self.generators[k] = new;
            return Ok(outcome);
        }
        let basis = BinaryMatrix::from_paulis(&self.generators)?;
        match solve_in_span(&p.symplectic_vector(), &basis)? {
            Some(mask) => {
                let mut prod = PauliString::identity(self.n);
                for i in mask.iter() {
                    prod.mul_assign_right(&self.generators[i]);
                }
                Ok(if prod.phase() == p.phase() { 1 } else { -1 })
            }
            None => {
                let outcome: i8 = if rng.random::<bool>() { 1 } else { -1 };
                let mut new = p.clone();
                if outcome < 0 {
                    new.negate();
                }
                self.generators.push(new);
                Ok(outcome)
            }
        }
    }
}

/// `|A| − dim{g ∈ ⟨gens⟩ : supp g ⊆ A}` for independent commuting `gens`.
pub(crate) fn entropy_of(gens: &[PauliString], region: &BitSet) -> usize {
    let outside = region.complement();
    let rank_outside = ProjectedSpan::new(gens, &outside).rank();
    let inside_dim = gens.len() - rank_outside;
    region.count() - inside_dim
}

impl fmt::Display for StabilizerState {
    /// Header `n=<L> k=<count>` followed by one signed literal per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} k={}", self.n, self.generators.len())?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StabilizerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a `n=<L> k=<count>` header line.
pub(crate) fn parse_header(line: &str) -> Result<(usize, usize, Vec<(String, String)>)> {
    let mut n = None;
    let mut k = None;
    let mut extra = Vec::new();
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
        let num = || {
            val.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad header value {tok:?}")))
        };
        match key {
            "n" => n = Some(num()?),
            "k" => k = Some(num()?),
            _ => extra.push((key.to_string(), val.to_string())),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok((n, k, extra)),
        _ => Err(Error::Parse(format!("header {line:?} lacks n= or k="))),
    }
}

pub(crate) fn parse_literals<'a, I: Iterator<Item = &'a str>>(
    lines: I,
    n: usize,
    k: usize,
) -> Result<Vec<PauliString>> {
    let gens = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.parse::<PauliString>())
        .collect::<Result<Vec<_>>>()?;
    if gens.len() != k {
        return Err(Error::Parse(format!(
            "header announces {k} strings, found {}",
            gens.len()
        )));
    }
    if let Some(g) = gens.iter().find(|g| g.n_qubits() != n) {
        return Err(Error::Parse(format!("{g} does not have {n} qubits")));
    }
    Ok(gens)
}

impl FromStr for StabilizerState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::EmptyInput("tableau"))?;
        let (n, k, _) = parse_header(header)?;
        let gens = parse_literals(lines, n, k)?;
        StabilizerState::new(n, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn state(lits: &[&str]) -> StabilizerState {
        let gens: Vec<PauliString> = lits.iter().map(|s| s.parse().unwrap()).collect();
        StabilizerState::new(gens[0].n_qubits(), gens).unwrap()
    }

    fn set(n: usize, q: &[usize]) -> BitSet {
        BitSet::from_indices(n, q.iter().copied())
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StabilizerState::zero(1);
        s.apply_gate(&CliffordGate::h(), &[0]).unwrap();
        assert_eq!(s.generators()[0].to_string(), "+X");
    }

    #[test]
    fn cz_on_x() {
        let mut s = state(&["XI", "IZ"]);
        s.apply_gate(&CliffordGate::cz(), &[0, 1]).unwrap();
        assert_eq!(s.generators()[0].to_string(), "+XZ");
        assert!(s.apply_gate(&CliffordGate::cz(), &[0, 0]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let bell = state(&["XX", "ZZ"]);
        assert_eq!(bell.entropy(&set(2, &[0])), 1);
        assert_eq!(StabilizerState::zero(2).entropy(&set(2, &[0])), 0);
        let ghz = state(&["XXX", "ZZI", "IZZ"]);
        assert_eq!(ghz.entropy(&set(3, &[0, 1])), 1);
        assert_eq!(ghz.entropy(&set(3, &[])), 0);
        assert_eq!(ghz.entropy(&BitSet::full(3)), 0);
    }

    #[test]
    fn measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = StabilizerState::zero(1);
        assert_eq!(s.measure_pauli(&"Z".parse().unwrap(), &mut rng).unwrap(), 1);
        assert_eq!(s, StabilizerState::zero(1));

        let mut bell = state(&["XX", "ZZ"]);
        let before = bell.clone();
        assert_eq!(bell.measure_pauli(&"ZZ".parse().unwrap(), &mut rng).unwrap(), 1);
        assert_eq!(bell, before);
        let mut anti = state(&["XX", "-ZZ"]);
        assert_eq!(anti.measure_pauli(&"ZZ".parse().unwrap(), &mut rng).unwrap(), -1);

        let mut plus = 0;
        for _ in 0..400 {
            let mut s = StabilizerState::zero(1);
            let x: PauliString = "X".parse().unwrap();
            let out = s.measure_pauli(&x, &mut rng).unwrap();
            let expected = if out > 0 { "+X" } else { "-X" };
            assert_eq!(s.generators()[0].to_string(), expected);
            plus += (out > 0) as i32;
        }
        assert!((150..250).contains(&plus), "{plus}");
    }

    #[test]
    fn measurement_on_mixed_state_adds_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = state(&["ZZ"]);
        s.measure_pauli(&"ZI".parse().unwrap(), &mut rng).unwrap();
        assert_eq!(s.generators().len(), 2);
        assert!(s.is_pure());
    }

    #[test]
    fn rejects_invalid_states() {
        let gens: Vec<PauliString> = ["XI", "ZI"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(StabilizerState::new(2, gens).is_err());
        let gens: Vec<PauliString> = ["ZZ", "ZZ"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(StabilizerState::new(2, gens).is_err());
    }

    #[test]
    fn text_round_trip() {
        let s = state(&["-XXX", "ZZI", "+IZZ"]);
        let text = s.to_string();
        assert!(text.starts_with("n=3 k=3\n"));
        assert_eq!(text.parse::<StabilizerState>().unwrap(), s);
        assert!("n=2 k=1\nXXX\n".parse::<StabilizerState>().is_err());
        assert!("".parse::<StabilizerState>().is_err());
    }

    #[test]
    fn circuit_push_checks_sites() {
        let mut c = Circuit::new(3);
        assert!(c.push(CliffordGate::cx(), &[0, 2]).is_ok());
        assert!(c.push(CliffordGate::h(), &[3]).is_err());
        assert_eq!(c.support().iter().collect::<Vec<_>>(), vec![0, 2]);
    }
}
