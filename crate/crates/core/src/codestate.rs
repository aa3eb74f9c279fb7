//! The single-T-doped state
//! `ρ = ½(1 + (Z̄ − Ȳ)/√2) ∏ (1 + g_i)/2`,
//! stored as a logical pair plus `L − 1` stabilizer generators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli_gf2::{BitSet, Pauli, PauliString, ProjectedSpan};
use crate::tableau::{parse_header, parse_literals, Circuit, CliffordGate, GateOp, GlobalClifford, StabilizerState};

/// Coefficients multiplying `Z̄` and `Ȳ` in the density matrix.
pub const AMPLITUDE_PAIR: (f64, f64) = (std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2);

#[derive(Clone, PartialEq, Eq)]
pub struct CodeState {
    n: usize,
    logical_x: PauliString,
    logical_z: PauliString,
    stabilizers: Vec<PauliString>,
    injection_site: usize,
}

impl CodeState {
    /// Assembles a code state from explicit logicals and stabilizers, validating the
    /// commutation structure and independence.
    pub fn from_parts(
        logical_x: PauliString,
        logical_z: PauliString,
        stabilizers: Vec<PauliString>,
        injection_site: usize,
    ) -> Result<Self> {
        let n = logical_x.n_qubits();
        let cs = CodeState {
            n,
            logical_x,
            logical_z,
            stabilizers,
            injection_site,
        };
        cs.validate()?;
        Ok(cs)
    }

    /// Applies `T` on `site` to a pure stabilizer state.
    pub fn inject_t(state: &StabilizerState, site: usize) -> Result<Self> {
        let n = state.n_qubits();
        if site >= n {
            return Err(Error::BadSites {
                sites: vec![site],
                n_qubits: n,
                reason: "injection site out of range",
            });
        }
        Self::inject_rotated(state, PauliString::single(n, site, Pauli::Z), site)
    }

    /// Applies the rotated gate `T̃ = α + β Z̃` whose Pauli part is `z_tilde`.
    ///
    /// The first generator anticommuting with `Z̃` (in stored order) becomes `Z̄`; every
    /// later anticommuting generator is multiplied by it.
    pub fn inject_rotated(state: &StabilizerState, z_tilde: PauliString, site: usize) -> Result<Self> {
        let n = state.n_qubits();
        if !state.is_pure() {
            return Err(Error::NotPure {
                generators: state.generators().len(),
                n_qubits: n,
            });
        }
        if z_tilde.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: z_tilde.n_qubits(),
            });
        }
        let gens = state.generators();
        let k = gens
            .iter()
            .position(|g| g.symplectic(&z_tilde) == 1)
            .ok_or(Error::NoMagicInjected { site })?;
        let s1 = gens[k].clone();
        let stabilizers = gens
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, g)| {
                if g.symplectic(&z_tilde) == 1 {
                    g.mul(&s1)
                } else {
                    g.clone()
                }
            })
            .collect();
        let cs = CodeState {
            n,
            logical_x: z_tilde,
            logical_z: s1,
            stabilizers,
            injection_site: site,
        };
        cs.debug_check();
        Ok(cs)
    }

    /// The state `(U T_site U†) V |ψ₀⟩`. Fails with [`Error::NoMagicInjected`] when the
    /// rotated gate acts trivially.
    pub fn build_interplay_state(
        u_circuit: &Circuit,
        v_circuit: &Circuit,
        psi0: &StabilizerState,
        site: usize,
    ) -> Result<Self> {
        let n = psi0.n_qubits();
        if site >= n {
            return Err(Error::BadSites {
                sites: vec![site],
                n_qubits: n,
                reason: "injection site out of range",
            });
        }
        let mut z_tilde = PauliString::single(n, site, Pauli::Z);
        if u_circuit.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u_circuit.n_qubits(),
            });
        }
        u_circuit.conjugate(&mut z_tilde);
        let mut state = psi0.clone();
        state.apply_circuit(v_circuit)?;
        Self::inject_rotated(&state, z_tilde, site)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn injection_site(&self) -> usize {
        self.injection_site
    }

    pub fn amplitude_pair(&self) -> (f64, f64) {
        AMPLITUDE_PAIR
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    /// `Ȳ = i X̄ Z̄`.
    pub fn logical_y(&self) -> PauliString {
        let mut y = self.logical_x.mul(&self.logical_z);
        y.mul_phase(1);
        y
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    /// The pure stabilizer state `{Z̄} ∪ stabilizers` on which `T̃` acts.
    pub fn pre_injection_state(&self) -> StabilizerState {
        let mut gens = vec![self.logical_z.clone()];
        gens.extend(self.stabilizers.iter().cloned());
        StabilizerState::new_unchecked(self.n, gens)
    }

    pub fn apply_clifford(&mut self, gate: &CliffordGate, sites: &[usize]) -> Result<()> {
        gate.check_sites(sites, self.n)?;
        self.apply_op_unchecked(&GateOp {
            gate: *gate,
            sites: if sites.len() == 1 { [sites[0], usize::MAX] } else { [sites[0], sites[1]] },
        });
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: circuit.n_qubits(),
            });
        }
        for op in circuit.ops() {
            self.apply_op_unchecked(op);
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn apply_op_unchecked(&mut self, op: &GateOp) {
        op.conjugate(&mut self.logical_x);
        op.conjugate(&mut self.logical_z);
        for g in &mut self.stabilizers {
            op.conjugate(g);
        }
    }

    pub fn apply_global(&mut self, u: &GlobalClifford) {
        self.logical_x = u.conjugate(&self.logical_x);
        self.logical_z = u.conjugate(&self.logical_z);
        for g in &mut self.stabilizers {
            *g = u.conjugate(g);
        }
    }

    /// Flips the sign of stabilizer `i`. Subsystem magic is insensitive to this.
    pub fn negate_stabilizer(&mut self, i: usize) {
        self.stabilizers[i].negate();
    }

    /// Appends a reference qubit `R` maximally entangled with the logical qubit.
    pub fn extend_with_reference(&self) -> ExtendedState {
        let n = self.n + 1;
        let r = self.n;
        let mut gens = Vec::with_capacity(n);
        let mut xr = self.logical_x.extended(n);
        xr.mul_assign_right(&PauliString::single(n, r, Pauli::X));
        let mut zr = self.logical_z.extended(n);
        zr.mul_assign_right(&PauliString::single(n, r, Pauli::Z));
        gens.push(xr);
        gens.push(zr);
        gens.extend(self.stabilizers.iter().map(|g| g.extended(n)));
        ExtendedState {
            state: StabilizerState::new_unchecked(n, gens),
        }
    }

    /// Checks the commutation structure and independence of logicals and stabilizers.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let all = std::iter::once(&self.logical_x)
            .chain(std::iter::once(&self.logical_z))
            .chain(&self.stabilizers);
        for p in all.clone() {
            if p.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n_qubits(),
                });
            }
            if !p.is_hermitian() {
                return Err(Error::InvalidState(format!("{p} is not Hermitian")));
            }
        }
        if self.stabilizers.len() + 1 != n {
            return Err(Error::InvalidState(format!(
                "{} stabilizers for {n} qubits",
                self.stabilizers.len()
            )));
        }
        if self.injection_site >= n {
            return Err(Error::BadSites {
                sites: vec![self.injection_site],
                n_qubits: n,
                reason: "injection site out of range",
            });
        }
        if self.logical_x.symplectic(&self.logical_z) != 1 {
            return Err(Error::InvalidState("logical X and Z commute".into()));
        }
        for (i, g) in self.stabilizers.iter().enumerate() {
            if g.symplectic(&self.logical_x) != 0 || g.symplectic(&self.logical_z) != 0 {
                return Err(Error::InvalidState(format!(
                    "stabilizer {g} does not commute with the logicals"
                )));
            }
            for h in &self.stabilizers[i + 1..] {
                if g.symplectic(h) != 0 {
                    return Err(Error::InvalidState(format!("stabilizers {g} and {h} anticommute")));
                }
            }
        }
        if ProjectedSpan::new(all, &BitSet::full(n)).rank() != n + 1 {
            return Err(Error::InvalidState("logicals and stabilizers are dependent".into()));
        }
        Ok(())
    }

    /// Cheap structural check compiled into debug builds only.
    pub(crate) fn debug_check(&self) {
        if cfg!(debug_assertions) {
            if let Err(e) = self.validate() {
                panic!("corrupted code state: {e}\n{self}");
            }
        }
    }
}

impl fmt::Display for CodeState {
    /// `n=<L> k=<L+1> site=<j>`, then `X̄`, `Z̄` and the stabilizers, one literal per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n={} k={} site={}",
            self.n,
            self.stabilizers.len() + 2,
            self.injection_site
        )?;
        writeln!(f, "{}", self.logical_x)?;
        writeln!(f, "{}", self.logical_z)?;
        for g in &self.stabilizers {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CodeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CodeState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::EmptyInput("code state snapshot"))?;
        let (n, k, extra) = parse_header(header)?;
        let site = extra
            .iter()
            .find(|(key, _)| key == "site")
            .ok_or_else(|| Error::Parse("snapshot header lacks site=".into()))?
            .1
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad site: {e}")))?;
        if k < 2 {
            return Err(Error::Parse("snapshot needs both logicals".into()));
        }
        let mut strings = parse_literals(lines, n, k)?.into_iter();
        let lx = strings.next().unwrap();
        let lz = strings.next().unwrap();
        CodeState::from_parts(lx, lz, strings.collect(), site)
    }
}

/// The pure `L + 1` qubit state with generators `{X̄ X_R, Z̄ Z_R} ∪ stabilizers`; the
/// reference qubit is the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedState {
    state: StabilizerState,
}

impl ExtendedState {
    pub fn state(&self) -> &StabilizerState {
        &self.state
    }

    pub fn reference(&self) -> usize {
        self.state.n_qubits() - 1
    }

    /// Number of system qubits (excluding the reference).
    pub fn system_size(&self) -> usize {
        self.state.n_qubits() - 1
    }
}
