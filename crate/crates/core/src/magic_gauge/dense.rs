//! Statevector reference for small systems. Qubit `q` is bit `q` of the basis index.

use num_complex::Complex64;

use super::MagicClass;
use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::pauli_gf2::{BitSet, PauliString};
use crate::tableau::{Circuit, CliffordGate, StabilizerState};

/// Largest system the dense routines accept.
pub const DENSE_CAP: usize = 12;

fn check_cap(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        return Err(Error::SizeCapExceeded {
            n_qubits: n,
            cap: DENSE_CAP,
        });
    }
    Ok(())
}

fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn masks(p: &PauliString) -> (usize, usize) {
    let x = p.x_words().first().copied().unwrap_or(0) as usize;
    let z = p.z_words().first().copied().unwrap_or(0) as usize;
    (x, z)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self> {
        check_cap(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidState(format!("{} amplitudes is not a power of two", amps.len())));
        }
        check_cap(n)?;
        Ok(DenseState { n, amps })
    }

    /// The pure stabilizer state, with an arbitrary global phase.
    pub fn from_stabilizer_state(state: &StabilizerState) -> Result<Self> {
        let n = state.n_qubits();
        check_cap(n)?;
        if !state.is_pure() {
            return Err(Error::NotPure {
                generators: state.generators().len(),
                n_qubits: n,
            });
        }
        // Eliminate X parts; the leftover ±Z strings fix a basis state in the support.
        let mut rows: Vec<PauliString> = state.generators().to_vec();
        let mut used = vec![false; rows.len()];
        for q in 0..n {
            let Some(p) = (0..rows.len()).find(|&r| !used[r] && rows[r].x_bit(q)) else {
                continue;
            };
            used[p] = true;
            let pivot = rows[p].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != p && row.x_bit(q) {
                    row.mul_assign_right(&pivot);
                }
            }
        }
        let eqs: Vec<(usize, bool)> = rows
            .iter()
            .zip(&used)
            .filter(|(_, &u)| !u)
            .map(|(r, _)| (masks(r).1, r.is_negative()))
            .collect();
        let x0 = solve_parities(n, &eqs);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x0] = Complex64::new(1.0, 0.0);
        let mut psi = DenseState { n, amps };
        for g in state.generators() {
            psi.project(g);
        }
        psi.normalize()?;
        Ok(psi)
    }

    /// `T̃ = α + β X̄` applied to the pre-injection stabilizer state.
    pub fn from_code_state(cs: &CodeState) -> Result<Self> {
        let mut psi = Self::from_stabilizer_state(&cs.pre_injection_state())?;
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let one = Complex64::new(1.0, 0.0);
        let (alpha, beta) = ((one + w) / 2.0, (one - w) / 2.0);
        let mut flipped = psi.clone();
        flipped.apply_pauli(cs.logical_x());
        for (a, b) in psi.amps.iter_mut().zip(&flipped.amps) {
            *a = alpha * *a + beta * b;
        }
        Ok(psi)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidState("state vanished under projection".into()));
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_pauli(&mut self, p: &PauliString) {
        assert_eq!(p.n_qubits(), self.n, "Pauli size mismatch");
        let (x, z) = masks(p);
        let c = i_pow(p.phase());
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (k, &a) in self.amps.iter().enumerate() {
            let sign = if (z & k).count_ones() & 1 == 1 { -c } else { c };
            out[k ^ x] = sign * a;
        }
        self.amps = out;
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Complex64 {
        let mut q = self.clone();
        q.apply_pauli(p);
        self.inner(&q)
    }

    /// `ψ ← (1 + P)ψ / 2`, unnormalized.
    pub fn project(&mut self, p: &PauliString) {
        let mut q = self.clone();
        q.apply_pauli(p);
        for (a, b) in self.amps.iter_mut().zip(&q.amps) {
            *a = (*a + b) / 2.0;
        }
    }

    pub fn apply_t(&mut self, q: usize) {
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        for (k, a) in self.amps.iter_mut().enumerate() {
            if k >> q & 1 == 1 {
                *a *= w;
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &CliffordGate, sites: &[usize]) -> Result<()> {
        gate.check_sites(sites, self.n)?;
        let u = gate_unitary(gate)?;
        let d = 1usize << sites.len();
        let site_mask: usize = sites.iter().map(|&s| 1 << s).sum();
        let spread = |j: usize| -> usize {
            sites
                .iter()
                .enumerate()
                .filter(|&(i, _)| j >> i & 1 == 1)
                .map(|(_, &s)| 1 << s)
                .sum()
        };
        let offsets: Vec<usize> = (0..d).map(spread).collect();
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for base in 0..self.amps.len() {
            if base & site_mask != 0 {
                continue;
            }
            for j in 0..d {
                v[j] = self.amps[base | offsets[j]];
            }
            for r in 0..d {
                self.amps[base | offsets[r]] = (0..d).map(|c| u[r * d + c] * v[c]).sum();
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        for op in circuit.ops() {
            self.apply_gate(&op.gate, op.sites())?;
        }
        Ok(())
    }
}

/// GF(2) solve of `z_i · x = b_i`; the system is assumed consistent.
fn solve_parities(n: usize, eqs: &[(usize, bool)]) -> usize {
    let mut rows: Vec<(usize, bool)> = eqs.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for q in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0 >> q & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0 >> q & 1 == 1 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        pivots.push((q, r));
        r += 1;
    }
    let mut x = 0usize;
    for &(q, row) in &pivots {
        if rows[row].1 {
            x |= 1 << q;
        }
    }
    x
}

/// Dense unitary of a gate, row-major, up to a global phase.
pub fn gate_unitary(gate: &CliffordGate) -> Result<Vec<Complex64>> {
    let a = gate.arity();
    let d = 1usize << a;
    let images = gate.image_strings();
    let zs: Vec<PauliString> = (0..a).map(|i| images[2 * i + 1].clone()).collect();
    let psi0 = DenseState::from_stabilizer_state(&StabilizerState::new(a, zs)?)?;
    let mut u = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let mut col = psi0.clone();
        for i in 0..a {
            if k >> i & 1 == 1 {
                col.apply_pauli(&images[2 * i]);
            }
        }
        for r in 0..d {
            u[r * d + k] = col.amps[r];
        }
    }
    Ok(u)
}

/// `|tr(P ρ_A)|²` for every Pauli on `region`, indexed by `(x, z)` over the compressed
/// region bits as `x * 2^|A| + z`.
fn squared_traces(state: &DenseState, region: &BitSet) -> Result<Vec<f64>> {
    if region.universe() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: region.universe(),
        });
    }
    let sites: Vec<usize> = region.iter().collect();
    let m = sites.len();
    let dim = 1usize << m;
    let expand = |c: usize| -> usize {
        sites
            .iter()
            .enumerate()
            .filter(|&(i, _)| c >> i & 1 == 1)
            .map(|(_, &s)| 1 << s)
            .sum()
    };
    let compress = |k: usize| -> usize {
        sites
            .iter()
            .enumerate()
            .filter(|&(_, &s)| k >> s & 1 == 1)
            .map(|(i, _)| 1 << i)
            .sum()
    };
    let keys: Vec<usize> = (0..state.amps.len()).map(compress).collect();
    let mut out = vec![0.0; dim * dim];
    let mut h = vec![Complex64::new(0.0, 0.0); dim];
    for xc in 0..dim {
        let x = expand(xc);
        h.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (k, &a) in state.amps.iter().enumerate() {
            h[keys[k]] += state.amps[k ^ x].conj() * a;
        }
        // Walsh-Hadamard over the region bits.
        let mut len = 1;
        while len < dim {
            for start in (0..dim).step_by(2 * len) {
                for j in start..start + len {
                    let (u, v) = (h[j], h[j + len]);
                    h[j] = u + v;
                    h[j + len] = u - v;
                }
            }
            len <<= 1;
        }
        for z in 0..dim {
            out[xc * dim + z] = h[z].norm_sqr();
        }
    }
    Ok(out)
}

/// Pauli spectrum `ξ_P = tr(P ρ_A)² / 2^|A|` of the reduced state, sorted descending.
pub fn pauli_spectrum(state: &DenseState, region: &BitSet) -> Result<Vec<f64>> {
    let m = region.count() as i32;
    let mut xi: Vec<f64> = squared_traces(state, region)?
        .into_iter()
        .map(|t| t / 2f64.powi(m))
        .collect();
    xi.sort_by(|a, b| b.total_cmp(a));
    Ok(xi)
}

/// `M̃₂(ρ_A) = −log2(Σ tr⁴ / Σ tr²)` evaluated by enumeration.
pub fn dense_oracle_sre2(state: &DenseState, region: &BitSet) -> Result<f64> {
    let t2 = squared_traces(state, region)?;
    let num: f64 = t2.iter().map(|t| t * t).sum();
    let den: f64 = t2.iter().sum();
    let v = -(num / den).log2();
    Ok(if v.abs() < 1e-14 { 0.0 } else { v })
}

/// Nearest magic class to the dense value, if within `tol`.
pub fn dense_class(state: &DenseState, region: &BitSet, tol: f64) -> Result<Option<MagicClass>> {
    Ok(MagicClass::from_value(dense_oracle_sre2(state, region)?, tol))
}

/// `⟨ψ| |T⟩⟨T|_target ⊗ ∏ (1 + g)/2 |ψ⟩`.
pub fn t_fidelity(state: &DenseState, target: usize, stabilizers: &[PauliString]) -> Result<f64> {
    let n = state.n;
    if target >= n {
        return Err(Error::BadSites {
            sites: vec![target],
            n_qubits: n,
            reason: "fidelity target out of range",
        });
    }
    let mut phi = state.clone();
    for g in stabilizers {
        phi.project(g);
    }
    let x = PauliString::single(n, target, crate::pauli_gf2::Pauli::X);
    let y = PauliString::single(n, target, crate::pauli_gf2::Pauli::Y);
    let ex = phi.expectation(&x).re;
    let ey = phi.expectation(&y).re;
    Ok((phi.norm_sqr() + (ex + ey) / std::f64::consts::SQRT_2) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic_gauge::tests::{bell6_cs, ghz_micro};
    use crate::magic_gauge::subsystem_magic_alg1;
    use crate::tableau::clifford_2q_table;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn t_state() -> DenseState {
        let mut psi = DenseState::zero(1).unwrap();
        psi.apply_gate(&CliffordGate::h(), &[0]).unwrap();
        psi.apply_t(0);
        psi
    }

    #[test]
    fn t_state_value_and_spectrum() {
        let psi = t_state();
        let full = BitSet::full(1);
        let v = dense_oracle_sre2(&psi, &full).unwrap();
        assert!((v - MagicClass::Full.value()).abs() < 1e-12);
        let xi = pauli_spectrum(&psi, &full).unwrap();
        let expect = [0.5, 0.25, 0.25, 0.0];
        for (a, b) in xi.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{xi:?}");
        }
    }

    #[test]
    fn stabilizer_states_have_no_magic() {
        let s: StabilizerState = "n=3 k=3\n-XXX\n+ZZI\n+IZZ".parse().unwrap();
        let psi = DenseState::from_stabilizer_state(&s).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        for g in s.generators() {
            assert!((psi.expectation(g).re - 1.0).abs() < 1e-12, "{g}");
        }
        for mask in 0..8usize {
            let region = BitSet::from_indices(3, (0..3).filter(|q| mask >> q & 1 == 1));
            assert_eq!(dense_oracle_sre2(&psi, &region).unwrap(), 0.0);
        }
    }

    #[test]
    fn gate_unitaries_conjugate_as_tabled() {
        for gate in clifford_2q_table().iter().step_by(97) {
            let images = gate.image_strings();
            let u = gate_unitary(gate).unwrap();
            for (k, pauli) in ["XI", "ZI", "IX", "IZ"].iter().enumerate() {
                // Check U P U† = P' on random-ish vectors: U P v == P' U v.
                let src: PauliString = pauli.parse().unwrap();
                let mut v = DenseState::from_amplitudes(
                    (0..4).map(|i| Complex64::new(1.0 + i as f64, 0.5 * i as f64)).collect(),
                )
                .unwrap();
                let mut lhs = v.clone();
                lhs.apply_pauli(&src);
                let mul = |u: &[Complex64], s: &DenseState| -> Vec<Complex64> {
                    (0..4).map(|r| (0..4).map(|c| u[r * 4 + c] * s.amps[c]).sum()).collect()
                };
                let lhs = mul(&u, &lhs);
                v.amps = mul(&u, &v);
                v.apply_pauli(&images[k]);
                for (a, b) in lhs.iter().zip(&v.amps) {
                    assert!((a - b).norm() < 1e-12, "{gate:?} on {pauli}");
                }
            }
        }
    }

    #[test]
    fn code_state_matches_direct_evolution() {
        let plus: StabilizerState = "n=1 k=1\n+X".parse().unwrap();
        let cs = CodeState::inject_t(&plus, 0).unwrap();
        let psi = DenseState::from_code_state(&cs).unwrap();
        assert!((psi.inner(&t_state()).norm() - 1.0).abs() < 1e-12);
        for g in [p("Z"), p("X"), p("Y")] {
            let direct = t_state().expectation(&g).re;
            let z = cs.logical_z();
            let y = cs.logical_y();
            let model = if &g == z || g == y.negated() {
                std::f64::consts::FRAC_1_SQRT_2
            } else if &g == cs.logical_x() {
                0.0
            } else {
                unreachable!()
            };
            assert!((direct - model).abs() < 1e-12, "{g}");
        }
    }

    #[test]
    fn classes_agree_on_examples() {
        for (cs, regions) in [
            (bell6_cs(), vec![vec![2, 3], vec![0, 1], vec![2], vec![1, 2, 3], vec![]]),
            (ghz_micro(), vec![vec![0], vec![1], vec![0, 1]]),
        ] {
            let psi = DenseState::from_code_state(&cs).unwrap();
            for r in regions {
                let region = BitSet::from_indices(cs.n_qubits(), r);
                assert_eq!(
                    dense_class(&psi, &region, 1e-9).unwrap(),
                    Some(subsystem_magic_alg1(&cs, &region)),
                    "{region:?}"
                );
            }
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(DenseState::zero(13), Err(Error::SizeCapExceeded { .. })));
    }
}
