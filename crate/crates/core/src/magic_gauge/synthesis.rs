//! Local Clifford synthesis: map symplectic pairs to `(X_t, Z_t)` and an isotropic set
//! to X strings, using gates on a fixed region only.

use crate::pauli_gf2::{BitSet, Pauli, PauliString};
use crate::tableau::{Circuit, CliffordGate};

pub(crate) struct Synthesis {
    pub circuit: Circuit,
    /// Target qubit of each input pair.
    pub pair_targets: Vec<usize>,
    /// Target qubit of each isotropic input, `None` when it depended on earlier ones.
    #[allow(dead_code)]
    pub iso_targets: Vec<Option<usize>>,
}

struct Work {
    circuit: Circuit,
    strings: Vec<PauliString>,
}

impl Work {
    fn apply(&mut self, gate: CliffordGate, sites: &[usize]) {
        self.circuit.push(gate, sites).expect("synthesis emits valid sites");
        let op = *self.circuit.ops().last().unwrap();
        for s in &mut self.strings {
            op.conjugate(s);
        }
    }

    /// Rotates every letter of string `i` on `qubits` to X.
    fn to_x(&mut self, i: usize, qubits: &[usize]) {
        for &q in qubits {
            match self.strings[i].get(q) {
                Pauli::Z => self.apply(CliffordGate::h(), &[q]),
                Pauli::Y => self.apply(CliffordGate::sdg(), &[q]),
                _ => {}
            }
        }
    }

    /// Rotates every letter of string `i` on `qubits` to Z.
    fn to_z(&mut self, i: usize, qubits: &[usize]) {
        for &q in qubits {
            match self.strings[i].get(q) {
                Pauli::X => self.apply(CliffordGate::h(), &[q]),
                Pauli::Y => {
                    self.apply(CliffordGate::sdg(), &[q]);
                    self.apply(CliffordGate::h(), &[q]);
                }
                _ => {}
            }
        }
    }

    fn support_in(&self, i: usize, free: &BitSet) -> Vec<usize> {
        self.strings[i].support().iter().filter(|&q| free.contains(q)).collect()
    }
}

/// Builds a circuit on `region` mapping `pairs[k] ↦ (±X_{t_k}, ±Z_{t_k})` with positive
/// signs, then each independent isotropic string to an X string whose new qubit is its
/// target. Inputs must be supported in `region`, each pair must anticommute, and all
/// other combinations must commute.
pub(crate) fn synthesize(
    region: &BitSet,
    pairs: &[(PauliString, PauliString)],
    isotropic: &[PauliString],
) -> Synthesis {
    let n = region.universe();
    let mut strings = Vec::with_capacity(2 * pairs.len() + isotropic.len());
    for (p, q) in pairs {
        strings.push(p.clone());
        strings.push(q.clone());
    }
    strings.extend(isotropic.iter().cloned());
    for s in &strings {
        debug_assert!(s.supported_in(region), "{s} leaves the synthesis region");
    }
    let mut w = Work {
        circuit: Circuit::new(n),
        strings,
    };
    let mut free = region.clone();
    let mut pair_targets = Vec::with_capacity(pairs.len());

    for k in 0..pairs.len() {
        let (ip, iq) = (2 * k, 2 * k + 1);
        debug_assert_eq!(w.strings[ip].symplectic(&w.strings[iq]), 1);
        let supp = w.support_in(ip, &free);
        debug_assert_eq!(supp.len(), w.strings[ip].weight(), "pair overlaps earlier targets");
        w.to_x(ip, &supp);
        let t = supp[0];
        for &c in &supp[1..] {
            w.apply(CliffordGate::cx(), &[t, c]);
        }
        let others: Vec<usize> = w.support_in(iq, &free).into_iter().filter(|&q| q != t).collect();
        w.to_z(iq, &others);
        for &c in &others {
            w.apply(CliffordGate::cx(), &[c, t]);
        }
        if w.strings[iq].get(t) == Pauli::Y {
            w.apply(CliffordGate::h(), &[t]);
            w.apply(CliffordGate::s(), &[t]);
            w.apply(CliffordGate::h(), &[t]);
        }
        if w.strings[ip].is_negative() {
            w.apply(CliffordGate::z(), &[t]);
        }
        if w.strings[iq].is_negative() {
            w.apply(CliffordGate::x(), &[t]);
        }
        debug_assert_eq!(w.strings[ip], PauliString::single(n, t, Pauli::X));
        debug_assert_eq!(w.strings[iq], PauliString::single(n, t, Pauli::Z));
        free.remove(t);
        pair_targets.push(t);
    }

    let mut iso_targets = Vec::with_capacity(isotropic.len());
    for j in 0..isotropic.len() {
        let i = 2 * pairs.len() + j;
        let supp = w.support_in(i, &free);
        if supp.is_empty() {
            iso_targets.push(None);
            continue;
        }
        w.to_x(i, &supp);
        let t = supp[0];
        for &c in &supp[1..] {
            w.apply(CliffordGate::cx(), &[t, c]);
        }
        if w.strings[i].is_negative() {
            w.apply(CliffordGate::z(), &[t]);
        }
        free.remove(t);
        iso_targets.push(Some(t));
    }
    Synthesis {
        circuit: w.circuit,
        pair_targets,
        iso_targets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn image(c: &Circuit, s: &PauliString) -> PauliString {
        let mut out = s.clone();
        c.conjugate(&mut out);
        out
    }

    #[test]
    fn maps_pair_to_single_qubit() {
        let region = BitSet::full(3);
        let pair = (p("-YZX"), p("ZZI"));
        let syn = synthesize(&region, &[pair.clone()], &[]);
        let t = syn.pair_targets[0];
        assert_eq!(image(&syn.circuit, &pair.0), PauliString::single(3, t, Pauli::X));
        assert_eq!(image(&syn.circuit, &pair.1), PauliString::single(3, t, Pauli::Z));
    }

    #[test]
    fn isotropic_strings_become_x_strings() {
        let region = BitSet::from_indices(4, [0, 1, 2]);
        let iso = [p("ZZII"), p("IZZI"), p("ZIZI"), p("-YYYI")];
        let syn = synthesize(&region, &[], &iso);
        assert_eq!(syn.iso_targets[2], None);
        for s in &iso {
            let img = image(&syn.circuit, s);
            assert_eq!(img.z_words()[0], 0, "{s} -> {img}");
            assert!(img.supported_in(&region));
        }
        assert!(syn.circuit.support().is_subset(&region));
    }

    #[test]
    fn pairs_then_isotropic() {
        let region = BitSet::full(4);
        let pairs = [(p("XXII"), p("ZIII"))];
        let iso = [p("IIZZ")];
        let syn = synthesize(&region, &pairs, &iso);
        let t = syn.pair_targets[0];
        assert_eq!(image(&syn.circuit, &pairs[0].0), PauliString::single(4, t, Pauli::X));
        let img = image(&syn.circuit, &iso[0]);
        assert_eq!(img.weight(), 1);
        assert_eq!(img.get(syn.iso_targets[0].unwrap()), Pauli::X);
    }
}
