//! Uniform sampling of Clifford gates: exhaustive tables for one and two qubits, and a
//! symplectic-complement construction for global Cliffords.

use std::sync::OnceLock;

use rand::Rng;

use super::gate::{CliffordGate, LocalPauli};
use crate::pauli_gf2::{PauliString, ProjectedSpan, BitSet};

/// Hermitian sign-free local Pauli with the given bits (`+` in letter form).
fn positive(bits: u8) -> LocalPauli {
    let y = (bits & (bits >> 1) & 0b0101).count_ones() as u8;
    LocalPauli {
        bits,
        phase: y & 3,
    }
}

fn negate(l: LocalPauli) -> LocalPauli {
    LocalPauli {
        bits: l.bits,
        phase: (l.phase + 2) & 3,
    }
}

fn enumerate(arity: usize) -> Vec<CliffordGate> {
    let n_bits = 1u8 << (2 * arity);
    let n_images = 2 * arity;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n_images);
    fn rec(
        arity: usize,
        n_bits: u8,
        chosen: &mut Vec<u8>,
        out: &mut Vec<CliffordGate>,
    ) {
        let k = chosen.len();
        if k == 2 * arity {
            for signs in 0..(1u32 << k) {
                let imgs: Vec<LocalPauli> = chosen
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        let l = positive(b);
                        if (signs >> i) & 1 == 1 {
                            negate(l)
                        } else {
                            l
                        }
                    })
                    .collect();
                out.push(CliffordGate::from_locals_unchecked(arity, &imgs));
            }
            return;
        }
        for b in 1..n_bits {
            let cand = positive(b);
            let ok = chosen.iter().enumerate().all(|(i, &c)| {
                let expected = (i / 2 == k / 2) as u32;
                positive(c).symplectic(cand) == expected
            });
            if ok {
                chosen.push(b);
                rec(arity, n_bits, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(arity, n_bits, &mut chosen, &mut out);
    out
}

/// All 24 one-qubit Cliffords modulo phase, in a fixed enumeration order.
pub fn clifford_1q_table() -> &'static [CliffordGate] {
    static TABLE: OnceLock<Vec<CliffordGate>> = OnceLock::new();
    TABLE.get_or_init(|| enumerate(1))
}

/// All 11520 two-qubit Cliffords modulo phase, in a fixed enumeration order.
pub fn clifford_2q_table() -> &'static [CliffordGate] {
    static TABLE: OnceLock<Vec<CliffordGate>> = OnceLock::new();
    TABLE.get_or_init(|| enumerate(2))
}

pub fn sample_clifford_1q<R: Rng + ?Sized>(rng: &mut R) -> &'static CliffordGate {
    let t = clifford_1q_table();
    &t[rng.random_range(0..t.len())]
}

pub fn sample_clifford_2q<R: Rng + ?Sized>(rng: &mut R) -> &'static CliffordGate {
    let t = clifford_2q_table();
    &t[rng.random_range(0..t.len())]
}

/// A Clifford on `n` qubits given by the images of every `X_q` and `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalClifford {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl GlobalClifford {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    /// Uniformly random Clifford (modulo global phase).
    ///
    /// Image pairs are drawn one qubit at a time: a uniform non-zero vector `v` of the
    /// current symplectic complement, then a uniform `w` in it with `ω(v, w) = 1`; the
    /// complement is then shrunk by projecting out the pair. Signs are uniform.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut basis: Vec<PauliString> = Vec::with_capacity(2 * n);
        for q in 0..n {
            basis.push(PauliString::single(n, q, crate::pauli_gf2::Pauli::X));
            basis.push(PauliString::single(n, q, crate::pauli_gf2::Pauli::Z));
        }
        let random_combo = |basis: &[PauliString], rng: &mut R| {
            let mut v = PauliString::identity(n);
            for b in basis {
                if rng.random::<bool>() {
                    v.mul_assign_right(b);
                }
            }
            v.set_phase(0);
            v
        };
        let mut x_images = Vec::with_capacity(n);
        let mut z_images = Vec::with_capacity(n);
        for _ in 0..n {
            let v = loop {
                let v = random_combo(&basis, rng);
                if !v.is_identity_up_to_phase() {
                    break v;
                }
            };
            let w = loop {
                let w = random_combo(&basis, rng);
                if v.symplectic(&w) == 1 {
                    break w;
                }
            };
            // project the basis onto the complement of span{v, w} and drop dependents
            let all = BitSet::full(n);
            let mut span = ProjectedSpan::new(std::iter::empty(), &all);
            let mut next = Vec::with_capacity(basis.len().saturating_sub(2));
            for u in &basis {
                let mut u2 = u.clone();
                if u.symplectic(&w) == 1 {
                    u2.mul_assign_right(&v);
                }
                if u.symplectic(&v) == 1 {
                    u2.mul_assign_right(&w);
                }
                u2.set_phase(0);
                if span.insert(&u2) {
                    next.push(u2);
                }
            }
            basis = next;
            x_images.push(hermitian_with_sign(v, rng.random()));
            z_images.push(hermitian_with_sign(w, rng.random()));
        }
        GlobalClifford {
            n,
            x_images,
            z_images,
        }
    }

    /// `U p U†`.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.n_qubits(), self.n);
        let mut out = PauliString::identity(self.n);
        out.set_phase(p.phase());
        for q in 0..self.n {
            if p.x_bit(q) {
                out.mul_assign_right(&self.x_images[q]);
            }
            if p.z_bit(q) {
                out.mul_assign_right(&self.z_images[q]);
            }
        }
        out
    }
}

fn hermitian_with_sign(mut p: PauliString, negative: bool) -> PauliString {
    let y = p.y_count();
    p.set_phase((y % 4) as u8);
    if negative {
        p.negate();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn table_sizes() {
        assert_eq!(clifford_1q_table().len(), 24);
        assert_eq!(clifford_2q_table().len(), 11520);
        let distinct: HashSet<_> = clifford_2q_table().iter().collect();
        assert_eq!(distinct.len(), 11520);
    }

    #[test]
    fn tables_contain_named_gates() {
        let t2: HashSet<_> = clifford_2q_table().iter().collect();
        for g in [
            CliffordGate::cx(),
            CliffordGate::cz(),
            CliffordGate::swap(),
            CliffordGate::sdki_f(),
            CliffordGate::identity2(),
        ] {
            assert!(t2.contains(&g), "{g:?}");
        }
        let t1: HashSet<_> = clifford_1q_table().iter().collect();
        for g in [CliffordGate::h(), CliffordGate::s(), CliffordGate::sdg(), CliffordGate::y()] {
            assert!(t1.contains(&g));
        }
    }

    #[test]
    fn table_closed_under_composition() {
        let t2: HashSet<_> = clifford_2q_table().iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = sample_clifford_2q(&mut rng);
            let b = sample_clifford_2q(&mut rng);
            assert!(t2.contains(&a.then(b).unwrap()));
        }
    }

    #[test]
    fn global_random_is_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 17, 70] {
            let u = GlobalClifford::random(n, &mut rng);
            for a in 0..n {
                assert!(u.x_image(a).is_hermitian());
                assert!(u.z_image(a).is_hermitian());
                for b in 0..n {
                    let delta = (a == b) as u32;
                    assert_eq!(u.x_image(a).symplectic(u.z_image(b)), delta);
                    assert_eq!(u.x_image(a).symplectic(u.x_image(b)), 0);
                    assert_eq!(u.z_image(a).symplectic(u.z_image(b)), 0);
                }
            }
        }
    }

    #[test]
    fn global_conjugation_is_homomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = GlobalClifford::random(6, &mut rng);
        let a: PauliString = "XYZIIX".parse().unwrap();
        let b: PauliString = "-ZZYXIY".parse().unwrap();
        let lhs = u.conjugate(&a.mul(&b));
        let rhs = u.conjugate(&a).mul(&u.conjugate(&b));
        assert_eq!(lhs, rhs);
        assert!(u.conjugate(&a).is_hermitian());
    }
}
