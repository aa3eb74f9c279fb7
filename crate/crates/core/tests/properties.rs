use magicspread::channel::{erase_and_coherent_info, global_random_code};
use magicspread::circuits::{evolve, layer_pairs, v_entanglement, Evolvable};
use magicspread::lengthscales::{fleom, lml, minimal_intervals, Geometry, Interval};
use magicspread::magic_gauge::{
    compute_bmg_alg3, logical_reducibility, subsystem_magic_alg1, subsystem_magic_alg2, CaseId, MagicClass,
};
use magicspread::pauli_gf2::{rank_gf2, reduce_support, solve_in_span, BinaryMatrix};
use magicspread::tableau::sample_clifford_2q;
use magicspread::{BitSet, Boundary, CircuitSpec, CodeState, Ensemble, Pauli, PauliString, StabilizerState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letter(k: u8) -> Pauli {
    [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize % 4]
}

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(0u8..4, n), 0u8..2).prop_map(|(ls, sign)| {
        let letters: Vec<Pauli> = ls.into_iter().map(letter).collect();
        PauliString::from_paulis(&letters, 2 * sign)
    })
}

fn mask(l: usize, bits: u32) -> BitSet {
    BitSet::from_indices(l, (0..l).filter(|&q| bits >> q & 1 == 1))
}

/// Either a global random code or a doped brickwork evolution of Bell pairs.
fn code_state(l: usize, seed: u64, depth: usize, ensemble: usize, periodic: bool) -> CodeState {
    if depth == 0 || l % 2 == 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return global_random_code(l, &mut rng).unwrap();
    }
    let mut spec = CircuitSpec::new(l);
    spec.ensemble = [Ensemble::RandomClifford, Ensemble::SdkiF, Ensemble::SdkiR][ensemble % 3];
    spec.boundary = if periodic && l >= 4 { Boundary::Periodic } else { Boundary::Open };
    spec.p = 0.25;
    spec.seed = seed;
    evolve(&spec, 0, depth).unwrap()
}

prop_compose! {
    fn code_and_region()(l in 2usize..=9, seed in any::<u64>(), depth in 0usize..12,
                         ens in 0usize..3, periodic in any::<bool>(), bits in any::<u32>())
                         -> (CodeState, BitSet) {
        (code_state(l, seed, depth, ens, periodic), mask(l, bits))
    }
}

fn independent_span_rank(rows: &[Vec<u64>]) -> usize {
    let mut span = std::collections::HashSet::new();
    for sel in 0u32..(1 << rows.len()) {
        let mut acc = vec![0u64; rows.first().map_or(0, Vec::len)];
        for (i, r) in rows.iter().enumerate() {
            if sel >> i & 1 == 1 {
                acc.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
            }
        }
        span.insert(acc);
    }
    span.len().trailing_zeros() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn commutation_is_symmetric_and_sets_the_product_phase(
        (p, q) in (1usize..9).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n)))
    ) {
        prop_assert_eq!(p.commutes(&q).unwrap(), q.commutes(&p).unwrap());
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        prop_assert_eq!(pq.letters(), qp.letters());
        prop_assert_eq!((pq.phase() + 4 - qp.phase()) % 4, (2 * p.symplectic(&q) % 4) as u8);
    }

    #[test]
    fn reduce_support_stays_in_the_coset((cs, region) in code_and_region()) {
        let n = cs.n_qubits();
        let gens = cs.stabilizers();
        let p = cs.logical_z().clone();
        let same = reduce_support(&p, gens, &BitSet::full(n)).unwrap();
        prop_assert_eq!(same.as_ref(), Some(&p));
        if let Some(r) = reduce_support(&p, gens, &region).unwrap() {
            prop_assert!(r.support().is_subset(&region));
            let diff = r.mul(&p);
            let basis = BinaryMatrix::from_paulis(gens).unwrap();
            prop_assert!(solve_in_span(&diff.symplectic_vector(), &basis).unwrap().is_some());
        }
    }

    #[test]
    fn rank_matches_exhaustive_span(rows in prop::collection::vec(pauli_strategy(5), 0..=12)) {
        let m = BinaryMatrix::from_paulis(&rows).unwrap();
        let vecs: Vec<Vec<u64>> = rows.iter().map(PauliString::symplectic_vector).collect();
        prop_assert_eq!(rank_gf2(&m), independent_span_rank(&vecs));
        prop_assert!(rank_gf2(&m) <= rows.len().min(10));
    }

    #[test]
    fn gates_keep_a_valid_stabilizer_group(l in 2usize..=10, seed in any::<u64>(), steps in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = StabilizerState::zero(l);
        for _ in 0..steps {
            let a = rand::Rng::random_range(&mut rng, 0..l);
            let b = (a + rand::Rng::random_range(&mut rng, 1..l)) % l;
            state.apply_gate(sample_clifford_2q(&mut rng), &[a, b]).unwrap();
        }
        let gens = state.generators().to_vec();
        prop_assert!(StabilizerState::new(l, gens.clone()).is_ok());
        for g in &gens {
            prop_assert!(g.is_hermitian());
        }
        for bits in 0u32..(1 << l.min(8)) {
            let a = mask(l, bits);
            prop_assert_eq!(state.entropy(&a), state.entropy(&a.complement()));
        }
    }

    #[test]
    fn classifiers_agree((cs, region) in code_and_region()) {
        let c1 = subsystem_magic_alg1(&cs, &region);
        prop_assert_eq!(subsystem_magic_alg2(&cs, &region), c1);
        let bmg = compute_bmg_alg3(&cs, &region);
        prop_assert_eq!(bmg.spectrum().class(), c1);
        prop_assert_eq!(bmg.case_id.class(), c1);
        prop_assert_eq!(bmg.n_a() + bmg.n_b() + bmg.m(), cs.n_qubits() - 1);
    }

    #[test]
    fn trichotomy_and_complementarity((cs, region) in code_and_region()) {
        let red_a = logical_reducibility(&cs, &region);
        let red_b = logical_reducibility(&cs, &region.complement());
        prop_assert!(red_a.trichotomy().is_some());
        prop_assert_eq!(red_b.case_id(), red_a.case_id().swapped());
        let full_a = subsystem_magic_alg1(&cs, &region) == MagicClass::Full;
        let zero_ii_b = subsystem_magic_alg1(&cs, &region.complement()) == MagicClass::Zero
            && red_b.case_id() == CaseId::Ii;
        prop_assert_eq!(full_a, zero_ii_b);
    }

    #[test]
    fn full_regions_stay_full_when_grown((cs, region) in code_and_region(), extra in any::<u32>()) {
        let grown = region.union(&mask(cs.n_qubits(), extra));
        if subsystem_magic_alg1(&cs, &region) == MagicClass::Full {
            prop_assert_eq!(subsystem_magic_alg1(&cs, &grown), MagicClass::Full);
        }
    }

    #[test]
    fn stabilizer_signs_do_not_matter((cs, region) in code_and_region(), flips in any::<u64>()) {
        let mut flipped = cs.clone();
        for i in 0..cs.stabilizers().len() {
            if flips >> (i % 64) & 1 == 1 {
                flipped.negate_stabilizer(i);
            }
        }
        prop_assert_eq!(subsystem_magic_alg1(&flipped, &region), subsystem_magic_alg1(&cs, &region));
        prop_assert_eq!(subsystem_magic_alg2(&flipped, &region), subsystem_magic_alg2(&cs, &region));
        prop_assert_eq!(
            compute_bmg_alg3(&flipped, &region).spectrum().class(),
            compute_bmg_alg3(&cs, &region).spectrum().class()
        );
    }

    #[test]
    fn coherent_information_is_bounded((cs, region) in code_and_region()) {
        let r = erase_and_coherent_info(&cs.extend_with_reference(), &region).unwrap();
        prop_assert!((-1..=1).contains(&r.coherent_info));
    }

    #[test]
    fn velocity_map_is_increasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(v_entanglement(lo).unwrap() <= v_entanglement(hi).unwrap() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mlmi_sets_are_minimal_and_overlapping(
        half in 1usize..=8, seed in any::<u64>(), depth in 0usize..16, ens in 0usize..3, periodic in any::<bool>()
    ) {
        let l = 2 * half;
        let cs = code_state(l, seed, depth, ens, periodic);
        let m = minimal_intervals(&cs, Geometry::Line).unwrap();
        m.check_invariants().unwrap();
        for a in &m.intervals {
            prop_assert_eq!(subsystem_magic_alg1(&cs, &a.region(l)), MagicClass::Full);
            if a.width(l) > 1 {
                for shrunk in [Interval::new(a.start + 1, a.end), Interval::new(a.start, a.end - 1)] {
                    prop_assert_ne!(subsystem_magic_alg1(&cs, &shrunk.region(l)), MagicClass::Full);
                }
            }
            for b in &m.intervals {
                prop_assert!(a.intersects(b, l));
            }
        }
        let w = fleom(&m).unwrap();
        prop_assert!(w <= l && m.widths().iter().all(|&x| x <= w));
        let ell = lml(&cs, Geometry::Line);
        prop_assert!(ell >= 2 && ell <= l);
    }

    #[test]
    fn fleom_growth_is_bounded_by_the_light_cone(
        half in 2usize..=10, seed in any::<u64>(), ens in 0usize..3, periodic in any::<bool>()
    ) {
        let l = 2 * half;
        let mut spec = CircuitSpec::new(l);
        spec.ensemble = [Ensemble::RandomClifford, Ensemble::SdkiF, Ensemble::SdkiR][ens];
        spec.boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
        spec.p = 0.2;
        spec.seed = seed;
        let mut cs = evolve(&spec, 0, 0).unwrap();
        let w0 = fleom(&minimal_intervals(&cs, Geometry::Line).unwrap()).unwrap();
        let mut prev = lml(&cs, Geometry::Line);
        for t in 1..=l {
            cs.apply_layer(&magicspread::circuits::realization_layer(&spec, 0, magicspread::circuits::Stream::Main, t));
            let w = fleom(&minimal_intervals(&cs, Geometry::Line).unwrap()).unwrap();
            prop_assert!(w <= w0 + 6 * t);
            let ell = lml(&cs, Geometry::Line);
            prop_assert!(ell.abs_diff(prev) <= 2);
            prev = ell;
        }
    }

    #[test]
    fn brickwork_layers_are_disjoint(l in 2usize..40, t in 1usize..6, periodic in any::<bool>()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
        let pairs = layer_pairs(l, boundary, t);
        let mut seen = BitSet::empty(l);
        for [a, b] in pairs {
            prop_assert!(!seen.contains(a) && !seen.contains(b) && a != b);
            seen.insert(a);
            seen.insert(b);
            if boundary == Boundary::Open {
                prop_assert_eq!(b, a + 1);
            }
        }
    }
}
