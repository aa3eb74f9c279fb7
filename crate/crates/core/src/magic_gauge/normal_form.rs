//! Single-party Clifford normal form of a stabilizer tableau across a bipartition,
//! extended to carry one logical row of a pseudostabilizer operator.
//!
//! Output shape, in the frame of the local Clifford `C_A ⊗ C_B`: an upper block of
//! cross pairs `(X_a X_b, Z_a Z_b)`, then single-qubit `X` rows and at most one
//! `X_a X_b` row. Every row also keeps its original-frame operator.

use super::synthesis::synthesize;
use crate::pauli_gf2::{BitSet, PauliString};
use crate::tableau::{Circuit, CliffordGate, GateOp};

/// Final-frame form of a stabilizer generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    PairX(usize, usize),
    PairZ(usize, usize),
    Single(usize),
    /// The lower-block `X_a X_b`, with `a` in the region.
    Cross(usize, usize),
}

mod rows {
    use crate::pauli_gf2::{BitSet, PauliString};
    use crate::tableau::{Circuit, GateOp};

    /// A stabilizer generator tracked in both frames.
    pub(crate) struct StabRow {
        orig: PauliString,
        cur: PauliString,
    }

    /// The logical generator. Only stabilizers may be multiplied into it; nothing
    /// exposes a way to multiply it into a stabilizer.
    pub(crate) struct LogicalRow {
        orig: PauliString,
        cur: PauliString,
    }

    macro_rules! frames {
        ($t:ty) => {
            impl $t {
                pub fn new(p: &PauliString) -> Self {
                    Self {
                        orig: p.clone(),
                        cur: p.clone(),
                    }
                }

                pub fn absorb(&mut self, g: &StabRow) {
                    self.orig.mul_assign_right(&g.orig);
                    self.cur.mul_assign_right(&g.cur);
                }

                pub fn omega_on(&self, g: &StabRow, region: &BitSet) -> bool {
                    self.orig.symplectic_on(&g.orig, region) == 1
                }

                pub fn orig(&self) -> &PauliString {
                    &self.orig
                }

                pub fn cur(&self) -> &PauliString {
                    &self.cur
                }

                pub fn into_orig(self) -> PauliString {
                    self.orig
                }

                pub fn enter_frame(&mut self, c: &Circuit) {
                    self.cur = self.orig.clone();
                    c.conjugate(&mut self.cur);
                }

                pub fn apply(&mut self, op: &GateOp) {
                    op.conjugate(&mut self.cur);
                }
            }
        };
    }

    frames!(StabRow);
    frames!(LogicalRow);
}

pub(crate) use rows::{LogicalRow, StabRow};

pub(crate) struct NormalForm {
    /// `C_A ⊗ C_B`, gates confined to their own side.
    pub circuit: Circuit,
    pub stabilizers: Vec<(PauliString, Shape)>,
    /// Original-frame logical and the qubit of its final single `X`.
    pub logical: Option<(PauliString, usize)>,
}

impl NormalForm {
    pub fn cross(&self) -> Option<(usize, usize)> {
        self.stabilizers.iter().find_map(|(_, s)| match *s {
            Shape::Cross(a, b) => Some((a, b)),
            _ => None,
        })
    }
}

pub(crate) enum Outcome {
    /// The logical ended in the upper block, paired with a stabilizer.
    LogicalPaired,
    Complete(NormalForm),
}

fn xor(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

/// Normal form of `stabilizers` (and optionally a logical commuting with them) with
/// respect to `region` and its complement. Inputs must be independent commuting
/// Hermitian strings; the lower block is assumed to have nullity one, i.e.
/// `L − 1` stabilizers, or `L − 1` stabilizers plus the logical.
pub(crate) fn normal_form(region: &BitSet, stabilizers: &[PauliString], logical: Option<&PauliString>) -> Outcome {
    let n = region.universe();
    let b_side = region.complement();
    let mut rest: Vec<StabRow> = stabilizers.iter().map(StabRow::new).collect();
    let mut log = logical.map(LogicalRow::new);

    // Symplectic Gram-Schmidt for the form restricted to A, pivoting on stabilizers.
    let mut pairs: Vec<(StabRow, StabRow)> = Vec::new();
    'gs: loop {
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                if !rest[i].omega_on(&rest[j], region) {
                    continue;
                }
                let v = rest.remove(j);
                let u = rest.remove(i);
                for w in &mut rest {
                    let (cu, cv) = (w.omega_on(&v, region), w.omega_on(&u, region));
                    if cu {
                        w.absorb(&u);
                    }
                    if cv {
                        w.absorb(&v);
                    }
                }
                if let Some(l) = &mut log {
                    let (cu, cv) = (l.omega_on(&v, region), l.omega_on(&u, region));
                    if cu {
                        l.absorb(&u);
                    }
                    if cv {
                        l.absorb(&v);
                    }
                }
                pairs.push((u, v));
                continue 'gs;
            }
        }
        break;
    }

    if let Some(l) = &log {
        if rest.iter().any(|g| l.omega_on(g, region)) {
            return Outcome::LogicalPaired;
        }
    }

    // Local synthesis: pairs to (X_t, Z_t) on each side, everything else to X strings.
    let mut circuit = Circuit::new(n);
    let mut targets: Vec<(usize, usize)> = vec![(0, 0); pairs.len()];
    for (side, is_a) in [(region, true), (&b_side, false)] {
        let local_pairs: Vec<(PauliString, PauliString)> = pairs
            .iter()
            .map(|(u, v)| (u.orig().restricted(side), v.orig().restricted(side)))
            .collect();
        let mut iso: Vec<PauliString> = rest.iter().map(|g| g.orig().restricted(side)).collect();
        if let Some(l) = &log {
            iso.push(l.orig().restricted(side));
        }
        let syn = synthesize(side, &local_pairs, &iso);
        for (k, &t) in syn.pair_targets.iter().enumerate() {
            if is_a {
                targets[k].0 = t;
            } else {
                targets[k].1 = t;
            }
        }
        circuit.extend(&syn.circuit);
    }
    for g in &mut rest {
        g.enter_frame(&circuit);
    }
    if let Some(l) = &mut log {
        l.enter_frame(&circuit);
    }

    let mut lower = BitSet::full(n);
    for &(a, b) in &targets {
        lower.remove(a);
        lower.remove(b);
    }
    for g in rest.iter().map(StabRow::cur).chain(log.as_ref().map(LogicalRow::cur)) {
        debug_assert!(g.z_words().iter().all(|&w| w == 0), "lower row {g} is not an X string");
        debug_assert!(g.supported_in(&lower));
    }

    // The lower stabilizers span a hyperplane of X strings on `lower`: find its normal.
    let mut ech: Vec<Vec<u64>> = rest.iter().map(|g| g.cur().x_words().to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in lower.iter() {
        let Some(p) = (r..ech.len()).find(|&i| bit(&ech[i], c)) else {
            continue;
        };
        ech.swap(r, p);
        let pivot = ech[r].clone();
        for (i, row) in ech.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                xor(row, &pivot);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    assert_eq!(r, rest.len(), "lower stabilizers are dependent");
    let free: Vec<usize> = lower.iter().filter(|c| !pivot_cols.contains(c)).collect();
    assert_eq!(free.len(), 1, "lower block must have nullity one");
    let mut normal = BitSet::from_indices(n, free.iter().copied());
    for (row, &c) in ech.iter().zip(&pivot_cols) {
        if bit(row, free[0]) {
            normal.insert(c);
        }
    }

    // Compress the normal onto one qubit per side with CX gates inside each side.
    let mut heads = [None, None];
    for (slot, side) in [region, &b_side].into_iter().enumerate() {
        let on_side: Vec<usize> = normal.iter().filter(|&q| side.contains(q)).collect();
        let Some((&head, others)) = on_side.split_first() else {
            continue;
        };
        for &c in others {
            let op = GateOp::two(CliffordGate::cx(), c, head);
            circuit.push(op.gate, op.sites()).expect("valid sites");
            for g in &mut rest {
                g.apply(&op);
            }
            if let Some(l) = &mut log {
                l.apply(&op);
            }
        }
        heads[slot] = Some(head);
    }
    let last = match heads {
        [_, Some(b)] => b,
        [Some(a), None] => a,
        [None, None] => unreachable!("normal vector is nonzero"),
    };

    // Gauss-Jordan with the surviving normal column last.
    let order: Vec<usize> = lower.iter().filter(|&c| c != last).chain([last]).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; rest.len()];
    for &c in &order {
        let Some(p) = (0..rest.len()).find(|&i| !used[i] && rest[i].cur().x_bit(c)) else {
            continue;
        };
        used[p] = true;
        for i in 0..rest.len() {
            if i != p && rest[i].cur().x_bit(c) {
                let (lo, hi) = rest.split_at_mut(i.max(p));
                if i < p {
                    lo[i].absorb(&hi[0]);
                } else {
                    hi[0].absorb(&lo[p]);
                }
            }
        }
        pivots.push((c, p));
    }
    debug_assert!(pivots.iter().all(|&(c, _)| c != last));

    let logical = log.map(|mut l| {
        for &(c, p) in &pivots {
            if l.cur().x_bit(c) {
                l.absorb(&rest[p]);
            }
        }
        let supp: Vec<usize> = l.cur().support().iter().collect();
        assert_eq!(supp, [last], "logical did not reduce to a single X");
        (l.into_orig(), last)
    });

    let mut out = Vec::with_capacity(stabilizers.len());
    for ((u, v), &(a, b)) in pairs.into_iter().zip(&targets) {
        out.push((u.into_orig(), Shape::PairX(a, b)));
        out.push((v.into_orig(), Shape::PairZ(a, b)));
    }
    for g in rest {
        let supp: Vec<usize> = g.cur().support().iter().collect();
        let shape = match supp[..] {
            [q] => Shape::Single(q),
            [a, b] if region.contains(a) != region.contains(b) => {
                if region.contains(a) {
                    Shape::Cross(a, b)
                } else {
                    Shape::Cross(b, a)
                }
            }
            _ => panic!("lower row {} not reduced", g.cur()),
        };
        out.push((g.into_orig(), shape));
    }
    Outcome::Complete(NormalForm {
        circuit,
        stabilizers: out,
        logical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli_gf2::Pauli;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn image(c: &Circuit, s: &PauliString) -> PauliString {
        let mut out = s.clone();
        c.conjugate(&mut out);
        out
    }

    fn complete(o: Outcome) -> NormalForm {
        match o {
            Outcome::Complete(nf) => nf,
            Outcome::LogicalPaired => panic!("logical unexpectedly paired"),
        }
    }

    fn check_shapes(nf: &NormalForm, region: &BitSet) {
        assert!(nf.circuit.ops().iter().all(|op| {
            let s = op.sites();
            s.iter().all(|&q| region.contains(q)) || s.iter().all(|&q| !region.contains(q))
        }));
        for (g, shape) in &nf.stabilizers {
            let img = image(&nf.circuit, g);
            let n = g.n_qubits();
            let expect = match *shape {
                Shape::PairX(a, b) | Shape::Cross(a, b) => {
                    PauliString::from_sparse(n, &[(a, Pauli::X), (b, Pauli::X)])
                }
                Shape::PairZ(a, b) => PauliString::from_sparse(n, &[(a, Pauli::Z), (b, Pauli::Z)]),
                Shape::Single(q) => PauliString::single(n, q, Pauli::X),
            };
            assert!(img == expect || img == expect.negated(), "{g} -> {img}, expected {shape:?}");
        }
    }

    #[test]
    fn ghz_micro_logical_relocatable() {
        let region = BitSet::from_indices(2, [0]);
        let nf = complete(normal_form(&region, &[p("ZZ")], Some(&p("ZI"))));
        check_shapes(&nf, &region);
        assert_eq!(nf.cross(), Some((0, 1)));
    }

    #[test]
    fn logical_paired_when_irreducible() {
        let region = BitSet::from_indices(2, [0]);
        assert!(matches!(
            normal_form(&region, &[p("ZZ")], Some(&p("YX"))),
            Outcome::LogicalPaired
        ));
    }

    #[test]
    fn bell_pairs_across_cut() {
        let region = BitSet::from_indices(4, [0, 1]);
        let gens = [p("XIXI"), p("ZIZI"), p("IZII")];
        let nf = complete(normal_form(&region, &gens, None));
        check_shapes(&nf, &region);
        let pairs = nf
            .stabilizers
            .iter()
            .filter(|(_, s)| matches!(s, Shape::PairX(..) | Shape::PairZ(..)))
            .count();
        assert_eq!(pairs, 2);
        assert_eq!(nf.cross(), None);
    }

    #[test]
    fn lone_logical() {
        let full = BitSet::full(1);
        let nf = complete(normal_form(&full, &[], Some(&p("X"))));
        assert_eq!(nf.logical.as_ref().unwrap().1, 0);
        let nf = complete(normal_form(&BitSet::empty(1), &[], Some(&p("X"))));
        assert_eq!(nf.logical.unwrap().1, 0);
    }
}
