//! Explicit bipartite magic gauge: stabilizer generators split into those supported on
//! `A`, those supported on `B`, and cross generators reducible to neither side.

use super::normal_form::{normal_form, Outcome, Shape};
use super::{CaseId, LogicalReducibility, PauliSpectrumSummary, Reducibility};
use crate::codestate::CodeState;
use crate::pauli_gf2::{BitSet, PauliString, ProjectedSpan};
use crate::tableau::Circuit;

#[derive(Clone, Debug)]
pub struct BmgDecomposition {
    pub a_list: Vec<PauliString>,
    pub b_list: Vec<PauliString>,
    pub h_list: Vec<PauliString>,
    pub case_id: CaseId,
    pub reducibility: LogicalReducibility,
    region_size: usize,
    circuit: Circuit,
}

impl BmgDecomposition {
    pub fn n_a(&self) -> usize {
        self.a_list.len()
    }

    pub fn n_b(&self) -> usize {
        self.b_list.len()
    }

    pub fn m(&self) -> usize {
        self.h_list.len()
    }

    /// Local Clifford `C_A ⊗ C_B` bringing the stabilizers to normal form.
    pub fn local_clifford(&self) -> &Circuit {
        &self.circuit
    }

    /// Spectrum implied by the gauge: `2^{n_A}` regular entries.
    pub fn spectrum(&self) -> PauliSpectrumSummary {
        PauliSpectrumSummary {
            region_size: self.region_size,
            log2_regular: self.n_a(),
            omega: self.reducibility.omega(),
        }
    }
}

/// Builds the gauge for `region` and reads the logical reducibility off it.
///
/// # Panics
/// If `region` is over a different number of qubits.
pub fn compute_bmg_alg3(cs: &CodeState, region: &BitSet) -> BmgDecomposition {
    assert_eq!(region.universe(), cs.n_qubits(), "region universe mismatch");
    let Outcome::Complete(nf) = normal_form(region, cs.stabilizers(), None) else {
        unreachable!("no logical row to pair");
    };
    let (mut a_list, mut b_list, mut h_list) = (Vec::new(), Vec::new(), Vec::new());
    for (g, shape) in nf.stabilizers {
        match shape {
            Shape::Single(q) if region.contains(q) => a_list.push(g),
            Shape::Single(_) => b_list.push(g),
            Shape::PairX(..) | Shape::PairZ(..) | Shape::Cross(..) => h_list.push(g),
        }
    }
    let gauge: Vec<&PauliString> = a_list.iter().chain(&b_list).chain(&h_list).collect();
    let onto_b = ProjectedSpan::new(gauge.iter().copied(), &region.complement());
    let onto_a = ProjectedSpan::new(gauge.iter().copied(), region);
    let flags = |p: &PauliString| Reducibility {
        to_a: onto_b.contains(p),
        to_b: onto_a.contains(p),
    };
    let reducibility = LogicalReducibility {
        x: flags(cs.logical_x()),
        y: flags(&cs.logical_y()),
        z: flags(cs.logical_z()),
    };
    BmgDecomposition {
        a_list,
        b_list,
        h_list,
        case_id: reducibility.case_id(),
        reducibility,
        region_size: region.count(),
        circuit: nf.circuit,
    }
}
