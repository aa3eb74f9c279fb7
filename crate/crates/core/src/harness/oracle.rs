//! Randomized cross-check of the three classification algorithms against the dense
//! statevector reference, with the reducibility trichotomy, complementarity and
//! extraction witnesses verified on the same states.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ensemble::par_map;
use crate::circuits::{brickwork_layer, Boundary, CircuitSpec, Ensemble};
use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::magic_gauge::dense::{dense_oracle_sre2, t_fidelity, DenseState};
use crate::magic_gauge::{
    compute_bmg_alg3, extraction_witness, logical_reducibility, subsystem_magic_alg1, subsystem_magic_alg2, CaseId,
    MagicClass,
};
use crate::pauli_gf2::BitSet;
use crate::tableau::{sample_clifford_1q, StabilizerState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub l_min: usize,
    pub l_max: usize,
    pub circuits_per_l: usize,
    /// Non-contiguous regions per state, on top of every interval.
    pub random_regions: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            l_min: 2,
            l_max: 8,
            circuits_per_l: 40,
            random_regions: 20,
            seed: 0,
            tol: 1e-9,
        }
    }
}

/// One `(state, region)` comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub l: usize,
    pub state: usize,
    pub region: Vec<usize>,
    pub class_alg1: MagicClass,
    pub class_alg2: MagicClass,
    pub class_alg3: MagicClass,
    pub oracle_value: f64,
    pub case_id: CaseId,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Description of one random instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub l: usize,
    pub ensemble: Ensemble,
    pub boundary: Boundary,
    pub p: f64,
    pub depth_before: usize,
    pub depth_after: usize,
    pub site: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub states: usize,
    /// Draws discarded because the T gate acted trivially.
    pub rejected_injections: usize,
    pub regions: usize,
    pub mismatches: usize,
    /// Oracle values not within tolerance of an allowed class value.
    pub value_violations: usize,
    pub trichotomy_violations: usize,
    pub complementarity_violations: usize,
    /// Tableau and independently evolved statevector disagree.
    pub state_mismatches: usize,
    pub witnesses: usize,
    pub witness_failures: usize,
    pub min_witness_fidelity: Option<f64>,
    #[serde(skip)]
    pub records: Vec<RegionRecord>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
            && self.value_violations == 0
            && self.trichotomy_violations == 0
            && self.complementarity_violations == 0
            && self.state_mismatches == 0
            && self.witness_failures == 0
    }

    fn merge(&mut self, o: OracleReport) {
        self.states += o.states;
        self.rejected_injections += o.rejected_injections;
        self.regions += o.regions;
        self.mismatches += o.mismatches;
        self.value_violations += o.value_violations;
        self.trichotomy_violations += o.trichotomy_violations;
        self.complementarity_violations += o.complementarity_violations;
        self.state_mismatches += o.state_mismatches;
        self.witnesses += o.witnesses;
        self.witness_failures += o.witness_failures;
        self.min_witness_fidelity = match (self.min_witness_fidelity, o.min_witness_fidelity) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.records.extend(o.records);
    }
}

fn apply_layer_both(spec: &CircuitSpec, t: usize, rng: &mut ChaCha8Rng, state: &mut StabilizerState, dense: &mut DenseState) -> Result<()> {
    for (g, pair) in brickwork_layer(spec, t, rng) {
        if !g.is_identity() {
            state.apply_gate(&g, &pair)?;
            dense.apply_gate(&g, &pair)?;
        }
    }
    Ok(())
}

/// Random doped circuit on a random product state, T at a random site, more random
/// layers. The statevector follows the same gates through their unitaries and a
/// literal T. Returns `Ok(None)` when the T gate acts trivially.
pub fn random_instance(l: usize, rng: &mut ChaCha8Rng) -> Result<Option<(Instance, CodeState, DenseState)>> {
    let mut spec = CircuitSpec::new(l);
    spec.ensemble = *Ensemble::ALL.choose(rng).unwrap();
    spec.boundary = *Boundary::ALL.choose(rng).unwrap();
    spec.p = rng.random_range(0.0..0.5);
    let depth_before = rng.random_range(0..=3 * l);
    let depth_after = rng.random_range(0..=3 * l);
    let mut state = StabilizerState::zero(l);
    let mut dense = DenseState::zero(l)?;
    for q in 0..l {
        let g = sample_clifford_1q(rng);
        state.apply_gate(g, &[q])?;
        dense.apply_gate(g, &[q])?;
    }
    for t in 1..=depth_before {
        apply_layer_both(&spec, t, rng, &mut state, &mut dense)?;
    }
    let site = rng.random_range(0..l);
    let mut cs = match CodeState::inject_t(&state, site) {
        Ok(cs) => cs,
        Err(Error::NoMagicInjected { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    dense.apply_t(site);
    for t in depth_before + 1..=depth_before + depth_after {
        for (g, pair) in brickwork_layer(&spec, t, rng) {
            if !g.is_identity() {
                cs.apply_clifford(&g, &pair)?;
                dense.apply_gate(&g, &pair)?;
            }
        }
    }
    let inst = Instance {
        l,
        ensemble: spec.ensemble,
        boundary: spec.boundary,
        p: spec.p,
        depth_before,
        depth_after,
        site,
    };
    Ok(Some((inst, cs, dense)))
}

fn is_interval(mask: u32) -> bool {
    let shifted = mask >> mask.trailing_zeros();
    shifted & (shifted + 1) == 0
}

/// Every nonempty interval of `0..l`, then up to `extra` distinct non-contiguous
/// subsets (all of them when fewer exist).
pub fn test_regions(l: usize, extra: usize, rng: &mut ChaCha8Rng) -> Vec<BitSet> {
    let mut out: Vec<BitSet> = (0..l)
        .flat_map(|s| (s..l).map(move |e| BitSet::from_indices(l, s..=e)))
        .collect();
    let mut others: Vec<u32> = (1u32..1 << l).filter(|&m| !is_interval(m)).collect();
    others.shuffle(rng);
    out.extend(
        others
            .into_iter()
            .take(extra)
            .map(|m| BitSet::from_indices(l, (0..l).filter(|&q| m >> q & 1 == 1))),
    );
    out
}

fn check_state(l: usize, index: usize, cs: &CodeState, dense: &DenseState, regions: &[BitSet], tol: f64) -> Result<OracleReport> {
    let mut rep = OracleReport {
        states: 1,
        ..Default::default()
    };
    let reference = DenseState::from_code_state(cs)?;
    if (reference.inner(dense).norm_sqr() - 1.0).abs() > tol {
        rep.state_mismatches += 1;
    }
    for region in regions {
        let a1 = subsystem_magic_alg1(cs, region);
        let a2 = subsystem_magic_alg2(cs, region);
        let a3 = compute_bmg_alg3(cs, region).spectrum().class();
        let value = dense_oracle_sre2(dense, region)?;
        if MagicClass::from_value(value, tol).is_none() {
            rep.value_violations += 1;
        }
        let matched = a1 == a2 && a2 == a3 && (value - a1.value()).abs() <= tol;
        rep.mismatches += !matched as usize;

        let red = logical_reducibility(cs, region);
        if red.trichotomy().is_none() {
            rep.trichotomy_violations += 1;
        }
        let complement = region.complement();
        let case = red.case_id();
        let case_b = logical_reducibility(cs, &complement).case_id();
        let full_a = a1 == MagicClass::Full;
        let zero_b_ii = subsystem_magic_alg1(cs, &complement) == MagicClass::Zero && case_b == CaseId::Ii;
        if case_b != case.swapped() || full_a != zero_b_ii {
            rep.complementarity_violations += 1;
        }

        if a1 == MagicClass::Full && is_contiguous(region) {
            rep.witnesses += 1;
            let f = witness_fidelity(cs, dense, region)?;
            if (f - 1.0).abs() > tol {
                rep.witness_failures += 1;
            }
            rep.min_witness_fidelity = Some(rep.min_witness_fidelity.map_or(f, |m: f64| m.min(f)));
        }
        rep.regions += 1;
        rep.records.push(RegionRecord {
            l,
            state: index,
            region: region.iter().collect(),
            class_alg1: a1,
            class_alg2: a2,
            class_alg3: a3,
            oracle_value: value,
            case_id: case,
            matched,
        });
    }
    Ok(rep)
}

fn is_contiguous(region: &BitSet) -> bool {
    let idx: Vec<usize> = region.iter().collect();
    idx.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Fidelity of the witnessed state with `|T⟩ ⊗ (stabilizer state)`, computed on the
/// statevector `dense` of `cs`. A witness acting outside `region` scores 0.
pub fn witness_fidelity(cs: &CodeState, dense: &DenseState, region: &BitSet) -> Result<f64> {
    let w = extraction_witness(cs, region)?;
    if !w.circuit.support().is_subset(region) || !region.contains(w.target) {
        return Ok(0.0);
    }
    let mut after = cs.clone();
    after.apply_circuit(&w.circuit)?;
    let mut moved = dense.clone();
    moved.apply_circuit(&w.circuit)?;
    t_fidelity(&moved, w.target, after.stabilizers())
}

/// Runs the sweep over `l_min..=l_max`, `circuits_per_l` accepted states each.
pub fn oracle_check(cfg: &OracleConfig, workers: usize) -> Result<OracleReport> {
    if cfg.l_min < 2 || cfg.l_max > 8 || cfg.l_min > cfg.l_max {
        return Err(Error::Config(format!(
            "oracle sizes {}..={} must lie within 2..=8",
            cfg.l_min, cfg.l_max
        )));
    }
    let jobs: Vec<(usize, usize)> = (cfg.l_min..=cfg.l_max)
        .flat_map(|l| (0..cfg.circuits_per_l).map(move |i| (l, i)))
        .collect();
    let parts = par_map(jobs.len() as u64, workers, |j| {
        let (l, i) = jobs[j as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((l as u64) << 32) | i as u64);
        let mut rejected = 0;
        let (_, cs, dense) = loop {
            match random_instance(l, &mut rng)? {
                Some(x) => break x,
                None => rejected += 1,
            }
        };
        let regions = test_regions(l, cfg.random_regions, &mut rng);
        let mut rep = check_state(l, i, &cs, &dense, &regions, cfg.tol)?;
        rep.rejected_injections = rejected;
        Ok(rep)
    })?;
    let mut total = OracleReport::default();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_masks() {
        assert!(is_interval(0b1));
        assert!(is_interval(0b1110));
        assert!(!is_interval(0b101));
        assert!(!is_interval(0b1001));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(test_regions(2, 20, &mut rng).len(), 3);
        assert_eq!(test_regions(3, 20, &mut rng).len(), 7);
        assert_eq!(test_regions(6, 20, &mut rng).len(), 21 + 20);
    }

    #[test]
    fn small_sweep_passes() {
        let cfg = OracleConfig {
            l_max: 5,
            circuits_per_l: 6,
            ..Default::default()
        };
        let rep = oracle_check(&cfg, 1).unwrap();
        assert_eq!(rep.states, 4 * 6);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.records.len(), rep.regions);
        assert!(rep.witnesses > 0);
        assert_eq!(oracle_check(&cfg, 2).unwrap(), rep);
    }

    #[test]
    fn rejects_out_of_range_sizes() {
        let cfg = OracleConfig {
            l_max: 9,
            ..Default::default()
        };
        assert!(matches!(oracle_check(&cfg, 1), Err(Error::Config(_))));
    }
}
