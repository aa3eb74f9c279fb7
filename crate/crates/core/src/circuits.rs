//! Identity-doped brickwork ensembles, initial states, analytic velocities and
//! per-realization evolution of a T-doped state.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::harness::config::KvConfig;
use crate::lengthscales::{fleom, lml, minimal_intervals, Geometry, Interval};
use crate::magic_gauge::{compute_bmg_alg3, MagicClass};
use crate::pauli_gf2::{BitSet, Pauli, PauliString};
use crate::tableau::{sample_clifford_1q, sample_clifford_2q, CliffordGate, StabilizerState};

macro_rules! named_enum {
    ($name:ident { $($variant:ident => $label:literal $(| $alias:literal)*),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn label(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($label $(| $alias)* => Ok($name::$variant),)+
                    other => Err(Error::Parse(format!(
                        concat!("unknown ", stringify!($name), " `{}`"),
                        other
                    ))),
                }
            }
        }
    };
}

named_enum!(Boundary {
    Open => "open" | "obc",
    Periodic => "periodic" | "pbc",
});

named_enum!(Ensemble {
    RandomClifford => "random_clifford" | "random",
    SdkiR => "sdki_r",
    SdkiF => "sdki_f",
});

named_enum!(InitialKind {
    BellPairs => "bell_pairs" | "bell",
    RandomProduct => "random_product",
    AllZero => "all_zero",
});

/// Parameters of one circuit ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub l: usize,
    pub boundary: Boundary,
    pub ensemble: Ensemble,
    /// Probability that a brickwork slot is the identity.
    pub p: f64,
    pub t_max: usize,
    pub seed: u64,
    pub initial: InitialKind,
    /// 0-based qubit receiving the T gate.
    pub injection_site: usize,
    /// Interval family for MLMIs and the LML.
    pub geometry: Geometry,
}

impl CircuitSpec {
    pub const KEYS: &'static [&'static str] =
        &["L", "boundary", "ensemble", "p", "t_max", "seed", "initial", "injection_site", "interval_geometry"];

    /// Open boundaries, undoped random Cliffords, Bell pairs, `t_max = L`, T on the
    /// qubit left of the central bond.
    pub fn new(l: usize) -> Self {
        CircuitSpec {
            l,
            boundary: Boundary::Open,
            ensemble: Ensemble::RandomClifford,
            p: 0.0,
            t_max: l,
            seed: 0,
            initial: InitialKind::BellPairs,
            injection_site: Self::default_site(l),
            geometry: Geometry::Line,
        }
    }

    pub fn default_site(l: usize) -> usize {
        (l / 2).saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 {
            return Err(Error::Config(format!("L = {} but at least 2 qubits are needed", self.l)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!("p = {} outside [0, 1]", self.p)));
        }
        if self.injection_site >= self.l {
            return Err(Error::Config(format!(
                "injection_site = {} outside 0..{}",
                self.injection_site, self.l
            )));
        }
        if self.initial == InitialKind::BellPairs && self.l % 2 == 1 {
            return Err(Error::Config("bell_pairs needs an even L".into()));
        }
        Ok(())
    }

    /// Set when the injected qubit's Bell partner does not sit across the central bond.
    pub fn scenario_warning(&self) -> Option<String> {
        (self.l % 4 != 2).then(|| format!("L = {} is not 2 mod 4; the central bond splits no Bell pair", self.l))
    }

    pub fn from_config(cfg: &KvConfig) -> Result<Self> {
        let l: usize = cfg.require("L")?;
        let mut spec = CircuitSpec::new(l);
        spec.boundary = cfg.get_or("boundary", spec.boundary)?;
        spec.ensemble = cfg.get_or("ensemble", spec.ensemble)?;
        spec.p = cfg.get_or("p", spec.p)?;
        spec.t_max = cfg.get_or("t_max", spec.t_max)?;
        spec.seed = cfg.get_or("seed", spec.seed)?;
        spec.initial = cfg.get_or("initial", spec.initial)?;
        spec.injection_site = cfg.get_or("injection_site", spec.injection_site)?;
        spec.geometry = cfg.get_or("interval_geometry", spec.geometry)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn write_config(&self, cfg: &mut KvConfig) {
        cfg.set("L", self.l);
        cfg.set("boundary", self.boundary);
        cfg.set("ensemble", self.ensemble);
        cfg.set("p", self.p);
        cfg.set("t_max", self.t_max);
        cfg.set("seed", self.seed);
        cfg.set("initial", self.initial);
        cfg.set("injection_site", self.injection_site);
        cfg.set("interval_geometry", self.geometry);
    }
}

/// Independent random streams of one realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    /// Initial state and the evolving circuit.
    Main = 0,
    /// The operator-spreading circuit `U` of the interplay setup.
    Operator = 1,
    /// The state-preparation circuit `V` of the interplay setup.
    State = 2,
    /// Erasure sampling.
    Sampling = 3,
}

/// Generator keyed by `(seed, realization, stream, layer)`. Layer 0 is reserved for
/// initial-state randomness.
pub fn layer_rng(seed: u64, realization: u64, stream: Stream, layer: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((realization << 2) | stream as u64);
    rng.set_word_pos(u128::from(layer) << 40);
    rng
}

fn sdki_f_gate() -> &'static CliffordGate {
    static GATE: OnceLock<CliffordGate> = OnceLock::new();
    GATE.get_or_init(CliffordGate::sdki_f)
}

/// One non-identity gate of the ensemble.
pub fn sample_gate<R: Rng + ?Sized>(ensemble: Ensemble, rng: &mut R) -> CliffordGate {
    match ensemble {
        Ensemble::RandomClifford => *sample_clifford_2q(rng),
        Ensemble::SdkiF => *sdki_f_gate(),
        Ensemble::SdkiR => {
            let v1 = *sample_clifford_1q(rng);
            let v2 = *sample_clifford_1q(rng);
            let kicks = v1.tensor(&v2).expect("one-qubit gates");
            sdki_f_gate().then(&kicks).expect("two-qubit gates")
        }
    }
}

/// Slots of layer `t ≥ 1`: odd layers pair `(1,2), (3,4), …` plus the wrap pair
/// `(L−1, 0)` under periodic boundaries; even layers pair `(0,1), (2,3), …`.
pub fn layer_pairs(l: usize, boundary: Boundary, t: usize) -> Vec<[usize; 2]> {
    let start = t % 2;
    let mut pairs: Vec<[usize; 2]> = (start..l.saturating_sub(1)).step_by(2).map(|a| [a, a + 1]).collect();
    if boundary == Boundary::Periodic && start == 1 && l % 2 == 0 {
        pairs.push([l - 1, 0]);
    }
    pairs
}

/// Gates of layer `t`, identity slots included.
pub fn brickwork_layer<R: Rng + ?Sized>(spec: &CircuitSpec, t: usize, rng: &mut R) -> Vec<(CliffordGate, [usize; 2])> {
    assert!(t >= 1, "layers are numbered from 1");
    layer_pairs(spec.l, spec.boundary, t)
        .into_iter()
        .map(|pair| {
            let gate = if rng.random_bool(spec.p) {
                CliffordGate::identity2()
            } else {
                sample_gate(spec.ensemble, rng)
            };
            (gate, pair)
        })
        .collect()
}

/// Layer `t` of realization `realization` drawn from `stream`.
pub fn realization_layer(spec: &CircuitSpec, realization: u64, stream: Stream, t: usize) -> Vec<(CliffordGate, [usize; 2])> {
    let mut rng = layer_rng(spec.seed, realization, stream, t as u64);
    brickwork_layer(spec, t, &mut rng)
}

/// Anything two-qubit Clifford gates can act on.
pub trait Evolvable {
    fn apply_pair(&mut self, gate: &CliffordGate, pair: [usize; 2]);

    fn apply_layer(&mut self, layer: &[(CliffordGate, [usize; 2])]) {
        for (g, pair) in layer {
            if !g.is_identity() {
                self.apply_pair(g, *pair);
            }
        }
    }
}

impl Evolvable for CodeState {
    fn apply_pair(&mut self, gate: &CliffordGate, pair: [usize; 2]) {
        self.apply_clifford(gate, &pair).expect("layer sites are valid");
    }
}

impl Evolvable for StabilizerState {
    fn apply_pair(&mut self, gate: &CliffordGate, pair: [usize; 2]) {
        self.apply_gate(gate, &pair).expect("layer sites are valid");
    }
}

impl Evolvable for PauliString {
    fn apply_pair(&mut self, gate: &CliffordGate, pair: [usize; 2]) {
        gate.conjugate(self, &pair);
    }
}

/// `α₊`: probability that a random-Clifford slot moves an operator endpoint inward.
pub fn alpha_plus(p: f64) -> f64 {
    p + (1.0 - p) / 5.0
}

/// `α₋`: probability that a random-Clifford slot moves an operator endpoint outward.
pub fn alpha_minus(p: f64) -> f64 {
    p + 4.0 * (1.0 - p) / 5.0
}

/// Butterfly velocity in qubits per layer.
///
/// # Errors
/// [`Error::Domain`] for `p ∉ [0, 1]`, and for doped `sdki_f`, which has no closed form.
pub fn v_butterfly(p: f64, ensemble: Ensemble) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    match ensemble {
        Ensemble::RandomClifford => {
            let (a, b) = (alpha_plus(p), alpha_minus(p));
            Ok((b - a) / (b + a))
        }
        Ensemble::SdkiR if p >= 1.0 => Ok(0.0),
        Ensemble::SdkiR => Ok(1.0 / (1.0 + 8.0 / 3.0 * p / (1.0 - p))),
        Ensemble::SdkiF if p == 0.0 => Ok(1.0),
        Ensemble::SdkiF => Err(Error::Domain("no closed-form butterfly velocity for doped sdki_f".into())),
    }
}

/// Entanglement velocity implied by a butterfly velocity `v_b ∈ [0, 1]`.
pub fn v_entanglement(v_b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v_b) {
        return Err(Error::Domain(format!("v_b = {v_b} outside [0, 1]")));
    }
    if v_b == 0.0 || v_b == 1.0 {
        return Ok(v_b);
    }
    let (lm, lp) = ((-v_b).ln_1p(), v_b.ln_1p());
    Ok((lm + lp) / (lm - lp))
}

/// The initial product or Bell-pair state.
pub fn initial_state<R: Rng + ?Sized>(kind: InitialKind, l: usize, rng: &mut R) -> Result<StabilizerState> {
    let gens = match kind {
        InitialKind::AllZero => (0..l).map(|q| PauliString::single(l, q, Pauli::Z)).collect(),
        InitialKind::BellPairs => {
            if l % 2 == 1 {
                return Err(Error::Config("bell_pairs needs an even L".into()));
            }
            (0..l / 2)
                .flat_map(|i| {
                    [Pauli::X, Pauli::Z].map(|p| PauliString::from_sparse(l, &[(2 * i, p), (2 * i + 1, p)]))
                })
                .collect()
        }
        InitialKind::RandomProduct => (0..l)
            .map(|q| {
                let p = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
                let mut g = PauliString::single(l, q, p);
                if rng.random_bool(0.5) {
                    g.negate();
                }
                g
            })
            .collect(),
    };
    StabilizerState::new(l, gens)
}

/// Initial state of a realization with T injected at `injection_site`.
pub fn prepare(spec: &CircuitSpec, realization: u64) -> Result<CodeState> {
    let mut rng = layer_rng(spec.seed, realization, Stream::Main, 0);
    let psi0 = initial_state(spec.initial, spec.l, &mut rng)?;
    CodeState::inject_t(&psi0, spec.injection_site)
}

/// Which per-layer quantities to record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Observables {
    pub lml: bool,
    pub mlmi: bool,
    pub intervals: bool,
    pub full_class: bool,
    pub logicals: bool,
}

impl Observables {
    pub fn lengths() -> Self {
        Observables {
            lml: true,
            mlmi: true,
            intervals: false,
            full_class: false,
            logicals: false,
        }
    }

    pub fn all() -> Self {
        Observables {
            lml: true,
            mlmi: true,
            intervals: true,
            full_class: true,
            logicals: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalSnapshot {
    pub z: String,
    pub y: String,
    pub stabilizers: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lml: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fleom: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub mlmi_widths: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub intervals: Vec<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_state_class: Option<MagicClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub logicals: Option<LogicalSnapshot>,
}

/// Measures the selected observables on `cs` at time `t`.
pub fn observe(cs: &CodeState, geometry: Geometry, t: usize, obs: Observables) -> Result<TimeSeriesRecord> {
    let mut rec = TimeSeriesRecord {
        t,
        lml: None,
        fleom: None,
        mlmi_widths: Vec::new(),
        intervals: Vec::new(),
        full_state_class: None,
        logicals: None,
    };
    if obs.lml {
        rec.lml = Some(lml(cs, geometry));
    }
    if obs.mlmi || obs.intervals {
        let m = minimal_intervals(cs, geometry)?;
        rec.fleom = Some(fleom(&m)?);
        rec.mlmi_widths = m.widths();
        if obs.intervals {
            rec.intervals = m.intervals;
        }
    }
    if obs.full_class {
        let full = BitSet::full(cs.n_qubits());
        rec.full_state_class = Some(compute_bmg_alg3(cs, &full).spectrum().class());
    }
    if obs.logicals {
        rec.logicals = Some(LogicalSnapshot {
            z: cs.logical_z().to_string(),
            y: cs.logical_y().to_string(),
            stabilizers: cs.stabilizers().iter().map(ToString::to_string).collect(),
        });
    }
    Ok(rec)
}

/// Time series of one realization. A realization whose T gate injects no magic is
/// kept with `rejected` set and no records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub index: u64,
    pub rejected: bool,
    pub records: Vec<TimeSeriesRecord>,
}

/// Evolves realization `index` for `spec.t_max` layers, recording `t = 0, …, t_max`.
pub fn run_realization(spec: &CircuitSpec, obs: Observables, index: u64) -> Result<Realization> {
    let mut cs = match prepare(spec, index) {
        Ok(cs) => cs,
        Err(Error::NoMagicInjected { .. }) => {
            return Ok(Realization {
                index,
                rejected: true,
                records: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut records = Vec::with_capacity(spec.t_max + 1);
    records.push(observe(&cs, spec.geometry, 0, obs)?);
    for t in 1..=spec.t_max {
        cs.apply_layer(&realization_layer(spec, index, Stream::Main, t));
        records.push(observe(&cs, spec.geometry, t, obs)?);
    }
    Ok(Realization {
        index,
        rejected: false,
        records,
    })
}

/// Evolves realization `index` for `t` layers without recording anything.
pub fn evolve(spec: &CircuitSpec, index: u64, t: usize) -> Result<CodeState> {
    let mut cs = prepare(spec, index)?;
    for layer in 1..=t {
        cs.apply_layer(&realization_layer(spec, index, Stream::Main, layer));
    }
    Ok(cs)
}

/// Leftmost and rightmost qubit in the support of `Z_site` evolved by the realization's
/// circuit, for `t = 0, …, t_max`.
pub fn operator_front(spec: &CircuitSpec, index: u64) -> Vec<(usize, usize)> {
    let mut op = PauliString::single(spec.l, spec.injection_site, Pauli::Z);
    let extent = |op: &PauliString| {
        let s = op.support();
        (s.first().unwrap(), s.iter().last().unwrap())
    };
    let mut out = vec![extent(&op)];
    for t in 1..=spec.t_max {
        op.apply_layer(&realization_layer(spec, index, Stream::Main, t));
        out.push(extent(&op));
    }
    out
}

/// The four circuit pairings of the interplay setup `(U_t T U_t†) V_t |ψ₀⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterplayCase {
    /// `U = 1`: only entanglement spreads the magic.
    I,
    /// `V = 1`: only the operator spreads.
    Ii,
    /// Independent `U` and `V`.
    Iii,
    /// `U = V`, ordinary evolution of `T|ψ₀⟩`.
    Iv,
}

impl InterplayCase {
    pub const ALL: [InterplayCase; 4] = [InterplayCase::I, InterplayCase::Ii, InterplayCase::Iii, InterplayCase::Iv];
}

impl fmt::Display for InterplayCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterplayCase::I => "i",
            InterplayCase::Ii => "ii",
            InterplayCase::Iii => "iii",
            InterplayCase::Iv => "iv",
        })
    }
}

impl FromStr for InterplayCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "i" | "1" => Ok(InterplayCase::I),
            "ii" | "2" => Ok(InterplayCase::Ii),
            "iii" | "3" => Ok(InterplayCase::Iii),
            "iv" | "4" => Ok(InterplayCase::Iv),
            other => Err(Error::Parse(format!("unknown interplay case `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterplayRecord {
    pub t: usize,
    /// The rotated T gate commutes with the state at this `t`.
    pub rejected: bool,
    pub fleom: Option<usize>,
    pub mlmi_widths: Vec<usize>,
}

/// Runs one interplay realization at equal depths `t = τ = 0, …, t_max`.
pub fn run_interplay(spec: &CircuitSpec, case: InterplayCase, index: u64) -> Result<Vec<InterplayRecord>> {
    let mut rng = layer_rng(spec.seed, index, Stream::Main, 0);
    let mut state = initial_state(spec.initial, spec.l, &mut rng)?;
    let mut z_tilde = PauliString::single(spec.l, spec.injection_site, Pauli::Z);
    let v_stream = if case == InterplayCase::Iv { Stream::Operator } else { Stream::State };
    let mut out = Vec::with_capacity(spec.t_max + 1);
    for t in 0..=spec.t_max {
        if t > 0 {
            if case != InterplayCase::I {
                z_tilde.apply_layer(&realization_layer(spec, index, Stream::Operator, t));
            }
            if case != InterplayCase::Ii {
                state.apply_layer(&realization_layer(spec, index, v_stream, t));
            }
        }
        let rec = match CodeState::inject_rotated(&state, z_tilde.clone(), spec.injection_site) {
            Ok(cs) => {
                let m = minimal_intervals(&cs, spec.geometry)?;
                InterplayRecord {
                    t,
                    rejected: false,
                    fleom: Some(fleom(&m)?),
                    mlmi_widths: m.widths(),
                }
            }
            Err(Error::NoMagicInjected { .. }) => InterplayRecord {
                t,
                rejected: true,
                fleom: None,
                mlmi_widths: Vec::new(),
            },
            Err(e) => return Err(e),
        };
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn enum_labels_round_trip() {
        for b in Boundary::ALL {
            assert_eq!(b.label().parse::<Boundary>().unwrap(), *b);
        }
        for e in Ensemble::ALL {
            assert_eq!(e.to_string().parse::<Ensemble>().unwrap(), *e);
        }
        for k in InitialKind::ALL {
            assert_eq!(k.to_string().parse::<InitialKind>().unwrap(), *k);
        }
        assert_eq!("PBC".parse::<Boundary>().unwrap(), Boundary::Periodic);
        assert!("twisted".parse::<Boundary>().is_err());
        for c in InterplayCase::ALL {
            assert_eq!(c.to_string().parse::<InterplayCase>().unwrap(), c);
        }
    }

    #[test]
    fn spec_config_round_trip() {
        let mut spec = CircuitSpec::new(30);
        spec.boundary = Boundary::Periodic;
        spec.ensemble = Ensemble::SdkiR;
        spec.p = 0.3;
        spec.seed = 99;
        spec.geometry = Geometry::Ring;
        let mut cfg = KvConfig::new();
        spec.write_config(&mut cfg);
        assert_eq!(CircuitSpec::from_config(&cfg).unwrap(), spec);
        assert_eq!(spec.injection_site, 14);
        assert!(spec.scenario_warning().is_none());
        assert!(CircuitSpec::new(64).scenario_warning().is_some());

        cfg.set("p", 1.5);
        assert!(matches!(CircuitSpec::from_config(&cfg), Err(Error::Config(_))));
        cfg.set("p", 0.3);
        cfg.set("L", 7);
        cfg.set("injection_site", 3);
        assert!(CircuitSpec::from_config(&cfg).is_err());
    }

    #[test]
    fn layer_structure() {
        assert_eq!(layer_pairs(6, Boundary::Open, 1), [[1, 2], [3, 4]]);
        assert_eq!(layer_pairs(6, Boundary::Periodic, 1), [[1, 2], [3, 4], [5, 0]]);
        assert_eq!(layer_pairs(6, Boundary::Periodic, 2), [[0, 1], [2, 3], [4, 5]]);
        for l in 2..12 {
            for b in Boundary::ALL {
                for t in 1..3 {
                    let pairs = layer_pairs(l, *b, t);
                    let mut seen = BitSet::empty(l);
                    for [a, c] in pairs {
                        assert!(!seen.contains(a) && !seen.contains(c));
                        seen.insert(a);
                        seen.insert(c);
                        if *b == Boundary::Open {
                            assert_eq!(c, a + 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn doping_extremes() {
        let mut spec = CircuitSpec::new(10);
        spec.p = 1.0;
        let mut rng = layer_rng(0, 0, Stream::Main, 1);
        assert!(brickwork_layer(&spec, 1, &mut rng).iter().all(|(g, _)| g.is_identity()));
        spec.p = 0.0;
        spec.ensemble = Ensemble::SdkiF;
        assert!(brickwork_layer(&spec, 2, &mut rng).iter().all(|(g, _)| *g == CliffordGate::sdki_f()));
    }

    #[test]
    fn sdki_f_gate_table() {
        let g = CliffordGate::sdki_f();
        let mut op = p("ZI");
        g.conjugate(&mut op, &[0, 1]);
        assert_eq!(op, p("XZ"));
    }

    #[test]
    fn sdki_r_gates_are_kicked_sdki_f() {
        let mut rng = layer_rng(3, 0, Stream::Main, 1);
        for _ in 0..20 {
            let g = sample_gate(Ensemble::SdkiR, &mut rng);
            let inner = CliffordGate::sdki_f();
            let mut op = p("ZI");
            inner.conjugate(&mut op, &[0, 1]);
            let mut op2 = p("ZI");
            g.conjugate(&mut op2, &[0, 1]);
            assert_eq!(op.support(), op2.support());
        }
    }

    #[test]
    fn velocity_formulas() {
        assert!((v_butterfly(0.0, Ensemble::RandomClifford).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(v_butterfly(1.0, Ensemble::RandomClifford).unwrap(), 0.0);
        assert_eq!(v_butterfly(0.0, Ensemble::SdkiR).unwrap(), 1.0);
        assert_eq!(v_butterfly(1.0, Ensemble::SdkiR).unwrap(), 0.0);
        assert!((v_butterfly(0.3, Ensemble::SdkiR).unwrap() - 1.0 / (1.0 + 8.0 / 7.0)).abs() < 1e-15);
        assert!(v_butterfly(0.3, Ensemble::SdkiF).is_err());
        assert!(v_butterfly(-0.1, Ensemble::RandomClifford).is_err());
        assert!((alpha_plus(0.0) - 0.2).abs() < 1e-15 && (alpha_minus(0.0) - 0.8).abs() < 1e-15);

        let ve = v_entanglement(0.6).unwrap();
        let direct = ((0.4f64).ln() + (1.6f64).ln()) / ((0.4f64).ln() - (1.6f64).ln());
        assert!((ve - direct).abs() < 1e-14 && (ve - 0.32193).abs() < 1e-5);
        assert_eq!(v_entanglement(0.0).unwrap(), 0.0);
        assert!((v_entanglement(1e-6).unwrap() - 5e-7).abs() < 1e-12);
        assert!(v_entanglement(1.0 - 1e-12).unwrap() > 0.9);
        assert!(v_entanglement(1.2).is_err());
        let mut last = 0.0;
        for k in 1..100 {
            let v = v_entanglement(k as f64 / 100.0).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn initial_states() {
        let mut rng = layer_rng(0, 0, Stream::Main, 0);
        let bell = initial_state(InitialKind::BellPairs, 4, &mut rng).unwrap();
        let want: Vec<PauliString> = ["XXII", "ZZII", "IIXX", "IIZZ"].iter().map(|s| p(s)).collect();
        assert_eq!(bell.generators(), &want[..]);
        assert!(initial_state(InitialKind::BellPairs, 5, &mut rng).is_err());
        let zero = initial_state(InitialKind::AllZero, 3, &mut rng).unwrap();
        assert_eq!(zero.generators(), &[p("ZII"), p("IZI"), p("IIZ")]);
        let prod = initial_state(InitialKind::RandomProduct, 8, &mut rng).unwrap();
        for s in 0..8 {
            assert_eq!(prod.entropy(&BitSet::arc(8, s, 3)), 0);
        }
    }

    #[test]
    fn deterministic_realizations() {
        let mut spec = CircuitSpec::new(10);
        spec.p = 0.3;
        spec.t_max = 6;
        spec.seed = 5;
        let a = run_realization(&spec, Observables::all(), 3).unwrap();
        let b = run_realization(&spec, Observables::all(), 3).unwrap();
        assert_eq!(a, b);
        let c = run_realization(&spec, Observables::all(), 4).unwrap();
        assert_ne!(a, c);
        assert!(a.records.iter().all(|r| r.full_state_class == Some(MagicClass::Full)));
    }

    #[test]
    fn frozen_dynamics() {
        let mut spec = CircuitSpec::new(10);
        spec.p = 1.0;
        spec.t_max = 5;
        let r = run_realization(&spec, Observables::lengths(), 0).unwrap();
        assert!(r.records.iter().all(|x| x.lml == Some(2) && x.fleom == Some(2)));
    }

    #[test]
    fn rejected_injection_is_flagged() {
        let mut spec = CircuitSpec::new(6);
        spec.initial = InitialKind::AllZero;
        let r = run_realization(&spec, Observables::lengths(), 0).unwrap();
        assert!(r.rejected && r.records.is_empty());
    }

    #[test]
    fn interplay_equal_circuits_match_plain_evolution() {
        let mut spec = CircuitSpec::new(10);
        spec.initial = InitialKind::RandomProduct;
        spec.t_max = 6;
        spec.seed = 17;
        for idx in 0..6 {
            let inter = run_interplay(&spec, InterplayCase::Iv, idx).unwrap();
            assert_eq!(inter.len(), 7);
            let mut rng = layer_rng(spec.seed, idx, Stream::Main, 0);
            let mut state = initial_state(spec.initial, spec.l, &mut rng).unwrap();
            let Ok(mut cs) = CodeState::inject_t(&state, spec.injection_site) else {
                assert!(inter.iter().all(|r| r.rejected));
                continue;
            };
            for rec in &inter {
                if rec.t > 0 {
                    let layer = realization_layer(&spec, idx, Stream::Operator, rec.t);
                    cs.apply_layer(&layer);
                    state.apply_layer(&layer);
                }
                let m = minimal_intervals(&cs, spec.geometry).unwrap();
                assert!(!rec.rejected);
                assert_eq!(rec.fleom, Some(fleom(&m).unwrap()));
            }
        }
    }

    #[test]
    fn interplay_trivial_u_keeps_site_local_operator() {
        let mut spec = CircuitSpec::new(8);
        spec.initial = InitialKind::RandomProduct;
        spec.t_max = 4;
        for idx in 0..4 {
            let recs = run_interplay(&spec, InterplayCase::Ii, idx).unwrap();
            let first = recs[0].rejected;
            // With V = 1 the state is a product state throughout; only U moves magic.
            if !first {
                assert_eq!(recs[0].fleom, Some(1));
            }
        }
    }

    #[test]
    fn operator_front_is_light_cone_bounded() {
        let mut spec = CircuitSpec::new(20);
        spec.injection_site = 9;
        spec.t_max = 8;
        let front = operator_front(&spec, 1);
        for (t, (lo, hi)) in front.iter().enumerate() {
            assert!(9 - lo <= t + 1 && hi - 9 <= t + 1);
        }
    }
}
