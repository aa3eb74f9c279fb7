//! Per-step dumps of logical representatives for spacetime rendering.

use serde::{Deserialize, Serialize};

use crate::circuits::{prepare, realization_layer, CircuitSpec, Evolvable, Stream};
use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::lengthscales::{fleom, lml, minimal_intervals, Interval};
use crate::pauli_gf2::{reduce_support, PauliString};

/// `Z̄` and `Ȳ` multiplied by stabilizers onto one MLMI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRepresentative {
    pub interval: Interval,
    pub z: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalFrame {
    pub t: usize,
    pub z: String,
    pub y: String,
    pub stabilizers: Vec<String>,
    pub witnesses: Vec<WitnessRepresentative>,
    pub lml: usize,
    pub fleom: usize,
}

fn check_logical(p: &PauliString, cs: &CodeState, what: &str) -> Result<()> {
    if cs.stabilizers().iter().any(|g| g.symplectic(p) == 1) {
        return Err(Error::InvalidState(format!("dumped {what} anticommutes with a stabilizer")));
    }
    Ok(())
}

fn frame(cs: &CodeState, spec: &CircuitSpec, t: usize) -> Result<LogicalFrame> {
    let m = minimal_intervals(cs, spec.geometry)?;
    let n = cs.n_qubits();
    let y = cs.logical_y();
    check_logical(cs.logical_z(), cs, "Z")?;
    check_logical(&y, cs, "Y")?;
    let mut witnesses = Vec::with_capacity(m.intervals.len());
    for iv in &m.intervals {
        let region = iv.region(n);
        let missing = || Error::InvalidState(format!("logical does not reduce onto MLMI {iv}"));
        let z = reduce_support(cs.logical_z(), cs.stabilizers(), &region)?.ok_or_else(missing)?;
        let y = reduce_support(&y, cs.stabilizers(), &region)?.ok_or_else(missing)?;
        check_logical(&z, cs, "Z witness")?;
        check_logical(&y, cs, "Y witness")?;
        if z.symplectic(&y) == 0 {
            return Err(Error::InvalidState(format!("witness logicals on {iv} commute")));
        }
        witnesses.push(WitnessRepresentative {
            interval: *iv,
            z: z.to_string(),
            y: y.to_string(),
        });
    }
    Ok(LogicalFrame {
        t,
        z: cs.logical_z().to_string(),
        y: y.to_string(),
        stabilizers: cs.stabilizers().iter().map(ToString::to_string).collect(),
        witnesses,
        lml: lml(cs, spec.geometry),
        fleom: fleom(&m)?,
    })
}

/// Frames `t = 0, …, t_max` of realization `index`. Every dumped logical is checked
/// to commute with all stabilizers, and each `(Z, Y)` pair to anticommute.
pub fn dump_logical_trajectory(spec: &CircuitSpec, index: u64) -> Result<Vec<LogicalFrame>> {
    spec.validate()?;
    let mut cs = prepare(spec, index)?;
    let mut out = Vec::with_capacity(spec.t_max + 1);
    out.push(frame(&cs, spec, 0)?);
    for t in 1..=spec.t_max {
        cs.apply_layer(&realization_layer(spec, index, Stream::Main, t));
        out.push(frame(&cs, spec, t)?);
    }
    Ok(out)
}
