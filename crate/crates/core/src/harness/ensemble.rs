//! Parallel execution of circuit ensembles and reduction into per-step statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{HistogramSeries, SeriesAccumulator};
use crate::circuits::{run_interplay, run_realization, CircuitSpec, InterplayCase, Observables};
use crate::error::{Error, Result};
use crate::magic_gauge::MagicClass;

/// Runs `f` on `0..n` with `workers` threads (0 means rayon's default) and returns the
/// results in index order.
pub fn par_map<T, F>(n: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}

/// Steps at which a realization broke a locality bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub checked_steps: u64,
    /// `|ℓ(t+1) − ℓ(t)| > 2`.
    pub lml_jumps: u64,
    /// `W(t) > W(0) + 6t`.
    pub fleom_excess: u64,
}

impl LocalityReport {
    pub fn violations(&self) -> u64 {
        self.lml_jumps + self.fleom_excess
    }

    fn merge(&mut self, o: &LocalityReport) {
        self.checked_steps += o.checked_steps;
        self.lml_jumps += o.lml_jumps;
        self.fleom_excess += o.fleom_excess;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub accepted: u64,
    pub rejected: u64,
    pub fleom: SeriesAccumulator,
    pub lml: SeriesAccumulator,
    pub widths: HistogramSeries,
    pub locality: LocalityReport,
    /// Steps whose full-state class was not Full.
    pub magic_lost: u64,
}

impl EnsembleResult {
    fn merge(&mut self, o: &EnsembleResult) {
        self.accepted += o.accepted;
        self.rejected += o.rejected;
        self.fleom.merge(&o.fleom);
        self.lml.merge(&o.lml);
        self.widths.merge(&o.widths);
        self.locality.merge(&o.locality);
        self.magic_lost += o.magic_lost;
    }
}

fn summarize(spec: &CircuitSpec, obs: Observables, index: u64) -> Result<EnsembleResult> {
    let r = run_realization(spec, obs, index)?;
    let mut out = EnsembleResult::default();
    if r.rejected {
        out.rejected = 1;
        return Ok(out);
    }
    out.accepted = 1;
    let w0 = r.records[0].fleom;
    let mut prev_l: Option<usize> = None;
    for rec in &r.records {
        if let Some(w) = rec.fleom {
            out.fleom.add(rec.t, w as f64);
            if w > w0.unwrap_or(w) + 6 * rec.t {
                out.locality.fleom_excess += 1;
            }
        }
        if let Some(l) = rec.lml {
            out.lml.add(rec.t, l as f64);
            if prev_l.is_some_and(|p| p.abs_diff(l) > 2) {
                out.locality.lml_jumps += 1;
            }
            prev_l = Some(l);
        }
        for &w in &rec.mlmi_widths {
            out.widths.add(rec.t, w);
        }
        if rec.full_state_class.is_some_and(|c| c != MagicClass::Full) {
            out.magic_lost += 1;
        }
        out.locality.checked_steps += 1;
    }
    Ok(out)
}

/// Runs `realizations` independent realizations of `spec` and aggregates them.
pub fn run_ensemble(spec: &CircuitSpec, obs: Observables, realizations: u64, workers: usize) -> Result<EnsembleResult> {
    spec.validate()?;
    let parts = par_map(realizations, workers, |i| summarize(spec, obs, i))?;
    let mut total = EnsembleResult::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InterplayResult {
    pub fleom: SeriesAccumulator,
    pub accepted: Vec<u64>,
    pub rejected: Vec<u64>,
}

/// Aggregates interplay realizations; fails when some step keeps fewer than
/// `min_accepted` realizations.
pub fn run_interplay_ensemble(
    spec: &CircuitSpec,
    case: InterplayCase,
    realizations: u64,
    workers: usize,
    min_accepted: u64,
) -> Result<InterplayResult> {
    spec.validate()?;
    let parts = par_map(realizations, workers, |i| run_interplay(spec, case, i))?;
    let steps = spec.t_max + 1;
    let mut out = InterplayResult {
        fleom: SeriesAccumulator::default(),
        accepted: vec![0; steps],
        rejected: vec![0; steps],
    };
    for recs in &parts {
        for r in recs {
            match r.fleom {
                Some(w) if !r.rejected => {
                    out.fleom.add(r.t, w as f64);
                    out.accepted[r.t] += 1;
                }
                _ => out.rejected[r.t] += 1,
            }
        }
    }
    if let Some((t, &a)) = out.accepted.iter().enumerate().find(|&(_, &a)| a < min_accepted) {
        return Err(Error::RejectedStarvation {
            t,
            accepted: a as usize,
            required: min_accepted as usize,
        });
    }
    Ok(out)
}
