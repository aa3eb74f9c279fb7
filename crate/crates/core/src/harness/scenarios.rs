//! Subcommands. Each reads a flat config, runs, writes its data files into an output
//! directory and appends one line to the directory's manifest.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::KvConfig;
use super::ensemble::{run_ensemble, run_interplay_ensemble};
use super::fit::{fit_early_slope, FitResult, FitWindow};
use super::logicals::dump_logical_trajectory;
use super::oracle::{oracle_check, OracleConfig};
use super::output::{Manifest, OutputDir};
use crate::channel::{capacity_proxy, global_random_code, CapacityEstimate, ErrorChannel};
use crate::circuits::{
    layer_rng, prepare, realization_layer, run_realization, v_butterfly, v_entanglement, Boundary, CircuitSpec,
    Ensemble, Evolvable, InitialKind, InterplayCase, Observables, Stream,
};
use crate::error::{Error, Result};
use crate::lengthscales::{typical_length, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    Spread,
    Interplay,
    Channel,
    SdkifExact,
    Dist,
    Velocities,
    OracleCheck,
    DumpLogicals,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Spread,
        Scenario::Interplay,
        Scenario::Channel,
        Scenario::SdkifExact,
        Scenario::Dist,
        Scenario::Velocities,
        Scenario::OracleCheck,
        Scenario::DumpLogicals,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Scenario::Spread => "spread",
            Scenario::Interplay => "interplay",
            Scenario::Channel => "channel",
            Scenario::SdkifExact => "sdkif-exact",
            Scenario::Dist => "dist",
            Scenario::Velocities => "velocities",
            Scenario::OracleCheck => "oracle-check",
            Scenario::DumpLogicals => "dump-logicals",
        }
    }

    /// Config keys the scenario accepts.
    pub fn keys(self) -> Vec<&'static str> {
        let extra: &[&str] = match self {
            Scenario::Spread => &["realizations", "fit_window", "mlmi_dump", "check_magic"],
            Scenario::Dist => &["realizations", "fit_window"],
            Scenario::Interplay => &["realizations", "case", "min_accepted"],
            Scenario::Channel => &["f_grid", "n_b_samples", "times", "baseline", "channel_mode", "realization"],
            Scenario::DumpLogicals => &["realization"],
            Scenario::SdkifExact => return vec!["L", "boundary", "injection_site", "interval_geometry", "t_max", "seed"],
            Scenario::Velocities => return vec!["p_grid", "ensemble"],
            Scenario::OracleCheck => return vec!["l_min", "l_max", "circuits_per_l", "random_regions", "seed", "tol"],
        };
        CircuitSpec::KEYS.iter().chain(extra).copied().collect()
    }

    /// Whether the scenario runs without a config file.
    pub fn config_optional(self) -> bool {
        matches!(self, Scenario::Velocities | Scenario::OracleCheck)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|x| x.label() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown scenario `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    /// Set by scenarios that check against known results.
    pub passed: Option<bool>,
}

struct Report {
    summary: Vec<String>,
    passed: Option<bool>,
}

impl Report {
    fn info(summary: Vec<String>) -> Self {
        Report { summary, passed: None }
    }
}

/// Runs `scenario` with `cfg`, writing into `out`.
pub fn run_scenario(scenario: Scenario, cfg: &KvConfig, out: &Path, workers: usize) -> Result<Outcome> {
    let start = Instant::now();
    let mut dir = OutputDir::create(out)?;
    let report = match scenario {
        Scenario::Spread => spread(cfg, &mut dir, workers)?,
        Scenario::Interplay => interplay(cfg, &mut dir, workers)?,
        Scenario::Channel => channel(cfg, &mut dir)?,
        Scenario::SdkifExact => sdkif_exact(cfg, &mut dir)?,
        Scenario::Dist => dist(cfg, &mut dir, workers)?,
        Scenario::Velocities => velocities(cfg, &mut dir)?,
        Scenario::OracleCheck => oracle(cfg, &mut dir, workers)?,
        Scenario::DumpLogicals => dump_logicals(cfg, &mut dir)?,
    };
    let mut manifest = Manifest::new(scenario.label(), cfg);
    manifest.files = dir.written().to_vec();
    manifest.summary = report.summary.clone();
    manifest.passed = report.passed;
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    dir.append_manifest(&manifest)?;
    Ok(Outcome {
        files: dir.written().iter().map(|f| out.join(f)).collect(),
        summary: report.summary,
        passed: report.passed,
    })
}

/// Validates keys and circuit parameters without running anything.
pub fn check_config(scenario: Scenario, cfg: &KvConfig) -> Result<()> {
    cfg.check_keys(&scenario.keys())?;
    match scenario {
        Scenario::Velocities | Scenario::OracleCheck => Ok(()),
        Scenario::SdkifExact => sdkif_saturation_time(cfg.require("L")?).map(|_| ()),
        _ => CircuitSpec::from_config(cfg).map(|_| ()),
    }
}

fn load_spec(cfg: &KvConfig) -> Result<CircuitSpec> {
    let spec = CircuitSpec::from_config(cfg)?;
    if let Some(w) = spec.scenario_warning() {
        log::warn!("{w}");
    }
    Ok(spec)
}

/// Entanglement velocity of the ensemble, where a closed form exists.
pub fn v_e_of(spec: &CircuitSpec) -> Option<f64> {
    v_butterfly(spec.p, spec.ensemble).and_then(v_entanglement).ok()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadRow {
    pub t: usize,
    #[serde(rename = "mean_W")]
    pub mean_w: f64,
    pub mean_l: f64,
    #[serde(rename = "se_W")]
    pub se_w: f64,
    pub se_l: f64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub quantity: String,
    pub slope: f64,
    pub intercept: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub n_points: usize,
    pub velocity: f64,
    pub residual_rms: f64,
    pub value_lo: f64,
    pub value_hi: f64,
    pub v_e: Option<f64>,
    /// `velocity / v_E`, or `velocity / 2v_E` for the full linear extent.
    pub ratio: Option<f64>,
}

fn fit_row(quantity: &str, series: &[(f64, f64)], window: &FitWindow, v_e_scale: Option<f64>, v_e: Option<f64>, summary: &mut Vec<String>) -> Option<FitRow> {
    match fit_early_slope(series, window) {
        Ok(FitResult {
            slope,
            intercept,
            window: (t_lo, t_hi),
            n_points,
            velocity,
            residual_rms,
        }) => {
            let ratio = v_e_scale.map(|s| velocity / s);
            summary.push(match ratio {
                Some(r) => format!("{quantity}: velocity {velocity:.4} over t in [{t_lo}, {t_hi}], ratio {r:.3}"),
                None => format!("{quantity}: velocity {velocity:.4} over t in [{t_lo}, {t_hi}]"),
            });
            Some(FitRow {
                quantity: quantity.to_string(),
                slope,
                intercept,
                t_lo,
                t_hi,
                n_points,
                velocity,
                residual_rms,
                value_lo: window.value_lo,
                value_hi: window.value_hi,
                v_e,
                ratio,
            })
        }
        Err(e) => {
            summary.push(format!("{quantity}: no fit ({e})"));
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlmiDumpRecord {
    pub realization: u64,
    pub t: usize,
    pub intervals: Vec<Interval>,
    pub lml: usize,
    pub fleom: usize,
}

fn spread(cfg: &KvConfig, dir: &mut OutputDir, workers: usize) -> Result<Report> {
    cfg.check_keys(&Scenario::Spread.keys())?;
    let spec = load_spec(cfg)?;
    let n: u64 = cfg.get_or("realizations", 100)?;
    let window = cfg.get_or("fit_window", FitWindow::default_for(spec.l))?;
    let dump: u64 = cfg.get_or("mlmi_dump", 0)?;
    let obs = Observables {
        full_class: cfg.get_or("check_magic", false)?,
        ..Observables::lengths()
    };
    let r = run_ensemble(&spec, obs, n, workers)?;
    let rows: Vec<SpreadRow> = r
        .fleom
        .steps
        .iter()
        .zip(&r.lml.steps)
        .enumerate()
        .map(|(t, (w, l))| SpreadRow {
            t,
            mean_w: w.mean().unwrap_or(f64::NAN),
            mean_l: l.mean().unwrap_or(f64::NAN),
            se_w: w.stderr(),
            se_l: l.stderr(),
            n: w.n,
        })
        .collect();
    dir.write_csv("spread.csv", &rows)?;

    let mut summary = vec![format!("{} accepted, {} rejected realizations", r.accepted, r.rejected)];
    let v_e = v_e_of(&spec);
    let fits: Vec<FitRow> = [
        ("W", r.fleom.means(), v_e.map(|v| 2.0 * v)),
        ("l", r.lml.means(), v_e),
    ]
    .iter()
    .filter_map(|(q, s, scale)| fit_row(q, s, &window, *scale, v_e, &mut summary))
    .collect();
    dir.write_csv("fits.csv", &fits)?;
    summary.push(format!(
        "locality: {} steps checked, {} LML jumps, {} FLEOM excesses",
        r.locality.checked_steps, r.locality.lml_jumps, r.locality.fleom_excess
    ));
    if obs.full_class {
        summary.push(format!("steps without a full unit of magic: {}", r.magic_lost));
    }
    if dump > 0 {
        let all = Observables {
            intervals: true,
            ..Observables::lengths()
        };
        let mut recs = Vec::new();
        for i in 0..dump {
            for rec in run_realization(&spec, all, i)?.records {
                recs.push(MlmiDumpRecord {
                    realization: i,
                    t: rec.t,
                    intervals: rec.intervals,
                    lml: rec.lml.unwrap_or(0),
                    fleom: rec.fleom.unwrap_or(0),
                });
            }
        }
        dir.write_jsonl("mlmi.jsonl", &recs)?;
    }
    Ok(Report::info(summary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistRow {
    pub t: usize,
    pub width: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalRow {
    pub t: usize,
    pub l_typ: usize,
    pub n_intervals: u64,
}

fn dist(cfg: &KvConfig, dir: &mut OutputDir, workers: usize) -> Result<Report> {
    cfg.check_keys(&Scenario::Dist.keys())?;
    let spec = load_spec(cfg)?;
    let n: u64 = cfg.get_or("realizations", 100)?;
    let window = cfg.get_or("fit_window", FitWindow::default_for(spec.l))?;
    let r = run_ensemble(&spec, Observables::lengths(), n, workers)?;
    let mut rows = Vec::new();
    let mut typical = Vec::new();
    for (t, h) in r.widths.steps.iter().enumerate() {
        rows.extend(h.iter().map(|(&width, &count)| DistRow { t, width, count }));
        if let Ok(l_typ) = typical_length(h) {
            typical.push(TypicalRow {
                t,
                l_typ,
                n_intervals: h.values().sum(),
            });
        }
    }
    dir.write_csv("dist.csv", &rows)?;
    dir.write_csv("ltyp.csv", &typical)?;
    let mut summary = vec![format!("{} accepted, {} rejected realizations", r.accepted, r.rejected)];
    let series: Vec<(f64, f64)> = typical.iter().map(|r| (r.t as f64, r.l_typ as f64)).collect();
    let v_e = v_e_of(&spec);
    let fits: Vec<FitRow> = fit_row("l_typ", &series, &window, v_e, v_e, &mut summary)
        .into_iter()
        .collect();
    dir.write_csv("fits.csv", &fits)?;
    if let Some(last) = typical.last() {
        summary.push(format!("l_typ({}) = {} (L/2 = {})", last.t, last.l_typ, spec.l as f64 / 2.0));
    }
    Ok(Report::info(summary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterplayRow {
    pub case: String,
    pub t: usize,
    #[serde(rename = "mean_W")]
    pub mean_w: f64,
    #[serde(rename = "se_W")]
    pub se_w: f64,
    pub accepted: u64,
    pub rejected: u64,
}

fn interplay(cfg: &KvConfig, dir: &mut OutputDir, workers: usize) -> Result<Report> {
    cfg.check_keys(&Scenario::Interplay.keys())?;
    let spec = load_spec(cfg)?;
    let n: u64 = cfg.get_or("realizations", 100)?;
    let min_accepted: u64 = cfg.get_or("min_accepted", 1)?;
    let cases = cfg.get_list::<InterplayCase>("case")?.unwrap_or(InterplayCase::ALL.to_vec());
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for case in cases {
        let r = run_interplay_ensemble(&spec, case, n, workers, min_accepted)?;
        for t in 0..=spec.t_max {
            let acc = r.fleom.steps.get(t).copied().unwrap_or_default();
            rows.push(InterplayRow {
                case: case.to_string(),
                t,
                mean_w: acc.mean().unwrap_or(f64::NAN),
                se_w: acc.stderr(),
                accepted: r.accepted[t],
                rejected: r.rejected[t],
            });
        }
        summary.push(format!(
            "case {case}: {} rejected (realization, t) pairs",
            r.rejected.iter().sum::<u64>()
        ));
    }
    dir.write_csv("interplay.csv", &rows)?;
    if let Ok(v_b) = v_butterfly(spec.p, spec.ensemble) {
        let v_e = v_entanglement(v_b)?;
        summary.push(format!("guides: v_B = {v_b:.4}, 2v_E = {:.4}, v_B + 2v_E = {:.4}", 2.0 * v_e, v_b + 2.0 * v_e));
    }
    Ok(Report::info(summary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelRow {
    pub source: String,
    pub t: Option<usize>,
    pub f: f64,
    pub c_tilde: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub n_erased: usize,
}

impl ChannelRow {
    fn new(source: &str, t: Option<usize>, e: CapacityEstimate) -> Self {
        ChannelRow {
            source: source.to_string(),
            t,
            f: e.f,
            c_tilde: e.c_tilde,
            stderr: e.stderr,
            n_samples: e.n_samples,
            n_erased: e.n_erased,
        }
    }
}

/// Default erased fractions `0, 0.1, …, 1`.
pub fn default_f_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// First `f` of the grid where the curve drops below 1/2.
fn half_crossing(rows: &[ChannelRow]) -> Option<f64> {
    rows.iter().find(|r| r.c_tilde < 0.5).map(|r| r.f)
}

/// One circuit instance sampled at each time in `times`; the global-random-code
/// baseline draws its code and its erasures from the operator stream.
fn channel(cfg: &KvConfig, dir: &mut OutputDir) -> Result<Report> {
    cfg.check_keys(&Scenario::Channel.keys())?;
    let spec = load_spec(cfg)?;
    let f_grid = cfg.get_list::<f64>("f_grid")?.unwrap_or_else(default_f_grid);
    let n_b: usize = cfg.get_or("n_b_samples", 2000)?;
    let mut times = cfg.get_list::<usize>("times")?.unwrap_or(vec![spec.t_max]);
    times.sort_unstable();
    times.dedup();
    let baseline: bool = cfg.get_or("baseline", true)?;
    let mode: ErrorChannel = cfg.get_or("channel_mode", ErrorChannel::Erasure)?;
    let index: u64 = cfg.get_or("realization", 0)?;

    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut cs = prepare(&spec, index)?;
    let mut t_now = 0;
    for &t in &times {
        while t_now < t {
            t_now += 1;
            cs.apply_layer(&realization_layer(&spec, index, Stream::Main, t_now));
        }
        let mut rng = layer_rng(spec.seed, index, Stream::Sampling, t as u64);
        let start = rows.len();
        for &f in &f_grid {
            rows.push(ChannelRow::new("circuit", Some(t), capacity_proxy(&cs, f, n_b, mode, &mut rng)?));
        }
        match half_crossing(&rows[start..]) {
            Some(f) => summary.push(format!("t = {t}: capacity proxy below 1/2 from f = {f}")),
            None => summary.push(format!("t = {t}: capacity proxy stays above 1/2")),
        }
    }
    if baseline {
        let mut rng = layer_rng(spec.seed, index, Stream::Operator, 0);
        let code = global_random_code(spec.l, &mut rng)?;
        let mut rng = layer_rng(spec.seed, index, Stream::Operator, 1);
        let start = rows.len();
        for &f in &f_grid {
            rows.push(ChannelRow::new("global", None, capacity_proxy(&code, f, n_b, mode, &mut rng)?));
        }
        if let Some(f) = half_crossing(&rows[start..]) {
            summary.push(format!("global baseline below 1/2 from f = {f}"));
        }
    }
    dir.write_csv("channel.csv", &rows)?;
    Ok(Report::info(summary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdkifRow {
    pub t: usize,
    #[serde(rename = "W")]
    pub w: usize,
    /// `2t + 2` before saturation, `L` at `t*`.
    #[serde(rename = "expected_W")]
    pub expected_w: Option<usize>,
    pub n_mlmi: usize,
    pub intervals: String,
    pub ok: bool,
}

/// Saturation time of the undoped SDKI-f trajectory from central Bell pairs.
pub fn sdkif_saturation_time(l: usize) -> Result<usize> {
    if l % 6 != 0 || l % 4 != 2 {
        return Err(Error::Config(format!("the SDKI-f trajectory needs L ≡ 6 mod 12, got L = {l}")));
    }
    Ok(l / 6)
}

/// The deterministic SDKI-f run from Bell pairs: `W(t)` within `[2t, 2t + 2]` before
/// `t* = L/6`, `W(t*) = L` with three MLMIs.
pub fn sdkif_trajectory(spec: &CircuitSpec) -> Result<(Vec<SdkifRow>, bool)> {
    let t_star = sdkif_saturation_time(spec.l)?;
    let obs = Observables {
        intervals: true,
        ..Observables::lengths()
    };
    let run = run_realization(spec, obs, 0)?;
    if run.rejected {
        return Err(Error::NoMagicInjected { site: spec.injection_site });
    }
    let rows: Vec<SdkifRow> = run
        .records
        .iter()
        .map(|rec| {
            let w = rec.fleom.unwrap_or(0);
            let n_mlmi = rec.intervals.len();
            let (expected_w, ok) = match rec.t {
                0 => (Some(2), w == 2),
                t if t < t_star => (Some(2 * t + 2), (2 * t..=2 * t + 2).contains(&w)),
                t if t == t_star => (Some(spec.l), w == spec.l && n_mlmi == 3),
                _ => (None, true),
            };
            SdkifRow {
                t: rec.t,
                w,
                expected_w,
                n_mlmi,
                intervals: rec.intervals.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                ok,
            }
        })
        .collect();
    let passed = rows.len() > t_star && rows.iter().all(|r| r.ok);
    Ok((rows, passed))
}

fn sdkif_exact(cfg: &KvConfig, dir: &mut OutputDir) -> Result<Report> {
    cfg.check_keys(&Scenario::SdkifExact.keys())?;
    let l: usize = cfg.require("L")?;
    let t_star = sdkif_saturation_time(l)?;
    let mut c = cfg.clone();
    c.set("ensemble", Ensemble::SdkiF);
    c.set("p", 0);
    c.set("initial", InitialKind::BellPairs);
    if !c.contains("boundary") {
        c.set("boundary", Boundary::Periodic);
    }
    if !c.contains("t_max") {
        c.set("t_max", t_star + 1);
    }
    let spec = CircuitSpec::from_config(&c)?;
    if spec.t_max < t_star {
        return Err(Error::Config(format!("t_max = {} stops before t* = {t_star}", spec.t_max)));
    }
    let (rows, passed) = sdkif_trajectory(&spec)?;
    dir.write_csv("sdkif.csv", &rows)?;
    let mut summary: Vec<String> = rows
        .iter()
        .map(|r| format!("t = {}: W = {}, {} MLMIs {}", r.t, r.w, r.n_mlmi, r.intervals))
        .collect();
    summary.push(format!("{} (t* = {t_star})", if passed { "PASS" } else { "FAIL" }));
    Ok(Report {
        summary,
        passed: Some(passed),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityRow {
    pub ensemble: Ensemble,
    pub p: f64,
    pub v_b: f64,
    pub v_e: f64,
    pub two_v_e: f64,
    pub v_b_plus_2v_e: f64,
}

/// Closed-form velocities over a grid of doping probabilities.
pub fn velocity_table(ensembles: &[Ensemble], p_grid: &[f64]) -> Result<Vec<VelocityRow>> {
    let mut rows = Vec::new();
    for &ensemble in ensembles {
        for &p in p_grid {
            let Ok(v_b) = v_butterfly(p, ensemble) else { continue };
            let v_e = v_entanglement(v_b)?;
            rows.push(VelocityRow {
                ensemble,
                p,
                v_b,
                v_e,
                two_v_e: 2.0 * v_e,
                v_b_plus_2v_e: v_b + 2.0 * v_e,
            });
        }
    }
    Ok(rows)
}

fn velocities(cfg: &KvConfig, dir: &mut OutputDir) -> Result<Report> {
    cfg.check_keys(&Scenario::Velocities.keys())?;
    let p_grid = cfg.get_list::<f64>("p_grid")?.unwrap_or_else(default_f_grid);
    let ensembles = cfg
        .get_list::<Ensemble>("ensemble")?
        .unwrap_or(vec![Ensemble::RandomClifford, Ensemble::SdkiR]);
    let rows = velocity_table(&ensembles, &p_grid)?;
    dir.write_csv("velocities.csv", &rows)?;
    let mut summary = vec![format!("{:<16} {:>5} {:>8} {:>8} {:>8}", "ensemble", "p", "v_B", "v_E", "v_B+2v_E")];
    summary.extend(rows.iter().map(|r| {
        format!(
            "{:<16} {:>5.2} {:>8.4} {:>8.4} {:>8.4}",
            r.ensemble.label(),
            r.p,
            r.v_b,
            r.v_e,
            r.v_b_plus_2v_e
        )
    }));
    Ok(Report::info(summary))
}

fn oracle(cfg: &KvConfig, dir: &mut OutputDir, workers: usize) -> Result<Report> {
    cfg.check_keys(&Scenario::OracleCheck.keys())?;
    let d = OracleConfig::default();
    let oc = OracleConfig {
        l_min: cfg.get_or("l_min", d.l_min)?,
        l_max: cfg.get_or("l_max", d.l_max)?,
        circuits_per_l: cfg.get_or("circuits_per_l", d.circuits_per_l)?,
        random_regions: cfg.get_or("random_regions", d.random_regions)?,
        seed: cfg.get_or("seed", d.seed)?,
        tol: cfg.get_or("tol", d.tol)?,
    };
    let rep = oracle_check(&oc, workers)?;
    dir.write_jsonl("oracle.jsonl", &rep.records)?;
    dir.write_jsonl("oracle_summary.jsonl", std::slice::from_ref(&rep))?;
    let summary = vec![
        format!("{} states, {} regions, {} mismatches", rep.states, rep.regions, rep.mismatches),
        format!(
            "{} value, {} trichotomy, {} complementarity, {} state violations",
            rep.value_violations, rep.trichotomy_violations, rep.complementarity_violations, rep.state_mismatches
        ),
        format!("{} witnesses, {} failures", rep.witnesses, rep.witness_failures),
        (if rep.passed() { "PASS" } else { "FAIL" }).to_string(),
    ];
    Ok(Report {
        summary,
        passed: Some(rep.passed()),
    })
}

fn dump_logicals(cfg: &KvConfig, dir: &mut OutputDir) -> Result<Report> {
    cfg.check_keys(&Scenario::DumpLogicals.keys())?;
    let spec = load_spec(cfg)?;
    let index: u64 = cfg.get_or("realization", 0)?;
    let frames = dump_logical_trajectory(&spec, index)?;
    dir.write_jsonl("logicals.jsonl", &frames)?;
    let mlmi: Vec<MlmiDumpRecord> = frames
        .iter()
        .map(|f| MlmiDumpRecord {
            realization: index,
            t: f.t,
            intervals: f.witnesses.iter().map(|w| w.interval).collect(),
            lml: f.lml,
            fleom: f.fleom,
        })
        .collect();
    dir.write_jsonl("mlmi.jsonl", &mlmi)?;
    Ok(Report::info(vec![format!("{} frames, self-check passed", frames.len())]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        std::env::temp_dir().join(format!("magicspread-{name}-{}", std::process::id()))
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.label().parse::<Scenario>().unwrap(), s);
        }
        assert!("plot".parse::<Scenario>().is_err());
    }

    #[test]
    fn sdkif_trajectory_at_l30() {
        let mut spec = CircuitSpec::new(30);
        spec.ensemble = Ensemble::SdkiF;
        spec.boundary = Boundary::Periodic;
        spec.t_max = 6;
        let (rows, passed) = sdkif_trajectory(&spec).unwrap();
        assert!(passed);
        let w: Vec<usize> = rows.iter().map(|r| r.w).collect();
        assert_eq!(&w[..6], &[2, 4, 6, 8, 10, 30]);
        assert_eq!(rows[5].intervals, "[0,19] [9,20] [10,29]");
        assert!(sdkif_saturation_time(28).is_err());
    }

    #[test]
    fn velocity_table_skips_undefined_entries() {
        let rows = velocity_table(&[Ensemble::SdkiF, Ensemble::RandomClifford], &[0.0, 0.5]).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].v_b, 1.0);
        assert!((rows[1].v_b - 0.6).abs() < 1e-12);
    }

    #[test]
    fn spread_is_deterministic_and_rejects_unknown_keys() {
        let cfg: KvConfig = "L = 14\nt_max = 8\nrealizations = 6\nseed = 3\nmlmi_dump = 1\nfit_window = 2,7"
            .parse()
            .unwrap();
        let (a, b) = (tmp("spread-a"), tmp("spread-b"));
        let oa = run_scenario(Scenario::Spread, &cfg, &a, 1).unwrap();
        run_scenario(Scenario::Spread, &cfg, &b, 2).unwrap();
        for f in ["spread.csv", "fits.csv", "mlmi.jsonl"] {
            assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
        }
        assert_eq!(oa.files.len(), 3);
        let header = std::fs::read_to_string(a.join("spread.csv")).unwrap();
        assert!(header.starts_with("t,mean_W,mean_l,se_W,se_l,n\n"));
        let mut bad = cfg.clone();
        bad.set("realisations", 3);
        assert!(matches!(run_scenario(Scenario::Spread, &bad, &a, 1), Err(Error::Config(_))));
        std::fs::remove_dir_all(a).unwrap();
        std::fs::remove_dir_all(b).unwrap();
    }
}
