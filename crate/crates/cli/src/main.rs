use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magicspread::harness::config::KvConfig;
use magicspread::harness::scenarios::{run_scenario, Scenario};
use magicspread::Error;

#[derive(Parser, Debug)]
#[command(name = "magicspread", version, about = "Spreading of injected magic in doped Clifford circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mean FLEOM and LML over an ensemble, with early-time velocity fits.
    Spread(Common),
    /// FLEOM of the rotated-T setup for the four circuit pairings.
    Interplay(Common),
    /// Channel-capacity proxy of one evolved instance and a global random code.
    Channel(Common),
    /// Deterministic SDKI-f trajectory from Bell pairs, checked against its closed form.
    SdkifExact(Common),
    /// MLMI width histograms and the typical magic length.
    Dist(Common),
    /// Closed-form butterfly and entanglement velocities.
    Velocities(Common),
    /// Algorithms against the dense statevector reference at small sizes.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        /// Largest system size.
        #[arg(long = "l-max", alias = "Lmax")]
        l_max: Option<usize>,
    },
    /// Logical representatives per time step.
    DumpLogicals(Common),
}

fn split(cmd: Command) -> (Scenario, Common, Vec<(&'static str, String)>) {
    match cmd {
        Command::Spread(c) => (Scenario::Spread, c, vec![]),
        Command::Interplay(c) => (Scenario::Interplay, c, vec![]),
        Command::Channel(c) => (Scenario::Channel, c, vec![]),
        Command::SdkifExact(c) => (Scenario::SdkifExact, c, vec![]),
        Command::Dist(c) => (Scenario::Dist, c, vec![]),
        Command::Velocities(c) => (Scenario::Velocities, c, vec![]),
        Command::OracleCheck { common, l_max } => (
            Scenario::OracleCheck,
            common,
            l_max.map(|l| ("l_max", l.to_string())).into_iter().collect(),
        ),
        Command::DumpLogicals(c) => (Scenario::DumpLogicals, c, vec![]),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse(_) => 2,
        Error::RejectedStarvation { .. } => 3,
        _ => 1,
    }
}

fn run(scenario: Scenario, common: &Common, overrides: &[(&str, String)]) -> Result<Option<bool>, Error> {
    let mut cfg = match &common.config {
        Some(path) => KvConfig::load(path)?,
        None if scenario.config_optional() => KvConfig::new(),
        None => return Err(Error::Config(format!("`{scenario}` needs --config"))),
    };
    if let Some(seed) = common.seed {
        cfg.set("seed", seed);
    }
    for (k, v) in overrides {
        cfg.set(k, v);
    }
    let outcome = run_scenario(scenario, &cfg, &common.out, common.workers)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.files {
        log::info!("wrote {}", f.display());
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (scenario, common, overrides) = split(cli.command);
    match run(scenario, &common, &overrides) {
        Ok(Some(false)) => {
            eprintln!("error: {scenario} check failed");
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
