use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use magicspread::harness::config::KvConfig;
use magicspread::harness::output::{read_jsonl, Manifest};
use magicspread::harness::scenarios::{check_config, Scenario};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magicspread"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], config: Option<&Path>, out: &Path) -> Output {
    let mut c = bin();
    c.args(args).arg("--out").arg(out);
    if let Some(cfg) = config {
        c.arg("--config").arg(cfg);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn csv_header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn shipped_configs_are_valid() {
    let mut seen = 0;
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        let scenario = match stem.as_str() {
            "sdkif" => Scenario::SdkifExact,
            "oracle" => Scenario::OracleCheck,
            "dump-logicals" => Scenario::DumpLogicals,
            s => s.split('-').next().unwrap().parse().unwrap(),
        };
        let cfg = KvConfig::load(&path).unwrap();
        check_config(scenario, &cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn sdkif_exact_passes_on_shipped_config() {
    let out = TempDir::new().unwrap();
    let o = run(&["sdkif-exact"], Some(&configs_dir().join("sdkif.conf")), out.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("PASS"));
    assert!(text.contains("t = 5: W = 30, 3 MLMIs"));
    assert_eq!(csv_header(&out.path().join("sdkif.csv")), "t,W,expected_W,n_mlmi,intervals,ok");
    let m: Vec<Manifest> = read_jsonl(&out.path().join("manifest.jsonl")).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].scenario, "sdkif-exact");
    assert_eq!(m[0].passed, Some(true));
    assert_eq!(m[0].files, vec!["sdkif.csv"]);
}

#[test]
fn spread_outputs_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        &tmp,
        "spread.conf",
        "L = 18\nt_max = 12\np = 0.2\nrealizations = 8\nseed = 11\nfit_window = 4, 9\nmlmi_dump = 2\n",
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let oa = run(&["spread", "--workers", "1"], Some(&cfg), &a);
    let ob = run(&["spread", "--workers", "3"], Some(&cfg), &b);
    assert!(oa.status.success() && ob.status.success());
    for f in ["spread.csv", "fits.csv", "mlmi.jsonl"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_eq!(csv_header(&a.join("spread.csv")), "t,mean_W,mean_l,se_W,se_l,n");
    let rows = fs::read_to_string(a.join("spread.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 13);
    let fits = fs::read_to_string(a.join("fits.csv")).unwrap();
    assert!(fits.lines().next().unwrap().starts_with("quantity,slope,intercept,t_lo,t_hi"));
    let mlmi = fs::read_to_string(a.join("mlmi.jsonl")).unwrap();
    assert_eq!(mlmi.lines().count(), 2 * 13);
    let first: serde_json::Value = serde_json::from_str(mlmi.lines().next().unwrap()).unwrap();
    assert!(first["intervals"][0]["start"].is_number());
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(&tmp, "s.conf", "L = 10\nt_max = 3\nrealizations = 2\nseed = 1\n");
    let o = run(&["spread", "--seed", "77"], Some(&cfg), tmp.path());
    assert!(o.status.success());
    let m: Vec<Manifest> = read_jsonl(&tmp.path().join("manifest.jsonl")).unwrap();
    assert_eq!(m[0].seed, Some(77));
    assert_eq!(m[0].config["seed"], "77");
}

#[test]
fn config_errors_exit_with_2() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["spread"], None, tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let bad = write_config(&tmp, "bad.conf", "L = 10\nrealisations = 3\n");
    assert_eq!(run(&["spread"], Some(&bad), tmp.path()).status.code(), Some(2));
    let bad = write_config(&tmp, "bad2.conf", "L = 10\np = 2\n");
    assert_eq!(run(&["dist"], Some(&bad), tmp.path()).status.code(), Some(2));
    let bad = write_config(&tmp, "bad3.conf", "L = 10\nensemble = haar\n");
    assert_eq!(run(&["spread"], Some(&bad), tmp.path()).status.code(), Some(2));
}

#[test]
fn interplay_starvation_exits_with_3() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        &tmp,
        "i.conf",
        "L = 10\nt_max = 4\ninitial = all_zero\nrealizations = 3\ncase = i\nmin_accepted = 1\n",
    );
    let o = run(&["interplay"], Some(&cfg), tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn interplay_writes_all_cases() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        &tmp,
        "i.conf",
        "L = 14\nboundary = periodic\nt_max = 5\np = 0.3\nrealizations = 10\nmin_accepted = 1\n",
    );
    let o = run(&["interplay"], Some(&cfg), tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let path = tmp.path().join("interplay.csv");
    assert_eq!(csv_header(&path), "case,t,mean_W,se_W,accepted,rejected");
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1 + 4 * 6);
    assert!(stdout(&o).contains("guides: v_B"));
}

#[test]
fn channel_curve_and_baseline() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        &tmp,
        "c.conf",
        "L = 12\nt_max = 24\np = 0.1\ntimes = 0, 24\nf_grid = 0, 0.5, 1\nn_b_samples = 50\n",
    );
    let o = run(&["channel"], Some(&cfg), tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(tmp.path().join("channel.csv")).unwrap();
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["source", "t", "f", "c_tilde", "stderr", "n_samples", "n_erased"]);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3 * 3);
    assert_eq!(&rows[0][0], "circuit");
    assert_eq!(&rows[0][3], "1.0");
    assert_eq!(&rows[2][3], "0.0");
    assert_eq!(&rows[8][0], "global");
    assert_eq!(&rows[8][1], "");
}

#[test]
fn dist_and_dump_logicals() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(&tmp, "d.conf", "L = 14\nt_max = 10\nrealizations = 5\nfit_window = 2, 7\n");
    let o = run(&["dist"], Some(&cfg), tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv_header(&tmp.path().join("dist.csv")), "t,width,count");
    assert_eq!(csv_header(&tmp.path().join("ltyp.csv")), "t,l_typ,n_intervals");

    let o = run(&["dump-logicals"], Some(&configs_dir().join("dump-logicals.conf")), tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let frames = fs::read_to_string(tmp.path().join("logicals.jsonl")).unwrap();
    assert_eq!(frames.lines().count(), 16);
    let f0: serde_json::Value = serde_json::from_str(frames.lines().next().unwrap()).unwrap();
    assert_eq!(f0["stabilizers"].as_array().unwrap().len(), 29);
    assert_eq!(f0["fleom"], 2);
    let m: Vec<Manifest> = read_jsonl(&tmp.path().join("manifest.jsonl")).unwrap();
    assert_eq!(m.len(), 2);
}

#[test]
fn oracle_check_small() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(&tmp, "o.conf", "circuits_per_l = 3\nrandom_regions = 5\n");
    let o = run(&["oracle-check", "--Lmax", "5"], Some(&cfg), tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("12 states"));
    let recs = fs::read_to_string(tmp.path().join("oracle.jsonl")).unwrap();
    let r0: serde_json::Value = serde_json::from_str(recs.lines().next().unwrap()).unwrap();
    for k in ["class_alg1", "class_alg2", "class_alg3", "oracle_value", "match"] {
        assert!(!r0[k].is_null(), "{k}");
    }
}

#[test]
fn velocities_without_config() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["velocities"], None, tmp.path());
    assert!(o.status.success());
    assert_eq!(
        csv_header(&tmp.path().join("velocities.csv")),
        "ensemble,p,v_b,v_e,two_v_e,v_b_plus_2v_e"
    );
    assert!(stdout(&o).contains("0.3219"));
}
