//! CSV and JSONL writers and the per-run manifest.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::KvConfig;
use crate::error::{Error, Result};

/// Version string recorded in manifests.
pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

pub const MANIFEST: &str = "manifest.jsonl";

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// An output directory that remembers which data files were written to it.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.written.push(name.to_string());
        self.root.join(name)
    }

    /// One header row from the field names of `S`, then one row per item.
    pub fn write_csv<S: Serialize>(&mut self, name: &str, rows: &[S]) -> Result<PathBuf> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        for r in rows {
            w.serialize(r).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    /// One JSON object per line.
    pub fn write_jsonl<S: Serialize>(&mut self, name: &str, items: &[S]) -> Result<PathBuf> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = BufWriter::new(file);
        for it in items {
            serde_json::to_writer(&mut w, it).map_err(|e| io_err(&path, e))?;
            w.write_all(b"\n").map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    /// Appends `m` to the directory's manifest.
    pub fn append_manifest(&self, m: &Manifest) -> Result<PathBuf> {
        let path = self.root.join(MANIFEST);
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| io_err(&path, e))?;
        let line = serde_json::to_string(m).map_err(|e| io_err(&path, e))?;
        writeln!(f, "{line}").map_err(|e| io_err(&path, e))?;
        Ok(path)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: String,
    pub version: String,
    pub seed: Option<u64>,
    pub config: BTreeMap<String, String>,
    pub files: Vec<String>,
    pub summary: Vec<String>,
    pub passed: Option<bool>,
    pub wall_time_s: f64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Manifest {
    pub fn new(scenario: &str, cfg: &KvConfig) -> Self {
        Manifest {
            scenario: scenario.to_string(),
            version: VERSION.to_string(),
            seed: cfg.get("seed").ok().flatten(),
            config: cfg.keys().map(|k| (k.to_string(), cfg.raw(k).unwrap().to_string())).collect(),
            files: Vec::new(),
            summary: Vec::new(),
            passed: None,
            wall_time_s: 0.0,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// Reads back a JSONL file.
pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    struct Row {
        t: usize,
        mean: f64,
        note: Option<String>,
    }

    #[test]
    fn csv_and_jsonl_round_trip() {
        let dir = std::env::temp_dir().join(format!("magicspread-out-{}", std::process::id()));
        let mut out = OutputDir::create(&dir).unwrap();
        let rows = vec![
            Row { t: 0, mean: 1.5, note: None },
            Row { t: 1, mean: 2.0, note: Some("x".into()) },
        ];
        let p = out.write_csv("a.csv", &rows).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text, "t,mean,note\n0,1.5,\n1,2.0,x\n");
        let mut r = csv::Reader::from_path(&p).unwrap();
        let back: Vec<Row> = r.deserialize().collect::<std::result::Result<_, _>>().unwrap();
        assert_eq!(back, rows);
        let q = out.write_jsonl("a.jsonl", &rows).unwrap();
        assert_eq!(read_jsonl::<Row>(&q).unwrap(), rows);
        assert_eq!(out.written(), ["a.csv", "a.jsonl"]);

        let mut cfg = KvConfig::new();
        cfg.set("seed", 9);
        let m = Manifest::new("spread", &cfg);
        out.append_manifest(&m).unwrap();
        out.append_manifest(&m).unwrap();
        let ms: Vec<Manifest> = read_jsonl(&dir.join(MANIFEST)).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].seed, Some(9));
        fs::remove_dir_all(&dir).unwrap();
    }
}
