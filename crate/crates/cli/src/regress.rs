//! Golden-file regression.
//!
//! A golden directory holds `<name>.json` scenarios next to `<name>/` directories of
//! expected CSV files. Optional `<name>/tolerances.json` maps a CSV file name to
//! per-column tolerances, e.g. `{"angles.csv": {"spread_angle@1e-2": 1e-6, "*": 1e-8}}`.
//! Numbers match when `|a - b| <= tol (1 + |b|)`.

use crate::runner::{self, EXIT_CHECK_FAILED, EXIT_NEW, EXIT_PASS};
use crate::scenario::parse_scenario;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    New,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::New => "new",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub scenario: String,
    pub file: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub entries: Vec<Entry>,
}

impl Summary {
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.status == Status::Fail) {
            EXIT_CHECK_FAILED
        } else if self.entries.iter().any(|e| e.status == Status::New) {
            EXIT_NEW
        } else {
            EXIT_PASS
        }
    }

    pub fn table(&self) -> String {
        let w0 = self.entries.iter().map(|e| e.scenario.len()).chain([8]).max().unwrap_or(8);
        let w1 = self.entries.iter().map(|e| e.file.len()).chain([4]).max().unwrap_or(4);
        let mut s = format!("{:<w0$}  {:<w1$}  status  detail\n", "scenario", "file");
        for e in &self.entries {
            let _ = writeln!(s, "{:<w0$}  {:<w1$}  {:<6}  {}", e.scenario, e.file, e.status.label(), e.detail);
        }
        let count = |st| self.entries.iter().filter(|e| e.status == st).count();
        let _ = writeln!(s, "{} pass, {} fail, {} new", count(Status::Pass), count(Status::Fail), count(Status::New));
        s
    }
}

type ColumnTols = BTreeMap<String, BTreeMap<String, f64>>;

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.is_empty());
    let header = lines.next().map(|h| h.split(',').map(str::to_string).collect()).unwrap_or_default();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

/// Compare a produced CSV against its golden copy; `Err` describes the first mismatch.
pub fn compare_csv(got: &str, want: &str, tols: Option<&BTreeMap<String, f64>>) -> Result<(), String> {
    let (h1, r1) = parse_csv(got);
    let (h2, r2) = parse_csv(want);
    if h1 != h2 {
        return Err(format!("header differs: {} vs {}", h1.join(","), h2.join(",")));
    }
    if r1.len() != r2.len() {
        return Err(format!("{} rows vs {} expected", r1.len(), r2.len()));
    }
    let fallback = tols.and_then(|t| t.get("*")).copied().unwrap_or(DEFAULT_TOL);
    for (i, (a, b)) in r1.iter().zip(&r2).enumerate() {
        if a.len() != b.len() {
            return Err(format!("row {}: {} fields vs {}", i + 1, a.len(), b.len()));
        }
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            let col = h2.get(j).map(String::as_str).unwrap_or("?");
            match (x.trim().parse::<f64>(), y.trim().parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    let tol = tols.and_then(|t| t.get(col)).copied().unwrap_or(fallback);
                    let same = (x.is_nan() && y.is_nan()) || x == y || (x - y).abs() <= tol * (1.0 + y.abs());
                    if !same {
                        return Err(format!("row {} column {col}: {x:e} vs {y:e} (tol {tol:e})", i + 1));
                    }
                }
                _ if x == y => {}
                _ => return Err(format!("row {} column {col}: '{x}' vs '{y}'", i + 1)),
            }
        }
    }
    Ok(())
}

fn scenario_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> =
        std::fs::read_dir(dir)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    v.sort();
    Ok(v)
}

fn regress_one(path: &Path, golden: &Path, work: &Path) -> Vec<Entry> {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let entry = |file: &str, status, detail: String| Entry { scenario: stem.clone(), file: file.into(), status, detail };
    let s = match parse_scenario(path) {
        Ok(s) => s,
        Err(e) => return vec![entry("-", Status::Fail, e.to_string())],
    };
    let out = work.join(&stem);
    let rep = match runner::run(&s, Some(&out)) {
        Ok(r) => r,
        Err(e) => return vec![entry("-", Status::Fail, e.to_string())],
    };
    let gdir = golden.join(&stem);
    let tols: ColumnTols = std::fs::read_to_string(gdir.join("tolerances.json"))
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .unwrap_or_default();
    let mut produced: Vec<&String> = rep_files(&rep).into_iter().filter(|f| f.ends_with(".csv")).collect();
    produced.sort();
    let mut v = Vec::new();
    for f in produced {
        let got = std::fs::read_to_string(out.join(f)).unwrap_or_default();
        match std::fs::read_to_string(gdir.join(f)) {
            Ok(want) => match compare_csv(&got, &want, tols.get(f.as_str())) {
                Ok(()) => v.push(entry(f, Status::Pass, String::new())),
                Err(d) => v.push(entry(f, Status::Fail, d)),
            },
            Err(_) => v.push(entry(f, Status::New, "no golden copy".into())),
        }
    }
    v
}

fn rep_files(rep: &crate::report::RunReport) -> Vec<&String> {
    match rep.metadata.get("artifacts") {
        Some(serde_json::Value::Array(a)) => a.iter().filter_map(|v| if let serde_json::Value::String(s) = v { Some(s) } else { None }).collect(),
        _ => vec![],
    }
}

/// Re-run every scenario in `golden` into `work` and compare the CSV artifacts.
pub fn regress(golden: &Path, work: &Path, jobs: usize) -> std::io::Result<Summary> {
    let files = scenario_files(golden)?;
    let per = crate::parallel_map(&files, jobs, |p| regress_one(p, golden, work));
    Ok(Summary { entries: per.into_iter().flatten().collect() })
}
