//! Report schema, deterministic JSON/CSV rendering, and snapshots.
//!
//! Reports must be reproducible bit-for-bit given (seed, config): rows are
//! emitted in deterministic key order and floats render with Rust's
//! shortest round-trip formatting, which serde_json also uses.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// One check/report row. `pass` is None for report-only (snapshot) rows and
/// carries a verdict only for exact/explicit-constant checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundRow {
    pub suite: String,
    pub q: u64,
    pub index: u64,
    pub d: u64,
    /// extra parameters (x, epsilon, K, z, ...), sorted by key
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs/rhs when rhs > 0, else 0
    pub ratio: f64,
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub notes: String,
}

impl BoundRow {
    pub fn new(suite: &str, q: u64, index: u64, d: u64) -> BoundRow {
        BoundRow {
            suite: suite.to_string(),
            q,
            index,
            d,
            params: BTreeMap::new(),
            lhs: 0.0,
            rhs: 0.0,
            ratio: 0.0,
            pass: None,
            notes: String::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn finish(mut self, lhs: f64, rhs: f64, pass: Option<bool>) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        self.pass = pass;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub failures: usize,
    pub max_ratio: f64,
    pub snapshot_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    /// canonical `key=value` config lines this run used
    pub config: Vec<String>,
    pub rows: Vec<BoundRow>,
    pub summary: Summary,
}

impl Report {
    pub fn assemble(suite: &str, config: Vec<String>, mut rows: Vec<BoundRow>) -> Report {
        rows.sort_by(|a, b| {
            (a.q, a.index, format_params(&a.params)).cmp(&(b.q, b.index, format_params(&b.params)))
        });
        let failures = rows.iter().filter(|r| r.pass == Some(false)).count();
        let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
        let snapshot_hash = hash_rows(&rows);
        Report {
            suite: suite.to_string(),
            config,
            summary: Summary { n: rows.len(), failures, max_ratio, snapshot_hash },
            rows,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV mirror with identical columns.
    pub fn to_csv(&self) -> String {
        let mut keys: Vec<String> = Vec::new();
        for row in &self.rows {
            for k in row.params.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
        keys.sort();
        let mut out = String::from("suite,q,index,d");
        for k in &keys {
            out.push(',');
            out.push_str(k);
        }
        out.push_str(",lhs,rhs,ratio,pass,notes\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{},{}", row.suite, row.q, row.index, row.d));
            for k in &keys {
                out.push(',');
                if let Some(v) = row.params.get(k) {
                    out.push_str(&format_f64(*v));
                }
            }
            let pass = match row.pass {
                None => "",
                Some(true) => "true",
                Some(false) => "false",
            };
            out.push_str(&format!(
                ",{},{},{},{},{}\n",
                format_f64(row.lhs),
                format_f64(row.rhs),
                format_f64(row.ratio),
                pass,
                row.notes
            ));
        }
        out
    }
}

/// Shortest round-trip rendering (Rust's default float Display).
pub fn format_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v}")
    }
}

fn format_params(params: &BTreeMap<String, f64>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={}", format_f64(*v)))
        .collect::<Vec<_>>()
        .join(",")
}

fn hash_rows(rows: &[BoundRow]) -> String {
    let mut hasher = Sha256::new();
    for row in rows {
        hasher.update(row.suite.as_bytes());
        hasher.update(row.q.to_le_bytes());
        hasher.update(row.index.to_le_bytes());
        hasher.update(row.d.to_le_bytes());
        hasher.update(format_params(&row.params).as_bytes());
        hasher.update(format_f64(row.lhs).as_bytes());
        hasher.update(format_f64(row.rhs).as_bytes());
        hasher.update(format_f64(row.ratio).as_bytes());
    }
    hex_string(&hasher.finalize())
}

pub fn hash_config(config: &[String]) -> String {
    let mut sorted = config.to_vec();
    sorted.sort();
    let mut hasher = Sha256::new();
    for line in sorted {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Snapshot of a suite run: the config hash plus summary statistics and
/// per-row ratios. Compare fails when any ratio regresses beyond the
/// tolerance or when the config hash differs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Snapshot {
    pub suite: String,
    pub config_hash: String,
    pub summary: Summary,
    pub ratios: Vec<f64>,
}

impl Snapshot {
    pub fn of_report(report: &Report) -> Snapshot {
        Snapshot {
            suite: report.suite.clone(),
            config_hash: hash_config(&report.config),
            summary: report.summary.clone(),
            ratios: report.rows.iter().map(|r| r.ratio).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    pub fn from_json(s: &str) -> Result<Snapshot, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SnapshotOutcome {
    Match,
    ConfigMismatch,
    RowCountMismatch,
    Regressed { index: usize, old: String, new: String },
}

/// Relative comparison of per-row ratios against a stored snapshot.
pub fn compare_snapshots(old: &Snapshot, new: &Snapshot, tolerance: f64) -> SnapshotOutcome {
    if old.config_hash != new.config_hash || old.suite != new.suite {
        return SnapshotOutcome::ConfigMismatch;
    }
    if old.ratios.len() != new.ratios.len() {
        return SnapshotOutcome::RowCountMismatch;
    }
    for (i, (&a, &b)) in old.ratios.iter().zip(&new.ratios).enumerate() {
        let scale = a.abs().max(1e-12);
        if (a - b).abs() > tolerance * scale {
            return SnapshotOutcome::Regressed {
                index: i,
                old: format_f64(a),
                new: format_f64(b),
            };
        }
    }
    SnapshotOutcome::Match
}
