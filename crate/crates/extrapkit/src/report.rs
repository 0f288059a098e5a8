//! Structured verification reports: one record per check with the measured
//! quantities, the pinned tolerance or bound, and the verdict. Reports are
//! deterministic given (config, seed); the timestamp is isolated in a single
//! header field so re-runs are byte-identical elsewhere.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub name: String,
    /// Measured quantities, in a stable order.
    pub measured: Vec<(String, f64)>,
    /// The pinned bound/tolerance this check is judged against.
    pub bound: f64,
    pub passed: bool,
    /// Free-form context (worst grid point, attained parameter, ...).
    pub detail: String,
}

impl CheckReport {
    pub fn new(id: &str, name: &str, bound: f64, passed: bool) -> Self {
        CheckReport {
            id: id.into(),
            name: name.into(),
            measured: Vec::new(),
            bound,
            passed,
            detail: String::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.measured.push((key.into(), value));
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite: suite.into(), checks, passed }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// The only non-deterministic field.
    pub timestamp: String,
    pub config_digest: String,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(config_digest: String, seed: u64, suites: Vec<SuiteReport>) -> Self {
        let passed = suites.iter().all(|s| s.passed);
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs().to_string())
            .unwrap_or_default();
        RunReport { timestamp, config_digest, seed, suites, passed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are serializable")
    }

    /// Flat CSV table: suite, check, metric, value, bound, passed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,metric,value,bound,passed\n");
        for s in &self.suites {
            for c in &s.checks {
                if c.measured.is_empty() {
                    let _ = writeln!(out, "{},{},,,{},{}", s.suite, c.id, c.bound, c.passed);
                }
                for (k, v) in &c.measured {
                    let _ =
                        writeln!(out, "{},{},{},{},{},{}", s.suite, c.id, k, v, c.bound, c.passed);
                }
            }
        }
        out
    }

    pub fn write_files(&self, dir: &Path) -> crate::error::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        std::fs::write(dir.join("report.csv"), self.to_csv())?;
        Ok(())
    }

    /// One pass/fail line per check, the format printed by `verify`.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for s in &self.suites {
            for c in &s.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let worst = c
                    .measured
                    .first()
                    .map(|(k, v)| format!("{k} = {v:.6e}"))
                    .unwrap_or_default();
                lines.push(format!(
                    "[{status}] {suite}/{id}: {name} ({worst}; bound {bound:.3e})",
                    suite = s.suite,
                    id = c.id,
                    name = c.name,
                    bound = c.bound
                ));
            }
        }
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_shapes() {
        let check = CheckReport::new("c1", "demo", 1.0, true).with("max_err", 0.5);
        let run = RunReport::new("abc".into(), 7, vec![SuiteReport::new("s", vec![check])]);
        assert!(run.passed);
        let csv = run.to_csv();
        assert!(csv.starts_with("suite,check,metric,value,bound,passed\n"));
        assert!(csv.contains("s,c1,max_err,0.5,1,true"));
        let back: RunReport = serde_json::from_str(&run.to_json()).unwrap();
        assert_eq!(back.suites[0].checks[0].measured[0].1, 0.5);
    }
}
