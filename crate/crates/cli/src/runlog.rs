//! Append-only JSON-lines run log.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const LOG_ENV: &str = "RAINBOW_LOG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
    pub subcommand: String,
    /// Every argument of the invocation; enough to replay it.
    pub params: Value,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub micros: u64,
}

impl RunRecord {
    pub fn new(subcommand: &str, params: Value, outcome: impl Into<String>, took: Duration) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        RunRecord {
            timestamp,
            subcommand: subcommand.into(),
            params,
            outcome: outcome.into(),
            certificate: None,
            micros: took.as_micros() as u64,
        }
    }
}

pub struct RunLog {
    path: Option<PathBuf>,
}

impl RunLog {
    /// The `--log` flag wins over the environment variable; neither means no log.
    pub fn resolve(flag: Option<PathBuf>) -> Self {
        let path = flag.or_else(|| std::env::var_os(LOG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        RunLog { path }
    }

    pub fn append(&self, record: &RunRecord) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening run log {}", path.display()))?;
        let line = serde_json::to_string(record)?;
        writeln!(file, "{line}")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appends_one_json_object_per_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.log");
        let log = RunLog::resolve(Some(path.clone()));
        for i in 0..3 {
            let mut r = RunRecord::new("find", serde_json::json!({ "seed": i }), "success", Duration::from_micros(5));
            r.certificate = Some("c.jsonl".into());
            log.append(&r).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let back: Vec<RunRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back.len(), 3);
        assert_eq!(back[2].params["seed"], 2);
        assert_eq!(back[0].micros, 5);
    }

    #[test]
    fn no_path_means_no_log() {
        let log = RunLog { path: None };
        log.append(&RunRecord::new("x", Value::Null, "ok", Duration::ZERO)).unwrap();
    }
}
