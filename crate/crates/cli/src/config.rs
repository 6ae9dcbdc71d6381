use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use semireg::verify::{is_registered, CHECK_IDS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsSection {
    pub max_oracle_size: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<String>,
}

/// The sweep config file as written.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub corpus: Vec<String>,
    #[serde(default)]
    pub checks: Vec<String>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub caps: CapsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub corpus: Vec<String>,
    pub checks: Vec<String>,
    pub max_oracle_size: usize,
    pub jobs: usize,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<String>,
}

pub const DEFAULT_ORACLE_SIZE: usize = 16;

impl SweepConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_oracle_size == 0 {
            return Err("max_oracle_size must be positive".into());
        }
        if self.jobs == 0 {
            return Err("jobs must be positive".into());
        }
        if let Some(bad) = self.checks.iter().find(|c| !is_registered(c)) {
            return Err(format!("unknown check `{bad}`; registered: {}", CHECK_IDS.join(", ")));
        }
        Ok(())
    }
}

pub fn read_config(path: &Path) -> Result<ConfigFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

/// Expands `zmod:A..B` (inclusive) into single specs; other entries pass
/// through unchanged.
pub fn expand_corpus(entries: &[String]) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for entry in entries {
        let entry = entry.trim();
        if let Some(range) = entry.strip_prefix("zmod:").filter(|r| r.contains("..")) {
            let (lo, hi) = range.split_once("..").expect("contains ..");
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad range bound `{s}` in `{entry}`"))
            };
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo == 0 || lo > hi {
                return Err(format!("empty or invalid range `{entry}`"));
            }
            out.extend((lo..=hi).map(|n| format!("zmod:{n}")));
        } else {
            out.push(entry.to_string());
        }
    }
    Ok(out)
}

/// One entry per non-blank line; `#` starts a comment.
pub fn read_corpus_file(path: &Path) -> Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read corpus {}: {e}", path.display()))?;
    let lines: Vec<String> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    expand_corpus(&lines)
}
