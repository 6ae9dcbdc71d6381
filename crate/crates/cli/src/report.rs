use serde::Serialize;

use semireg::classify::{ClassificationReport, SCHEMA_VERSION};
use semireg::verify::{CheckOutcome, Status};
use semireg::Error;

use crate::config::SweepConfig;
use crate::{EXIT_CAP, EXIT_INVARIANT};

#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::RingMismatch(_) => "ring-mismatch",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::Precondition(_) => "precondition",
            Error::Invariant(_) => "invariant",
            Error::Parse { .. } => "parse",
        };
        ErrorRecord {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingEntry {
    pub spec: String,
    pub report: Option<ClassificationReport>,
    pub error: Option<ErrorRecord>,
    pub checks: Vec<CheckOutcome>,
}

impl RingEntry {
    pub fn failed(spec: &str, e: &Error) -> RingEntry {
        RingEntry {
            spec: spec.to_string(),
            report: None,
            error: Some(e.into()),
            checks: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub rings: usize,
    pub ring_errors: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cap_exceeded: usize,
    pub errored: usize,
    pub exit_code: u8,
}

impl Summary {
    fn count(&mut self, status: Status) {
        match status {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failed += 1,
            Status::Skip => self.skipped += 1,
            Status::CapExceeded => self.cap_exceeded += 1,
            Status::Error => self.errored += 1,
        }
    }

    fn count_error(&mut self, e: &ErrorRecord) {
        if e.kind == "cap-exceeded" {
            self.cap_exceeded += 1;
        } else {
            self.ring_errors += 1;
        }
    }

    /// Anything short of a clean run is a failure (1), except runs whose
    /// only problem is an exceeded cap (3).
    fn finish(&mut self) {
        self.exit_code = if self.failed + self.errored + self.ring_errors > 0 {
            EXIT_INVARIANT
        } else if self.cap_exceeded > 0 {
            EXIT_CAP
        } else {
            0
        };
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub config: SweepConfig,
    pub rings: Vec<RingEntry>,
    pub summary: Summary,
}

impl SweepReport {
    pub fn new(cfg: &SweepConfig, rings: Vec<RingEntry>) -> SweepReport {
        let mut summary = Summary {
            rings: rings.len(),
            ..Default::default()
        };
        for entry in &rings {
            if let Some(e) = &entry.error {
                summary.count_error(e);
            }
            for c in &entry.checks {
                summary.count(c.status);
            }
        }
        summary.finish();
        SweepReport {
            schema_version: SCHEMA_VERSION,
            command: "sweep",
            config: cfg.clone(),
            rings,
            summary,
        }
    }

    pub fn markdown(&self) -> String {
        let reports: Vec<&ClassificationReport> = self.rings.iter().filter_map(|e| e.report.as_ref()).collect();
        let mut out = String::from("# Sweep\n\n");
        out.push_str(&flags_table(&reports));
        let errors: Vec<&RingEntry> = self.rings.iter().filter(|e| e.error.is_some()).collect();
        if !errors.is_empty() {
            out.push_str("\n## Errors\n\n| spec | kind | message |\n|---|---|---|\n");
            for e in errors {
                let err = e.error.as_ref().expect("filtered");
                out.push_str(&format!("| `{}` | {} | {} |\n", e.spec, err.kind, err.message));
            }
        }
        if !self.config.checks.is_empty() {
            out.push_str("\n## Checks\n\n| spec |");
            for c in &self.config.checks {
                out.push_str(&format!(" {c} |"));
            }
            out.push_str("\n|---|");
            out.push_str(&"---|".repeat(self.config.checks.len()));
            out.push('\n');
            for e in &self.rings {
                out.push_str(&format!("| `{}` |", e.spec));
                for c in &e.checks {
                    out.push_str(&format!(" {} |", status_word(c.status)));
                }
                out.push('\n');
            }
        }
        out.push_str(&summary_line(&self.summary));
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skip => "skip",
        Status::CapExceeded => "cap",
        Status::Error => "error",
    }
}

fn summary_line(s: &Summary) -> String {
    format!(
        "\n{} rings: {} passed, {} failed, {} skipped, {} over cap, {} errors; exit {}\n",
        s.rings,
        s.passed,
        s.failed,
        s.skipped,
        s.cap_exceeded,
        s.errored + s.ring_errors,
        s.exit_code
    )
}

const FLAG_NAMES: [&str; 12] = [
    "local",
    "field",
    "vnr",
    "valuation",
    "arithmetical",
    "bezout",
    "semiregular",
    "edr",
    "one_semiregular",
    "two_semiregular",
    "one_qf",
    "two_qf",
];

pub fn flags_table(reports: &[&ClassificationReport]) -> String {
    let mut out = String::from("| spec | size |");
    for f in FLAG_NAMES {
        out.push_str(&format!(" {f} |"));
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---|".repeat(FLAG_NAMES.len()));
    out.push('\n');
    for r in reports {
        let flags = serde_json::to_value(&r.flags).expect("flags serialize");
        out.push_str(&format!("| `{}` | {} |", r.spec, r.size));
        for f in FLAG_NAMES {
            let mark = if flags[f].as_bool() == Some(true) { "yes" } else { "no" };
            out.push_str(&format!(" {mark} |"));
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum VerifyRow {
    Outcome(CheckOutcome),
    RingError { ring: String, error: ErrorRecord },
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyTranscript {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub check: String,
    pub results: Vec<VerifyRow>,
    pub summary: Summary,
}

impl VerifyTranscript {
    pub fn new(check: &str, results: Vec<VerifyRow>) -> VerifyTranscript {
        let mut summary = Summary {
            rings: results.len(),
            ..Default::default()
        };
        for row in &results {
            match row {
                VerifyRow::Outcome(c) => summary.count(c.status),
                VerifyRow::RingError { error, .. } => summary.count_error(error),
            }
        }
        summary.finish();
        VerifyTranscript {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            check: check.to_string(),
            results,
            summary,
        }
    }

    pub fn markdown(&self) -> String {
        let mut out = format!("# Verify `{}`\n\n| ring | status |\n|---|---|\n", self.check);
        for row in &self.results {
            match row {
                VerifyRow::Outcome(c) => out.push_str(&format!("| `{}` | {} |\n", c.ring, status_word(c.status))),
                VerifyRow::RingError { ring, error } => {
                    out.push_str(&format!("| `{ring}` | error: {} |\n", error.message))
                }
            }
        }
        out.push_str(&summary_line(&self.summary));
        out
    }
}
