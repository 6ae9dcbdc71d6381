mod config;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use semireg::classify::classify_ring;
use semireg::periodicity::{is_1_periodic_oracle, is_2_periodic_oracle};
use semireg::spec::{parse_module_spec, parse_ring_expr, parse_ring_spec};
use semireg::verify::{is_registered, run_check, CheckCaps, CHECK_IDS};
use semireg::Error;

use config::{expand_corpus, read_config, read_corpus_file, Format, SweepConfig, DEFAULT_ORACLE_SIZE};
use report::{ErrorRecord, RingEntry, SweepReport, VerifyTranscript};

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "semireg", version, about = "Classify finite commutative rings and check periodicity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleCheck {
    #[value(name = "1-periodic")]
    One,
    #[value(name = "2-periodic")]
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every ring flag for one ring spec.
    Classify {
        spec: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify a corpus of rings and run the requested checks on each.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Corpus file, one ring spec or `zmod:A..B` range per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long)]
        max_oracle_size: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one check over every ring of a corpus file.
    Verify {
        check: String,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_SIZE)]
        max_oracle_size: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exhaustive periodicity search on one module.
    Oracle {
        spec: String,
        #[arg(long)]
        module: String,
        #[arg(long, value_enum)]
        check: OracleCheck,
        #[arg(long, default_value_t = DEFAULT_ORACLE_SIZE)]
        max_oracle_size: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Invariant(_) => EXIT_INVARIANT,
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Failure::config(format!("cannot write output: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::config(format!("cannot start {jobs} workers: {e}")))
}

fn check_corpus_syntax(corpus: &[String]) -> Result<(), Failure> {
    for spec in corpus {
        parse_ring_expr(spec).map_err(|e| Failure::config(format!("corpus entry `{spec}`: {e}")))?;
    }
    Ok(())
}

fn classify(spec: &str, format: Format) -> Result<u8, Failure> {
    let r = parse_ring_spec(spec)?;
    let rep = classify_ring(&r)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("report serializes"),
        Format::Markdown => report::flags_table(&[&rep]),
    };
    emit(&text, None)?;
    Ok(0)
}

fn sweep_entry(spec: &str, checks: &[String], caps: &CheckCaps) -> RingEntry {
    let r = match parse_ring_spec(spec) {
        Ok(r) => r,
        Err(e) => return RingEntry::failed(spec, &e),
    };
    let (report, error) = match classify_ring(&r) {
        Ok(rep) => (Some(rep), None),
        Err(e) => (None, Some(ErrorRecord::from(&e))),
    };
    let checks = checks
        .iter()
        .map(|id| run_check(id, &r, caps).expect("check ids validated"))
        .collect();
    RingEntry {
        spec: spec.to_string(),
        report,
        error,
        checks,
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    config: Option<PathBuf>,
    corpus: Option<PathBuf>,
    checks: Option<Vec<String>>,
    max_oracle_size: Option<usize>,
    jobs: Option<usize>,
    format: Option<Format>,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    let file = match &config {
        Some(path) => read_config(path).map_err(Failure::config)?,
        None => Default::default(),
    };
    let corpus = match corpus {
        Some(path) => read_corpus_file(&path).map_err(Failure::config)?,
        None => expand_corpus(&file.corpus).map_err(Failure::config)?,
    };
    let cfg = SweepConfig {
        corpus,
        checks: checks.unwrap_or(file.checks),
        max_oracle_size: max_oracle_size
            .or(file.caps.max_oracle_size)
            .unwrap_or(DEFAULT_ORACLE_SIZE),
        jobs: jobs.or(file.jobs).unwrap_or(1),
        format: format.or(file.output.format).unwrap_or_default(),
        out: out.map(|p| p.display().to_string()).or(file.output.path),
    };
    cfg.validate().map_err(Failure::config)?;
    check_corpus_syntax(&cfg.corpus)?;
    let caps = CheckCaps::with_oracle_size(cfg.max_oracle_size);
    let rings: Vec<RingEntry> = pool(cfg.jobs)?.install(|| {
        cfg.corpus
            .par_iter()
            .map(|spec| sweep_entry(spec, &cfg.checks, &caps))
            .collect()
    });
    let rep = SweepReport::new(&cfg, rings);
    let code = rep.summary.exit_code;
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("report serializes"),
        Format::Markdown => rep.markdown(),
    };
    emit(&text, cfg.out.as_ref().map(PathBuf::from).as_ref())?;
    Ok(code)
}

fn verify(
    check: &str,
    corpus: PathBuf,
    max_oracle_size: usize,
    jobs: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    if !is_registered(check) {
        return Err(Failure::config(format!(
            "unknown check `{check}`; registered: {}",
            CHECK_IDS.join(", ")
        )));
    }
    if max_oracle_size == 0 || jobs == 0 {
        return Err(Failure::config("caps and jobs must be positive"));
    }
    let corpus = read_corpus_file(&corpus).map_err(Failure::config)?;
    check_corpus_syntax(&corpus)?;
    let caps = CheckCaps::with_oracle_size(max_oracle_size);
    let results = pool(jobs)?.install(|| {
        corpus
            .par_iter()
            .map(|spec| match parse_ring_spec(spec) {
                Ok(r) => report::VerifyRow::Outcome(run_check(check, &r, &caps).expect("check id validated")),
                Err(e) => report::VerifyRow::RingError {
                    ring: spec.clone(),
                    error: ErrorRecord::from(&e),
                },
            })
            .collect()
    });
    let transcript = VerifyTranscript::new(check, results);
    let code = transcript.summary.exit_code;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&transcript).expect("transcript serializes"),
        Format::Markdown => transcript.markdown(),
    };
    emit(&text, out.as_ref())?;
    Ok(code)
}

fn oracle(spec: &str, module: &str, check: OracleCheck, max_oracle_size: usize) -> Result<u8, Failure> {
    if max_oracle_size == 0 {
        return Err(Failure::config("max_oracle_size must be positive"));
    }
    let r = parse_ring_spec(spec)?;
    let m = parse_module_spec(module, &r)?;
    let caps = CheckCaps::with_oracle_size(max_oracle_size).oracle;
    let cert = match check {
        OracleCheck::One => is_1_periodic_oracle(&m, &caps)?,
        OracleCheck::Two => is_2_periodic_oracle(&m, &caps)?,
    };
    let value = serde_json::json!({
        "schema_version": semireg::classify::SCHEMA_VERSION,
        "certificate": cert.record(),
    });
    emit(&serde_json::to_string_pretty(&value).expect("certificate serializes"), None)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { spec, format } => classify(&spec, format),
        Command::Sweep {
            config,
            corpus,
            checks,
            max_oracle_size,
            jobs,
            format,
            out,
        } => sweep(config, corpus, checks, max_oracle_size, jobs, format, out),
        Command::Verify {
            check,
            corpus,
            max_oracle_size,
            jobs,
            format,
            out,
        } => verify(&check, corpus, max_oracle_size, jobs, format, out),
        Command::Oracle {
            spec,
            module,
            check,
            max_oracle_size,
        } => oracle(&spec, &module, check, max_oracle_size),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
