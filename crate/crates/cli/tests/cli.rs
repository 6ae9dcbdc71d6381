use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn semireg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semireg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timings_ms");
            map.remove("config");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn classify_reports_flags() {
    let o = semireg(&["classify", "zmod:4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["spec"], "zmod:4");
    assert_eq!(v["versions"]["schema"], "1");
    for f in ["local", "valuation", "bezout", "arithmetical", "semiregular", "edr", "one_semiregular", "two_semiregular", "one_qf", "two_qf"] {
        assert_eq!(v["flags"][f], true, "{f}");
    }
    assert_eq!(v["flags"]["vnr"], false);
    assert_eq!(v["flags"]["field"], false);

    let o = semireg(&["classify", "zmod:8", "--format", "markdown"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("| `zmod:8` | 8 |"));
}

#[test]
fn parse_errors_are_config_errors() {
    let o = semireg(&["classify", "prod:[zmod:2;zmod:3]"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 12"));
}

#[test]
fn oracle_certificates() {
    let o = semireg(&["oracle", "zmod:4", "--module", "cyclic:[2]", "--check", "1-periodic"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["certificate"]["kind"], "one-periodic");
    assert!(v["certificate"]["joints"].as_array().unwrap().iter().all(|j| j["exact"] == true));

    let o = semireg(&["oracle", "zmod:8", "--module", "cyclic:[2]", "--check", "1-periodic"]);
    assert_eq!(json(&o)["certificate"]["kind"], "negative");
    assert_eq!(json(&o)["certificate"]["search"]["exhaustive"], true);

    let o = semireg(&["oracle", "zmod:8", "--module", "cyclic:[2]", "--check", "2-periodic"]);
    let v = json(&o);
    assert_eq!(v["certificate"]["kind"], "two-periodic");
    let sizes: Vec<u64> = v["certificate"]["sequence"]["sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![2, 8, 8, 2]);

    let o = semireg(&["oracle", "zmod:16", "--module", "free:1", "--check", "1-periodic", "--max-oracle-size", "8"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn sweep_cubefree_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        "corpus = [\"zmod:2..20\"]\nchecks = [\"one_semiregular\"]\n[caps]\nmax_oracle_size = 16\n",
    );
    let one = semireg(&["sweep", "--config", &cfg, "--jobs", "1"]);
    assert_eq!(code(&one), 0, "{}", String::from_utf8_lossy(&one.stderr));
    let v = json(&one);
    let rings = v["rings"].as_array().unwrap();
    assert_eq!(rings.len(), 19);
    for (i, ring) in rings.iter().enumerate() {
        let n = i as u64 + 2;
        let cubefree = (2..=n).all(|p| n % (p * p * p) != 0);
        assert_eq!(ring["spec"], format!("zmod:{n}"));
        assert_eq!(ring["report"]["flags"]["one_semiregular"], cubefree, "zmod:{n}");
        assert_eq!(ring["checks"][0]["status"], "pass");
    }
    let four = semireg(&["sweep", "--config", &cfg, "--jobs", "4"]);
    let mut a = json(&one);
    let mut b = json(&four);
    strip_timings(&mut a);
    strip_timings(&mut b);
    assert_eq!(a, b);
}

#[test]
fn sweep_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "corpus = [\"zmod:2..3\"]\nchecks = [\"lattice\"]\n[output]\nformat = \"markdown\"\n");
    let corpus = write(dir.path(), "corpus.txt", "# small\nzmod:4\nprod:[zmod:2,zmod:3]\n\n");
    let out = dir.path().join("report.json");
    let o = semireg(&[
        "sweep",
        "--config",
        &cfg,
        "--corpus",
        &corpus,
        "--checks",
        "tgsr,pprod",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let specs: Vec<&str> = v["rings"].as_array().unwrap().iter().map(|r| r["spec"].as_str().unwrap()).collect();
    assert_eq!(specs, vec!["zmod:4", "prod:[zmod:2,zmod:3]"]);
    assert_eq!(v["config"]["checks"], serde_json::json!(["tgsr", "pprod"]));
    assert_eq!(v["summary"]["passed"], 4);
}

#[test]
fn sweep_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_check = write(dir.path(), "a.toml", "corpus = [\"zmod:2\"]\nchecks = [\"nonsense\"]\n");
    assert_eq!(code(&semireg(&["sweep", "--config", &bad_check])), 2);
    let bad_key = write(dir.path(), "b.toml", "corpus = [\"zmod:2\"]\nextra = 1\n");
    assert_eq!(code(&semireg(&["sweep", "--config", &bad_key])), 2);
    let bad_spec = write(dir.path(), "c.toml", "corpus = [\"zmod:\"]\n");
    assert_eq!(code(&semireg(&["sweep", "--config", &bad_spec])), 2);
    let zero_cap = write(dir.path(), "d.toml", "corpus = [\"zmod:2\"]\n[caps]\nmax_oracle_size = 0\n");
    assert_eq!(code(&semireg(&["sweep", "--config", &zero_cap])), 2);
    assert_eq!(code(&semireg(&["sweep", "--config", "/nonexistent/x.toml"])), 2);
}

#[test]
fn empty_corpus_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", "corpus = []\n");
    let o = semireg(&["sweep", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["rings"].as_array().unwrap().len(), 0);
    assert_eq!(v["summary"]["exit_code"], 0);
}

#[test]
fn oversized_ring_in_sweep_is_a_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.toml", "corpus = [\"zmod:2\", \"zmod:5000\"]\n");
    let o = semireg(&["sweep", "--config", &cfg]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["rings"][1]["error"]["kind"], "cap-exceeded");
    assert_eq!(v["rings"][0]["report"]["flags"]["field"], true);
}

#[test]
fn verify_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "tgsr.txt", "zmod:4\nzmod:6\nzmod:8\nzmod:12\n");
    let o = semireg(&["verify", "tgsr", "--corpus", &corpus, "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["check"], "tgsr");
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    assert!(results.iter().all(|r| r["status"] == "pass"));
    assert_eq!(results[2]["details"]["local_simple"], false);

    let corpus = write(dir.path(), "pair.txt", "trivext:(zmod:2;free:1)\n");
    let o = semireg(&["verify", "pfperiodic", "--corpus", &corpus]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["results"][0]["status"], "pass");

    let corpus = write(dir.path(), "dup.txt", "dup:(zmod:6;2)\n");
    let o = semireg(&["verify", "tfp", "--corpus", &corpus, "--format", "markdown"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("| `dup:(zmod:6;2)` | pass |"));

    assert_eq!(code(&semireg(&["verify", "bogus", "--corpus", &corpus])), 2);
}
