use std::path::{Path, PathBuf};
use std::process::Command as Proc;

use annvv_experiments::report::Status;
use annvv_experiments::run::{read_manifest, INCOMPLETE_MARKER};
use annvv_experiments::{run_corpus, write_run, Command, ExperimentError, RunConfig};

fn corpus_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.toml"))
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).unwrap()
}

fn annvv(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_annvv")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn gb_report_matches_golden_file() {
    let out = run_corpus(&read("plane"), Command::Gb, &RunConfig::default()).unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/gb_plane.json");
    if std::env::var_os("ANNVV_BLESS").is_some() {
        std::fs::write(&golden, &out.report).unwrap();
    }
    assert_eq!(out.report, std::fs::read_to_string(golden).unwrap());
}

#[test]
fn same_seed_gives_identical_reports() {
    let doc = read("quartic");
    let cfg = RunConfig {
        samples: 4,
        ..RunConfig::default()
    };
    for command in [Command::Vv, Command::Ar, Command::Q] {
        let a = run_corpus(&doc, command, &cfg).unwrap();
        let b = run_corpus(&doc, command, &cfg).unwrap();
        assert_eq!(a.report, b.report, "{}", command.name());
        assert_eq!(a.digest, b.digest);
    }
    let other = RunConfig { seed: 1, ..cfg.clone() };
    let a = run_corpus(&doc, Command::Vv, &cfg).unwrap();
    let b = run_corpus(&doc, Command::Vv, &other).unwrap();
    assert_ne!(a.digest, b.digest);
}

#[test]
fn unknown_field_is_rejected_by_name() {
    let doc = "characteristic = 32003\nvariables = [\"x\"]\nrelation = []\n[ideals]\nm = [\"x\"]\n";
    match run_corpus(doc, Command::Gb, &RunConfig::default()) {
        Err(ExperimentError::Input(m)) => assert!(m.contains("relation"), "{m}"),
        other => panic!("{other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, doc).unwrap();
    let (code, _, stderr) = annvv(&["gb", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("relation"), "{stderr}");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "characteristic = 32003\nvariables = [\"x\", \"y\"]\n[ideals]\nline = [\"x\"]\n",
    )
    .unwrap();
    let (code, _, stderr) = annvv(&["gb", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("ideals.line"), "{stderr}");
    let (code, _, _) = annvv(&["gb", "/nonexistent/input.toml"]);
    assert_eq!(code, 2);
    let quartic = corpus_path("quartic");
    let (code, _, _) = annvv(&["gb", quartic.to_str().unwrap(), "--strategy", "guess"]);
    assert_eq!(code, 2);
    let (code, _, _) = annvv(&["gb", quartic.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn stdout_report_and_csv() {
    let quartic = corpus_path("quartic");
    let (code, stdout, _) = annvv(&["vv", quartic.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("ideal,table,index,degree,value\n"), "{stdout}");
    let (code, stdout, _) = annvv(&["gb", quartic.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["schema", "command", "digest", "config", "ring", "complete", "status", "entries"]
    );
}

#[test]
fn run_directories_are_append_only() {
    let doc = read("quartic");
    let cfg = RunConfig::default();
    let out = run_corpus(&doc, Command::Gb, &cfg).unwrap();
    let root = tempfile::tempdir().unwrap();
    let dir = write_run(root.path(), &doc, &cfg, &out, 5).unwrap();
    assert!(!dir.join(INCOMPLETE_MARKER).exists());
    let again = write_run(root.path(), &doc, &cfg, &out, 7).unwrap();
    assert_eq!(dir, again);
    assert!(dir.join("manifest.1.json").exists());
    assert_eq!(read_manifest(&dir).unwrap().wall_clock_ms, 5);

    let mut altered = out.clone();
    altered.report.push(' ');
    assert!(matches!(
        write_run(root.path(), &doc, &cfg, &altered, 9),
        Err(ExperimentError::ReplayMismatch(_))
    ));
}

#[test]
fn failed_entries_leave_the_incomplete_marker() {
    let doc = read("quartic");
    let cfg = RunConfig::default();
    let mut out = run_corpus(&doc, Command::Gb, &cfg).unwrap();
    out.complete = false;
    out.statuses[0].1 = Status::Error;
    let root = tempfile::tempdir().unwrap();
    let dir = write_run(root.path(), &doc, &cfg, &out, 1).unwrap();
    assert!(dir.join(INCOMPLETE_MARKER).exists());
    assert!(!read_manifest(&dir).unwrap().complete);
}
