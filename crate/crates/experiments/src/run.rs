//! Running a command over a document, run directories, manifests, replay.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::commands::{run_entry, Command, Format, RunConfig};
use crate::error::{ExperimentError, Result};
use crate::input::Corpus;
use crate::report::Status;

pub const REPORT_SCHEMA: &str = "annvv-report/1";
pub const MANIFEST_SCHEMA: &str = "annvv-manifest/1";
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub command: Command,
    pub digest: String,
    pub report: String,
    pub csv: Option<String>,
    pub statuses: Vec<(String, Status)>,
    pub complete: bool,
    pub exit_code: i32,
}

/// Exit code for a set of statuses: 1 on failure, 3 on instability.
pub fn exit_code(statuses: &[Status]) -> i32 {
    let worst = statuses.iter().fold(Status::Ok, |a, &b| a.worst(b));
    match worst {
        Status::Fail | Status::Error => 1,
        Status::Unstable => 3,
        _ => 0,
    }
}

/// Combine exit codes of several runs: input errors, then failures, then
/// instability.
pub fn combine_exit_codes(codes: &[i32]) -> i32 {
    [2, 1, 3].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
}

pub fn digest(document: &str, command: Command, config: &RunConfig) -> String {
    let canon = json!({ "document": document, "command": command, "config": config });
    let mut h = Sha256::new();
    h.update(canon.to_string().as_bytes());
    hex::encode(h.finalize())
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Run `command` over every ideal of the document.
pub fn run_corpus(document: &str, command: Command, config: &RunConfig) -> Result<RunOutput> {
    let corpus = Corpus::parse(document)?;
    config
        .depth_strategy()
        .map_err(|m| ExperimentError::Input(format!("--strategy: {m}")))?;
    let digest = digest(document, command, config);
    let entries: Vec<_> = corpus
        .ideals
        .par_iter()
        .map(|(name, i)| run_entry(command, name, i, config))
        .collect();
    let statuses: Vec<(String, Status)> = entries.iter().map(|e| (e.ideal.clone(), e.status)).collect();
    let complete = entries.iter().all(|e| e.status != Status::Error);
    let overall = statuses.iter().fold(Status::Ok, |a, (_, b)| a.worst(*b));
    let ring = &corpus.ring;
    let doc = json!({
        "schema": REPORT_SCHEMA,
        "command": command,
        "digest": digest,
        "config": config,
        "ring": {
            "characteristic": corpus.document.characteristic,
            "variables": corpus.document.variables,
            "relations": corpus.document.relations,
            "weights": ring.ring().weights(),
            "dim": ring.dim(),
            "depth": ring.depth(),
            "cohen_macaulay": ring.is_cohen_macaulay(),
            "warnings": ring.warnings(),
        },
        "complete": complete,
        "status": overall,
        "entries": entries.iter().map(|e| e.to_json()).collect::<Vec<Value>>(),
    });
    let mut report = serde_json::to_string_pretty(&doc)?;
    report.push('\n');
    let csv = match config.format {
        Format::Json => None,
        Format::Csv | Format::Both => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &entries {
                for row in &e.csv {
                    w.serialize(row).map_err(|e| ExperimentError::Input(e.to_string()))?;
                }
            }
            let bytes = w.into_inner().map_err(|e| ExperimentError::Input(e.to_string()))?;
            Some(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    };
    let code = exit_code(&statuses.iter().map(|s| s.1).collect::<Vec<_>>());
    Ok(RunOutput {
        command,
        digest,
        report,
        csv,
        statuses,
        complete,
        exit_code: code,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportFile {
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StatusRecord {
    pub ideal: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunManifest {
    pub schema: String,
    pub digest: String,
    pub document: String,
    pub command: Command,
    pub config: RunConfig,
    pub version: String,
    pub wall_clock_ms: u64,
    pub statuses: Vec<StatusRecord>,
    pub reports: Vec<ReportFile>,
    pub complete: bool,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().expect("file inside a directory");
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().expect("file name").to_string_lossy()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Write a report without replacing different existing content.
fn write_once(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.exists() {
        if fs::read(path)? == bytes {
            return Ok(());
        }
        return Err(ExperimentError::ReplayMismatch(path.display().to_string()));
    }
    write_atomic(path, bytes)
}

pub fn run_dir(out: &Path, digest: &str) -> PathBuf {
    out.join(&digest[..16])
}

fn report_files(out: &RunOutput) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let name = out.command.name();
    files.push((format!("{name}.json"), out.report.clone().into_bytes()));
    if let Some(c) = &out.csv {
        files.push((format!("{name}.csv"), c.clone().into_bytes()));
    }
    files
}

/// Persist a run under `out/<digest>` and return the directory.
pub fn write_run(
    out_root: &Path,
    document: &str,
    config: &RunConfig,
    out: &RunOutput,
    wall_clock_ms: u64,
) -> Result<PathBuf> {
    let dir = run_dir(out_root, &out.digest);
    fs::create_dir_all(&dir)?;
    let marker = dir.join(INCOMPLETE_MARKER);
    write_atomic(&marker, b"run in progress or incomplete\n")?;
    let mut reports = Vec::new();
    for (file, bytes) in report_files(out) {
        write_once(&dir.join(&file), &bytes)?;
        reports.push(ReportFile {
            sha256: sha256_hex(&bytes),
            file,
        });
    }
    let manifest = RunManifest {
        schema: MANIFEST_SCHEMA.into(),
        digest: out.digest.clone(),
        document: document.to_string(),
        command: out.command,
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        wall_clock_ms,
        statuses: out
            .statuses
            .iter()
            .map(|(ideal, status)| StatusRecord {
                ideal: ideal.clone(),
                status: *status,
            })
            .collect(),
        reports,
        complete: out.complete,
    };
    let mut path = dir.join("manifest.json");
    let mut k = 1;
    while path.exists() {
        path = dir.join(format!("manifest.{k}.json"));
        k += 1;
    }
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    if out.complete {
        fs::remove_file(&marker)?;
    }
    Ok(dir)
}

pub fn read_manifest(dir: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(dir.join("manifest.json"))?;
    serde_json::from_str(&text).map_err(|e| ExperimentError::Input(format!("manifest: {e}")))
}

#[derive(Clone, Debug)]
pub struct ReplayOutcome {
    pub files: Vec<(String, bool)>,
    pub output: RunOutput,
}

impl ReplayOutcome {
    pub fn identical(&self) -> bool {
        self.files.iter().all(|f| f.1)
    }
}

/// Re-run the manifest in `dir` and compare every report byte for byte.
pub fn replay(dir: &Path) -> Result<ReplayOutcome> {
    let m = read_manifest(dir)?;
    let output = run_corpus(&m.document, m.command, &m.config)?;
    let fresh = report_files(&output);
    let mut files = Vec::new();
    for rf in &m.reports {
        let stored = fs::read(dir.join(&rf.file))?;
        let new = fresh.iter().find(|(f, _)| *f == rf.file).map(|(_, b)| b.as_slice());
        let same = new == Some(stored.as_slice()) && sha256_hex(&stored) == rf.sha256;
        files.push((rf.file.clone(), same));
    }
    Ok(ReplayOutcome { files, output })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_priority() {
        assert_eq!(exit_code(&[Status::Ok, Status::Pass]), 0);
        assert_eq!(exit_code(&[Status::Unstable, Status::Pass]), 3);
        assert_eq!(exit_code(&[Status::Unstable, Status::Fail]), 1);
        assert_eq!(combine_exit_codes(&[3, 1, 2]), 2);
        assert_eq!(combine_exit_codes(&[3, 0]), 3);
        assert_eq!(combine_exit_codes(&[]), 0);
    }
}
