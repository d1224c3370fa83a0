//! The per-ideal commands and their JSON results.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use annvv_core::blowup::{depth_assoc_graded, DepthStrategy};
use annvv_core::lc_estimator::{LcConfig, PieceStatus, QEstimate, QStatus};
use annvv_core::local_model::MPrimaryIdeal;
use annvv_core::superficial::{
    sample_superficial_sequence, vv_module, SuperficialConfig, SuperficialSequence, VvConfig,
    VvModuleReport, VvStatus,
};
use annvv_core::CoreError;

use crate::checks;
use crate::estimate::{
    ar_estimate, powers_scan, q_estimates, q_product, ArEstimate, EstimateConfig, PowersConfig,
};
use crate::report::{ideal_json, verdict_json, CsvRow, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Gb,
    DepthG,
    Vv,
    Ann,
    Ar,
    Q,
    Powers,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gb => "gb",
            Command::DepthG => "depth-g",
            Command::Vv => "vv",
            Command::Ann => "ann",
            Command::Ar => "ar",
            Command::Q => "q",
            Command::Powers => "powers",
            Command::VerifyAll => "verify-all",
        }
    }

    pub const ALL: [Command; 8] = [
        Command::Gb,
        Command::DepthG,
        Command::Vv,
        Command::Ann,
        Command::Ar,
        Command::Q,
        Command::Powers,
        Command::VerifyAll,
    ];
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            _ => Err(format!("unknown format '{s}' (expected json, csv or both)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Sequences sampled for `a_r` estimates.
    pub samples: usize,
    /// Degree bound for superficiality checks and the Koszul window.
    pub nmax: Option<u32>,
    /// Zero pieces required before a VV module counts as stabilized.
    pub window: u32,
    pub strategy: String,
    /// Sequence length; defaults to `dim A` (or `depth G + 1` in checks).
    pub r: Option<usize>,
    pub lmax: u32,
    /// Sequences sampled per power in the powers scan.
    pub powers_samples: usize,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            samples: 32,
            nmax: None,
            window: 3,
            strategy: "both".into(),
            r: None,
            lmax: 3,
            powers_samples: 8,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn superficial(&self) -> SuperficialConfig {
        SuperficialConfig {
            n_max: self.nmax,
            ..SuperficialConfig::default()
        }
    }

    pub fn vv(&self) -> VvConfig {
        VvConfig {
            window: self.window,
            ..VvConfig::default()
        }
    }

    pub fn estimate(&self) -> EstimateConfig {
        EstimateConfig {
            superficial: self.superficial(),
            vv: self.vv(),
        }
    }

    pub fn lc(&self) -> LcConfig {
        LcConfig::default()
    }

    pub fn powers(&self) -> PowersConfig {
        PowersConfig {
            samples: self.powers_samples,
            estimate: self.estimate(),
            lc: self.lc(),
        }
    }

    pub fn depth_strategy(&self) -> Result<DepthStrategy, String> {
        self.strategy.parse()
    }

    /// `r` for an ideal, clamped to `1..=dim A`.
    pub fn r_for(&self, ideal: &MPrimaryIdeal) -> usize {
        let d = ideal.local_ring().dim();
        self.r.unwrap_or(d).clamp(1, d.max(1))
    }
}

/// Result for one declared ideal.
#[derive(Clone, Debug)]
pub struct Entry {
    pub ideal: String,
    pub status: Status,
    pub message: Option<String>,
    pub result: Value,
    pub csv: Vec<CsvRow>,
}

impl Entry {
    fn new(ideal: &str) -> Entry {
        Entry {
            ideal: ideal.to_string(),
            status: Status::Ok,
            message: None,
            result: Value::Null,
            csv: Vec::new(),
        }
    }

    fn failed(mut self, e: &CoreError) -> Entry {
        self.status = status_of_error(e);
        self.message = Some(e.to_string());
        self.result = Value::Null;
        self.csv.clear();
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ideal": self.ideal,
            "status": self.status,
            "message": self.message,
            "result": self.result,
        })
    }
}

/// Exhausted heuristic windows count as instability, not failure.
pub fn status_of_error(e: &CoreError) -> Status {
    match e {
        CoreError::Unstabilized { .. } | CoreError::Sampling { .. } => Status::Unstable,
        _ => Status::Error,
    }
}

pub fn sequence_json(seq: &SuperficialSequence) -> Value {
    json!({
        "seed": seq.seed,
        "elements": seq.steps.iter().map(|s| s.element.to_string()).collect::<Vec<_>>(),
        "steps": seq.steps.iter().map(|s| json!({
            "seed": s.seed,
            "rejected": s.rejected,
            "n_max": s.certificate.n_max,
            "onset": s.certificate.onset,
            "c": s.certificate.c,
        })).collect::<Vec<_>>(),
    })
}

/// VV report as JSON; `None` when unstabilized, since its values are not
/// backed by a vanishing window.
pub fn vv_json(rep: &VvModuleReport, with_ann: bool) -> Option<Value> {
    let VvStatus::Stabilized { degree } = rep.status else {
        return None;
    };
    let mut v = json!({
        "r": rep.r,
        "pieces": rep.pieces.iter().map(|p| json!({
            "n": p.n,
            "length": p.length,
            "annihilator": p.annihilator.as_ref().map(ideal_json),
        })).collect::<Vec<_>>(),
        "total_length": rep.total_length,
        "stabilization_degree": degree,
    });
    if with_ann {
        v["annihilator"] = json!(rep.annihilator.as_ref().map(ideal_json));
        v["verdict"] = json!(rep.verdict.map(verdict_json));
    }
    Some(v)
}

fn vv_csv(name: &str, rep: &VvModuleReport) -> Vec<CsvRow> {
    rep.pieces
        .iter()
        .map(|p| CsvRow {
            ideal: name.into(),
            table: "vv_length".into(),
            index: rep.r as i64,
            degree: p.n as i64,
            value: p.length.to_string(),
        })
        .collect()
}

pub fn q_json(q: &QEstimate) -> Value {
    let stable = q.status == QStatus::Stable;
    json!({
        "i": q.i,
        "status": if stable { "stable" } else { "unstable" },
        "scanned": [q.scanned.0, q.scanned.1],
        "support": q.support,
        "lower_edge_nonzero": q.lower_edge_nonzero,
        "ideal": q.ideal.as_ref().map(ideal_json),
        "verdict": q.verdict.map(verdict_json),
        "pieces": q.pieces.iter().map(|p| json!({
            "n": p.n,
            "status": match p.status {
                PieceStatus::Stable => "stable",
                PieceStatus::Zero => "zero",
                PieceStatus::Unstable => "unstable",
            },
            "dim": p.dim,
            "onset_t": p.onset_t,
        })).collect::<Vec<_>>(),
    })
}

fn q_csv(name: &str, q: &QEstimate) -> Vec<CsvRow> {
    q.pieces
        .iter()
        .filter_map(|p| {
            p.dim.map(|d| CsvRow {
                ideal: name.into(),
                table: "lc_piece_dim".into(),
                index: q.i as i64,
                degree: p.n,
                value: d.to_string(),
            })
        })
        .collect()
}

pub fn ar_json(a: &ArEstimate, lower: Option<&annvv_kernel::Ideal>) -> Value {
    json!({
        "label": "upper estimate (contains a_r(I))",
        "r": a.r,
        "samples": a.samples,
        "seed": a.seed,
        "trace": a.trace.iter().map(|t| json!({
            "sample": t.sample,
            "seed": t.seed,
            "vanished": t.vanished,
            "fingerprint": t.fingerprint,
            "colength": t.running.colength().finite(),
            "descending": t.descending,
        })).collect::<Vec<_>>(),
        "ideal": ideal_json(&a.ideal),
        "verdict": verdict_json(a.verdict),
        "stabilized_at": a.stabilized_at,
        "lower_bound": lower.map(ideal_json),
        "lower_bound_label": lower.map(|_| "q_0...q_{r-1} (contained in a_r(I))"),
        "warnings": a.warnings,
    })
}

fn ar_csv(name: &str, a: &ArEstimate) -> Vec<CsvRow> {
    a.trace
        .iter()
        .map(|t| CsvRow {
            ideal: name.into(),
            table: "ar_trace_colength".into(),
            index: a.r as i64,
            degree: t.sample as i64,
            value: t.running.colength().finite().map(|c| c.to_string()).unwrap_or_default(),
        })
        .collect()
}

fn gb(name: &str, i: &MPrimaryIdeal) -> Entry {
    let mut e = Entry::new(name);
    e.result = json!({
        "generators": i.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "ideal": ideal_json(i.ideal()),
        "n_index": i.n_index(),
        "colength": i.colength(),
    });
    e
}

fn depth(name: &str, i: &MPrimaryIdeal, cfg: &RunConfig) -> Entry {
    let e = Entry::new(name);
    let strategy = match cfg.depth_strategy() {
        Ok(s) => s,
        Err(m) => return e.failed(&CoreError::Precondition(m)),
    };
    match depth_assoc_graded(i, strategy, cfg.seed) {
        Ok(d) => Entry {
            result: json!({
                "depth": d.depth,
                "strategy": cfg.strategy,
                "vv": d.vv.as_ref().map(|v| json!({
                    "depth": v.depth,
                    "trials": v.trials.iter().map(|(s, r, l)| json!({"seed": s, "r": r, "total_length": l})).collect::<Vec<_>>(),
                })),
                "resolution": d.resolution.as_ref().map(|r| json!({
                    "depth": r.depth,
                    "ambient_vars": r.ambient_vars,
                    "projective_dimension": r.projective_dimension,
                    "betti": r.betti.entries().map(|(k, j, b)| [k as u64, j as u64, b as u64]).collect::<Vec<_>>(),
                })),
            }),
            ..e
        },
        Err(err) => {
            let mut f = e.failed(&err);
            if matches!(err, CoreError::DepthMismatch { .. }) {
                f.status = Status::Fail;
            }
            f
        }
    }
}

fn vv(name: &str, i: &MPrimaryIdeal, cfg: &RunConfig, with_ann: bool) -> Entry {
    let e = Entry::new(name);
    let r = cfg.r_for(i);
    let run = || -> annvv_core::Result<(SuperficialSequence, VvModuleReport)> {
        let seq = sample_superficial_sequence(i, r, cfg.seed, &cfg.superficial())?;
        let rep = vv_module(&seq.elements(), i, &cfg.vv())?;
        Ok((seq, rep))
    };
    match run() {
        Err(err) => e.failed(&err),
        Ok((seq, rep)) => match vv_json(&rep, with_ann) {
            None => e.failed(&CoreError::Unstabilized {
                cap: rep.last_degree(),
                seed: cfg.seed,
            }),
            Some(v) => Entry {
                result: json!({"sequence": sequence_json(&seq), "module": v}),
                csv: vv_csv(name, &rep),
                ..e
            },
        },
    }
}

fn ar(name: &str, i: &MPrimaryIdeal, cfg: &RunConfig) -> Entry {
    let e = Entry::new(name);
    let r = cfg.r_for(i);
    let est = match ar_estimate(i, r, cfg.samples, cfg.seed, &cfg.estimate()) {
        Ok(a) => a,
        Err(err) => return e.failed(&err),
    };
    let d = i.local_ring().dim();
    let lower = q_estimates(i, d, cfg.seed, &cfg.lc())
        .ok()
        .filter(|qs| qs[..r].iter().all(|q| q.status == QStatus::Stable))
        .and_then(|qs| q_product(i, &qs[..r]));
    Entry {
        result: ar_json(&est, lower.as_ref()),
        csv: ar_csv(name, &est),
        ..e
    }
}

fn q(name: &str, i: &MPrimaryIdeal, cfg: &RunConfig) -> Entry {
    let e = Entry::new(name);
    let d = i.local_ring().dim();
    match q_estimates(i, d, cfg.seed, &cfg.lc()) {
        Err(err) => e.failed(&err),
        Ok(qs) => {
            let unstable = qs.iter().any(|q| q.status != QStatus::Stable);
            Entry {
                status: if unstable { Status::Unstable } else { Status::Ok },
                message: unstable.then(|| "some q_i did not stabilize".to_string()),
                result: json!({
                    "label": "experimental",
                    "estimates": qs.iter().map(q_json).collect::<Vec<_>>(),
                }),
                csv: qs.iter().flat_map(|q| q_csv(name, q)).collect(),
                ..e
            }
        }
    }
}

fn powers(name: &str, i: &MPrimaryIdeal, cfg: &RunConfig) -> Entry {
    let e = Entry::new(name);
    let r = cfg.r_for(i);
    match powers_scan(i, r, cfg.lmax, cfg.seed, &cfg.powers()) {
        Err(err) => e.failed(&err),
        Ok(rep) => {
            let mut status = Status::Ok;
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|row| {
                    if row.ar.is_err() || row.qs.is_err() {
                        status = status.worst(Status::Unstable);
                    }
                    json!({
                        "l": row.l,
                        "ar": match &row.ar { Ok(a) => ar_json(a, None), Err(m) => json!({"error": m}) },
                        "q": match &row.qs {
                            Ok(qs) => json!(qs.iter().map(q_json).collect::<Vec<_>>()),
                            Err(m) => json!({"error": m}),
                        },
                        "veronese": row.veronese,
                        "running": row.running.as_ref().map(ideal_json),
                        "running_verdict": row.running_verdict.map(verdict_json),
                        "running_contains_q_product": row.running_contains_product,
                    })
                })
                .collect();
            Entry {
                status,
                result: json!({
                    "r": rep.r,
                    "l_max": rep.l_max,
                    "rows": rows,
                    "tail_constant": rep.tail_constant,
                    "divisibility": rep.divisibility.iter().map(|(i, a, b, h)| json!({"i": i, "l": a, "l2": b, "holds": h})).collect::<Vec<_>>(),
                    "maximal": rep.maximal,
                    "note": "tail constancy and maximal elements are empirical observations on the scanned range",
                }),
                ..e
            }
        }
    }
}

fn verify_all(name: &str, i: &MPrimaryIdeal, cfg: &RunConfig) -> Entry {
    let e = Entry::new(name);
    let outcome = checks::verify_ideal(i, cfg);
    let status = outcome.iter().fold(Status::Pass, |s, c| s.worst(c.status));
    Entry {
        status,
        result: json!({ "checks": outcome.iter().map(|c| c.to_json()).collect::<Vec<_>>() }),
        ..e
    }
}

/// Run `command` on one ideal.
pub fn run_entry(command: Command, name: &str, i: &MPrimaryIdeal, cfg: &RunConfig) -> Entry {
    match command {
        Command::Gb => gb(name, i),
        Command::DepthG => depth(name, i, cfg),
        Command::Vv => vv(name, i, cfg, false),
        Command::Ann => vv(name, i, cfg, true),
        Command::Ar => ar(name, i, cfg),
        Command::Q => q(name, i, cfg),
        Command::Powers => powers(name, i, cfg),
        Command::VerifyAll => verify_all(name, i, cfg),
    }
}
