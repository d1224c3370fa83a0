//! JSON shapes shared by every command.

use annvv_core::local_model::MPrimaryVerdict;
use annvv_kernel::Ideal;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Pass,
    Skipped,
    Unstable,
    Fail,
    Error,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }

    /// Worst of two statuses: failures over instability over success.
    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok | Status::Pass | Status::Skipped => 0,
            Status::Unstable => 1,
            Status::Fail | Status::Error => 2,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdealJson {
    pub groebner: Vec<String>,
    pub colength: Option<u64>,
}

pub fn ideal_json(i: &Ideal) -> IdealJson {
    IdealJson {
        groebner: i.groebner().iter().map(|g| g.to_string()).collect(),
        colength: i.colength().finite(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictJson {
    pub kind: String,
    /// Smallest `N` with `m^N` inside, for m-primary ideals.
    pub n: Option<u32>,
    pub colength: Option<u64>,
}

pub fn verdict_json(v: MPrimaryVerdict) -> VerdictJson {
    match v {
        MPrimaryVerdict::Unit => VerdictJson {
            kind: "unit".into(),
            n: None,
            colength: Some(0),
        },
        MPrimaryVerdict::MPrimary { n, colength } => VerdictJson {
            kind: "m_primary".into(),
            n: Some(n),
            colength: Some(colength),
        },
        MPrimaryVerdict::NotMPrimary => VerdictJson {
            kind: "not_m_primary".into(),
            n: None,
            colength: None,
        },
    }
}

/// One row of the per-degree CSV table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CsvRow {
    pub ideal: String,
    pub table: String,
    pub index: i64,
    pub degree: i64,
    pub value: String,
}
