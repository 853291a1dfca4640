//! JSON shapes for everything the tool prints with `--json`.
//!
//! All indices are 1-based. Schemas live in `docs/schemas/`; bump
//! [`SCHEMA_VERSION`] when a shape changes.

use geotype_core::paclass::{Status, Verdict};
use geotype_core::refine::{Comparison, Invariants, RefinementBookkeeping};
use geotype_core::singular::SingularityReport;
use geotype_core::symbolic::{BoundaryCode, PeriodicBoundaryCode};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::PseudoAnosov => "PseudoAnosov",
        Status::NotPseudoAnosov => "NotPseudoAnosov",
        Status::Inconclusive => "Inconclusive",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub kind: &'static str,
    pub m: usize,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub status: &'static str,
    pub witness: Option<WitnessJson>,
    pub iterates_checked: usize,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        VerdictJson {
            status: status_name(v.status),
            witness: v.witness.as_ref().map(|w| WitnessJson { kind: w.kind.name(), m: w.m, indices: w.indices() }),
            iterates_checked: v.iterates_checked,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassJson {
    pub size: usize,
    pub prongs: usize,
    pub spine: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityJson {
    pub genus: u64,
    pub euler_characteristic_quarters: i64,
    pub classes: Vec<ClassJson>,
    pub spine_count: usize,
    pub prongs: Vec<usize>,
}

impl From<&SingularityReport> for SingularityJson {
    fn from(r: &SingularityReport) -> Self {
        SingularityJson {
            genus: r.genus,
            euler_characteristic_quarters: r.euler_characteristic_quarters,
            classes: r
                .classes
                .iter()
                .map(|c| ClassJson { size: c.size(), prongs: c.prongs, spine: c.is_spine() })
                .collect(),
            spine_count: r.spine_count,
            prongs: r.prongs.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelJson {
    pub i: usize,
    pub eps: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryCodeJson {
    pub label: LabelJson,
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
}

impl From<&BoundaryCode> for BoundaryCodeJson {
    fn from(c: &BoundaryCode) -> Self {
        BoundaryCodeJson {
            label: LabelJson { i: c.label.i + 1, eps: c.label.eps },
            preperiod: c.preperiod.iter().map(|x| x + 1).collect(),
            period: c.period.iter().map(|x| x + 1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicCodeJson {
    pub iota: usize,
    pub s_label: LabelJson,
    pub u_label: LabelJson,
    pub word: Vec<usize>,
}

impl From<&PeriodicBoundaryCode> for PeriodicCodeJson {
    fn from(c: &PeriodicBoundaryCode) -> Self {
        PeriodicCodeJson {
            iota: c.iota + 1,
            s_label: LabelJson { i: c.s_label.i + 1, eps: c.s_label.eps },
            u_label: LabelJson { i: c.u_label.i + 1, eps: c.u_label.eps },
            word: c.word.iter().map(|x| x + 1).collect(),
        }
    }
}

/// One row of a refinement sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotJson {
    pub rectangle: usize,
    pub slot: usize,
    pub new_label: usize,
}

pub fn sidecar(bk: &RefinementBookkeeping) -> Vec<SlotJson> {
    bk.rects.iter().map(|r| SlotJson { rectangle: r.parent + 1, slot: r.slab, new_label: r.label + 1 }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantsJson {
    pub genus: u64,
    pub prongs: Vec<usize>,
    pub spine_count: usize,
    pub dilatation: f64,
}

impl From<&Invariants> for InvariantsJson {
    fn from(x: &Invariants) -> Self {
        InvariantsJson {
            genus: x.genus,
            prongs: x.prongs.clone(),
            spine_count: x.spine_count,
            dilatation: x.dilatation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonJson {
    pub first: InvariantsJson,
    pub second: InvariantsJson,
    pub verdict: &'static str,
}

impl From<&Comparison> for ComparisonJson {
    fn from(c: &Comparison) -> Self {
        ComparisonJson { first: (&c.first).into(), second: (&c.second).into(), verdict: c.verdict.text() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        InputDigest { path: path.to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

/// Envelope around every `--json` result.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub result: serde_json::Value,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<InputDigest>, result: serde_json::Value, wall_time_ms: u64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs,
            result,
            wall_time_ms,
        }
    }
}
