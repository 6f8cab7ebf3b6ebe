//! Audit reports and their hashes.
//!
//! `contentHash` covers every field except `timings` and itself, so two runs
//! on the same config produce the same hash.

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::claims::ClaimId;
use super::config::AuditConfig;
use super::{AuditOptions, Instance, Verdict, Witness};
use crate::filtration::ValidationVerdict;

pub const NU_SEMANTICS: &str = "extended (0↦∞)";

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditReport {
    pub header: ReportHeader,
    pub config: AuditConfig,
    pub instances: Vec<InstanceSummary>,
    pub cells: Vec<ReportCell>,
    pub summary: Summary,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub nu_semantics: String,
    pub config_hash: String,
    pub content_hash: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceSummary {
    pub label: String,
    pub fingerprint: String,
    pub ring: String,
    pub filtration: String,
    pub sample_size: usize,
    pub pairs_planned: usize,
    pub exhaustive: bool,
    pub max_level: usize,
    pub validation: String,
    pub stabilization_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportCell {
    pub claim: ClaimId,
    pub instance: String,
    pub status: String,
    pub pairs_tested: u64,
    pub inconclusive: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub cells: usize,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Timings {
    pub total_micros: u64,
    pub cell_micros: Vec<u64>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl ReportCell {
    fn new(claim: ClaimId, instance: &Instance, verdict: Verdict) -> Self {
        let status = verdict.status().to_string();
        let pairs_tested = verdict.pairs_tested();
        let inconclusive = verdict.inconclusive();
        let (witness, reason) = match verdict {
            Verdict::Holds { .. } => (None, None),
            Verdict::Fails { witness, .. } => (Some(witness), None),
            Verdict::Inconclusive { reason, .. } => (None, Some(reason)),
        };
        ReportCell {
            claim,
            instance: instance.label.clone(),
            status,
            pairs_tested,
            inconclusive,
            witness,
            reason,
        }
    }

    /// `CLAIM  instance  status[  detail]`
    pub fn line(&self) -> String {
        let mut s = format!("{}  {}  {}", self.claim, self.instance, self.status);
        if let Some(w) = &self.witness {
            s += &format!(
                "  a={} b={} {:?}: {} vs {}",
                w.a, w.b, w.relation, w.lhs, w.rhs
            );
        }
        if let Some(r) = &self.reason {
            s += &format!("  {r}");
        }
        s
    }
}

impl InstanceSummary {
    fn new(inst: &Instance, depth: usize) -> Self {
        let plan = inst.pair_plan();
        let validation = match inst.filtration.validate(depth) {
            ValidationVerdict::Holds { depth } => format!("holds to depth {depth}"),
            ValidationVerdict::Fails(v) => format!("fails: {v}"),
        };
        InstanceSummary {
            label: inst.label.clone(),
            fingerprint: inst.fingerprint.clone(),
            ring: inst.ring().to_string(),
            filtration: inst.filtration.to_string(),
            sample_size: inst.elements.len(),
            pairs_planned: plan.pairs.len(),
            exhaustive: plan.exhaustive,
            max_level: inst.max_level,
            validation,
            stabilization_index: inst.filtration.stabilization_index(inst.max_level),
        }
    }
}

impl AuditReport {
    pub(crate) fn assemble(
        config: &AuditConfig,
        instances: &[Instance],
        opts: &AuditOptions,
        cells: &[(usize, ClaimId)],
        verdicts: Vec<Verdict>,
        cell_micros: Vec<u64>,
        total_micros: u64,
    ) -> AuditReport {
        let cells: Vec<ReportCell> = cells
            .iter()
            .zip(verdicts)
            .map(|(&(i, claim), v)| ReportCell::new(claim, &instances[i], v))
            .collect();
        let count = |status: &str| cells.iter().filter(|c| c.status == status).count();
        let (holds, fails, inconclusive) = (count("holds"), count("fails"), count("inconclusive"));
        let exit_code = if fails > 0 {
            1
        } else if inconclusive > 0 {
            3
        } else {
            0
        };
        let mut report = AuditReport {
            header: ReportHeader {
                tool: "filtval".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                nu_semantics: NU_SEMANTICS.to_string(),
                config_hash: sha256_hex(config.canonical_json().as_bytes()),
                content_hash: String::new(),
            },
            config: config.clone(),
            instances: instances
                .iter()
                .map(|inst| InstanceSummary::new(inst, opts.validate_depth))
                .collect(),
            summary: Summary {
                cells: cells.len(),
                holds,
                fails,
                inconclusive,
                exit_code,
            },
            cells,
            timings: Timings {
                total_micros,
                cell_micros,
            },
        };
        report.header.content_hash = report.compute_content_hash();
        report
    }

    /// Hash of the report with `timings` and `header.contentHash` removed,
    /// serialized with sorted keys.
    pub fn compute_content_hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        let obj = value.as_object_mut().expect("object");
        obj.remove("timings");
        if let Some(header) = obj.get_mut("header").and_then(|h| h.as_object_mut()) {
            header.remove("contentHash");
        }
        sha256_hex(value.to_string().as_bytes())
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
