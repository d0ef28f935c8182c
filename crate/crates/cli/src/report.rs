use chrono::{DateTime, Utc};
use homeo_core::heads::Verdict;
use homeo_core::topology::Holonomy;
use homeo_core::trainer::TrainReport;
use homeo_core::{ConditionReport, DiagnosticVerdict, HeadKind, Vec3};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything one invocation produced, as written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    /// Effective settings of the run: flags, or the training config.
    pub config: serde_json::Value,
    pub conditions: Vec<ConditionReport>,
    pub verdicts: Vec<LoopDiagnostic>,
    pub train: Option<TrainReport>,
    pub comparison: Option<Comparison>,
    pub verification: Option<Verification>,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
}

impl ReportDocument {
    pub fn new(command: &str, config: serde_json::Value, started_at: DateTime<Utc>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            tool: "homeo".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            conditions: Vec::new(),
            verdicts: Vec::new(),
            train: None,
            comparison: None,
            verification: None,
            started_at,
            finished_at: started_at,
        }
    }

    pub fn finish(mut self) -> Self {
        self.finished_at = Utc::now();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers and string keys")
    }
}

/// A full-turn loop pushed through a head's natural section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopDiagnostic {
    pub label: String,
    pub head: HeadKind,
    pub axis: Vec3,
    pub n_samples: usize,
    /// ℤ/2 class of the loop itself.
    pub loop_holonomy: Holonomy,
    /// Closure verdict of the section's values along the loop.
    pub section: DiagnosticVerdict,
    /// Largest section jump after 4× refinement.
    pub refined_max_jump: f64,
    pub persistence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed discrepancy, or failure count for counting suites.
    pub metric: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub first_failure: Option<String>,
    pub tolerance_scale: f64,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub head: HeadKind,
    pub config_file: String,
    pub status: RunStatus,
    pub error: Option<String>,
    pub mean_error: Option<f64>,
    pub max_error: Option<f64>,
    pub reconstruction: Verdict,
    pub witness_found: Option<bool>,
    pub persistent_loops: Option<usize>,
    pub probed_loops: Option<usize>,
    pub continuity: Verdict,
    pub homeomorphic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    /// Basis row passes both criteria and every other completed row fails one.
    pub only_basis_homeomorphic: bool,
    pub runs: Vec<TrainReport>,
}

fn verdict_of(passed: Option<bool>) -> Verdict {
    match passed {
        Some(true) => Verdict::Satisfied,
        Some(false) => Verdict::Violated,
        None => Verdict::NotApplicable,
    }
}

impl ComparisonRow {
    pub fn from_report(file: &str, r: &TrainReport) -> Self {
        Self {
            head: r.config.head,
            config_file: file.into(),
            status: RunStatus::Ok,
            error: None,
            mean_error: Some(r.final_error.mean),
            max_error: Some(r.final_error.max),
            reconstruction: verdict_of(Some(r.reconstruction_passed)),
            witness_found: Some(r.witness.found()),
            persistent_loops: Some(r.witness.persistent_count),
            probed_loops: Some(r.witness.probe_count),
            continuity: verdict_of(Some(r.continuity_passed)),
            homeomorphic: Some(r.homeomorphic()),
        }
    }

    pub fn failed(file: &str, head: HeadKind, error: String) -> Self {
        Self {
            head,
            config_file: file.into(),
            status: RunStatus::Failed,
            error: Some(error),
            mean_error: None,
            max_error: None,
            reconstruction: Verdict::NotApplicable,
            witness_found: None,
            persistent_loops: None,
            probed_loops: None,
            continuity: Verdict::NotApplicable,
            homeomorphic: None,
        }
    }
}

impl Comparison {
    pub fn new(rows: Vec<ComparisonRow>, runs: Vec<TrainReport>) -> Self {
        let basis = rows.iter().any(|r| r.head == HeadKind::Basis && r.homeomorphic == Some(true));
        let others = rows
            .iter()
            .filter(|r| r.head != HeadKind::Basis && r.status == RunStatus::Ok)
            .all(|r| r.homeomorphic == Some(false));
        Self { rows, only_basis_homeomorphic: basis && others, runs }
    }

    /// Aligned plain-text table, one row per head.
    pub fn render_table(&self) -> String {
        let header = [
            "head",
            "status",
            "mean err (rad)",
            "max err (rad)",
            "reconstruction",
            "witness",
            "continuity",
            "homeomorphic",
        ];
        let cell = |v: Verdict| match v {
            Verdict::Satisfied => "pass".to_string(),
            Verdict::Violated => "fail".to_string(),
            Verdict::NotApplicable => "-".to_string(),
        };
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        let rows: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.head.to_string(),
                    match r.status {
                        RunStatus::Ok => "ok".into(),
                        RunStatus::Failed => "FAILED".into(),
                    },
                    opt(r.mean_error),
                    opt(r.max_error),
                    cell(r.reconstruction),
                    match (r.witness_found, r.persistent_loops, r.probed_loops) {
                        (Some(true), Some(k), Some(n)) => format!("yes ({k}/{n})"),
                        (Some(false), _, _) => "no".into(),
                        _ => "-".into(),
                    },
                    cell(r.continuity),
                    r.homeomorphic.map_or("-".into(), |h| if h { "yes".into() } else { "no".into() }),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(header.to_vec());
        out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
        for row in &rows {
            out += &line(row.iter().map(String::as_str).collect());
        }
        for r in self.rows.iter().filter(|r| r.error.is_some()) {
            out += &format!("{}: {}\n", r.head, r.error.as_deref().unwrap_or_default());
        }
        out
    }
}
