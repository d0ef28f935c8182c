//! Library side of the `homeo` binary: report types, the verification
//! suites and the subcommand drivers.

pub mod diagnose;
pub mod report;
pub mod verify;

use chrono::Utc;
use homeo_core::heads::check_necessary_conditions;
use homeo_core::topology::write_witness_csv;
use homeo_core::trainer::{train, TrainConfig, TrainReport};
use homeo_core::HeadKind;
use report::{Comparison, ComparisonRow, ReportDocument};
use serde_json::json;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Usage = 1,
    Verification = 2,
    Training = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { exit: Exit::Usage, message: message.into() }
    }

    pub fn training(message: impl Into<String>) -> Self {
        Self { exit: Exit::Training, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub json: bool,
    pub samples: Option<usize>,
    pub threshold: Option<f64>,
}

/// What a subcommand hands back to `main`: the document, the text shown
/// without `--json`, and the exit status.
pub struct Outcome {
    pub report: ReportDocument,
    pub text: String,
    pub exit: Exit,
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError { exit: Exit::Usage, message: format!("cannot write {}: {e}", path.display()) }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| io_error(&path, e))
}

pub fn loss_csv(report: &TrainReport) -> String {
    let mut s = String::from("step,loss\n");
    for p in &report.loss_curve {
        s += &format!("{},{}\n", p.step, p.loss);
    }
    s
}

fn witness_csv(report: &TrainReport) -> Option<Vec<u8>> {
    let w = report.witness.witness.as_ref()?;
    let mut buf = Vec::new();
    write_witness_csv(std::slice::from_ref(w), &mut buf).expect("writing to memory");
    Some(buf)
}

fn write_run_files(dir: &Path, suffix: &str, report: &TrainReport) -> Result<(), CliError> {
    write_file(dir, &format!("loss{suffix}.csv"), loss_csv(report).as_bytes())?;
    if let Some(csv) = witness_csv(report) {
        write_file(dir, &format!("witness{suffix}.csv"), &csv)?;
    }
    Ok(())
}

pub fn write_report(dir: &Path, report: &ReportDocument) -> Result<(), CliError> {
    write_file(dir, "report.json", report.to_json().as_bytes())
}

pub fn cmd_verify(common: &Common, tolerance_scale: f64) -> Result<Outcome, CliError> {
    let started = Utc::now();
    let seed = common.seed.unwrap_or(0);
    let samples = common.samples.unwrap_or(1_000);
    let v = verify::run(seed, samples, tolerance_scale);
    let mut text = String::new();
    for s in &v.suites {
        text +=
            &format!("{} {:<26} {} [{} cases]\n", if s.passed { "PASS" } else { "FAIL" }, s.name, s.detail, s.cases);
    }
    let passed = v.suites.iter().filter(|s| s.passed).count();
    text += &format!("{passed}/{} suites passed\n", v.suites.len());
    let exit = if v.passed { Exit::Success } else { Exit::Verification };
    let config = json!({ "seed": seed, "samples": samples, "tolerance_scale": tolerance_scale });
    let mut report = ReportDocument::new("verify", config, started);
    report.conditions = HeadKind::ALL.iter().map(|k| check_necessary_conditions(*k)).collect();
    report.verification = Some(v);
    let report = report.finish();
    if let Some(dir) = &common.out {
        write_report(dir, &report)?;
    }
    Ok(Outcome { report, text, exit })
}

pub fn cmd_diagnose(common: &Common, head: HeadKind) -> Result<Outcome, CliError> {
    let started = Utc::now();
    let samples = common.samples.unwrap_or(256);
    let threshold = common.threshold.unwrap_or(0.1);
    let conditions = check_necessary_conditions(head);
    let loops = diagnose::section_loops(head, samples, threshold)
        .map_err(|e| CliError { exit: Exit::Verification, message: e.to_string() })?;

    let mut text = format!("head: {head} (intermediate space {})\n", conditions.intermediate_space);
    for (name, f) in conditions.findings() {
        text += &format!("  {name:<28} {:<14} {}\n", format!("{:?}", f.verdict), f.reason);
    }
    text += &format!(
        "  admits a homeomorphic encoder: {}\nsection along full-turn loops ({samples} samples, threshold {threshold}):\n",
        conditions.admits_homeomorphic_encoder()
    );
    for d in &loops {
        text += &format!(
            "  {:<13} holonomy {:>2}  max jump {:.4} -> {:.4} (4x refined, persistence {:.2})  closed {}\n",
            d.label,
            d.loop_holonomy.sign(),
            d.section.max_jump,
            d.refined_max_jump,
            d.persistence,
            d.section.is_closed
        );
    }
    let config = json!({ "head": head, "samples": samples, "threshold": threshold });
    let mut report = ReportDocument::new("diagnose", config, started);
    report.conditions = vec![conditions];
    report.verdicts = loops;
    let report = report.finish();
    if let Some(dir) = &common.out {
        write_report(dir, &report)?;
    }
    Ok(Outcome { report, text, exit: Exit::Success })
}

pub fn read_config(path: &Path) -> Result<TrainConfig, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    TrainConfig::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn apply_overrides(mut c: TrainConfig, common: &Common) -> Result<TrainConfig, CliError> {
    if let Some(seed) = common.seed {
        c.seed = seed;
    }
    if let Some(n) = common.samples {
        c.eval_samples = n;
    }
    if let Some(t) = common.threshold {
        c.jump_threshold = t;
    }
    c.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(c)
}

fn train_summary(r: &TrainReport) -> String {
    let mut s = format!(
        "{}: mean geodesic error {:.4} rad (initial {:.4}, max {:.4}), reconstruction {}\n",
        r.config.head,
        r.final_error.mean,
        r.initial_error.mean,
        r.final_error.max,
        if r.reconstruction_passed { "pass" } else { "fail" }
    );
    s += &format!(
        "  witness search: {} persistent of {} loops, worst {} jump {:.4} persistence {:.2}; continuity {}\n",
        r.witness.persistent_count,
        r.witness.probe_count,
        r.witness.worst.label,
        r.witness.worst.fine.max_jump,
        r.witness.worst.persistence,
        if r.continuity_passed { "pass" } else { "fail" }
    );
    s +=
        &format!("  retract check max error {:.4} rad, skipped elements {}\n", r.retract_max_error, r.skipped_elements);
    s
}

pub fn cmd_train(common: &Common, config_path: &Path) -> Result<Outcome, CliError> {
    let started = Utc::now();
    let config = apply_overrides(read_config(config_path)?, common)?;
    let (_, r) = train(&config).map_err(|e| CliError::training(format!("training failed: {e}")))?;
    let text = train_summary(&r);
    let mut report = ReportDocument::new("train", serde_json::to_value(&config).expect("config serialises"), started);
    report.conditions = vec![check_necessary_conditions(config.head)];
    report.train = Some(r);
    let report = report.finish();
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("homeo-out"));
    write_report(&dir, &report)?;
    write_run_files(&dir, "", report.train.as_ref().expect("set above"))?;
    Ok(Outcome { report, text, exit: Exit::Success })
}

/// Fields that must agree between the runs of one comparison.
fn budget(c: &TrainConfig) -> serde_json::Value {
    let mut v = serde_json::to_value(c).expect("config serialises");
    let map = v.as_object_mut().expect("struct");
    map.remove("head");
    map.remove("seed");
    v
}

pub fn cmd_compare(common: &Common, dir: &Path) -> Result<Outcome, CliError> {
    let started = Utc::now();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::usage(format!("cannot read config directory {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "conf"))
        .collect();
    files.sort();
    let configs: Vec<(String, TrainConfig)> = files
        .iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, apply_overrides(read_config(p)?, common)?))
        })
        .collect::<Result<_, CliError>>()?;
    let mut heads: Vec<HeadKind> = configs.iter().map(|(_, c)| c.head).collect();
    heads.sort();
    heads.dedup();
    if heads.len() < 2 {
        return Err(CliError::usage(format!(
            "compare needs configs for at least two heads in {}, found {}",
            dir.display(),
            heads.len()
        )));
    }
    if heads.len() != configs.len() {
        return Err(CliError::usage("compare takes one config per head"));
    }
    let reference = budget(&configs[0].1);
    if let Some((name, _)) = configs.iter().find(|(_, c)| budget(c) != reference) {
        return Err(CliError::usage(format!("{name} does not share the budget of {}", configs[0].0)));
    }

    let (mut rows, mut runs) = (Vec::new(), Vec::new());
    let mut progress = std::io::stderr();
    for (name, c) in &configs {
        let _ = writeln!(progress, "training {} ({name})", c.head);
        match train(c) {
            Ok((_, r)) => {
                rows.push(ComparisonRow::from_report(name, &r));
                runs.push(r);
            }
            Err(e) => rows.push(ComparisonRow::failed(name, c.head, e.to_string())),
        }
    }
    let comparison = Comparison::new(rows, runs);
    let table = comparison.render_table();
    let mut text = table.clone();
    text += &format!("only basis learns a homeomorphic encoder: {}\n", comparison.only_basis_homeomorphic);
    let any_failed = comparison.rows.iter().any(|r| r.error.is_some());

    let config = json!({
        "directory": dir.display().to_string(),
        "files": configs.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "budget": reference,
    });
    let mut report = ReportDocument::new("compare", config, started);
    report.conditions = heads.iter().map(|k| check_necessary_conditions(*k)).collect();
    report.comparison = Some(comparison);
    let report = report.finish();

    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("homeo-out"));
    write_report(&out, &report)?;
    write_file(&out, "comparison.txt", table.as_bytes())?;
    for r in &report.comparison.as_ref().expect("set above").runs {
        write_run_files(&out, &format!("-{}", r.config.head), r)?;
    }
    Ok(Outcome { report, text, exit: if any_failed { Exit::Training } else { Exit::Success } })
}
