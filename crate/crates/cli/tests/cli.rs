use homeo_cli::report::ReportDocument;
use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn homeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homeo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(doc: &Value) {
    let v = schema();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn json_of(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", stdout(o)))
}

const TINY: &str = "hidden = 16\nsteps = 200\nsamples = 200\nlearning_rate = 1e-2\neval_samples = 300\neval_loop_samples = 16\nwitness_paths = 2\n";

fn write_config(dir: &Path, name: &str, head: &str, extra: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, format!("head = {head}\n{TINY}{extra}")).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_passes_and_reports_every_suite() {
    let o = homeo(&["verify", "--json", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json_of(&o);
    assert_valid(&doc);
    let v = &doc["verification"];
    assert_eq!(v["passed"], true);
    assert!(v["first_failure"].is_null());
    assert_eq!(v["suites"].as_array().unwrap().len(), 16);
    assert_eq!(doc["conditions"].as_array().unwrap().len(), 4);
}

#[test]
fn zero_tolerance_fails_with_exit_two_and_names_the_suite() {
    let o = homeo(&["verify", "--tolerance-scale", "0", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("first failing suite: exp-log-round-trip"), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_writes_report_to_out_dir() {
    let tmp = TempDir::new().unwrap();
    let o = homeo(&["verify", "--samples", "100", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_valid(&doc);
    assert_eq!(doc["command"], "verify");
}

#[test]
fn diagnose_separates_the_heads() {
    for (head, continuous_section) in
        [("basis", true), ("quaternion", false), ("axis-angle", false), ("exponential", false)]
    {
        let o = homeo(&["diagnose", head, "--json", "--samples", "64"]);
        assert_eq!(o.status.code(), Some(0), "{head}: {}", stderr(&o));
        let doc = json_of(&o);
        assert_valid(&doc);
        let verdicts = doc["verdicts"].as_array().unwrap();
        assert_eq!(verdicts.len(), 3);
        let continuous = verdicts.iter().all(|d| d["refined_max_jump"].as_f64().unwrap() < 0.1);
        assert_eq!(continuous, continuous_section, "{head}");
        let cond = &doc["conditions"][0];
        assert_eq!(cond["kind"], head);
        assert_eq!(cond["sufficient_condition_met"]["verdict"] == "Satisfied", head == "basis", "{head}");
    }
}

#[test]
fn diagnose_text_mentions_the_head() {
    let o = homeo(&["diagnose", "quaternion"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("head: quaternion"));
    assert!(text.contains("canonical-e_z"));
}

#[test]
fn unknown_head_is_a_usage_error() {
    let o = homeo(&["diagnose", "euler"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("euler"));
}

#[test]
fn malformed_flags_are_usage_errors() {
    assert_eq!(homeo(&["verify", "--samples", "many"]).status.code(), Some(1));
    assert_eq!(homeo(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(homeo(&[]).status.code(), Some(1));
    assert_eq!(homeo(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_config_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("nope.conf");
    let o = homeo(&["train", missing.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot read config"), "{}", stderr(&o));
    assert!(stderr(&o).contains("nope.conf"));
}

#[test]
fn config_errors_report_their_line() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("bad.conf");
    fs::write(&path, "head = basis\n# comment\nsteps = lots\n").unwrap();
    let o = homeo(&["train", path.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    fs::write(&path, "head = basis\ncolour = blue\n").unwrap();
    let o = homeo(&["train", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn training_is_reproducible_and_writes_artifacts() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "q.conf", "quaternion", "seed = 4\n");
    let run = |sub: &str| {
        let out = tmp.path().join(sub);
        let o = homeo(&["train", &config, "--json", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (json_of(&o), out)
    };
    let (a, out_a) = run("a");
    let (b, out_b) = run("b");
    assert_valid(&a);
    assert_eq!(a["train"], b["train"]);
    assert_eq!(a["config"], b["config"]);
    assert_eq!(a["train"]["config"]["seed"], 4);

    let loss = fs::read_to_string(out_a.join("loss.csv")).unwrap();
    assert_eq!(loss, fs::read_to_string(out_b.join("loss.csv")).unwrap());
    assert!(loss.starts_with("step,loss\n"));
    assert_eq!(loss.lines().count(), 1 + 200 / 100);
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(out_a.join("report.json")).unwrap()).unwrap();
    assert_eq!(on_disk["train"], a["train"]);
    let has_witness = !a["train"]["witness"]["witness"].is_null();
    assert_eq!(out_a.join("witness.csv").exists(), has_witness);
}

#[test]
fn seed_flag_overrides_the_config() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "b.conf", "basis", "");
    let o = homeo(&["train", &config, "--json", "--seed", "9", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["train"]["config"]["seed"], 9);
}

#[test]
fn compare_needs_two_heads() {
    let tmp = TempDir::new().unwrap();
    write_config(tmp.path(), "basis.conf", "basis", "");
    let o = homeo(&["compare", tmp.path().to_str().unwrap(), "--out", tmp.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least two heads"), "{}", stderr(&o));
}

#[test]
fn compare_rejects_mismatched_budgets() {
    let tmp = TempDir::new().unwrap();
    write_config(tmp.path(), "basis.conf", "basis", "");
    write_config(tmp.path(), "quaternion.conf", "quaternion", "momentum = 0.5\n");
    let o = homeo(&["compare", tmp.path().to_str().unwrap(), "--out", tmp.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}

#[test]
fn compare_tabulates_heads_and_writes_artifacts() {
    let tmp = TempDir::new().unwrap();
    let configs = tmp.path().join("configs");
    fs::create_dir(&configs).unwrap();
    write_config(&configs, "basis.conf", "basis", "");
    write_config(&configs, "quaternion.conf", "quaternion", "");
    let out = tmp.path().join("out");
    let o = homeo(&["compare", configs.to_str().unwrap(), "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json_of(&o);
    assert_valid(&doc);
    let cmp = &doc["comparison"];
    let rows = cmp["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(cmp["runs"].as_array().unwrap().len(), 2);
    let quaternion = rows.iter().find(|r| r["head"] == "quaternion").unwrap();
    assert_eq!(quaternion["witness_found"], true);
    assert_eq!(quaternion["homeomorphic"], false);

    let table = fs::read_to_string(out.join("comparison.txt")).unwrap();
    assert!(table.starts_with("head"));
    assert!(table.lines().any(|l| l.starts_with("basis")));
    assert!(table.lines().any(|l| l.starts_with("quaternion")));
    assert!(out.join("loss-basis.csv").exists() && out.join("loss-quaternion.csv").exists());
    assert!(out.join("witness-quaternion.csv").exists());
    assert!(out.join("report.json").exists());
}

#[test]
fn compare_reports_divergent_runs_and_exits_three() {
    let tmp = TempDir::new().unwrap();
    let configs = tmp.path().join("configs");
    fs::create_dir(&configs).unwrap();
    // The exponential head is unbounded, so a huge step drives it to non-finite
    // loss; the normalising quaternion head saturates and finishes.
    write_config(&configs, "quaternion.conf", "quaternion", "learning_rate = 1e300\nmomentum = 0\n");
    write_config(&configs, "exponential.conf", "exponential", "learning_rate = 1e300\nmomentum = 0\n");
    let out = tmp.path().join("out");
    let o = homeo(&["compare", configs.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAILED"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_valid(&doc);
    let rows = doc["comparison"]["rows"].as_array().unwrap();
    let status = |head: &str| rows.iter().find(|r| r["head"] == head).unwrap()["status"].clone();
    assert_eq!(status("quaternion"), "ok");
    assert_eq!(status("exponential"), "failed");
    assert_eq!(doc["comparison"]["runs"].as_array().unwrap().len(), 1);
    assert!(out.join("loss-quaternion.csv").exists() && !out.join("loss-exponential.csv").exists());
}

#[test]
fn single_train_divergence_exits_three() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "e.conf", "exponential", "learning_rate = 1e300\nmomentum = 0\n");
    let o = homeo(&["train", &config, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("training failed"), "{}", stderr(&o));
}

#[test]
fn report_document_round_trips_through_serde() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "q.conf", "quaternion", "");
    let o = homeo(&["train", &config, "--json", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: ReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
    let again: ReportDocument = serde_json::from_str(&doc.to_json()).unwrap();
    assert_eq!(doc, again);
    assert_eq!(doc.to_json(), again.to_json());
}

#[test]
fn schema_rejects_malformed_reports() {
    let o = homeo(&["diagnose", "basis", "--json"]);
    let mut doc = json_of(&o);
    let v = schema();
    assert!(v.is_valid(&doc));
    doc["schema"] = Value::from(2);
    assert!(!v.is_valid(&doc));
    doc["schema"] = Value::from(1);
    doc.as_object_mut().unwrap().remove("verdicts");
    assert!(!v.is_valid(&doc));
}
