use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ringstab::report::from_json;
use ringstab::Report;
use ringstab_core::classify::{StabilityReport, Status};
use tempfile::TempDir;

fn write_spec(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], spec: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringstab"))
        .args(args)
        .arg("--spec")
        .arg(spec)
        .env_remove("RINGSTAB_CAP")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Report {
    from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn classify_z4_is_stable() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z4.spec", "[ring z4]\nfamily = zmod\nm = 4\n");
    let out = run(&["classify", "--n", "3"], &spec);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.schema, "ringstab-report/1");
    let verdict = &r.rings[0].results[0];
    let details: StabilityReport = serde_json::from_value(verdict.details.clone()).unwrap();
    assert_eq!(details.verdict, "stable (probe)");
    assert!(details.predicates.commutative);
    assert!(!details.predicates.von_neumann_regular);
    assert!(details.predicates.nearly_local);
    assert!(details.predicates.stable_rank_one);
    assert_eq!(details.weakly_commutator.length, Some(1));
    assert_eq!(details.radical_quotient.as_deref(), Some("zmod(4)/(2)"));
}

#[test]
fn identities_over_z2_exit_zero() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z2.spec", "family=zmod m=2\n");
    let out = run(&["identities"], &spec);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).rings[0].results.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn relative_suite_with_selected_ideal() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z6.spec", "family=zmod m=6\n");
    let out = run(&["lemma1", "--ideal", "2"], &spec);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.rings[0].results.len(), 1);
    assert_eq!(r.rings[0].results[0].details["ideal"], serde_json::json!([0, 2, 4]));
}

#[test]
fn cap_exhaustion_exits_two() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z4.spec", "family=zmod m=4\n");
    let out = run(&["lemma1", "--cap", "100"], &spec);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert!(r.summary.unverified > 0 && r.summary.fail == 0);
    assert!(r.rings[0].results.iter().all(|c| c.status != Status::Unverified || c.witness.is_some()));
}

#[test]
fn cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z4.spec", "family=zmod m=4\n");
    let out = Command::new(env!("CARGO_BIN_EXE_ringstab"))
        .args(["axioms", "--spec"])
        .arg(&spec)
        .env("RINGSTAB_CAP", "12345")
        .output()
        .unwrap();
    assert_eq!(report(&out).rings[0].cap, 12345);
}

#[test]
fn bad_input_exits_three() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "bad.spec", "[ring t]\nfamily = explicit\nadd = 0 1; 1\n");
    let out = run(&["axioms"], &spec);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("3:1"), "{err}");

    let good = write_spec(&dir, "z2.spec", "family=zmod m=2\n");
    let out = run(&["frobnicate"], &good);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));

    let out = run(&["classify", "--n", "2"], &good);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn n2_runs_the_two_by_two_identity() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z4.spec", "family=zmod m=4\n");
    let out = run(&["identities", "--n", "2"], &spec);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.rings[0].results.len(), 1);
}

#[test]
fn json_round_trip_and_text_output() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z4.spec", "family=zmod m=4\n");
    let out_path = dir.path().join("report.json");
    let out = run(&["predicates", "--out", out_path.to_str().unwrap()], &spec);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let parsed = from_json(&text).unwrap();
    assert_eq!(ringstab::report::to_json(&parsed), text);

    let out = run(&["predicates", "--format", "text"], &spec);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[pass      ] predicates: predicate table"), "{text}");
}

#[test]
fn only_top_level_rings_run() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        &dir,
        "prod.spec",
        "[ring a]\nfamily=zmod m=2\n[ring b]\nfamily=zmod m=3\n[ring ab]\nfamily=product factors=a,b\n",
    );
    let out = run(&["axioms"], &spec);
    let r = report(&out);
    assert_eq!(r.rings.len(), 1);
    assert_eq!(r.rings[0].name, "ab");
    assert_eq!(r.rings[0].order, 6);
    let out = run(&["axioms", "--ring", "a"], &spec);
    assert_eq!(report(&out).rings[0].name, "a");
}

#[test]
fn timings_only_on_request() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "z2.spec", "family=zmod m=2\n");
    assert!(report(&run(&["axioms"], &spec)).timings.is_none());
    let r = report(&run(&["axioms", "--timings"], &spec));
    assert!(r.timings.unwrap().contains_key("main/axioms"));
}
