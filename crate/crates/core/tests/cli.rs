use std::path::Path;
use std::process::{Command, Output};

use minmax_lab::io::{DocKind, Document};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmax-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("MINMAX_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn load(dir: &Path, name: &str) -> Document {
    Document::load(&dir.join(name)).expect("valid document").0
}

#[test]
fn eq_not_vi_gallery_then_local_minmax_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&run(&["gallery", "--name", "eq-not-vi", "--out", "eq.json"], p)), 0);
    let out = run(&["verify", "eq.json", "--concept", "local-minmax", "--out", "cert.json"], p);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert = load(p, "cert.json").certificate().unwrap();
    assert!(cert.passed);
    assert_eq!(cert.point, vec![1.0, 0.0]);
}

#[test]
fn joint_vi_rejects_the_separation_point() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(&["gallery", "--name", "eq-not-vi", "--out", "eq.json"], p);
    let out = run(&["verify", "eq.json", "--concept", "qvi", "--joint", "--out", "c.json"], p);
    assert_eq!(code(&out), 2);
    let cert = load(p, "c.json").certificate().unwrap();
    assert!((cert.residual + 0.8).abs() < 1e-9);
}

#[test]
fn sperner_on_irrational_kakutani_passes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(&["gallery", "--name", "irrational-kakutani", "--out", "ik.json"], p);
    // The exact fixed point is irrational, so membership needs slack.
    let exact = run(&["solve", "ik.json", "--method", "sperner", "--grid", "64", "--nu", "0"], p);
    assert_eq!(code(&exact), 2);
    assert!(String::from_utf8_lossy(&exact.stderr).contains("not in its own correspondence value"));
    let out = run(&["solve", "ik.json", "--method", "sperner", "--grid", "64", "--out", "s.json"], p);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = load(p, "s.json");
    assert!(doc.meta.contains_key("simplex"));
    let cert = doc.certificate().unwrap();
    assert!(cert.passed);
    let v = run(&["verify", "ik.json", "--concept", "kakutani", "--candidate", "s.json"], p);
    assert_eq!(code(&v), 0);
    assert_eq!(code(&run(&["verify", "ik.json", "--concept", "kakutani", "--nu", "0.001"], p)), 0);
    assert_eq!(code(&run(&["verify", "ik.json", "--concept", "kakutani", "--nu", "0"], p)), 2);
}

#[test]
fn pipeline_report_embeds_hashes_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = run(&["pipeline", "--seed", "7", "--gamma", "1", "--out", "r.json"], p);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = load(p, "r.json");
    assert_eq!(doc.kind, DocKind::Report);
    assert_eq!(doc.trace.len(), 2);
    assert_eq!(doc.meta["game_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(doc.data["passed"], true);
    let regret = doc.data["regret"]["residual"].as_f64().unwrap();
    assert!(regret <= 0.088 + 0.02);
}

#[test]
fn reduce_chain_keeps_traces_and_input_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(&["gallery", "--name", "matching-pennies", "--out", "mp.json"], p);
    assert_eq!(code(&run(&["reduce", "--from", "polymatrix", "--to", "linearvi", "mp.json", "vi.json"], p)), 0);
    assert_eq!(code(&run(&["reduce", "--from", "linearvi", "--to", "minmax-bilinear", "vi.json", "mm.json"], p)), 0);
    assert_eq!(code(&run(&["reduce", "--from", "minmax", "--to", "qvi", "mm.json", "--out", "q.json"], p)), 0);
    let q = load(p, "q.json");
    assert_eq!(q.kind, DocKind::Qvi);
    assert_eq!(q.trace.len(), 2);
    let (_, mm_hash) = Document::load(&p.join("mm.json")).unwrap();
    assert_eq!(q.meta["inputs"]["mm.json"], mm_hash.as_str());
    q.qvi().unwrap();
}

#[test]
fn extragradient_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(&["gallery", "--name", "random-linearvi", "--d", "4", "--seed", "3", "--monotone", "--out", "vi.json"], p);
    assert_eq!(code(&run(&["solve", "vi.json", "--method", "extragradient", "--out", "eg.json"], p)), 0);
    run(&["gallery", "--name", "eq-not-vi", "--out", "eq.json"], p);
    run(&["verify", "eq.json", "--concept", "qvi", "--joint", "--out", "bad.json"], p);
    let ok = run(&["report", "eg.json"], p);
    assert_eq!(code(&ok), 0);
    let mixed = run(&["report", "eg.json", "bad.json", "--out", "rep.json"], p);
    assert_eq!(code(&mixed), 2);
    let text = String::from_utf8_lossy(&mixed.stdout);
    assert!(text.contains("PASS") && text.contains("FAIL"));
    let rep = load(p, "rep.json");
    assert_eq!(rep.data["entries"].as_array().unwrap().len(), 2);
}

#[test]
fn descent_ascent_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(&["gallery", "--name", "eq-not-vi", "--out", "eq.json"], p);
    assert_eq!(code(&run(&["solve", "eq.json", "--method", "gda"], p)), 0);
    let out = run(&["solve", "eq.json", "--method", "sgda", "--start", "0.5,0.5", "--out", "s.json"], p);
    assert_eq!(code(&out), 0);
    let doc = load(p, "s.json");
    assert_eq!(doc.meta["converged"], true);
}

#[test]
fn exit_codes_for_usage_and_promise_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&run(&["frobnicate"], p)), 64);
    assert_eq!(code(&run(&["verify", "missing.json", "--concept", "qvi"], p)), 64);
    std::fs::write(p.join("bad.json"), r#"{"format": 2, "kind": "qvi", "data": {}}"#).unwrap();
    assert_eq!(code(&run(&["verify", "bad.json", "--concept", "qvi", "--point", "0,0"], p)), 64);
    run(&["gallery", "--name", "irrational-kakutani", "--out", "ik.json"], p);
    assert_eq!(code(&run(&["reduce", "--from", "gnep", "--to", "linearvi", "ik.json"], p)), 64);
    // Q(z) is empty at x = 0.2.
    let empty = run(&["verify", "ik.json", "--concept", "qvi", "--point", "0.2,0.2", "--nu", "0"], p);
    assert_eq!(code(&empty), 3);
    let strict = run(&["solve", "ik.json", "--method", "sperner", "--grid", "8", "--strict-slices", "--nu", "0"], p);
    assert_eq!(code(&strict), 3);
    run(&["gallery", "--name", "nonexistence", "--out", "ne.json"], p);
    assert_eq!(code(&run(&["verify", "ne.json", "--concept", "local-minmax", "--point", "0.5,0"], p)), 3);
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_minmax-lab"))
        .args(["pipeline", "--seed", "1"])
        .current_dir(dir.path())
        .env("MINMAX_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
