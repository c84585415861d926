//! Byte-level regression checks on gallery output.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;
use std::process::Command;

const CASES: &[(&str, &[&str])] = &[
    ("eq_not_vi", &["--name", "eq-not-vi"]),
    ("irrational_kakutani", &["--name", "irrational-kakutani"]),
    ("nonexistence", &["--name", "nonexistence"]),
    ("matching_pennies", &["--name", "matching-pennies"]),
    ("indep_set_triangle", &["--name", "indep-set", "--n", "3", "--edges", "0-1,1-2,0-2", "--k", "2"]),
    ("random_polymatrix_s7", &["--name", "random-polymatrix", "--seed", "7"]),
    ("random_linearvi_s3", &["--name", "random-linearvi", "--seed", "3", "--d", "4"]),
];

fn gallery(args: &[&str], threads: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_minmax-lab"))
        .arg("gallery")
        .args(args)
        .env("MINMAX_LAB_THREADS", threads)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

#[test]
fn gallery_matches_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in CASES {
        let got = gallery(args, "1");
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1", path.display()));
        assert_eq!(got, want, "gallery output drifted for {name}");
    }
}

#[test]
fn output_independent_of_thread_count() {
    for (_, args) in CASES {
        assert_eq!(gallery(args, "1"), gallery(args, "4"));
    }
}

#[test]
fn golden_documents_parse() {
    for (name, _) in CASES {
        let path = golden_path(name);
        if path.exists() {
            let (doc, hash) = minmax_lab::io::Document::load(&path).unwrap();
            assert_eq!(hash.len(), 64);
            assert_eq!(doc.format, 1);
        }
    }
}

#[test]
fn pipeline_is_deterministic() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_minmax-lab"))
            .args(["pipeline", "--seed", "11", "--gamma", "1"])
            .env("MINMAX_LAB_THREADS", threads)
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}
