//! Driver behavior: exit codes, report determinism, digests, exports,
//! cycle handling and article-level parallelism.

mod common;

use std::fs;
use std::path::PathBuf;

use common::*;
use hotg::cli::{run_check, ArticleStatus, CheckOptions, CheckReport};

fn required_paths() -> Vec<PathBuf> {
    REQUIRED
        .iter()
        .map(|n| stdlib_dir().join(format!("{n}.hotg")))
        .collect()
}

fn opts() -> CheckOptions {
    CheckOptions {
        root: stdlib_dir(),
        trust_imports: true,
        ..CheckOptions::default()
    }
}

fn strip_times(report: &CheckReport) -> String {
    let mut text = report.render_text(true);
    // Wall times are the one nondeterministic field.
    let re_like: Vec<String> = text
        .lines()
        .map(|l| match l.find(" [") {
            Some(i) if l.ends_with("ms]") => l[..i].to_string(),
            _ => l.to_string(),
        })
        .collect();
    text = re_like.join("\n");
    text
}

#[test]
fn clean_chain_exits_zero() {
    let (report, code) = run_check(&required_paths(), &opts()).unwrap();
    assert_eq!(code, 0);
    assert!(report.ok);
    assert!(report.articles.iter().all(|a| a.status == ArticleStatus::Ok));
}

#[test]
fn reports_are_deterministic() {
    let (r1, _) = run_check(&required_paths(), &opts()).unwrap();
    let (r2, _) = run_check(&required_paths(), &opts()).unwrap();
    assert_eq!(strip_times(&r1), strip_times(&r2));
}

#[test]
fn digests_are_stable_and_content_sensitive() {
    let (r1, _) = run_check(&required_paths(), &opts()).unwrap();
    let (r2, _) = run_check(&required_paths(), &opts()).unwrap();
    let d1: Vec<_> = r1.articles.iter().map(|a| a.digest.clone()).collect();
    let d2: Vec<_> = r2.articles.iter().map(|a| a.digest.clone()).collect();
    assert_eq!(d1, d2);

    // A one-character statement change shifts the digest.
    let dir = tempfile::tempdir().unwrap();
    let a = "Definition d : set := Empty.\n";
    let b = "Definition d : set := Power Empty.\n";
    fs::write(dir.path().join("probe.hotg"), a).unwrap();
    let o = CheckOptions { root: dir.path().to_path_buf(), ..CheckOptions::default() };
    let (ra, _) = run_check(&[dir.path().join("probe.hotg")], &o).unwrap();
    fs::write(dir.path().join("probe.hotg"), b).unwrap();
    let (rb, _) = run_check(&[dir.path().join("probe.hotg")], &o).unwrap();
    assert_ne!(ra.articles[0].digest, rb.articles[0].digest);
}

#[test]
fn broken_proof_fails_with_theorem_named() {
    let dir = tempfile::tempdir().unwrap();
    let src = "Theorem bogus : forall X:set, X :e Power X.\n\
               Proof.\nlet X. exact UnivIn X.\nQed.\n";
    fs::write(dir.path().join("bogus.hotg"), src).unwrap();
    let o = CheckOptions { root: dir.path().to_path_buf(), ..CheckOptions::default() };
    let (report, code) = run_check(&[dir.path().join("bogus.hotg")], &o).unwrap();
    assert_eq!(code, 1);
    match &report.articles[0].status {
        ArticleStatus::Failed { at, .. } => assert_eq!(at, "Theorem bogus"),
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn trusted_requires_flag() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("t.hotg"),
        "Trusted magic : forall p:prop, p -> p.\n",
    )
    .unwrap();
    let o = CheckOptions { root: dir.path().to_path_buf(), ..CheckOptions::default() };
    let (report, code) = run_check(&[dir.path().join("t.hotg")], &o).unwrap();
    assert_eq!(code, 1);
    match &report.articles[0].status {
        ArticleStatus::Failed { error, .. } => {
            assert!(error.contains("trust"), "unexpected error: {error}")
        }
        other => panic!("expected TrustDisabled, got {other:?}"),
    }
    let o2 = CheckOptions {
        root: dir.path().to_path_buf(),
        trust_imports: true,
        ..CheckOptions::default()
    };
    let (report2, code2) = run_check(&[dir.path().join("t.hotg")], &o2).unwrap();
    assert_eq!(code2, 0);
    assert_eq!(report2.trusted.len(), 1);
}

#[test]
fn missing_requested_file_is_a_usage_error() {
    let o = opts();
    assert!(run_check(&[PathBuf::from("/nonexistent/nope.hotg")], &o).is_err());
}

#[test]
fn missing_import_fails_the_importer() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.hotg"), "Import ghost.\n").unwrap();
    let o = CheckOptions { root: dir.path().to_path_buf(), ..CheckOptions::default() };
    let (report, code) = run_check(&[dir.path().join("a.hotg")], &o).unwrap();
    assert_eq!(code, 1);
    assert!(report.articles.iter().any(|a| matches!(
        &a.status,
        ArticleStatus::Failed { error, .. } if error.contains("missing import") || error.contains("failed")
    )));
}

#[test]
fn import_cycles_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.hotg"), "Import b.\n").unwrap();
    fs::write(dir.path().join("b.hotg"), "Import a.\n").unwrap();
    let o = CheckOptions { root: dir.path().to_path_buf(), ..CheckOptions::default() };
    let (report, code) = run_check(&[dir.path().join("a.hotg")], &o).unwrap();
    assert_eq!(code, 1);
    assert!(report.articles.iter().any(|a| matches!(
        &a.status,
        ArticleStatus::Failed { error, .. } if error.contains("cycle")
    )));
}

#[test]
fn export_writes_canonical_files_for_ok_articles_only() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("out");
    let mut o = opts();
    o.export_dir = Some(export.clone());
    let (_, code) = run_check(&required_paths(), &o).unwrap();
    assert_eq!(code, 0);
    for name in REQUIRED {
        let p = export.join(format!("{name}.hotgc"));
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("hotg-canonical 1\n"));
        assert!(text.contains(&format!("article {name}")));
    }

    // A failing article yields no export.
    let dir2 = tempfile::tempdir().unwrap();
    fs::write(dir2.path().join("bad.hotg"), "Definition d : set := missing.\n").unwrap();
    let export2 = dir2.path().join("out");
    let o2 = CheckOptions {
        root: dir2.path().to_path_buf(),
        export_dir: Some(export2.clone()),
        ..CheckOptions::default()
    };
    let (_, code2) = run_check(&[dir2.path().join("bad.hotg")], &o2).unwrap();
    assert_eq!(code2, 1);
    assert!(!export2.join("bad.hotgc").exists());
}

#[test]
fn parallel_checking_matches_serial() {
    let (serial, _) = run_check(&required_paths(), &opts()).unwrap();
    let mut par_opts = opts();
    par_opts.jobs = 4;
    let (parallel, _) = run_check(&required_paths(), &par_opts).unwrap();
    assert_eq!(strip_times(&serial), strip_times(&parallel));
}

#[test]
fn json_report_serializes_with_stable_keys() {
    let (report, _) = run_check(&required_paths(), &opts()).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["articles"].is_array());
    assert!(v["proved"].is_u64());
    assert!(v["trusted"].is_array());
    assert!(v["ok"].is_boolean());
    assert_eq!(v["articles"][0]["status"], "ok");
}

/// The digest of the bundled prelude article, pinned when the library was
/// frozen. Any change to prelude_logic.hotg must be deliberate.
#[test]
fn golden_prelude_digest() {
    const FROZEN: &str = "817637a5997df7c8be39b4b5f9a133bc693a07b0e88c601d0e81f9f1aaf4bfc4";
    let (report, _) = run_check(&[stdlib_dir().join("prelude_logic.hotg")], &opts()).unwrap();
    let digest = report.articles[0].digest.clone().unwrap();
    assert_eq!(digest, FROZEN, "prelude digest drifted; update deliberately");
}
