use std::fs;
use std::path::{Path, PathBuf};

use deduct_core::proof::{check_proof, feedback_text, load_proof, ProofReport};

fn corpus(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(dir);
    let mut files: Vec<PathBuf> = fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e != "expected"))
        .collect();
    files.sort();
    files
}

fn run(path: &Path) -> ProofReport {
    let text = fs::read_to_string(path).unwrap();
    let (_, doc) = load_proof(&text, None, None).unwrap();
    check_proof(&doc).unwrap()
}

fn golden(path: &Path, report: &ProofReport) {
    let actual = format!("{}---\n{}", feedback_text(report), report.rendered);
    let mut expected_path = path.as_os_str().to_owned();
    expected_path.push(".expected");
    let expected_path = PathBuf::from(expected_path);
    if std::env::var_os("DEDUCT_BLESS").is_some() {
        fs::write(&expected_path, &actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&expected_path)
        .unwrap_or_else(|_| panic!("missing golden {}", expected_path.display()));
    assert_eq!(actual, expected, "golden mismatch for {}", path.display());
}

#[test]
fn accepted_proofs_are_complete() {
    let files = corpus("accept");
    assert!(files.len() >= 10);
    for path in files {
        let report = run(&path);
        assert!(report.complete, "{}:\n{}", path.display(), feedback_text(&report));
        golden(&path, &report);
    }
}

#[test]
fn rejected_proofs_are_never_complete() {
    let files = corpus("reject");
    assert!(files.len() >= 10);
    for path in files {
        let report = run(&path);
        assert!(!report.complete, "{} was accepted", path.display());
        golden(&path, &report);
    }
}

#[test]
fn currying_agrees_across_formats() {
    let derived: Vec<String> = ["fitch", "montague", "hardegree"]
        .iter()
        .map(|f| {
            let path = corpus("accept")
                .into_iter()
                .find(|p| p.file_name().unwrap().to_str().unwrap() == format!("currying.{f}"))
                .unwrap();
            run(&path).derived_sequent.unwrap().to_string()
        })
        .collect();
    assert_eq!(derived[0], derived[1]);
    assert_eq!(derived[1], derived[2]);
}
