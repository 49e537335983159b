#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use deduct::service::{CheckProofRequest, Engine};
use deduct_core::proof::parse_proof_file;

pub fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn corpus(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus").join(dir);
    let mut out: Vec<PathBuf> = std::fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e != "expected"))
        .collect();
    out.sort();
    out
}

pub fn corpus_file(dir: &str, name: &str) -> PathBuf {
    corpus(dir)
        .into_iter()
        .find(|p| p.file_name().unwrap() == name)
        .unwrap_or_else(|| panic!("no corpus file {dir}/{name}"))
}

pub fn deduct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deduct"))
        .args(args)
        .output()
        .expect("running deduct")
}

/// The request a client would send for a proof file.
pub fn request_for(text: &str) -> CheckProofRequest {
    let f = parse_proof_file(text).unwrap();
    CheckProofRequest {
        system: f.system.unwrap(),
        format: f.format,
        proof: f.body,
        goal: f.goal,
        derived_rules: Vec::new(),
        assignment: None,
        budget_nodes: None,
    }
}

/// Starts the service on an ephemeral port and returns its base URL.
pub async fn spawn(engine: Engine) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(deduct::api::serve(listener, Arc::new(engine)));
    format!("http://{addr}")
}
