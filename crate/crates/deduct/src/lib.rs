//! JSON service, assignment manifests and batch CLI over `deduct_core`.

pub mod api;
pub mod assignments;
pub mod cli;
pub mod service;
