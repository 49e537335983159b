//! The `deduct` command line.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use deduct_core::lambda::Substitution;
use deduct_core::notation::{print, print_item, FormulaParser, Notation};
use deduct_core::proof::{feedback_text, load_proof, parse_proof_file, LineStatus, ProofReport};
use deduct_core::rules::{parse_sequent, system, ProofFormat, System};
use deduct_core::syntax::{Language, LexicalItem, Term};
use deduct_core::unify::{huet_unify, simplify, Equation, SearchBudget, Simplification, UnificationProblem};

use crate::assignments::{load_dir, load_manifest, AssignmentManifest, ExerciseKind};
use crate::service::{self, CheckProofResponse, Engine, Limits};

#[derive(Debug, Parser)]
#[command(name = "deduct", version, about = "Natural deduction checking, truth tables and translation grading")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check proof files and print per-line feedback.
    Check(CheckArgs),
    /// Grade a directory of submissions against a manifest into CSV.
    Grade(GradeArgs),
    /// Solve a unification problem file.
    Unify(UnifyArgs),
    /// List the rules of a system.
    Rules(RulesArgs),
    /// Run the JSON service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct BudgetArg {
    /// Search states per rule check.
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

impl BudgetArg {
    fn budget(&self) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            max_nodes: self.budget_nodes.unwrap_or(d.max_nodes),
            ..d
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Overrides the `system:` header.
    #[arg(long)]
    pub system: Option<String>,
    /// Overrides the `format:` header.
    #[arg(long)]
    pub format: Option<String>,
    /// One JSON report per line.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub budget: BudgetArg,
}

#[derive(Debug, Args)]
pub struct GradeArgs {
    pub dir: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArg,
}

#[derive(Debug, Args)]
pub struct UnifyArgs {
    pub problem: PathBuf,
    #[command(flatten)]
    pub budget: BudgetArg,
}

#[derive(Debug, Args)]
pub struct RulesArgs {
    pub system: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "DEDUCT_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Directory of assignment manifests.
    #[arg(long, env = "DEDUCT_ASSIGN_DIR")]
    pub assignments: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArg,
    /// Largest `budget_nodes` a request may ask for.
    #[arg(long)]
    pub max_budget_nodes: Option<u64>,
}

pub fn run(cli: Cli) -> ExitCode {
    let out = match cli.command {
        Command::Check(a) => check(&a),
        Command::Grade(a) => grade(&a),
        Command::Unify(a) => unify(&a),
        Command::Rules(a) => rules(&a),
        Command::Serve(a) => serve(&a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn batch_engine(budget: SearchBudget) -> Engine {
    let limits = Limits {
        max_budget_nodes: u64::MAX,
        max_proof_lines: usize::MAX,
        ..Limits::default()
    };
    Engine::new(BTreeMap::new(), budget, limits)
}

#[derive(Debug, Serialize)]
struct FileReport<'a> {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a CheckProofResponse>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Checks one proof file.
pub fn check_file(
    engine: &Engine,
    text: &str,
    system_id: Option<&str>,
    format: Option<&str>,
) -> Result<ProofReport> {
    let format = format
        .map(|f| ProofFormat::from_name(f).with_context(|| format!("unknown proof format `{f}`")))
        .transpose()?;
    let (_, doc) = load_proof(text, system_id, format)?;
    let sys = engine.system(&doc.system)?;
    Ok(service::check_report(engine, &doc, sys, Vec::new(), engine.budget)?)
}

fn check(a: &CheckArgs) -> Result<u8> {
    let engine = batch_engine(a.budget.budget());
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let (mut incomplete, mut failed) = (false, false);
    for path in &a.paths {
        let name = path.display().to_string();
        let result = fs::read_to_string(path)
            .with_context(|| format!("reading {name}"))
            .and_then(|text| check_file(&engine, &text, a.system.as_deref(), a.format.as_deref()));
        match result {
            Ok(report) => {
                incomplete |= !report.complete;
                if a.json {
                    let resp = CheckProofResponse::from(report);
                    let line = FileReport {
                        file: name,
                        report: Some(&resp),
                        error: None,
                    };
                    writeln!(out, "{}", serde_json::to_string(&line)?)?;
                } else {
                    writeln!(out, "== {name}")?;
                    write!(out, "{}", feedback_text(&report))?;
                }
            }
            Err(e) => {
                failed = true;
                eprintln!("{name}: {e:#}");
                if a.json {
                    let line = FileReport {
                        file: name,
                        report: None,
                        error: Some(format!("{e:#}")),
                    };
                    writeln!(out, "{}", serde_json::to_string(&line)?)?;
                }
            }
        }
    }
    Ok(if failed {
        2
    } else if incomplete {
        1
    } else {
        0
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradeRow {
    pub file: String,
    pub exercise: String,
    pub complete: bool,
    pub errors: usize,
}

/// Grades one submission: the exercise's system and goal override
/// whatever the file header says.
pub fn grade_file(engine: &Engine, manifest: &AssignmentManifest, text: &str) -> Result<GradeRow> {
    let file = parse_proof_file(text)?;
    let id = file.exercise.context("no `exercise:` header")?;
    let ex = manifest
        .exercise(&id)
        .with_context(|| format!("no exercise {id} in assignment {}", manifest.id))?;
    if ex.kind != ExerciseKind::Proof {
        bail!("exercise {id} is not a proof exercise");
    }
    let sys = engine.system(ex.system.as_deref().unwrap_or_default())?;
    let (_, mut doc) = load_proof(text, Some(&sys.id), None)?;
    doc.goal = Some(parse_sequent(&sys.language, &ex.target)?);
    let extra = engine.extra_rules(sys, None, &manifest.derived_rules_for(&sys.id))?;
    let report = service::check_report(engine, &doc, sys, extra, engine.budget)?;
    let flagged = report.lines.iter().filter(|l| l.status != LineStatus::Correct).count();
    let missed = report.goal_met == Some(false) || report.derived_sequent.is_none();
    Ok(GradeRow {
        file: String::new(),
        exercise: id,
        complete: report.complete,
        errors: flagged + usize::from(missed),
    })
}

fn submissions(dir: &Path, skip: &Path) -> Result<Vec<PathBuf>> {
    let skip = fs::canonicalize(skip).ok();
    let mut out = Vec::new();
    for e in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let p = e?.path();
        let hidden = p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if p.is_file() && !hidden && fs::canonicalize(&p).ok() != skip {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn grade(a: &GradeArgs) -> Result<u8> {
    let manifest = load_manifest(&a.manifest)?;
    let engine = batch_engine(a.budget.budget());
    let files = submissions(&a.dir, &a.manifest)?;
    let sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let mut failed = false;
    for path in files {
        let name = path.strip_prefix(&a.dir).unwrap_or(&path).display().to_string();
        let row = fs::read_to_string(&path)
            .with_context(|| format!("reading {name}"))
            .and_then(|text| grade_file(&engine, &manifest, &text));
        let row = match row {
            Ok(r) => GradeRow { file: name, ..r },
            Err(e) => {
                failed = true;
                eprintln!("{name}: {e:#}");
                let exercise = fs::read_to_string(&path)
                    .ok()
                    .and_then(|t| parse_proof_file(&t).ok())
                    .and_then(|f| f.exercise)
                    .unwrap_or_default();
                GradeRow {
                    file: name,
                    exercise,
                    complete: false,
                    errors: 1,
                }
            }
        };
        w.serialize(&row)?;
    }
    w.flush()?;
    Ok(if failed { 2 } else { 0 })
}

/// A unification problem file: an optional `flex:` header naming the
/// flexible variables, then one `lhs = rhs` equation per line.
pub struct ProblemFile {
    pub flex: Option<Vec<String>>,
    pub equations: Vec<Equation>,
}

fn side(p: &mut FormulaParser, text: &str, line: usize) -> Result<Term> {
    match p.parse(text) {
        Ok(t) => Ok(t),
        Err(e) => p
            .parse_term(text)
            .map_err(|_| anyhow::anyhow!("line {line}: {e}")),
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut parser = FormulaParser::new(&Language::fol().schematic(), Notation::ASCII);
    let mut flex = None;
    let mut equations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("flex:") {
            if flex.is_some() || !equations.is_empty() {
                bail!("line {}: `flex:` comes once, before the equations", i + 1);
            }
            flex = Some(
                rest.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
            );
            continue;
        }
        let Some((lhs, rhs)) = line.split_once('=').filter(|(_, r)| !r.starts_with('>')) else {
            bail!("line {}: expected `lhs = rhs`", i + 1);
        };
        let (lhs, rhs) = (side(&mut parser, lhs, i + 1)?, side(&mut parser, rhs, i + 1)?);
        equations.push(Equation::new(lhs, rhs));
    }
    if equations.is_empty() {
        bail!("no equations");
    }
    Ok(ProblemFile { flex, equations })
}

fn problem_of(file: ProblemFile) -> Result<UnificationProblem> {
    let Some(names) = file.flex else {
        return Ok(UnificationProblem::schematic(file.equations)?);
    };
    let mut present: Vec<LexicalItem> = Vec::new();
    for eq in &file.equations {
        for side in [&eq.lhs, &eq.rhs] {
            side.visit_leaves(&mut |i| {
                if i.is_schematic() && !present.contains(i) {
                    present.push(i.clone());
                }
            });
        }
    }
    let mut flex = Vec::new();
    for n in names {
        let item = present
            .iter()
            .find(|i| print_item(i, Notation::ASCII) == n || print_item(i, Notation::UNICODE) == n)
            .with_context(|| format!("flexible {n} does not occur in the equations"))?;
        flex.push(item.clone());
    }
    Ok(UnificationProblem::new(file.equations, flex)?)
}

pub fn show_substitution(s: &Substitution) -> String {
    if s.is_empty() {
        return "{}".into();
    }
    s.iter()
        .map(|(k, v)| format!("{} := {}", print_item(k, Notation::ASCII), print(v, Notation::ASCII)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn unify(a: &UnifyArgs) -> Result<u8> {
    let text = fs::read_to_string(&a.problem).with_context(|| format!("reading {}", a.problem.display()))?;
    let problem = problem_of(parse_problem(&text)?)?;
    let first_step = simplify(&problem);
    let (sols, err) = huet_unify(problem, a.budget.budget().unlimited_solutions()).collect_all();
    for s in &sols {
        println!("{}", show_substitution(s));
    }
    if let Some(e) = err {
        eprintln!("{e}");
    }
    if sols.is_empty() {
        match first_step {
            Simplification::Fail(f) => eprintln!("no unifier: {f}"),
            _ => eprintln!("no unifier"),
        }
        return Ok(1);
    }
    Ok(0)
}

fn rules(a: &RulesArgs) -> Result<u8> {
    let sys: System = system(&a.system).with_context(|| format!("no system named `{}`", a.system))?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&service::system_info(&sys))?);
        return Ok(0);
    }
    println!("{} ({} language, {} format)", sys.id, sys.language.id(), sys.format.name());
    let width = sys.rules.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &sys.rules {
        println!("  {:<width$}  {}", r.name, r.schema(Notation::ASCII));
    }
    if !sys.aliases.is_empty() {
        println!("aliases:");
        for (alias, name) in &sys.aliases {
            println!("  {alias} = {name}");
        }
    }
    Ok(0)
}

fn serve(a: &ServeArgs) -> Result<u8> {
    let assignments = match &a.assignments {
        Some(dir) => load_dir(dir)?,
        None => BTreeMap::new(),
    };
    let limits = Limits {
        max_budget_nodes: a.max_budget_nodes.unwrap_or(Limits::default().max_budget_nodes),
        ..Limits::default()
    };
    let budget = a.budget.budget();
    if budget.max_nodes > limits.max_budget_nodes {
        bail!("--budget-nodes is above --max-budget-nodes");
    }
    let engine = Arc::new(Engine::new(assignments, budget, limits));
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((a.host.as_str(), a.port))
            .await
            .with_context(|| format!("binding {}:{}", a.host, a.port))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        crate::api::serve(listener, engine).await?;
        Ok::<_, anyhow::Error>(())
    })?;
    Ok(0)
}
