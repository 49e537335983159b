//! Wire types of the `/v1` schema and the request handlers behind them.
//!
//! Every handler is a pure function of its request and the immutable
//! [`Engine`]; the HTTP layer and the CLI both call into this module.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use deduct_core::lambda::open_binder;
use deduct_core::notation::{parse, print, print_item, Mode, Notation, ParseError};
use deduct_core::proof::{check_proof_in, parse_proof, CheckOptions, LineFeedback, ProofDocument, ProofReport};
use deduct_core::rules::{builtin_systems, parse_sequent, ProofFormat, Rule, System};
use deduct_core::semantics::{
    check_translation, grade_table, SemanticsError, TableGrade, TableMode, TableSubmission, TranslationVerdict,
    TruthTable, Verdict,
};
use deduct_core::syntax::{decompose, DecomposeError, Language, LexicalItem, Term};
use deduct_core::unify::SearchBudget;

use crate::assignments::{AssignmentManifest, DerivedRuleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_budget_nodes: u64,
    pub max_proof_lines: usize,
    pub max_formulas: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_budget_nodes: 1_000_000,
            max_proof_lines: 2_000,
            max_formulas: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ServiceError {
    /// The request cannot be understood.
    BadRequest { code: &'static str, message: String },
    /// The request is understood but over a domain limit.
    Unprocessable { code: &'static str, message: String },
    NotFound { code: &'static str, message: String },
    Internal { code: &'static str, message: String },
}

impl ServiceError {
    pub fn bad(code: &'static str, message: impl Into<String>) -> Self {
        ServiceError::BadRequest {
            code,
            message: message.into(),
        }
    }

    pub fn limit(code: &'static str, message: impl Into<String>) -> Self {
        ServiceError::Unprocessable {
            code,
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::BadRequest { code, .. }
            | ServiceError::Unprocessable { code, .. }
            | ServiceError::NotFound { code, .. }
            | ServiceError::Internal { code, .. } => code,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            ServiceError::BadRequest { message, .. }
            | ServiceError::Unprocessable { message, .. }
            | ServiceError::NotFound { message, .. }
            | ServiceError::Internal { message, .. } => message,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            error: ErrorDetail {
                code: self.code().to_string(),
                message: self.message().to_string(),
            },
        }
    }
}

impl std::fmt::Display for ServiceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code(), self.message())
    }
}

impl std::error::Error for ServiceError {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub code: String,
    pub message: String,
}

fn semantics_error(e: SemanticsError) -> ServiceError {
    match e {
        SemanticsError::TooManyLetters { .. } => ServiceError::limit("too_many_letters", e.to_string()),
        SemanticsError::MalformedSubmission(_) => ServiceError::bad("malformed_submission", e.to_string()),
        _ => ServiceError::bad("not_propositional", e.to_string()),
    }
}

/// Immutable engine data shared by all requests.
#[derive(Debug)]
pub struct Engine {
    systems: BTreeMap<String, System>,
    order: Vec<String>,
    assignments: BTreeMap<String, AssignmentManifest>,
    pub budget: SearchBudget,
    pub limits: Limits,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(BTreeMap::new(), SearchBudget::default(), Limits::default())
    }
}

impl Engine {
    pub fn new(
        assignments: BTreeMap<String, AssignmentManifest>,
        budget: SearchBudget,
        limits: Limits,
    ) -> Self {
        let systems = builtin_systems();
        let order = systems.iter().map(|s| s.id.clone()).collect();
        Engine {
            systems: systems.into_iter().map(|s| (s.id.clone(), s)).collect(),
            order,
            assignments,
            budget,
            limits,
        }
    }

    pub fn system(&self, id: &str) -> Result<&System, ServiceError> {
        self.systems
            .get(id.trim())
            .ok_or_else(|| ServiceError::bad("unknown_system", format!("no system named `{id}`")))
    }

    pub fn assignment(&self, id: &str) -> Option<&AssignmentManifest> {
        self.assignments.get(id)
    }

    pub fn budget_with(&self, nodes: Option<u64>) -> Result<SearchBudget, ServiceError> {
        let Some(n) = nodes else {
            return Ok(self.budget);
        };
        if n > self.limits.max_budget_nodes {
            return Err(ServiceError::limit(
                "budget_too_large",
                format!("budget_nodes {n} exceeds the limit of {}", self.limits.max_budget_nodes),
            ));
        }
        Ok(SearchBudget {
            max_nodes: n,
            ..self.budget
        })
    }

    /// Rules a check may cite beyond the system's own: those pre-declared
    /// by the named assignment, then those of the request.
    pub fn extra_rules(
        &self,
        system: &System,
        assignment: Option<&str>,
        specs: &[DerivedRuleSpec],
    ) -> Result<Vec<Rule>, ServiceError> {
        let mut out = Vec::new();
        if let Some(id) = assignment {
            let m = self.assignment(id).ok_or_else(|| {
                ServiceError::bad("unknown_assignment", format!("no assignment named `{id}`"))
            })?;
            for spec in m.derived_rules.iter().filter(|s| s.applies_to(&system.id)) {
                out.push(spec.parse(&system.language).map_err(|e| ServiceError::bad("bad_rule", e.to_string()))?);
            }
        }
        for spec in specs {
            out.push(spec.parse(&system.language).map_err(|e| ServiceError::bad("bad_rule", e.to_string()))?);
        }
        Ok(out)
    }
}

fn language(id: Option<&str>, default: &str) -> Result<Language, ServiceError> {
    let id = id.unwrap_or(default);
    Language::by_id(id).ok_or_else(|| ServiceError::bad("unknown_language", format!("no language named `{id}`")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaError {
    pub kind: String,
    pub position: usize,
    pub message: String,
}

impl From<&ParseError> for FormulaError {
    fn from(e: &ParseError) -> Self {
        FormulaError {
            kind: e.kind().to_string(),
            position: e.position(),
            message: e.to_string(),
        }
    }
}

fn formula_error(field: &str, e: &ParseError) -> ServiceError {
    ServiceError::bad("bad_formula", format!("{field}: {e}"))
}

/// The formula in every printed notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Printed {
    pub ascii: String,
    pub unicode: String,
}

impl Printed {
    pub fn of(t: &Term) -> Self {
        Printed {
            ascii: print(t, Notation::ASCII),
            unicode: print(t, Notation::UNICODE),
        }
    }
}

// ---- /v1/parse

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseRequest {
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    /// Require full parenthesization.
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseResponse {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<Printed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<Printed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<FormulaError>,
}

pub fn parse_formula(req: &ParseRequest) -> Result<ParseResponse, ServiceError> {
    let lang = language(req.language.as_deref(), "fol")?;
    let mode = if req.strict { Mode::Strict } else { Mode::Fixity };
    Ok(match parse(&lang, Notation { mode, ..Notation::ASCII }, &req.formula) {
        Ok(t) => ParseResponse {
            ok: true,
            printed: Some(Printed::of(&t)),
            strict: Some(Printed {
                ascii: print(&t, Notation::ASCII_STRICT),
                unicode: print(&t, Notation::UNICODE_STRICT),
            }),
            error: None,
        },
        Err(e) => ParseResponse {
            ok: false,
            printed: None,
            strict: None,
            error: Some(FormulaError::from(&e)),
        },
    })
}

// ---- /v1/check/proof

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckProofRequest {
    pub system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub proof: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived_rules: Vec<DerivedRuleSpec>,
    /// Makes the derived rules pre-declared by this assignment citable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_nodes: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckProofResponse {
    pub lines: Vec<LineFeedback>,
    pub complete: bool,
    pub derived_sequent: Option<Printed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_met: Option<bool>,
    pub rendered: String,
}

impl From<ProofReport> for CheckProofResponse {
    fn from(r: ProofReport) -> Self {
        CheckProofResponse {
            lines: r.lines,
            complete: r.complete,
            derived_sequent: r.derived_sequent.map(|s| Printed {
                ascii: s.display(Notation::ASCII),
                unicode: s.display(Notation::UNICODE),
            }),
            goal_met: r.goal_met,
            rendered: r.rendered,
        }
    }
}

pub fn proof_format(name: Option<&str>, system: &System) -> Result<ProofFormat, ServiceError> {
    match name {
        None => Ok(system.format),
        Some(f) => ProofFormat::from_name(f)
            .ok_or_else(|| ServiceError::bad("unknown_format", format!("no proof format named `{f}`"))),
    }
}

/// Checks an already parsed document; the common path of the CLI and
/// the HTTP handler.
pub fn check_report(
    engine: &Engine,
    doc: &ProofDocument,
    system: &System,
    extra_rules: Vec<Rule>,
    budget: SearchBudget,
) -> Result<ProofReport, ServiceError> {
    if doc.lines.len() > engine.limits.max_proof_lines {
        return Err(ServiceError::limit(
            "proof_too_long",
            format!("{} lines, at most {} allowed", doc.lines.len(), engine.limits.max_proof_lines),
        ));
    }
    let options = CheckOptions { budget, extra_rules };
    Ok(check_proof_in(doc, system, &options))
}

pub fn check_proof(engine: &Engine, req: &CheckProofRequest) -> Result<CheckProofResponse, ServiceError> {
    let system = engine.system(&req.system)?;
    let format = proof_format(req.format.as_deref(), system)?;
    let budget = engine.budget_with(req.budget_nodes)?;
    let extra = engine.extra_rules(system, req.assignment.as_deref(), &req.derived_rules)?;
    let mut doc = parse_proof(format, &system.id, &system.language, &req.proof);
    doc.goal = req
        .goal
        .as_deref()
        .map(|g| parse_sequent(&system.language, g))
        .transpose()
        .map_err(|e| formula_error("goal", &e))?;
    check_report(engine, &doc, system, extra, budget).map(Into::into)
}

// ---- /v1/check/table

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTableRequest {
    #[serde(default)]
    pub premises: Vec<String>,
    pub conclusion: String,
    #[serde(default = "full")]
    pub mode: TableMode,
    /// Omitted to ask for the table layout only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

fn full() -> TableMode {
    TableMode::Full
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTableResponse {
    /// Sentence letters in canonical order.
    pub letters: Vec<String>,
    /// Premises then the conclusion.
    pub columns: Vec<Printed>,
    pub row_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<TableGrade>,
}

pub fn check_table(engine: &Engine, req: &CheckTableRequest) -> Result<CheckTableResponse, ServiceError> {
    if req.premises.len() + 1 > engine.limits.max_formulas {
        return Err(ServiceError::limit("too_many_formulas", "too many premises"));
    }
    let lang = Language::prop();
    let read = |field: &str, s: &str| parse(&lang, Notation::ASCII, s).map_err(|e| formula_error(field, &e));
    let premises: Vec<Term> = req
        .premises
        .iter()
        .enumerate()
        .map(|(i, s)| read(&format!("premise {}", i + 1), s))
        .collect::<Result<_, _>>()?;
    let conclusion = read("conclusion", &req.conclusion)?;
    let mut columns = premises.clone();
    columns.push(conclusion.clone());
    let table = TruthTable::build(&columns).map_err(semantics_error)?;
    let grade = match &req.rows {
        None => None,
        Some(rows) => {
            let verdict = req
                .verdict
                .ok_or_else(|| ServiceError::bad("missing_verdict", "a graded table needs a verdict"))?;
            let submission = TableSubmission {
                mode: req.mode,
                rows: rows.clone(),
                verdict,
            };
            Some(grade_table(&premises, &conclusion, &submission).map_err(semantics_error)?)
        }
    };
    Ok(CheckTableResponse {
        letters: table.letters.iter().map(|l| l.to_string()).collect(),
        columns: columns.iter().map(Printed::of).collect(),
        row_count: table.rows.len(),
        grade,
    })
}

// ---- /v1/check/translation

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTranslationRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    pub submitted: String,
    pub reference: String,
    #[serde(default = "yes")]
    pub equivalent_passes: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTranslationResponse {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<TranslationVerdict>,
    pub passes: bool,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<FormulaError>,
}

pub fn check_translation_request(
    _engine: &Engine,
    req: &CheckTranslationRequest,
) -> Result<CheckTranslationResponse, ServiceError> {
    let lang = language(req.language.as_deref(), "prop")?;
    let reference = parse(&lang, Notation::ASCII, &req.reference).map_err(|e| formula_error("reference", &e))?;
    let submitted = match parse(&lang, Notation::ASCII, &req.submitted) {
        Ok(t) => t,
        Err(e) => {
            return Ok(CheckTranslationResponse {
                ok: false,
                verdict: None,
                passes: false,
                message: e.to_string(),
                error: Some(FormulaError::from(&e)),
            })
        }
    };
    let verdict = check_translation(&lang, &submitted, &reference).map_err(semantics_error)?;
    let message = match verdict {
        TranslationVerdict::Correct => "correct",
        TranslationVerdict::EquivalentNotIdentical => "equivalent but not identical",
        TranslationVerdict::Incorrect => "incorrect",
    };
    Ok(CheckTranslationResponse {
        ok: true,
        verdict: Some(verdict),
        passes: verdict.passes(req.equivalent_passes),
        message: message.to_string(),
        error: None,
    })
}

// ---- /v1/decompose

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeRequest {
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    /// A student's answer for the main connective.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainOperator {
    /// `connective` or `quantifier`.
    pub kind: String,
    pub ascii: String,
    pub unicode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeResponse {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Printed>,
    pub atomic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main: Option<MainOperator>,
    pub parts: Vec<Printed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<FormulaError>,
}

/// Spellings accepted for a main operator besides its printed glyphs.
fn spellings(ascii: &str) -> &'static [&'static str] {
    match ascii {
        "/\\" => &["&", "^", "and"],
        "\\/" => &["v", "or"],
        "->" => &[">", "if"],
        "<->" => &["<>", "iff"],
        "~" => &["-", "not"],
        _ => &[],
    }
}

fn guess_matches(guess: &str, main: &MainOperator) -> bool {
    let g: String = guess.chars().filter(|c| !c.is_whitespace()).collect();
    let mut ok = vec![main.ascii.clone(), main.unicode.clone()];
    ok.extend(spellings(&main.ascii).iter().map(|s| s.to_string()));
    if let Some(v) = &main.variable {
        ok.push(format!("{}{v}", main.ascii));
        ok.push(format!("{}{v}", main.unicode));
    }
    ok.iter().any(|s| s.eq_ignore_ascii_case(&g))
}

pub fn decompose_formula(_engine: &Engine, req: &DecomposeRequest) -> Result<DecomposeResponse, ServiceError> {
    let lang = language(req.language.as_deref(), "fol")?;
    let t = match parse(&lang, Notation::ASCII, &req.formula) {
        Ok(t) => t,
        Err(e) => {
            return Ok(DecomposeResponse {
                ok: false,
                formula: None,
                atomic: false,
                main: None,
                parts: Vec::new(),
                correct: req.guess.as_ref().map(|_| false),
                error: Some(FormulaError::from(&e)),
            })
        }
    };
    let (main, parts) = match decompose(&t) {
        Err(DecomposeError::AtomicFormula(_)) => (None, Vec::new()),
        Err(e) => return Err(ServiceError::bad("not_decomposable", e.to_string())),
        Ok((LexicalItem::Predicate { .. }, _)) => (None, Vec::new()),
        Ok((head @ LexicalItem::Quantifier(_), args)) => {
            let (var, body) = args
                .first()
                .and_then(open_binder)
                .ok_or_else(|| ServiceError::bad("not_decomposable", "quantifier without a scope"))?;
            let main = MainOperator {
                kind: "quantifier".into(),
                ascii: print_item(&head, Notation::ASCII),
                unicode: print_item(&head, Notation::UNICODE),
                variable: Some(var),
            };
            (Some(main), vec![Printed::of(&body)])
        }
        Ok((head, args)) => {
            let main = MainOperator {
                kind: "connective".into(),
                ascii: print_item(&head, Notation::ASCII),
                unicode: print_item(&head, Notation::UNICODE),
                variable: None,
            };
            (Some(main), args.iter().map(Printed::of).collect())
        }
    };
    let correct = req.guess.as_deref().map(|g| match &main {
        Some(m) => guess_matches(g, m),
        None => g.trim().is_empty() || g.trim().eq_ignore_ascii_case("atomic"),
    });
    Ok(DecomposeResponse {
        ok: true,
        formula: Some(Printed::of(&t)),
        atomic: main.is_none(),
        main,
        parts,
        correct,
        error: None,
    })
}

// ---- /v1/systems

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleInfo {
    pub name: String,
    pub schema: Printed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInfo {
    pub id: String,
    pub language: String,
    pub format: ProofFormat,
    pub rules: Vec<RuleInfo>,
    pub aliases: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemsResponse {
    pub systems: Vec<SystemInfo>,
}

pub fn system_info(s: &System) -> SystemInfo {
    SystemInfo {
        id: s.id.clone(),
        language: s.language.id().to_string(),
        format: s.format,
        rules: s
            .rules
            .iter()
            .map(|r| RuleInfo {
                name: r.name.clone(),
                schema: Printed {
                    ascii: r.schema(Notation::ASCII),
                    unicode: r.schema(Notation::UNICODE),
                },
            })
            .collect(),
        aliases: s.aliases.clone(),
    }
}

pub fn systems(engine: &Engine) -> SystemsResponse {
    SystemsResponse {
        systems: engine.order.iter().map(|id| system_info(&engine.systems[id])).collect(),
    }
}

// ---- /v1/assignments

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentSummary {
    pub id: String,
    pub title: String,
    pub exercises: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentsResponse {
    pub assignments: Vec<AssignmentSummary>,
}

pub fn assignments(engine: &Engine) -> AssignmentsResponse {
    AssignmentsResponse {
        assignments: engine
            .assignments
            .values()
            .map(|m| AssignmentSummary {
                id: m.id.clone(),
                title: m.title.clone(),
                exercises: m.exercises.len(),
            })
            .collect(),
    }
}

pub fn assignment(engine: &Engine, id: &str) -> Result<AssignmentManifest, ServiceError> {
    engine.assignment(id).cloned().ok_or_else(|| ServiceError::NotFound {
        code: "unknown_assignment",
        message: format!("no assignment named `{id}`"),
    })
}
