//! Assignment manifests: read-only exercise lists served to the UI and
//! used by `deduct grade`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use deduct_core::notation::{parse, Notation};
use deduct_core::rules::{parse_rule, parse_sequent, system, Rule, RuleError};
use deduct_core::syntax::Language;

/// A derived rule, either `{"name", "schema"}` or the string
/// `"NAME: schema"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DerivedRuleSpec {
    Named {
        name: String,
        schema: String,
        /// Restricts the rule to one system.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        system: Option<String>,
    },
    Inline(String),
}

impl DerivedRuleSpec {
    pub fn name_and_schema(&self) -> Result<(&str, &str), RuleError> {
        match self {
            DerivedRuleSpec::Named { name, schema, .. } => Ok((name.trim(), schema)),
            DerivedRuleSpec::Inline(s) => s
                .split_once(':')
                .map(|(n, sch)| (n.trim(), sch))
                .ok_or_else(|| RuleError::IllFormedSchema {
                    rule: s.clone(),
                    detail: "expected `NAME: schema`".into(),
                }),
        }
    }

    pub fn applies_to(&self, system_id: &str) -> bool {
        match self {
            DerivedRuleSpec::Named { system: Some(s), .. } => s == system_id,
            _ => true,
        }
    }

    pub fn parse(&self, lang: &Language) -> Result<Rule, RuleError> {
        let (name, schema) = self.name_and_schema()?;
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(RuleError::IllFormedSchema {
                rule: name.to_string(),
                detail: "a rule name is one word".into(),
            });
        }
        parse_rule(lang, name, schema)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExerciseKind {
    Proof,
    Table,
    Translation,
    SyntaxBreakdown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    /// Translations equivalent to the reference without being identical
    /// pass.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalent_passes: Option<bool>,
    /// `full` or `counterexample`, for tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_mode: Option<deduct_core::semantics::TableMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exercise {
    pub id: String,
    pub kind: ExerciseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default)]
    pub prompt: String,
    /// Goal sequent, argument, reference translation or formula.
    pub target: String,
    #[serde(default)]
    pub grading: Grading,
}

impl Exercise {
    /// The language the target is written in.
    pub fn language(&self) -> Result<Language> {
        if let Some(id) = &self.system {
            let sys = system(id).with_context(|| format!("exercise {}: no system named `{id}`", self.id))?;
            if let Some(l) = &self.language {
                if l != sys.language.id() {
                    bail!("exercise {}: system {id} is not in language {l}", self.id);
                }
            }
            return Ok(sys.language);
        }
        let id = self.language.as_deref().unwrap_or("prop");
        Language::by_id(id).with_context(|| format!("exercise {}: no language named `{id}`", self.id))
    }

    fn validate(&self) -> Result<()> {
        let lang = self.language()?;
        let ctx = || format!("exercise {}: target `{}`", self.id, self.target);
        match self.kind {
            ExerciseKind::Proof => {
                if self.system.is_none() {
                    bail!("exercise {}: a proof exercise names its system", self.id);
                }
                parse_sequent(&lang, &self.target).with_context(ctx)?;
            }
            ExerciseKind::Table => {
                if lang.id() != "prop" {
                    bail!("exercise {}: truth tables are propositional", self.id);
                }
                parse_sequent(&lang, &self.target).with_context(ctx)?;
            }
            ExerciseKind::Translation | ExerciseKind::SyntaxBreakdown => {
                parse(&lang, Notation::ASCII, &self.target).with_context(ctx)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentManifest {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived_rules: Vec<DerivedRuleSpec>,
    pub exercises: Vec<Exercise>,
}

impl AssignmentManifest {
    pub fn derived_rules_for(&self, system_id: &str) -> Vec<DerivedRuleSpec> {
        self.derived_rules.iter().filter(|s| s.applies_to(system_id)).cloned().collect()
    }

    pub fn exercise(&self, id: &str) -> Option<&Exercise> {
        self.exercises.iter().find(|e| e.id == id)
    }

    /// Every target parses in its declared language and every derived
    /// rule parses in the systems it applies to.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.exercises {
            if !seen.insert(e.id.as_str()) {
                bail!("exercise id {} repeats", e.id);
            }
            e.validate()?;
        }
        for spec in &self.derived_rules {
            let ids: Vec<String> = match spec {
                DerivedRuleSpec::Named { system: Some(s), .. } => vec![s.clone()],
                _ => self.exercises.iter().filter_map(|e| e.system.clone()).collect(),
            };
            for id in ids {
                let sys = system(&id).with_context(|| format!("derived rule: no system named `{id}`"))?;
                spec.parse(&sys.language).with_context(|| format!("derived rule for {id}"))?;
            }
        }
        Ok(())
    }
}

pub fn parse_manifest(text: &str) -> Result<AssignmentManifest> {
    let m: AssignmentManifest = serde_json::from_str(text).context("malformed manifest")?;
    m.validate().with_context(|| format!("assignment {}", m.id))?;
    Ok(m)
}

pub fn load_manifest(path: &Path) -> Result<AssignmentManifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_manifest(&text).with_context(|| path.display().to_string())
}

/// Loads every `*.json` manifest of `dir`, keyed by assignment id.
pub fn load_dir(dir: &Path) -> Result<BTreeMap<String, AssignmentManifest>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading assignment directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    let mut out = BTreeMap::new();
    for p in paths {
        let m = load_manifest(&p)?;
        if out.contains_key(&m.id) {
            bail!("{}: assignment id {} repeats", p.display(), m.id);
        }
        out.insert(m.id.clone(), m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MANIFEST: &str = r#"{
        "id": "week1",
        "title": "Conditionals",
        "derived_rules": [{"name": "Curry", "system": "prop-fitch",
                           "schema": "G1 |- phi1 /\\ phi2 -> phi3 => G1 |- phi1 -> phi2 -> phi3"}],
        "exercises": [
            {"id": "1", "kind": "proof", "system": "prop-fitch", "prompt": "Curry it",
             "target": "(P/\\Q)->R |- P->(Q->R)"},
            {"id": "2", "kind": "table", "prompt": "Valid?", "target": "P->Q, Q |- P",
             "grading": {"table_mode": "counterexample"}},
            {"id": "3", "kind": "translation", "prompt": "P and Q", "target": "P/\\Q",
             "grading": {"equivalent_passes": false}},
            {"id": "4", "kind": "syntax-breakdown", "language": "fol", "target": "Ax(F(x)->F(x))"}
        ]
    }"#;

    #[test]
    fn manifest_round_trips() {
        let m = parse_manifest(MANIFEST).unwrap();
        assert_eq!(m.exercises.len(), 4);
        assert_eq!(m.exercises[3].kind, ExerciseKind::SyntaxBreakdown);
        let again = parse_manifest(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn bad_targets_are_rejected() {
        for (from, to) in [
            ("P->Q, Q |- P", "P->Q, Q |- "),
            ("\"P/\\\\Q\"", "\"P/\\\\\""),
            ("\"system\": \"prop-fitch\", \"prompt\": \"Curry it\"", "\"system\": \"nope\""),
            ("\"language\": \"fol\"", "\"language\": \"prop\""),
        ] {
            let bad = MANIFEST.replacen(from, to, 1);
            assert_ne!(bad, MANIFEST, "{from}");
            assert!(parse_manifest(&bad).is_err(), "{to}");
        }
    }

    #[test]
    fn inline_rule_specs() {
        let spec: DerivedRuleSpec = serde_json::from_str(r#""DN2: G1 |- phi1 => G1 |- ~~phi1""#).unwrap();
        let r = spec.parse(&Language::prop()).unwrap();
        assert_eq!(r.name, "DN2");
        let bad: DerivedRuleSpec = serde_json::from_str(r#""no colon here""#).unwrap();
        assert!(bad.parse(&Language::prop()).is_err());
    }
}
