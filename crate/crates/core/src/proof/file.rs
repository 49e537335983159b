use crate::rules::{parse_sequent, system, ProofFormat};

use super::{parse_proof, ProofDocument, ProofError};

const KEYS: &[&str] = &["format", "system", "goal", "exercise"];

/// A proof file: optional `key: value` header lines, a blank line, then
/// the proof text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofFile {
    pub format: Option<String>,
    pub system: Option<String>,
    pub goal: Option<String>,
    pub exercise: Option<String>,
    pub body: String,
}

fn header_entry(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once(':')?;
    let k = k.trim();
    KEYS.contains(&k).then_some((k, v.trim()))
}

pub fn parse_proof_file(text: &str) -> Result<ProofFile, ProofError> {
    let mut file = ProofFile::default();
    let mut lines = text.lines().peekable();
    let mut saw_header = false;
    while let Some(line) = lines.peek() {
        let Some((k, v)) = header_entry(line) else { break };
        saw_header = true;
        let slot = match k {
            "format" => &mut file.format,
            "system" => &mut file.system,
            "goal" => &mut file.goal,
            _ => &mut file.exercise,
        };
        if slot.is_some() {
            return Err(ProofError::MalformedFile(format!("`{k}` is given twice")));
        }
        *slot = Some(v.to_string());
        lines.next();
    }
    if saw_header {
        if let Some(line) = lines.peek() {
            if !line.trim().is_empty() {
                return Err(ProofError::MalformedFile(
                    "the header must be followed by a blank line".into(),
                ));
            }
        }
    }
    file.body = lines.collect::<Vec<_>>().join("\n");
    Ok(file)
}

/// Parses a proof file into a document. Explicit arguments take precedence
/// over the header; the format defaults to that of the system.
pub fn load_proof(
    text: &str,
    system_id: Option<&str>,
    format: Option<ProofFormat>,
) -> Result<(ProofFile, ProofDocument), ProofError> {
    let file = parse_proof_file(text)?;
    let id = system_id
        .map(str::to_string)
        .or_else(|| file.system.clone())
        .ok_or_else(|| ProofError::MalformedFile("no system given".into()))?;
    let sys = system(&id).ok_or_else(|| ProofError::UnknownSystem(id.clone()))?;
    let format = match (format, &file.format) {
        (Some(f), _) => f,
        (None, Some(name)) => {
            ProofFormat::from_name(name).ok_or_else(|| ProofError::UnknownFormat(name.clone()))?
        }
        (None, None) => sys.format,
    };
    let mut doc = parse_proof(format, &id, &sys.language, &file.body);
    if let Some(goal) = &file.goal {
        let g = parse_sequent(&sys.language, goal)
            .map_err(|e| ProofError::MalformedFile(format!("goal: {e}")))?;
        doc.goal = Some(g);
    }
    Ok((file, doc))
}
