use std::collections::BTreeMap;

use crate::syntax::Language;

use super::{parse_rule, ProofFormat, Rule, System};

type Table = &'static [(&'static str, &'static str)];

const PROP_CORE: Table = &[
    ("MP", "G1 |- phi1 -> phi2; G2 |- phi1 => G1, G2 |- phi2"),
    ("MT", "G1 |- phi1 -> phi2; G2 |- ~phi2 => G1, G2 |- ~phi1"),
    ("DN", "G1 |- ~~phi1 => G1 |- phi1"),
    ("DN", "G1 |- phi1 => G1 |- ~~phi1"),
    ("&I", "G1 |- phi1; G2 |- phi2 => G1, G2 |- phi1 /\\ phi2"),
    ("&E", "G1 |- phi1 /\\ phi2 => G1 |- phi1"),
    ("&E", "G1 |- phi1 /\\ phi2 => G1 |- phi2"),
    ("vI", "G1 |- phi1 => G1 |- phi1 \\/ phi2"),
    ("vI", "G1 |- phi2 => G1 |- phi1 \\/ phi2"),
    ("<->E", "G1 |- phi1 <-> phi2; G2 |- phi1 => G1, G2 |- phi2"),
    ("<->E", "G1 |- phi1 <-> phi2; G2 |- phi2 => G1, G2 |- phi1"),
    ("~E", "G1 |- phi1; G2 |- ~phi1 => G1, G2 |- phi2"),
    ("R", "G1 |- phi1 => G1 |- phi1"),
];

// Subproof-discharging rules of the Fitch systems.
const PROP_FITCH: Table = &[
    ("CP", "G1, phi1 |- phi2 => G1 |- phi1 -> phi2"),
    (
        "vE",
        "G1 |- phi1 \\/ phi2; G2, phi1 |- phi3; G3, phi2 |- phi3 => G1, G2, G3 |- phi3",
    ),
    ("<->I", "G1, phi1 |- phi2; G2, phi2 |- phi1 => G1, G2 |- phi1 <-> phi2"),
    ("RAA", "G1, phi1 |- phi2 /\\ ~phi2 => G1 |- ~phi1"),
    ("RAA", "G1, ~phi1 |- phi2 /\\ ~phi2 => G1 |- phi1"),
];

// Show-line discharges and conditional-style rules of the Montague and
// Hardegree systems.
const PROP_SHOW: Table = &[
    ("DD", "G1 |- phi1 => G1 |- phi1"),
    ("CD", "G1, phi1 |- phi2 => G1 |- phi1 -> phi2"),
    ("ID", "G1, ~phi1 |- phi2; G1, ~phi1 |- ~phi2 => G1 |- phi1"),
    ("ID", "G1, phi1 |- phi2; G1, phi1 |- ~phi2 => G1 |- ~phi1"),
    (
        "vE",
        "G1 |- phi1 \\/ phi2; G2 |- phi1 -> phi3; G3 |- phi2 -> phi3 => G1, G2, G3 |- phi3",
    ),
    ("<->I", "G1 |- phi1 -> phi2; G2 |- phi2 -> phi1 => G1, G2 |- phi1 <-> phi2"),
    ("<->E", "G1 |- phi1 <-> phi2 => G1 |- phi1 -> phi2"),
    ("<->E", "G1 |- phi1 <-> phi2 => G1 |- phi2 -> phi1"),
];

const DISJUNCTIVE_SYLLOGISM: Table = &[
    ("DS", "G1 |- phi1 \\/ phi2; G2 |- ~phi1 => G1, G2 |- phi2"),
    ("DS", "G1 |- phi1 \\/ phi2; G2 |- ~phi2 => G1, G2 |- phi1"),
];

const FOL_CORE: Table = &[
    ("UI", "G1 |- Av phi1(v) => G1 |- phi1(tau1)"),
    ("UG", "G1 |- phi1(tau1) => G1 |- Av phi1(v) [fresh: tau1]"),
    ("EG", "G1 |- phi1(tau1) => G1 |- Ev phi1(v)"),
];

const FOL_FITCH: Table = &[(
    "EE",
    "G1 |- Ev phi1(v); G2, phi1(tau1) |- phi2 => G1, G2 |- phi2 [fresh: tau1]",
)];

const FOL_SHOW: Table = &[(
    "EE",
    "G1 |- Ev phi1(v); G2 |- phi1(tau1) -> phi2 => G1, G2 |- phi2 [fresh: tau1]",
)];

const FITCH_ALIASES: Table = &[
    ("->E", "MP"),
    ("->I", "CP"),
    ("~I", "RAA"),
    ("/\\I", "&I"),
    ("/\\E", "&E"),
    ("\\/I", "vI"),
    ("\\/E", "vE"),
    ("AE", "UI"),
    ("AI", "UG"),
    ("EI", "EG"),
    ("Reit", "R"),
];

const MONTAGUE_ALIASES: Table = &[
    ("S", "&E"),
    ("ADJ", "&I"),
    ("ADD", "vI"),
    ("SC", "vE"),
    ("CB", "<->I"),
    ("BC", "<->E"),
    ("CP", "CD"),
    ("RAA", "ID"),
    ("->E", "MP"),
    ("MTT", "MT"),
];

const HARDEGREE_ALIASES: Table = &[
    ("->O", "MP"),
    ("&O", "&E"),
    ("vO", "DS"),
    ("<->O", "<->E"),
    ("->I", "CD"),
    ("~I", "ID"),
    ("AO", "UI"),
    ("AI", "UG"),
    ("EO", "EE"),
    ("EI", "EG"),
];

const GLOBAL_ALIASES: Table = &[
    ("→E", "MP"),
    ("→I", "CP"),
    ("∧I", "&I"),
    ("∧E", "&E"),
    ("∨I", "vI"),
    ("∨E", "vE"),
    ("¬I", "RAA"),
    ("¬E", "~E"),
    ("¬¬", "DN"),
    ("↔I", "<->I"),
    ("↔E", "<->E"),
    ("∀E", "UI"),
    ("∀I", "UG"),
    ("∃I", "EG"),
    ("∃E", "EE"),
    ("→O", "MP"),
    ("∧O", "&E"),
    ("∨O", "DS"),
    ("↔O", "<->E"),
];

pub(super) fn global_alias(citation: &str) -> Option<&'static str> {
    GLOBAL_ALIASES
        .iter()
        .find(|(a, _)| *a == citation)
        .map(|(_, n)| *n)
}

fn rules(lang: &Language, tables: &[Table]) -> Vec<Rule> {
    tables
        .iter()
        .flat_map(|t| t.iter())
        .map(|(name, text)| parse_rule(lang, name, text).expect("shipped schemas are well formed"))
        .collect()
}

fn aliases(table: Table) -> BTreeMap<String, String> {
    table
        .iter()
        .map(|(a, n)| (a.to_string(), n.to_string()))
        .collect()
}

fn build(id: &str, lang: Language, format: ProofFormat) -> System {
    let fol = lang.id() == "fol";
    let mut tables: Vec<Table> = vec![PROP_CORE];
    match format {
        ProofFormat::Fitch => tables.push(PROP_FITCH),
        ProofFormat::Montague => tables.push(PROP_SHOW),
        ProofFormat::Hardegree => tables.extend([PROP_SHOW, DISJUNCTIVE_SYLLOGISM]),
    }
    if fol {
        tables.push(FOL_CORE);
        tables.push(match format {
            ProofFormat::Fitch => FOL_FITCH,
            _ => FOL_SHOW,
        });
    }
    let alias_table = match format {
        ProofFormat::Fitch => FITCH_ALIASES,
        ProofFormat::Montague => MONTAGUE_ALIASES,
        ProofFormat::Hardegree => HARDEGREE_ALIASES,
    };
    let rules = rules(&lang, &tables);
    let mut aliases = aliases(alias_table);
    aliases.retain(|_, n| rules.iter().any(|r| &r.name == n));
    System::new(id, lang, format, rules, aliases)
}

/// The six shipped systems, propositional before first-order.
pub fn builtin_systems() -> Vec<System> {
    let mut out = Vec::new();
    for lang in [Language::prop(), Language::fol()] {
        for format in [ProofFormat::Fitch, ProofFormat::Montague, ProofFormat::Hardegree] {
            let id = format!("{}-{}", lang.id(), format.name());
            out.push(build(&id, lang.clone(), format));
        }
    }
    out
}

pub fn system(id: &str) -> Option<System> {
    let (lang, format) = id.split_once('-')?;
    let lang = Language::by_id(lang)?;
    let format = ProofFormat::from_name(format)?;
    Some(build(id, lang, format))
}
