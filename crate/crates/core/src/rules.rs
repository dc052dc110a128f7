//! Negation rules: a tree pattern, a surgery script and the capture that
//! holds the negated content.
//!
//! Rules file: records separated by blank lines, one `key: value` per line.
//!
//! ```text
//! name: NP
//! type: NP
//! pattern: NP=target << DT=neg <<, /no|without/ !> NP >> TOP=t
//! script: delete neg
//! concept: target
//! priority: 10
//! ```
//!
//! Optional keys: `stage:` (`pre`, `main` or `fallback`, default `main`) and
//! `absent:` (comma-separated labels that must not occur in the tree for the
//! rule to apply).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::{fs, io};

use clinsum_tree::{Pattern, PatternError, SurgeryError, SurgeryScript};
use thiserror::Error;

use crate::lexicon::PhraseType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleType {
    Phrase(PhraseType),
    Any,
}

impl RuleType {
    pub fn applies_to(self, phrase_type: PhraseType) -> bool {
        match self {
            RuleType::Any => true,
            RuleType::Phrase(p) => p == phrase_type,
        }
    }
}

impl fmt::Display for RuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleType::Any => f.write_str("ANY"),
            RuleType::Phrase(p) => write!(f, "{p}"),
        }
    }
}

/// When a rule runs relative to the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    /// Cleanup applied to every fragment tree, repeatedly, before anything else.
    Pre,
    /// Phrase-type rules; the first that matches wins.
    Main,
    /// Tried only when no main rule matched.
    Fallback,
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub name: String,
    pub rule_type: RuleType,
    pub stage: Stage,
    pub pattern: Pattern,
    pub script: SurgeryScript,
    /// `None` only for pre-stage rules, which do not extract anything.
    pub concept: Option<String>,
    pub priority: i64,
    pub absent: Vec<String>,
}

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("cannot read rules: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected `key: value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("rule starting on line {line}: missing `{key}`")]
    Missing { line: usize, key: &'static str },
    #[error("rule `{rule}`: bad value for `{key}`: {value}")]
    Value {
        rule: String,
        key: &'static str,
        value: String,
    },
    #[error("rule `{rule}`: {source}")]
    Pattern {
        rule: String,
        #[source]
        source: PatternError,
    },
    #[error("rule `{rule}`: {source}")]
    Script {
        rule: String,
        #[source]
        source: SurgeryError,
    },
    #[error("rule `{rule}`: capture `{name}` is not bound by the pattern")]
    Unbound { rule: String, name: String },
    #[error("rule `{rule}`: script deletes the concept capture `{name}`")]
    DeletesConcept { rule: String, name: String },
}

const KEYS: [&str; 8] = [
    "name", "type", "stage", "pattern", "script", "concept", "priority", "absent",
];

pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RulesError> {
    let mut rules = Vec::new();
    let mut record: Vec<(usize, &str, &str)> = Vec::new();
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    for (lineno, line) in lines.chain(std::iter::once((0, ""))) {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if !record.is_empty() {
                rules.push(build_rule(&record)?);
                record.clear();
            }
            continue;
        }
        let (key, value) = trimmed
            .split_once(':')
            .ok_or(RulesError::Syntax { line: lineno })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(RulesError::UnknownKey {
                line: lineno,
                key: key.to_string(),
            });
        }
        if record.iter().any(|(_, k, _)| *k == key) {
            return Err(RulesError::DuplicateKey {
                line: lineno,
                key: key.to_string(),
            });
        }
        record.push((lineno, key, value.trim()));
    }
    rules.sort_by_key(|r: &Rule| r.priority);
    Ok(rules)
}

fn build_rule(record: &[(usize, &str, &str)]) -> Result<Rule, RulesError> {
    let first_line = record[0].0;
    let get = |key: &'static str| record.iter().find(|(_, k, _)| *k == key).map(|r| r.2);
    let need = |key: &'static str| get(key).ok_or(RulesError::Missing {
        line: first_line,
        key,
    });

    let name = need("name")?.to_string();
    let value_err = |key: &'static str, value: &str| RulesError::Value {
        rule: name.clone(),
        key,
        value: value.to_string(),
    };

    let type_text = need("type")?;
    let rule_type = match type_text {
        "ANY" => RuleType::Any,
        other => match other.parse::<PhraseType>() {
            Ok(PhraseType::None) | Err(_) => return Err(value_err("type", other)),
            Ok(p) => RuleType::Phrase(p),
        },
    };
    let stage = match get("stage").unwrap_or("main") {
        "pre" => Stage::Pre,
        "main" => Stage::Main,
        "fallback" => Stage::Fallback,
        other => return Err(value_err("stage", other)),
    };
    let pattern = Pattern::parse(need("pattern")?).map_err(|source| RulesError::Pattern {
        rule: name.clone(),
        source,
    })?;
    let script = SurgeryScript::parse(need("script")?).map_err(|source| RulesError::Script {
        rule: name.clone(),
        source,
    })?;
    let priority_text = need("priority")?;
    let priority = priority_text
        .parse()
        .map_err(|_| value_err("priority", priority_text))?;
    let concept = match (get("concept"), stage) {
        (Some(c), _) => Some(c.to_string()),
        (None, Stage::Pre) => None,
        (None, _) => {
            return Err(RulesError::Missing {
                line: first_line,
                key: "concept",
            })
        }
    };
    let absent = get("absent")
        .map(|a| {
            a.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        })
        .unwrap_or_default();

    let bound: HashSet<&str> = pattern.captures().into_iter().collect();
    for n in script.names().into_iter().chain(concept.as_deref()) {
        if !bound.contains(n) {
            return Err(RulesError::Unbound {
                rule: name,
                name: n.to_string(),
            });
        }
    }
    if let Some(c) = &concept {
        let deletes_it = script.operations.iter().any(
            |op| matches!(op, clinsum_tree::Operation::Delete(n) if n == c),
        );
        if deletes_it {
            return Err(RulesError::DeletesConcept {
                rule: name,
                name: c.clone(),
            });
        }
    }

    Ok(Rule {
        name,
        rule_type,
        stage,
        pattern,
        script,
        concept,
        priority,
        absent,
    })
}

/// Reads a rules file. The result is sorted by priority; equal priorities
/// keep file order.
pub fn load_rules(path: impl AsRef<Path>) -> Result<Vec<Rule>, RulesError> {
    parse_rules(&fs::read_to_string(path)?)
}
