//! Scoring against annotated sentences.
//!
//! Eval file: records separated by blank lines. The first line of a record
//! is the tokenized sentence; each further line is
//! `concept text<TAB>polarity[<TAB>cui]`.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::{fs, io};

use clinsum_tree::{tokenize_with_spans, CharSpan};
use thiserror::Error;

use crate::concepts::{identify, semantic_filter, Dictionary, Polarity, SemanticGroups};
use crate::detector::{DetectError, Detector};
use crate::lexicon::Lexicon;
use crate::negex::{negex_detect, WindowConfig};
use crate::provider::{ProviderError, TreeProvider};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldConcept {
    pub text: String,
    pub polarity: Polarity,
    pub cui: Option<String>,
    /// Where the text occurs in the sentence.
    pub span: CharSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRecord {
    pub sentence: String,
    pub gold: Vec<GoldConcept>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read evaluation file: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("empty evaluation set")]
    Empty,
    #[error("no trees for {} fragment(s): {}", .fragments.len(), .fragments.join(" | "))]
    MissingTrees { fragments: Vec<String> },
    #[error(transparent)]
    Detect(#[from] DetectError),
}

/// Token-aligned, case-insensitive position of `text`, skipping the first
/// `skip` occurrences.
pub fn locate(sentence: &str, text: &str, skip: usize) -> Option<CharSpan> {
    let words = tokenize_with_spans(sentence);
    let want: Vec<&str> = text.split_whitespace().collect();
    if want.is_empty() || want.len() > words.len() {
        return None;
    }
    (0..=words.len() - want.len())
        .filter(|&i| {
            want.iter()
                .zip(&words[i..])
                .all(|(a, w)| a.eq_ignore_ascii_case(w.text))
        })
        .nth(skip)
        .map(|i| words[i].span.cover(&words[i + want.len() - 1].span))
}

pub fn parse_eval(text: &str) -> Result<Vec<EvalRecord>, EvalError> {
    let mut records = Vec::new();
    let mut current: Option<EvalRecord> = None;
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.starts_with('#') {
            continue;
        }
        if raw.trim().is_empty() {
            records.extend(current.take());
            seen.clear();
            continue;
        }
        let Some(record) = current.as_mut() else {
            current = Some(EvalRecord {
                sentence: raw.split_whitespace().collect::<Vec<_>>().join(" "),
                gold: Vec::new(),
            });
            continue;
        };
        let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let format = |message: String| EvalError::Format { line, message };
        if !(2..=3).contains(&fields.len()) {
            return Err(format("expected `concept<TAB>polarity[<TAB>cui]`".into()));
        }
        let polarity = fields[1].parse().map_err(format)?;
        let key = fields[0].to_lowercase();
        let skip = seen.entry(key).or_default();
        let span = locate(&record.sentence, fields[0], *skip)
            .ok_or_else(|| format(format!("`{}` does not occur in the sentence", fields[0])))?;
        *skip += 1;
        record.gold.push(GoldConcept {
            text: fields[0].to_string(),
            polarity,
            cui: fields.get(2).filter(|c| !c.is_empty()).map(|c| c.to_string()),
            span,
        });
    }
    records.extend(current);
    Ok(records)
}

pub fn load_eval(path: impl AsRef<Path>) -> Result<Vec<EvalRecord>, EvalError> {
    parse_eval(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    /// Gold items considered.
    pub total: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl Metrics {
    pub fn new(tp: usize, fp: usize, fn_: usize, total: usize, accuracy: f64) -> Metrics {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Metrics {
            tp,
            fp,
            fn_,
            total,
            accuracy,
            precision,
            recall,
            f1,
        }
    }
}

pub enum NegationMethod<'a> {
    Syntax {
        detector: &'a Detector,
        provider: &'a dyn TreeProvider,
    },
    Negex {
        lexicon: &'a Lexicon,
        config: &'a WindowConfig,
    },
}

impl NegationMethod<'_> {
    pub fn negated_spans(&self, sentence: &str) -> Result<Vec<CharSpan>, DetectError> {
        match self {
            NegationMethod::Syntax { detector, provider } => Ok(detector
                .detect(sentence, *provider)?
                .into_iter()
                .filter_map(|r| r.span)
                .collect()),
            NegationMethod::Negex { lexicon, config } => {
                let words = tokenize_with_spans(sentence);
                let texts: Vec<&str> = words.iter().map(|w| w.text).collect();
                Ok(negex_detect(&texts, lexicon, config)
                    .into_iter()
                    .filter(|s| !s.scope.is_empty())
                    .map(|s| words[s.scope.start].span.cover(&words[s.scope.end - 1].span))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptOutcome {
    pub record: usize,
    pub text: String,
    pub polarity: Polarity,
    /// Inside some detected negated span.
    pub covered: bool,
}

#[derive(Debug, Clone)]
pub struct NegationEval {
    pub metrics: Metrics,
    pub outcomes: Vec<ConceptOutcome>,
}

/// A negated gold concept is captured when a detected span covers it; a
/// positive gold concept inside a detected span is a false positive.
/// Accuracy is captured over all negated gold concepts.
pub fn evaluate_negation(records: &[EvalRecord], method: &NegationMethod<'_>) -> Result<NegationEval, EvalError> {
    if records.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut missing = Vec::new();
    let mut spans = Vec::with_capacity(records.len());
    for r in records {
        match method.negated_spans(&r.sentence) {
            Ok(s) => spans.push(s),
            Err(DetectError::Provider(ProviderError::Missing { fragment })) => {
                missing.push(fragment);
                spans.push(Vec::new());
            }
            Err(e) => return Err(e.into()),
        }
    }
    if !missing.is_empty() {
        return Err(EvalError::MissingTrees { fragments: missing });
    }

    let mut outcomes = Vec::new();
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (i, (r, detected)) in records.iter().zip(&spans).enumerate() {
        for g in &r.gold {
            let covered = detected.iter().any(|s| s.contains(&g.span));
            match (g.polarity, covered) {
                (Polarity::Negated, true) => tp += 1,
                (Polarity::Negated, false) => fn_ += 1,
                (Polarity::Positive, true) => fp += 1,
                (Polarity::Positive, false) => {}
            }
            outcomes.push(ConceptOutcome {
                record: i,
                text: g.text.clone(),
                polarity: g.polarity,
                covered,
            });
        }
    }
    let total = tp + fn_;
    Ok(NegationEval {
        metrics: Metrics::new(tp, fp, fn_, total, ratio(tp, total)),
        outcomes,
    })
}

/// Compares identified `(span, cui)` pairs with the gold concepts that carry
/// a cui. Accuracy is tp / (tp + fp + fn).
pub fn evaluate_concepts(records: &[EvalRecord], dict: &Dictionary, groups: Option<&SemanticGroups>) -> Metrics {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for r in records {
        let mut found = identify(&r.sentence, dict);
        if let Some(g) = groups {
            found = semantic_filter(found, g);
        }
        let predicted: BTreeSet<(CharSpan, &str)> =
            found.iter().map(|m| (m.char_span, m.cui.as_str())).collect();
        let gold: BTreeSet<(CharSpan, &str)> = r
            .gold
            .iter()
            .filter_map(|g| Some((g.span, g.cui.as_deref()?)))
            .collect();
        tp += predicted.intersection(&gold).count();
        fp += predicted.difference(&gold).count();
        fn_ += gold.difference(&predicted).count();
    }
    Metrics::new(tp, fp, fn_, tp + fn_, ratio(tp, tp + fp + fn_))
}
