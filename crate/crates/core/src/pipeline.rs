//! Notes in, itemized concept lists out.

use std::fmt::Write as _;

use thiserror::Error;

use crate::concepts::{assign_polarity, identify, semantic_filter, ConceptMention, Dictionary, SemanticGroups};
use crate::detector::{DetectError, Detector, NegationResult};
use crate::note::{tokenize, NoteDocument};
use crate::provider::TreeProvider;

#[derive(Debug, Error)]
#[error("sentence `{sentence}`: {source}")]
pub struct PipelineError {
    pub sentence: String,
    #[source]
    pub source: DetectError,
}

pub struct Pipeline {
    pub detector: Detector,
    pub dictionary: Dictionary,
    /// `None` keeps every dictionary concept.
    pub groups: Option<SemanticGroups>,
}

#[derive(Debug, Clone)]
pub struct SentenceAnalysis {
    pub sentence: String,
    pub negations: Vec<NegationResult>,
    pub mentions: Vec<ConceptMention>,
}

#[derive(Debug, Clone)]
pub struct SectionSummary {
    pub header: String,
    pub sentences: Vec<SentenceAnalysis>,
}

impl SectionSummary {
    pub fn mentions(&self) -> impl Iterator<Item = &ConceptMention> {
        self.sentences.iter().flat_map(|s| &s.mentions)
    }

    /// `Preferred(+)` items, comma-joined.
    pub fn itemized(&self) -> String {
        self.mentions().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
}

impl Pipeline {
    /// `sentence` must already be tokenized.
    pub fn analyze(&self, sentence: &str, provider: &dyn TreeProvider) -> Result<SentenceAnalysis, PipelineError> {
        let negations = self
            .detector
            .detect(sentence, provider)
            .map_err(|source| PipelineError {
                sentence: sentence.to_string(),
                source,
            })?;
        let mut mentions = identify(sentence, &self.dictionary);
        if let Some(g) = &self.groups {
            mentions = semantic_filter(mentions, g);
        }
        let mentions = assign_polarity(mentions, &negations);
        Ok(SentenceAnalysis {
            sentence: sentence.to_string(),
            negations,
            mentions,
        })
    }

    /// Sentences are tokenized before analysis.
    pub fn summarize(&self, doc: &NoteDocument, provider: &dyn TreeProvider) -> Result<Vec<SectionSummary>, PipelineError> {
        self.run(doc, provider, true)
    }

    /// Like `summarize` for sentences that are already tokenized.
    pub fn summarize_tokenized(
        &self,
        doc: &NoteDocument,
        provider: &dyn TreeProvider,
    ) -> Result<Vec<SectionSummary>, PipelineError> {
        self.run(doc, provider, false)
    }

    fn run(&self, doc: &NoteDocument, provider: &dyn TreeProvider, split: bool) -> Result<Vec<SectionSummary>, PipelineError> {
        doc.sections
            .iter()
            .map(|section| {
                let sentences = section
                    .sentences
                    .iter()
                    .map(|s| {
                        if split {
                            self.analyze(&tokenize(s), provider)
                        } else {
                            self.analyze(s, provider)
                        }
                    })
                    .collect::<Result<_, _>>()?;
                Ok(SectionSummary {
                    header: section.header.clone(),
                    sentences,
                })
            })
            .collect()
    }
}

pub fn format_text(summaries: &[SectionSummary]) -> String {
    let mut out = String::new();
    for s in summaries {
        let _ = writeln!(out, "--- {} ---", s.header);
        let _ = writeln!(out, "{}", s.itemized());
    }
    out
}

/// Per-sentence negation records followed by the itemized summary.
pub fn format_trace(summaries: &[SectionSummary]) -> String {
    let mut out = String::new();
    let sentences = summaries.iter().flat_map(|s| &s.sentences);
    for (i, a) in sentences.enumerate() {
        let _ = writeln!(out, "sent: {i}");
        if a.negations.is_empty() {
            let _ = writeln!(out, "original: {}\n", a.sentence);
            continue;
        }
        let _ = writeln!(out, "original: {}\t [NEGATED]\n", a.sentence);
        for n in &a.negations {
            let _ = writeln!(out, "neg part: {}", n.fragment.text());
            let _ = writeln!(out, "negated term: {}", n.trigger.term.text());
            let _ = writeln!(out, "--- tregex/tsurgeon with negated type: {}", n.trigger.term.phrase_type);
            for step in &n.steps {
                let _ = writeln!(out, "--- {}", step.rule);
                let _ = writeln!(out, "constituency tree: {}", step.tree);
            }
            let _ = writeln!(out, "constituency tree: {}", n.extracted);
            let _ = writeln!(out, ">> {}", n.negated_tokens.join(" "));
            match n.span {
                Some(span) => {
                    let _ = writeln!(out, ">> negated span: {span}\n");
                }
                None => {
                    let _ = writeln!(out, ">> negated span: none\n");
                }
            }
        }
    }
    out.push_str("--- Final output ---\n\n");
    out.push_str(&format_text(summaries));
    out
}

/// `section cui preferred polarity possible span alternatives`, tab-separated,
/// one concept per line. Spans refer to the tokenized sentence.
pub fn format_tsv(summaries: &[SectionSummary]) -> String {
    let mut out = String::new();
    for s in summaries {
        for m in s.mentions() {
            let alternatives = if m.alternatives.is_empty() {
                "-".to_string()
            } else {
                m.alternatives.join(",")
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s.header,
                m.cui,
                m.preferred,
                m.polarity.as_str(),
                m.possible,
                m.char_span,
                alternatives
            );
        }
    }
    out
}
