//! Negation detection and concept summarization for clinical text.

pub mod concepts;
pub mod data;
pub mod detector;
pub mod eval;
pub mod lexicon;
pub mod negex;
pub mod note;
pub mod pipeline;
pub mod provider;
pub mod pruner;
pub mod rules;

pub use concepts::{
    assign_polarity, assign_polarity_spans, identify, longest_matches, semantic_filter, ConceptEntry,
    ConceptMention, Dictionary, DictionaryError, GroupsError, Polarity, SemanticGroups,
};
pub use detector::{strip_split_trigger, DetectError, Detector, NegationResult, TraceStep, UNMATCHED};
pub use eval::{
    evaluate_concepts, evaluate_negation, load_eval, parse_eval, ConceptOutcome, EvalError, EvalRecord,
    GoldConcept, Metrics, NegationEval, NegationMethod,
};
pub use lexicon::{load_lexicon, Lexicon, LexiconError, Location, PhraseType, TriggerMatch, TriggerTerm};
pub use negex::{negex_detect, NegexError, NegexScope, WindowConfig};
pub use note::{sentence_lines, split_note, split_sentences, tokenize, NoteDocument, Section};
pub use pipeline::{format_text, format_trace, format_tsv, Pipeline, PipelineError, SectionSummary, SentenceAnalysis};
pub use provider::{ChainProvider, CommandProvider, FragmentRequest, ProviderError, TreeProvider, TreebankProvider};
pub use pruner::{prune, prune_all, PrunedFragment};
pub use rules::{load_rules, parse_rules, Rule, RuleType, RulesError, Stage};
