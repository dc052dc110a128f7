//! Constituency trees, a Tregex-style query language over them, and
//! Tsurgeon-style edits.

pub mod matcher;
pub mod pattern;
pub mod span;
pub mod surgery;
pub mod tree;
pub mod treebank;

pub use matcher::{match_all, match_first, MatchBinding};
pub use pattern::{
    parse_pattern, Constraint, LabelMatcher, LabelPattern, NodeDesc, Pattern, PatternError,
    Relation,
};
pub use span::{char_span, tokenize_with_spans, CharSpan, SpanError, Token};
pub use surgery::{delete, excise, extract, run_script, Operation, SurgeryError, SurgeryScript};
pub use tree::{parse_ptb, NodeId, ParseError, Preorder, Tree};
pub use treebank::{load_treebank, normalize_whitespace, Treebank, TreebankEntry, TreebankError};
