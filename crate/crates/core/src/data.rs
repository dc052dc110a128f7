//! Bundled resources.

use std::collections::HashSet;

use crate::concepts::{Dictionary, SemanticGroups};
use crate::detector::Detector;
use crate::lexicon::Lexicon;
use crate::pipeline::Pipeline;
use crate::rules::{parse_rules, Rule};

pub const LEXICON: &str = include_str!("../data/lexicon.tsv");
pub const RULES: &str = include_str!("../data/rules.txt");
pub const DICTIONARY: &str = include_str!("../data/dictionary.tsv");
pub const GROUPS: &str = include_str!("../data/groups.tsv");
pub const STOPWORDS: &str = include_str!("../data/stopwords.txt");

pub fn lexicon() -> Lexicon {
    Lexicon::parse(LEXICON).expect("bundled lexicon parses")
}

pub fn rules() -> Vec<Rule> {
    parse_rules(RULES).expect("bundled rules parse")
}

pub fn dictionary() -> Dictionary {
    Dictionary::parse(DICTIONARY).expect("bundled dictionary parses")
}

pub fn groups() -> SemanticGroups {
    SemanticGroups::default()
}

pub fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn stopwords() -> HashSet<String> {
    parse_stopwords(STOPWORDS)
}

pub fn detector() -> Detector {
    Detector::new(lexicon(), rules(), stopwords())
}

/// Bundled resources with semantic filtering on.
pub fn pipeline() -> Pipeline {
    Pipeline {
        detector: detector(),
        dictionary: dictionary(),
        groups: Some(groups()),
    }
}
