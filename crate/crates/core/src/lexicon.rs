//! Negation trigger lexicon.
//!
//! File format: one term per line, `term<TAB>location<TAB>phrase_type<TAB>first_pos`.
//! Lines starting with `#` are comments; a `# counts: PREN=.. POSN=..` comment
//! declares the expected number of terms per location.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::{fs, io};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Location {
    /// Pre-negation: the negated content follows the trigger.
    Pren,
    /// Post-negation: the negated content precedes the trigger.
    Posn,
    /// Possible negation before the content.
    Prep,
    /// Possible negation after the content.
    Posp,
    /// Pseudonegation: looks like a trigger but negates nothing.
    Pseu,
}

impl Location {
    pub const ALL: [Location; 5] = [
        Location::Pren,
        Location::Posn,
        Location::Prep,
        Location::Posp,
        Location::Pseu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Location::Pren => "PREN",
            Location::Posn => "POSN",
            Location::Prep => "PREP",
            Location::Posp => "POSP",
            Location::Pseu => "PSEU",
        }
    }

    /// The negated content comes after the trigger.
    pub fn is_pre(self) -> bool {
        matches!(self, Location::Pren | Location::Prep)
    }

    pub fn is_post(self) -> bool {
        matches!(self, Location::Posn | Location::Posp)
    }

    pub fn is_possible(self) -> bool {
        matches!(self, Location::Prep | Location::Posp)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Location {
    type Err = ();

    fn from_str(s: &str) -> Result<Location, ()> {
        Location::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or(())
    }
}

/// How a trigger relates to the constituent it negates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhraseType {
    Np,
    VpA,
    VpP,
    Pp,
    AdjpA,
    AdjpP,
    AdvpA,
    AdvpP,
    None,
}

impl PhraseType {
    pub const ALL: [PhraseType; 9] = [
        PhraseType::Np,
        PhraseType::VpA,
        PhraseType::VpP,
        PhraseType::Pp,
        PhraseType::AdjpA,
        PhraseType::AdjpP,
        PhraseType::AdvpA,
        PhraseType::AdvpP,
        PhraseType::None,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PhraseType::Np => "NP",
            PhraseType::VpA => "VP-A",
            PhraseType::VpP => "VP-P",
            PhraseType::Pp => "PP",
            PhraseType::AdjpA => "ADJP-A",
            PhraseType::AdjpP => "ADJP-P",
            PhraseType::AdvpA => "ADVP-A",
            PhraseType::AdvpP => "ADVP-P",
            PhraseType::None => "NONE",
        }
    }
}

impl fmt::Display for PhraseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhraseType {
    type Err = ();

    fn from_str(s: &str) -> Result<PhraseType, ()> {
        PhraseType::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerTerm {
    /// Lowercase tokens, never empty.
    pub tokens: Vec<String>,
    pub location: Location,
    pub phrase_type: PhraseType,
    pub first_pos: String,
}

impl TriggerTerm {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// A trigger found in a token list. `end` is inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerMatch {
    pub term: TriggerTerm,
    pub start: usize,
    pub end: usize,
}

impl TriggerMatch {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected 4 tab-separated fields, found {found}")]
    Fields { line: usize, found: usize },
    #[error("line {line}: unknown location `{value}`")]
    Location { line: usize, value: String },
    #[error("line {line}: unknown phrase type `{value}`")]
    PhraseType { line: usize, value: String },
    #[error("line {line}: pseudonegation `{term}` must have phrase type NONE")]
    PseudoPhraseType { line: usize, term: String },
    #[error("line {line}: `{term}` has phrase type NONE but is not a pseudonegation")]
    MissingPhraseType { line: usize, term: String },
    #[error("line {line}: empty term")]
    EmptyTerm { line: usize },
    #[error("line {line}: duplicate term `{term}` (first on line {first})")]
    Duplicate {
        line: usize,
        term: String,
        first: usize,
    },
    #[error("line {line}: malformed counts header")]
    Counts { line: usize },
}

impl LexiconError {
    pub fn line(&self) -> Option<usize> {
        match self {
            LexiconError::Io(_) => None,
            LexiconError::Fields { line, .. }
            | LexiconError::Location { line, .. }
            | LexiconError::PhraseType { line, .. }
            | LexiconError::PseudoPhraseType { line, .. }
            | LexiconError::MissingPhraseType { line, .. }
            | LexiconError::EmptyTerm { line }
            | LexiconError::Duplicate { line, .. }
            | LexiconError::Counts { line } => Some(*line),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    terms: Vec<TriggerTerm>,
    /// First token -> indexes of terms starting with it, longest first.
    index: HashMap<String, Vec<usize>>,
    declared: Option<BTreeMap<Location, usize>>,
}

impl Lexicon {
    pub fn from_terms(terms: Vec<TriggerTerm>) -> Lexicon {
        let mut index: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, t) in terms.iter().enumerate() {
            index.entry(t.tokens[0].clone()).or_default().push(i);
        }
        for list in index.values_mut() {
            list.sort_by_key(|&i| std::cmp::Reverse(terms[i].tokens.len()));
        }
        Lexicon {
            terms,
            index,
            declared: None,
        }
    }

    pub fn parse(text: &str) -> Result<Lexicon, LexiconError> {
        let mut terms = Vec::new();
        let mut seen: HashMap<Vec<String>, usize> = HashMap::new();
        let mut declared = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(counts) = comment.trim().strip_prefix("counts:") {
                    declared = Some(parse_counts(counts).ok_or(LexiconError::Counts { line })?);
                }
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(LexiconError::Fields {
                    line,
                    found: fields.len(),
                });
            }
            let tokens: Vec<String> = fields[0]
                .split_whitespace()
                .map(str::to_lowercase)
                .collect();
            if tokens.is_empty() {
                return Err(LexiconError::EmptyTerm { line });
            }
            let location: Location = fields[1].parse().map_err(|_| LexiconError::Location {
                line,
                value: fields[1].to_string(),
            })?;
            let phrase_type: PhraseType =
                fields[2].parse().map_err(|_| LexiconError::PhraseType {
                    line,
                    value: fields[2].to_string(),
                })?;
            let term = tokens.join(" ");
            match (location, phrase_type) {
                (Location::Pseu, PhraseType::None) => {}
                (Location::Pseu, _) => return Err(LexiconError::PseudoPhraseType { line, term }),
                (_, PhraseType::None) => {
                    return Err(LexiconError::MissingPhraseType { line, term })
                }
                _ => {}
            }
            if let Some(&first) = seen.get(&tokens) {
                return Err(LexiconError::Duplicate { line, term, first });
            }
            seen.insert(tokens.clone(), line);
            terms.push(TriggerTerm {
                tokens,
                location,
                phrase_type,
                first_pos: fields[3].to_string(),
            });
        }
        let mut lexicon = Lexicon::from_terms(terms);
        lexicon.declared = declared;
        if let Some(expected) = &lexicon.declared {
            let actual = lexicon.counts();
            for loc in Location::ALL {
                let want = expected.get(&loc).copied().unwrap_or(0);
                let got = actual.get(&loc).copied().unwrap_or(0);
                if want != got {
                    log::warn!("lexicon declares {want} {loc} terms but contains {got}");
                }
            }
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
        Lexicon::parse(&fs::read_to_string(path)?)
    }

    pub fn terms(&self) -> &[TriggerTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms per location. Every location is present.
    pub fn counts(&self) -> BTreeMap<Location, usize> {
        let mut out: BTreeMap<Location, usize> = Location::ALL.iter().map(|&l| (l, 0)).collect();
        for t in &self.terms {
            *out.entry(t.location).or_default() += 1;
        }
        out
    }

    pub fn phrase_type_counts(&self) -> BTreeMap<PhraseType, usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.phrase_type).or_default() += 1;
        }
        out
    }

    /// Counts from the file's `# counts:` header, if it had one.
    pub fn declared_counts(&self) -> Option<&BTreeMap<Location, usize>> {
        self.declared.as_ref()
    }

    /// Term whose tokens equal `tokens`, ignoring case.
    pub fn lookup<S: AsRef<str>>(&self, tokens: &[S]) -> Option<&TriggerTerm> {
        let first = tokens.first()?.as_ref().to_lowercase();
        self.index.get(&first)?.iter().map(|&i| &self.terms[i]).find(|t| {
            t.tokens.len() == tokens.len()
                && t.tokens
                    .iter()
                    .zip(tokens)
                    .all(|(a, b)| a.eq_ignore_ascii_case(b.as_ref()))
        })
    }

    /// Whether the single word is itself a lexicon term.
    pub fn is_single_word_term(&self, word: &str) -> bool {
        self.lookup(&[word]).is_some()
    }

    /// Longest-leftmost, non-overlapping, case-insensitive trigger scan.
    /// Pseudonegations are returned like any other match.
    pub fn find_triggers<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<TriggerMatch> {
        let lower: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < lower.len() {
            let hit = self.index.get(&lower[i]).and_then(|cands| {
                cands.iter().map(|&c| &self.terms[c]).find(|t| {
                    i + t.tokens.len() <= lower.len()
                        && t.tokens.iter().zip(&lower[i..]).all(|(a, b)| a == b)
                })
            });
            match hit {
                Some(term) => {
                    let end = i + term.tokens.len() - 1;
                    out.push(TriggerMatch {
                        term: term.clone(),
                        start: i,
                        end,
                    });
                    i = end + 1;
                }
                None => i += 1,
            }
        }
        out
    }
}

fn parse_counts(text: &str) -> Option<BTreeMap<Location, usize>> {
    let mut out = BTreeMap::new();
    for part in text.split_whitespace() {
        let (name, n) = part.split_once('=')?;
        out.insert(name.parse().ok()?, n.parse().ok()?);
    }
    Some(out)
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    Lexicon::load(path)
}
