//! Dictionary concept lookup, semantic-type filtering and polarity.
//!
//! Dictionary rows: `surface<TAB>cui<TAB>preferred<TAB>tui`.
//! Groups rows: `group name<TAB>T047,T191`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::{fs, io};

use clinsum_tree::{tokenize_with_spans, CharSpan};
use thiserror::Error;

use crate::detector::NegationResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptEntry {
    /// Lowercase tokens.
    pub surface: Vec<String>,
    pub cui: String,
    pub preferred: String,
    pub tui: String,
}

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("cannot read dictionary: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected 4 tab-separated fields, found {found}")]
    Fields { line: usize, found: usize },
    #[error("line {line}: empty surface form")]
    EmptySurface { line: usize },
    #[error("line {line}: empty concept id")]
    EmptyCui { line: usize },
    #[error("line {line}: semantic type `{tui}` is not T followed by 3 digits")]
    Tui { line: usize, tui: String },
}

impl DictionaryError {
    pub fn line(&self) -> Option<usize> {
        match self {
            DictionaryError::Io(_) => None,
            DictionaryError::Fields { line, .. }
            | DictionaryError::EmptySurface { line }
            | DictionaryError::EmptyCui { line }
            | DictionaryError::Tui { line, .. } => Some(*line),
        }
    }
}

pub fn is_tui(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 4 && b[0] == b'T' && b[1..].iter().all(u8::is_ascii_digit)
}

#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    entries: Vec<ConceptEntry>,
    index: HashMap<Vec<String>, Vec<usize>>,
    longest: usize,
}

impl Dictionary {
    pub fn from_entries(entries: Vec<ConceptEntry>) -> Dictionary {
        let mut index: HashMap<Vec<String>, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            index.entry(e.surface.clone()).or_default().push(i);
        }
        let longest = entries.iter().map(|e| e.surface.len()).max().unwrap_or(0);
        Dictionary {
            entries,
            index,
            longest,
        }
    }

    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Dictionary, DictionaryError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let [surface, cui, preferred, tui] = fields[..] else {
                return Err(DictionaryError::Fields {
                    line,
                    found: fields.len(),
                });
            };
            let surface: Vec<String> = surface.split_whitespace().map(str::to_lowercase).collect();
            if surface.is_empty() {
                return Err(DictionaryError::EmptySurface { line });
            }
            if cui.is_empty() {
                return Err(DictionaryError::EmptyCui { line });
            }
            if !is_tui(tui) {
                return Err(DictionaryError::Tui {
                    line,
                    tui: tui.to_string(),
                });
            }
            entries.push(ConceptEntry {
                surface,
                cui: cui.to_string(),
                preferred: preferred.to_string(),
                tui: tui.to_string(),
            });
        }
        Ok(Dictionary::from_entries(entries))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Dictionary, DictionaryError> {
        Dictionary::parse(&fs::read_to_string(path)?)
    }

    pub fn entries(&self) -> &[ConceptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry indexes for a surface, in file order.
    pub fn lookup<S: AsRef<str>>(&self, tokens: &[S]) -> &[usize] {
        let key: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
        self.index.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every dictionary hit as `(start, end inclusive, entry index)`, ordered
    /// by start, then length, then file order.
    pub fn all_matches<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for start in 0..tokens.len() {
            for len in 1..=self.longest.min(tokens.len() - start) {
                for &e in self.lookup(&tokens[start..start + len]) {
                    out.push((start, start + len - 1, e));
                }
            }
        }
        out
    }
}

/// Keeps the dictionary hits that no other hit strictly contains. Hits with
/// the same span collapse to the earliest entry. Result is ordered by span.
pub fn longest_matches<S: AsRef<str>>(tokens: &[S], dict: &Dictionary) -> Vec<(usize, usize, usize)> {
    let mut hits = dict.all_matches(tokens);
    hits.sort_by_key(|&(s, e, i)| (std::cmp::Reverse(e - s), s, i));
    let mut kept: Vec<(usize, usize, usize)> = Vec::new();
    for h in hits {
        if !kept.iter().any(|k| k.0 <= h.0 && h.1 <= k.1) {
            kept.push(h);
        }
    }
    kept.sort_by_key(|&(s, e, _)| (s, e));
    kept
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negated,
}

impl Polarity {
    pub fn symbol(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negated => '-',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negated => "negated",
        }
    }
}

impl std::str::FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Polarity, String> {
        match s.to_ascii_lowercase().as_str() {
            "positive" | "pos" | "+" | "affirmed" => Ok(Polarity::Positive),
            "negated" | "neg" | "-" | "negative" => Ok(Polarity::Negated),
            _ => Err(format!("unknown polarity `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptMention {
    pub token_start: usize,
    /// Inclusive.
    pub token_end: usize,
    pub char_span: CharSpan,
    pub cui: String,
    pub preferred: String,
    pub tui: String,
    pub polarity: Polarity,
    pub possible: bool,
    /// Other concept ids listed for the same surface, in file order.
    pub alternatives: Vec<String>,
}

impl fmt::Display for ConceptMention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.preferred, self.polarity.symbol())
    }
}

/// Concept mentions in a whitespace-tokenized sentence, all positive.
pub fn identify(sentence: &str, dict: &Dictionary) -> Vec<ConceptMention> {
    let words = tokenize_with_spans(sentence);
    let texts: Vec<&str> = words.iter().map(|w| w.text).collect();
    longest_matches(&texts, dict)
        .into_iter()
        .map(|(s, e, i)| {
            let entry = &dict.entries[i];
            let mut alternatives: Vec<String> = Vec::new();
            for &j in dict.lookup(&texts[s..=e]) {
                let cui = &dict.entries[j].cui;
                if cui != &entry.cui && !alternatives.contains(cui) {
                    alternatives.push(cui.clone());
                }
            }
            ConceptMention {
                token_start: s,
                token_end: e,
                char_span: words[s].span.cover(&words[e].span),
                cui: entry.cui.clone(),
                preferred: entry.preferred.clone(),
                tui: entry.tui.clone(),
                polarity: Polarity::Positive,
                possible: false,
                alternatives,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticGroups {
    groups: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Error)]
pub enum GroupsError {
    #[error("cannot read semantic groups: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected `name<TAB>TUI,TUI,...`")]
    Syntax { line: usize },
    #[error("line {line}: semantic type `{tui}` is not T followed by 3 digits")]
    Tui { line: usize, tui: String },
}

impl Default for SemanticGroups {
    fn default() -> SemanticGroups {
        SemanticGroups::parse(crate::data::GROUPS).expect("bundled groups parse")
    }
}

impl SemanticGroups {
    pub fn empty() -> SemanticGroups {
        SemanticGroups {
            groups: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<SemanticGroups, GroupsError> {
        let mut groups: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (name, tuis) = raw.split_once('\t').ok_or(GroupsError::Syntax { line })?;
            let set = groups.entry(name.trim().to_string()).or_default();
            for t in tuis.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                if !is_tui(t) {
                    return Err(GroupsError::Tui {
                        line,
                        tui: t.to_string(),
                    });
                }
                set.insert(t.to_string());
            }
        }
        Ok(SemanticGroups { groups })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SemanticGroups, GroupsError> {
        SemanticGroups::parse(&fs::read_to_string(path)?)
    }

    pub fn groups(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.groups
    }

    pub fn group_of(&self, tui: &str) -> Option<&str> {
        self.groups
            .iter()
            .find(|(_, set)| set.contains(tui))
            .map(|(name, _)| name.as_str())
    }

    pub fn contains(&self, tui: &str) -> bool {
        self.group_of(tui).is_some()
    }
}

/// Mentions whose semantic type is in some group, in input order.
pub fn semantic_filter(mentions: Vec<ConceptMention>, groups: &SemanticGroups) -> Vec<ConceptMention> {
    mentions.into_iter().filter(|m| groups.contains(&m.tui)).collect()
}

/// Marks mentions that overlap a negated span. `spans` pairs each span with
/// its "possible" flag; the first overlapping span decides.
pub fn assign_polarity_spans(mentions: Vec<ConceptMention>, spans: &[(CharSpan, bool)]) -> Vec<ConceptMention> {
    mentions
        .into_iter()
        .map(|mut m| {
            match spans.iter().find(|(s, _)| s.overlaps(&m.char_span)) {
                Some(&(_, possible)) => {
                    m.polarity = Polarity::Negated;
                    m.possible = possible;
                }
                None => {
                    m.polarity = Polarity::Positive;
                    m.possible = false;
                }
            }
            m
        })
        .collect()
}

pub fn assign_polarity(mentions: Vec<ConceptMention>, negs: &[NegationResult]) -> Vec<ConceptMention> {
    let spans: Vec<(CharSpan, bool)> = negs
        .iter()
        .filter_map(|n| Some((n.span?, n.possible)))
        .collect();
    assign_polarity_spans(mentions, &spans)
}
