//! Sentence/tree sidecar files.
//!
//! A treebank file is UTF-8 text made of records separated by blank lines.
//! Each record has two lines: the whitespace-tokenized sentence and its
//! single-line bracketed tree. Lines starting with `#` are comments.

use std::collections::HashMap;
use std::path::Path;
use std::{fs, io};

use thiserror::Error;

use crate::tree::{parse_ptb, ParseError, Tree};

#[derive(Debug, Error)]
pub enum TreebankError {
    #[error("cannot read treebank: {0}")]
    Io(#[from] io::Error),
    #[error("entry {index} (line {line}): expected a sentence line followed by a tree line")]
    Malformed { index: usize, line: usize },
    #[error("entry {index} (line {line}): {source}")]
    Tree {
        index: usize,
        line: usize,
        source: ParseError,
    },
    #[error("entry {index} (line {line}): tree leaves {leaves:?} do not match sentence tokens")]
    Mismatch {
        index: usize,
        line: usize,
        leaves: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreebankEntry {
    pub sentence: String,
    pub tree: Tree,
}

/// Ordered collection of (sentence, tree) pairs with lookup by sentence text.
#[derive(Debug, Clone, Default)]
pub struct Treebank {
    entries: Vec<TreebankEntry>,
    by_text: HashMap<String, usize>,
}

/// Collapses runs of whitespace so lookups ignore spacing differences.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl Treebank {
    pub fn new() -> Treebank {
        Treebank::default()
    }

    /// Adds an entry after checking that the tree's leaves spell the sentence.
    /// A later entry for the same sentence shadows earlier ones in lookups.
    pub fn push(&mut self, sentence: impl Into<String>, tree: Tree) -> Result<(), Vec<String>> {
        let sentence = sentence.into();
        let leaves = tree.yield_tokens();
        if !leaves.iter().copied().eq(sentence.split_whitespace()) {
            return Err(leaves.into_iter().map(str::to_string).collect());
        }
        self.by_text
            .insert(normalize_whitespace(&sentence), self.entries.len());
        self.entries.push(TreebankEntry { sentence, tree });
        Ok(())
    }

    pub fn entries(&self) -> &[TreebankEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Tree for a sentence, compared after whitespace normalization.
    pub fn get(&self, sentence: &str) -> Option<&Tree> {
        self.by_text
            .get(&normalize_whitespace(sentence))
            .map(|&i| &self.entries[i].tree)
    }

    pub fn extend(&mut self, other: Treebank) {
        for entry in other.entries {
            self.by_text
                .insert(normalize_whitespace(&entry.sentence), self.entries.len());
            self.entries.push(entry);
        }
    }

    pub fn parse(text: &str) -> Result<Treebank, TreebankError> {
        let mut bank = Treebank::new();
        let mut record: Vec<(usize, &str)> = Vec::new();
        let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        for (lineno, line) in lines.chain(std::iter::once((0, ""))) {
            if line.trim_start().starts_with('#') {
                continue;
            }
            if !line.trim().is_empty() {
                record.push((lineno, line));
                continue;
            }
            if record.is_empty() {
                continue;
            }
            let index = bank.len();
            let first_line = record[0].0;
            let [(_, sentence), (tree_line, tree_text)] = record[..] else {
                return Err(TreebankError::Malformed {
                    index,
                    line: first_line,
                });
            };
            let tree = parse_ptb(tree_text).map_err(|source| TreebankError::Tree {
                index,
                line: tree_line,
                source,
            })?;
            bank.push(sentence.trim(), tree)
                .map_err(|leaves| TreebankError::Mismatch {
                    index,
                    line: first_line,
                    leaves,
                })?;
            record.clear();
        }
        Ok(bank)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Treebank, TreebankError> {
        Treebank::parse(&fs::read_to_string(path)?)
    }

    /// Sidecar text that [`Treebank::parse`] reads back.
    pub fn to_sidecar(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\n{}\n", e.sentence, e.tree))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn load_treebank(path: impl AsRef<Path>) -> Result<Treebank, TreebankError> {
    Treebank::load(path)
}
