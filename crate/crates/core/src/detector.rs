//! Syntax-based negation detection: prune, fetch a tree, apply rules,
//! extract the negated constituent, clean it up and locate it.

use std::collections::{HashMap, HashSet};

use clinsum_tree::{extract, match_first, tokenize_with_spans, CharSpan, NodeId, Tree};
use thiserror::Error;

use crate::lexicon::{Lexicon, PhraseType, TriggerMatch, TriggerTerm};
use crate::provider::{FragmentRequest, ProviderError, TreeProvider};
use crate::pruner::{prune_all, PrunedFragment};
use crate::rules::{Rule, Stage};

pub const UNMATCHED: &str = "UNMATCHED";

/// One intermediate tree, kept for traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub tree: Tree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationResult {
    pub sentence: String,
    pub trigger: TriggerMatch,
    pub fragment: PrunedFragment,
    /// Fragment tree as supplied by the provider.
    pub tree: Tree,
    /// Rule output, rooted at `TOP`.
    pub extracted: Tree,
    pub negated_tokens: Vec<String>,
    /// Sentence token indexes of the first and last negated token.
    pub token_range: Option<(usize, usize)>,
    /// 1-based inclusive character span in `sentence`; `None` when cleanup
    /// left nothing.
    pub span: Option<CharSpan>,
    pub possible: bool,
    pub rule_name: String,
    /// Pre-stage and fallback edits, in the order they were made.
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Error)]
pub enum DetectError {
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error("tree for `{fragment}` has {leaves} leaves but the fragment has {tokens} tokens")]
    LeafCount {
        fragment: String,
        leaves: usize,
        tokens: usize,
    },
}

pub struct Detector {
    lexicon: Lexicon,
    rules: Vec<Rule>,
    stopwords: HashSet<String>,
}

impl Detector {
    /// `rules` are tried in the given order within each stage.
    pub fn new(lexicon: Lexicon, rules: Vec<Rule>, stopwords: HashSet<String>) -> Detector {
        let stopwords = stopwords.into_iter().map(|w| w.to_lowercase()).collect();
        Detector {
            lexicon,
            rules,
            stopwords,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    /// Results for every non-pseudonegation trigger of a whitespace-tokenized
    /// sentence, in trigger order.
    pub fn detect(
        &self,
        sentence: &str,
        provider: &dyn TreeProvider,
    ) -> Result<Vec<NegationResult>, DetectError> {
        let tokens: Vec<&str> = sentence.split_whitespace().collect();
        prune_all(&tokens, &self.lexicon)
            .into_iter()
            .map(|f| self.detect_fragment(sentence, f, provider))
            .collect()
    }

    pub fn detect_fragment(
        &self,
        sentence: &str,
        fragment: PrunedFragment,
        provider: &dyn TreeProvider,
    ) -> Result<NegationResult, DetectError> {
        let request = FragmentRequest {
            sentence,
            tokens: &fragment.tokens,
            offset: fragment.offset,
        };
        let tree = provider.tree(&request)?;
        let leaf_ids = tree.leaf_ids();
        if leaf_ids.len() != fragment.tokens.len() {
            return Err(DetectError::LeafCount {
                fragment: fragment.text(),
                leaves: leaf_ids.len(),
                tokens: fragment.tokens.len(),
            });
        }
        let position: HashMap<NodeId, usize> = leaf_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, fragment.sentence_index(i)))
            .collect();

        let phrase_type = fragment.trigger.term.phrase_type;
        let mut steps = Vec::new();
        let current = self.run_pre_stage(tree.clone(), phrase_type, &mut steps);

        let mut outcome = self.first_rule(&current, phrase_type, Stage::Main);
        if outcome.is_none() {
            outcome = self.first_rule(&current, phrase_type, Stage::Fallback);
            if let Some((name, after)) = &outcome {
                steps.push(TraceStep {
                    rule: name.clone(),
                    tree: after.clone(),
                });
            }
        }
        let (rule_name, extracted) = match outcome {
            Some((name, extracted)) => (name, extracted),
            None => (
                UNMATCHED.to_string(),
                extract(&current, current.id()).expect("root exists"),
            ),
        };

        let mut leaves: Vec<(String, usize)> = extracted
            .preorder()
            .filter(|n| n.is_leaf())
            .filter_map(|n| Some((n.token()?.to_string(), *position.get(&n.id())?)))
            .collect();
        let words: Vec<&str> = leaves.iter().map(|(w, _)| w.as_str()).collect();
        let stripped = split_trigger_prefix(&words, &fragment.trigger.term);
        leaves.drain(..stripped);
        let noise = leaves
            .iter()
            .take_while(|(w, _)| {
                self.stopwords.contains(&w.to_lowercase()) || self.lexicon.is_single_word_term(w)
            })
            .count();
        leaves.drain(..noise);

        let token_range = match (leaves.first(), leaves.last()) {
            (Some(a), Some(b)) => Some((a.1, b.1)),
            _ => None,
        };
        let spans = tokenize_with_spans(sentence);
        let span = token_range.map(|(a, b)| spans[a].span.cover(&spans[b].span));

        Ok(NegationResult {
            sentence: sentence.to_string(),
            possible: fragment.possible(),
            trigger: fragment.trigger.clone(),
            fragment,
            tree,
            extracted,
            negated_tokens: leaves.into_iter().map(|(w, _)| w).collect(),
            token_range,
            span,
            rule_name,
            steps,
        })
    }

    fn run_pre_stage(&self, mut tree: Tree, phrase_type: PhraseType, steps: &mut Vec<TraceStep>) -> Tree {
        let pre: Vec<&Rule> = self
            .rules
            .iter()
            .filter(|r| r.stage == Stage::Pre && r.rule_type.applies_to(phrase_type))
            .collect();
        // Every successful edit removes at least one node.
        let mut budget = tree.node_count();
        let mut changed = true;
        while changed && budget > 0 {
            changed = false;
            for rule in &pre {
                if !conditions_hold(rule, &tree) {
                    continue;
                }
                let Some(binding) = match_first(&rule.pattern, &tree) else {
                    continue;
                };
                match rule.script.apply(&tree, &binding) {
                    Ok(next) => {
                        tree = next;
                        steps.push(TraceStep {
                            rule: rule.name.clone(),
                            tree: tree.clone(),
                        });
                        changed = true;
                        budget -= 1;
                    }
                    Err(e) => log::debug!("rule `{}` skipped: {e}", rule.name),
                }
            }
        }
        tree
    }

    /// First rule of `stage` that matches and whose script applies, with its
    /// extracted concept tree.
    fn first_rule(&self, tree: &Tree, phrase_type: PhraseType, stage: Stage) -> Option<(String, Tree)> {
        for rule in self
            .rules
            .iter()
            .filter(|r| r.stage == stage && r.rule_type.applies_to(phrase_type))
        {
            if !conditions_hold(rule, tree) {
                continue;
            }
            let Some(binding) = match_first(&rule.pattern, tree) else {
                continue;
            };
            let after = match rule.script.apply(tree, &binding) {
                Ok(t) => t,
                Err(e) => {
                    log::debug!("rule `{}` skipped: {e}", rule.name);
                    continue;
                }
            };
            let concept = rule
                .concept
                .as_deref()
                .and_then(|c| binding.get(c))
                .unwrap_or(binding.root);
            return Some((rule.name.clone(), concept_tree(tree, &after, concept)));
        }
        None
    }
}

fn conditions_hold(rule: &Rule, tree: &Tree) -> bool {
    rule.absent.iter().all(|label| !tree.contains_label(label))
}

/// The concept node's material in `after`, under a `TOP` root. When surgery
/// removed the node itself (as the bottom of an excise), its surviving
/// descendants are gathered instead.
fn concept_tree(before: &Tree, after: &Tree, concept: NodeId) -> Tree {
    if after.find(concept).is_some() {
        return extract(after, concept).expect("node is present");
    }
    let Some(original) = before.find(concept) else {
        return after.clone();
    };
    let wanted: HashSet<NodeId> = original.preorder().map(|n| n.id()).collect();
    let mut kept = Vec::new();
    collect_maximal(after, &wanted, &mut kept);
    if kept.is_empty() {
        return after.clone();
    }
    Tree::node("TOP", kept).with_id(after.max_id() + 1)
}

fn collect_maximal(t: &Tree, wanted: &HashSet<NodeId>, out: &mut Vec<Tree>) {
    if wanted.contains(&t.id()) {
        out.push(t.clone());
    } else {
        t.children().iter().for_each(|c| collect_maximal(c, wanted, out));
    }
}

/// How many leading tokens belong to the trigger. The whole trigger is
/// always recognized. For PP and ADJP triggers, whose parses often split the
/// trigger across constituents, a trailing part of the trigger is recognized
/// too ("evidence of" left over from "without evidence of").
fn split_trigger_prefix<S: AsRef<str>>(tokens: &[S], trigger: &TriggerTerm) -> usize {
    let starts_with = |part: &[String]| {
        part.len() <= tokens.len()
            && part
                .iter()
                .zip(tokens)
                .all(|(a, b)| a.eq_ignore_ascii_case(b.as_ref()))
    };
    if starts_with(&trigger.tokens) {
        return trigger.tokens.len();
    }
    let split_prone = matches!(
        trigger.phrase_type,
        PhraseType::Pp | PhraseType::AdjpA | PhraseType::AdjpP
    );
    if split_prone {
        for skip in 1..trigger.tokens.len() {
            if starts_with(&trigger.tokens[skip..]) {
                return trigger.tokens.len() - skip;
            }
        }
    }
    0
}

/// Removes trigger tokens from the front of an extracted yield.
pub fn strip_split_trigger<S: AsRef<str>>(tokens: &[S], trigger: &TriggerTerm) -> Vec<String> {
    let n = split_trigger_prefix(tokens, trigger);
    tokens[n..].iter().map(|t| t.as_ref().to_string()).collect()
}
