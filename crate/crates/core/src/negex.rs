//! Window-and-punctuation negation baseline.

use std::collections::BTreeSet;
use std::ops::Range;

use thiserror::Error;

use crate::lexicon::{Lexicon, Location, TriggerMatch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowConfig {
    window: usize,
    terminators: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NegexError {
    #[error("window must be at least 1 token")]
    ZeroWindow,
}

impl Default for WindowConfig {
    fn default() -> WindowConfig {
        WindowConfig {
            window: 5,
            terminators: [".", ",", ";", ":"].into_iter().map(String::from).collect(),
        }
    }
}

impl WindowConfig {
    pub fn new(window: usize, terminators: BTreeSet<String>) -> Result<WindowConfig, NegexError> {
        if window == 0 {
            return Err(NegexError::ZeroWindow);
        }
        Ok(WindowConfig {
            window,
            terminators,
        })
    }

    pub fn with_window(mut self, window: usize) -> Result<WindowConfig, NegexError> {
        if window == 0 {
            return Err(NegexError::ZeroWindow);
        }
        self.window = window;
        Ok(self)
    }

    /// Commas no longer end a scope.
    pub fn without_comma(mut self) -> WindowConfig {
        self.terminators.remove(",");
        self
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn terminators(&self) -> &BTreeSet<String> {
        &self.terminators
    }

    pub fn is_terminator(&self, token: &str) -> bool {
        self.terminators.contains(token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegexScope {
    pub trigger: TriggerMatch,
    /// Token range, trigger excluded; may be empty.
    pub scope: Range<usize>,
}

/// One scope per non-pseudonegation trigger. Pre triggers look forward,
/// post triggers backward; a scope stops at a terminator, at another trigger
/// or after `window` tokens.
pub fn negex_detect<S: AsRef<str>>(tokens: &[S], lexicon: &Lexicon, cfg: &WindowConfig) -> Vec<NegexScope> {
    let triggers = lexicon.find_triggers(tokens);
    let in_trigger = |i: usize| triggers.iter().any(|t| t.start <= i && i <= t.end);
    let stops = |i: usize| cfg.is_terminator(tokens[i].as_ref()) || in_trigger(i);

    let mut out = Vec::new();
    for t in &triggers {
        let scope = match t.term.location {
            Location::Pseu => continue,
            Location::Pren | Location::Prep => {
                let start = t.end + 1;
                let limit = (start + cfg.window).min(tokens.len());
                let end = (start..limit).find(|&i| stops(i)).unwrap_or(limit);
                start..end
            }
            Location::Posn | Location::Posp => {
                let end = t.start;
                let limit = end.saturating_sub(cfg.window);
                let start = (limit..end).rev().find(|&i| stops(i)).map_or(limit, |i| i + 1);
                start..end
            }
        };
        out.push(NegexScope {
            trigger: t.clone(),
            scope,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::parse(
            "no evidence of\tPREN\tPP\tDT\n\
             denies\tPREN\tVP-A\tVBZ\n\
             is ruled out\tPOSN\tADJP-P\tVBZ\n\
             no increase\tPSEU\tNONE\tDT\n",
        )
        .unwrap()
    }

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn terminator_ends_scope() {
        let t = toks("no evidence of dvt .");
        let s = negex_detect(&t, &lex(), &WindowConfig::default());
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].scope, 3..4);
    }

    #[test]
    fn long_coordination_is_cut() {
        let t = toks("She otherwise denies any vomiting , rash , rhinorrhea , dysuria , cough , SOB or abdominal discomfort .");
        let cfg = WindowConfig::default();
        assert_eq!(negex_detect(&t, &lex(), &cfg)[0].scope, 3..5);
        let cfg = cfg.without_comma();
        assert_eq!(negex_detect(&t, &lex(), &cfg)[0].scope, 3..8);
    }

    #[test]
    fn post_trigger_looks_back() {
        let t = toks("fever , pulmonary embolism is ruled out");
        let s = negex_detect(&t, &lex(), &WindowConfig::default());
        assert_eq!(s[0].scope, 2..4);
    }

    #[test]
    fn pseudonegation_and_no_trigger() {
        let cfg = WindowConfig::default();
        assert!(negex_detect(&toks("no increase in pain"), &lex(), &cfg).is_empty());
        assert!(negex_detect(&toks("mild edema ."), &lex(), &cfg).is_empty());
        assert_eq!(WindowConfig::default().with_window(0), Err(NegexError::ZeroWindow));
    }
}
