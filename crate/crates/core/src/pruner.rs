//! Cutting a sentence down to the part a trigger can negate.

use crate::lexicon::{Lexicon, Location, TriggerMatch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedFragment {
    pub tokens: Vec<String>,
    pub trigger: TriggerMatch,
    /// Index of the fragment's first token in the sentence.
    pub offset: usize,
}

impl PrunedFragment {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    /// Sentence token index of the fragment's `i`-th token.
    pub fn sentence_index(&self, i: usize) -> usize {
        self.offset + i
    }

    pub fn possible(&self) -> bool {
        self.trigger.term.location.is_possible()
    }
}

/// Pre triggers keep the trigger through the end of the sentence; post
/// triggers keep the sentence start through the trigger. Pseudonegations
/// yield nothing.
pub fn prune<S: AsRef<str>>(tokens: &[S], trigger: &TriggerMatch) -> Option<PrunedFragment> {
    let range = match trigger.term.location {
        Location::Pren | Location::Prep => trigger.start..tokens.len(),
        Location::Posn | Location::Posp => 0..trigger.end + 1,
        Location::Pseu => return None,
    };
    Some(PrunedFragment {
        tokens: tokens[range.clone()]
            .iter()
            .map(|t| t.as_ref().to_string())
            .collect(),
        trigger: trigger.clone(),
        offset: range.start,
    })
}

/// One fragment per non-pseudonegation trigger, in sentence order.
pub fn prune_all<S: AsRef<str>>(tokens: &[S], lexicon: &Lexicon) -> Vec<PrunedFragment> {
    lexicon
        .find_triggers(tokens)
        .iter()
        .filter_map(|m| prune(tokens, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::parse(
            "no evidence of\tPREN\tPP\tDT\n\
             is ruled out\tPOSN\tADJP-P\tVBZ\n\
             denies\tPREN\tVP-A\tVBZ\n\
             no increase\tPSEU\tNONE\tDT\n\
             unlikely\tPOSN\tADJP-P\tJJ\n\
             rule out\tPREP\tVP-A\tVB\n",
        )
        .unwrap()
    }

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn pre_negation_runs_to_sentence_end() {
        let t = toks("Left lower ext edema : U/S was performed , no evidence of dvt .");
        let frags = prune_all(&t, &lex());
        assert_eq!(frags.len(), 1);
        assert_eq!(frags[0].text(), "no evidence of dvt .");
        assert_eq!(frags[0].offset, 9);
        assert!(!frags[0].possible());
    }

    #[test]
    fn post_negation_runs_from_sentence_start() {
        let frags = prune_all(&toks("infection is ruled out ."), &lex());
        assert_eq!(frags[0].text(), "infection is ruled out");
        assert_eq!(frags[0].offset, 0);
    }

    #[test]
    fn pseudonegation_yields_nothing() {
        let t = toks("there was no increase in pain");
        let m = lex().find_triggers(&t);
        assert_eq!(m.len(), 1);
        assert!(prune(&t, &m[0]).is_none());
        assert!(prune_all(&t, &lex()).is_empty());
    }

    #[test]
    fn one_fragment_per_trigger() {
        let t = toks("He denies fever ; pneumonia is unlikely .");
        let frags = prune_all(&t, &lex());
        assert_eq!(frags.len(), 2);
        assert_eq!(frags[0].text(), "denies fever ; pneumonia is unlikely .");
        assert_eq!(frags[1].text(), "He denies fever ; pneumonia is unlikely");
        let p = prune_all(&toks("rule out sepsis"), &lex());
        assert!(p[0].possible());
        assert!(prune_all(&toks("mild edema ."), &lex()).is_empty());
    }
}
