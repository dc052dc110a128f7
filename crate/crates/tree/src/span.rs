use std::fmt;

use thiserror::Error;

/// Inclusive, 1-based character span within a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharSpan {
    pub start: usize,
    pub end: usize,
}

impl CharSpan {
    pub fn new(start: usize, end: usize) -> CharSpan {
        debug_assert!(start >= 1 && start <= end);
        CharSpan { start, end }
    }

    pub fn overlaps(&self, other: &CharSpan) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn contains(&self, other: &CharSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn cover(&self, other: &CharSpan) -> CharSpan {
        CharSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Display for CharSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("no tokens to locate")]
    Empty,
    #[error("tokens {tokens:?} do not occur in order in the sentence")]
    NotFound { tokens: Vec<String> },
}

/// A whitespace token of a sentence with its character span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub span: CharSpan,
}

/// Splits on whitespace and reports each token's 1-based character span.
pub fn tokenize_with_spans(sentence: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None; // (byte, char)
    let mut char_pos = 0;
    for (byte, c) in sentence.char_indices() {
        char_pos += 1;
        if c.is_whitespace() {
            if let Some((b, cs)) = start.take() {
                out.push(Token {
                    text: &sentence[b..byte],
                    span: CharSpan::new(cs, char_pos - 1),
                });
            }
        } else if start.is_none() {
            start = Some((byte, char_pos));
        }
    }
    if let Some((b, cs)) = start {
        out.push(Token {
            text: &sentence[b..],
            span: CharSpan::new(cs, char_pos),
        });
    }
    out
}

/// Locates `tokens` in the whitespace-tokenized `sentence` and returns the
/// span from the first character of the first token to the last character of
/// the last token.
///
/// The leftmost contiguous occurrence wins. When the tokens only occur with
/// gaps (material removed by tree surgery), the leftmost in-order occurrence
/// is used instead.
pub fn char_span<S: AsRef<str>>(sentence: &str, tokens: &[S]) -> Result<CharSpan, SpanError> {
    if tokens.is_empty() {
        return Err(SpanError::Empty);
    }
    let words = tokenize_with_spans(sentence);
    let n = tokens.len();

    if n <= words.len() {
        for start in 0..=words.len() - n {
            if words[start..start + n]
                .iter()
                .zip(tokens)
                .all(|(w, t)| w.text == t.as_ref())
            {
                return Ok(words[start].span.cover(&words[start + n - 1].span));
            }
        }
    }

    let mut wanted = tokens.iter();
    let mut next = wanted.next();
    let mut first: Option<CharSpan> = None;
    let mut last: Option<CharSpan> = None;
    for w in &words {
        match next {
            Some(t) if w.text == t.as_ref() => {
                first.get_or_insert(w.span);
                last = Some(w.span);
                next = wanted.next();
            }
            Some(_) => {}
            None => break,
        }
    }
    match (next, first, last) {
        (None, Some(a), Some(b)) => Ok(a.cover(&b)),
        _ => Err(SpanError::NotFound {
            tokens: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
        }),
    }
}
