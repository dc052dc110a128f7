//! A Tregex-style pattern language restricted to eight relations.
//!
//! ```text
//! pattern  := desc ( '&'? '!'? relation desc )*
//! desc     := '(' pattern ')' | matcher ( '=' name )?
//! matcher  := label | '/' alt ( '|' alt )* '/' | '__'
//! relation := '<' | '<<' | '<<,' | '<<-' | '<-' | '>' | '>>' | '$'
//! ```
//!
//! Every relation in a chain constrains the pattern's root, so
//! `A < B < C` means A has a child B and a child C. Parentheses group an
//! operand with its own relations: `A < (B < C)`.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `<`: the operand is a child.
    Parent,
    /// `<<`: the operand is a proper descendant.
    Dominates,
    /// `<<,`: the operand lies on the chain of first children.
    LeftmostDescendant,
    /// `<<-`: the operand lies on the chain of last children.
    RightmostDescendant,
    /// `<-`: the operand is the last child.
    LastChild,
    /// `>`: the operand is the parent.
    ChildOf,
    /// `>>`: the operand is a proper ancestor.
    DominatedBy,
    /// `$`: the operand shares the parent and is a different node.
    Sister,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Relation::Parent,
        Relation::Dominates,
        Relation::LeftmostDescendant,
        Relation::RightmostDescendant,
        Relation::LastChild,
        Relation::ChildOf,
        Relation::DominatedBy,
        Relation::Sister,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Parent => "<",
            Relation::Dominates => "<<",
            Relation::LeftmostDescendant => "<<,",
            Relation::RightmostDescendant => "<<-",
            Relation::LastChild => "<-",
            Relation::ChildOf => ">",
            Relation::DominatedBy => ">>",
            Relation::Sister => "$",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One alternative of a label matcher. A trailing `*` in the source turns it
/// into a prefix match (`VB*` matches VB, VBD, VBZ, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelPattern {
    Exact(String),
    Prefix(String),
}

impl LabelPattern {
    fn from_source(text: &str) -> LabelPattern {
        match text.strip_suffix('*') {
            Some(prefix) => LabelPattern::Prefix(prefix.to_string()),
            None => LabelPattern::Exact(text.to_string()),
        }
    }

    /// Labels compare exactly; leaf tokens compare case-insensitively.
    pub fn matches(&self, label: &str, token: Option<&str>) -> bool {
        match self {
            LabelPattern::Exact(want) => {
                label == want || token.is_some_and(|t| t.eq_ignore_ascii_case(want))
            }
            LabelPattern::Prefix(prefix) => {
                label.starts_with(prefix.as_str())
                    || token.is_some_and(|t| {
                        t.len() >= prefix.len()
                            && t.is_char_boundary(prefix.len())
                            && t[..prefix.len()].eq_ignore_ascii_case(prefix)
                    })
            }
        }
    }
}

impl fmt::Display for LabelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelPattern::Exact(s) => f.write_str(s),
            LabelPattern::Prefix(s) => write!(f, "{s}*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelMatcher {
    Literal(LabelPattern),
    /// `/a|b/`; never empty.
    Alternation(Vec<LabelPattern>),
    /// `__`
    Wildcard,
}

impl LabelMatcher {
    pub fn matches(&self, label: &str, token: Option<&str>) -> bool {
        match self {
            LabelMatcher::Literal(p) => p.matches(label, token),
            LabelMatcher::Alternation(alts) => alts.iter().any(|p| p.matches(label, token)),
            LabelMatcher::Wildcard => true,
        }
    }
}

impl fmt::Display for LabelMatcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelMatcher::Literal(p) => write!(f, "{p}"),
            LabelMatcher::Alternation(alts) => {
                f.write_str("/")?;
                for (i, alt) in alts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{}", alt.to_string().replace('/', "\\/"))?;
                }
                f.write_str("/")
            }
            LabelMatcher::Wildcard => f.write_str("__"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDesc {
    pub matcher: LabelMatcher,
    pub capture: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub relation: Relation,
    pub operand: Pattern,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub root: NodeDesc,
    pub constraints: Vec<Constraint>,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern, PatternError> {
        parse_pattern(text)
    }

    /// Capture names in binding order (pre-order over the pattern).
    pub fn captures(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_captures(&mut out);
        out
    }

    fn collect_captures<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Some(name) = &self.root.capture {
            out.push(name);
        }
        for c in &self.constraints {
            c.operand.collect_captures(out);
        }
    }

    /// Number of node descriptions in the pattern.
    pub fn size(&self) -> usize {
        1 + self
            .constraints
            .iter()
            .map(|c| c.operand.size())
            .sum::<usize>()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root.matcher)?;
        if let Some(name) = &self.root.capture {
            write!(f, "={name}")?;
        }
        for c in &self.constraints {
            f.write_str(" ")?;
            if c.negated {
                f.write_str("!")?;
            }
            write!(f, "{} ", c.relation)?;
            if c.operand.constraints.is_empty() {
                write!(f, "{}", c.operand)?;
            } else {
                write!(f, "({})", c.operand)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("unexpected end of pattern at offset {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("expected a node description at offset {offset}")]
    ExpectedNode { offset: usize },
    #[error("expected a relation at offset {offset}")]
    ExpectedRelation { offset: usize },
    #[error("unknown relation `{relation}` at offset {offset}")]
    UnknownRelation { offset: usize, relation: String },
    #[error("unterminated /.../ at offset {offset}")]
    UnterminatedRegex { offset: usize },
    #[error("empty alternative in /.../ at offset {offset}")]
    EmptyAlternative { offset: usize },
    #[error("missing capture name after '=' at offset {offset}")]
    MissingCaptureName { offset: usize },
    #[error("capture `{name}` bound twice (offset {offset})")]
    DuplicateCapture { offset: usize, name: String },
    #[error("capture `{name}` under a negated relation can never bind (offset {offset})")]
    CaptureUnderNegation { offset: usize, name: String },
    #[error("unbalanced parenthesis at offset {offset}")]
    Unbalanced { offset: usize },
}

impl PatternError {
    pub fn offset(&self) -> usize {
        match *self {
            PatternError::UnexpectedEnd { offset }
            | PatternError::ExpectedNode { offset }
            | PatternError::ExpectedRelation { offset }
            | PatternError::UnknownRelation { offset, .. }
            | PatternError::UnterminatedRegex { offset }
            | PatternError::EmptyAlternative { offset }
            | PatternError::MissingCaptureName { offset }
            | PatternError::DuplicateCapture { offset, .. }
            | PatternError::CaptureUnderNegation { offset, .. }
            | PatternError::Unbalanced { offset } => offset,
        }
    }
}

pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    let mut p = PatternParser {
        chars: text.chars().collect(),
        pos: 0,
        seen: HashSet::new(),
    };
    let pattern = p.pattern(false)?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(match p.chars[p.pos] {
            ')' => PatternError::Unbalanced { offset: p.pos },
            _ => PatternError::ExpectedRelation { offset: p.pos },
        });
    }
    Ok(pattern)
}

const STOP: &[char] = &['(', ')', '=', '!', '<', '>', '/', '|', '&'];

struct PatternParser {
    chars: Vec<char>,
    pos: usize,
    seen: HashSet<String>,
}

impl PatternParser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn pattern(&mut self, negated: bool) -> Result<Pattern, PatternError> {
        let mut pattern = self.desc(negated)?;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') => return Ok(pattern),
                Some('&') => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            let mut neg = false;
            if self.peek() == Some('!') {
                neg = true;
                self.pos += 1;
                self.skip_ws();
            }
            let relation = self.relation()?;
            self.skip_ws();
            let operand = self.desc(negated || neg)?;
            pattern.constraints.push(Constraint {
                relation,
                operand,
                negated: neg,
            });
        }
    }

    fn relation(&mut self) -> Result<Relation, PatternError> {
        let start = self.pos;
        let unknown = |p: &PatternParser, end: usize| PatternError::UnknownRelation {
            offset: start,
            relation: p.chars[start..end.min(p.chars.len())].iter().collect(),
        };
        let rel = match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (None, ..) => return Err(PatternError::UnexpectedEnd { offset: start }),
            (Some('<'), Some('<'), Some(',')) => (Relation::LeftmostDescendant, 3),
            (Some('<'), Some('<'), Some('-')) => (Relation::RightmostDescendant, 3),
            (Some('<'), Some('<'), _) => (Relation::Dominates, 2),
            (Some('<'), Some('-'), _) => (Relation::LastChild, 2),
            (Some('<'), _, _) => (Relation::Parent, 1),
            (Some('>'), Some('>'), _) => (Relation::DominatedBy, 2),
            (Some('>'), _, _) => (Relation::ChildOf, 1),
            (Some('$'), _, _) => (Relation::Sister, 1),
            (Some(c), ..) if c == '.' || c == ',' || c == '%' || c == ':' => {
                return Err(unknown(self, start + 1))
            }
            _ => return Err(PatternError::ExpectedRelation { offset: start }),
        };
        self.pos += rel.1;
        // Glued operator characters mean a relation outside the supported set.
        if let Some(c) = self.peek() {
            if matches!(c, '<' | '>' | ',' | '-' | '+' | '.' | '$' | '#' | '`' | ':') {
                let mut end = self.pos;
                while end < self.chars.len() && !self.chars[end].is_whitespace() {
                    end += 1;
                }
                return Err(unknown(self, end));
            }
        }
        Ok(rel.0)
    }

    fn desc(&mut self, negated: bool) -> Result<Pattern, PatternError> {
        self.skip_ws();
        let start = self.pos;
        let matcher = match self.peek() {
            None => return Err(PatternError::UnexpectedEnd { offset: start }),
            Some('(') => {
                self.pos += 1;
                let inner = self.pattern(negated)?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(match self.peek() {
                        None => PatternError::Unbalanced { offset: start },
                        Some(_) => PatternError::ExpectedRelation { offset: self.pos },
                    });
                }
                self.pos += 1;
                return Ok(inner);
            }
            Some('/') => self.alternation()?,
            Some(c) if STOP.contains(&c) || c == '$' || c.is_whitespace() => {
                return Err(PatternError::ExpectedNode { offset: start })
            }
            Some(_) => {
                let word = self.ident();
                if word == "__" {
                    LabelMatcher::Wildcard
                } else {
                    LabelMatcher::Literal(LabelPattern::from_source(&word))
                }
            }
        };
        let capture = if self.peek() == Some('=') {
            self.pos += 1;
            let name_at = self.pos;
            let name = self.ident();
            if name.is_empty() {
                return Err(PatternError::MissingCaptureName { offset: name_at });
            }
            if negated {
                return Err(PatternError::CaptureUnderNegation {
                    offset: name_at,
                    name,
                });
            }
            if !self.seen.insert(name.clone()) {
                return Err(PatternError::DuplicateCapture {
                    offset: name_at,
                    name,
                });
            }
            Some(name)
        } else {
            None
        };
        Ok(Pattern {
            root: NodeDesc { matcher, capture },
            constraints: Vec::new(),
        })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || STOP.contains(&c) {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn alternation(&mut self) -> Result<LabelMatcher, PatternError> {
        let open = self.pos;
        self.pos += 1;
        let mut alts = Vec::new();
        let mut current = String::new();
        let mut alt_start = self.pos;
        loop {
            match self.peek() {
                None => return Err(PatternError::UnterminatedRegex { offset: open }),
                Some('\\') if self.peek_at(1).is_some() => {
                    current.push(self.chars[self.pos + 1]);
                    self.pos += 2;
                }
                Some(c @ ('|' | '/')) => {
                    if current.is_empty() {
                        return Err(PatternError::EmptyAlternative { offset: alt_start });
                    }
                    alts.push(LabelPattern::from_source(&current));
                    current.clear();
                    self.pos += 1;
                    alt_start = self.pos;
                    if c == '/' {
                        return Ok(LabelMatcher::Alternation(alts));
                    }
                }
                Some(c) => {
                    current.push(c);
                    self.pos += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every pattern printed in the rule tables.
    pub(crate) const TABLE_PATTERNS: [&str; 10] = [
        "NP=target << DT=neg <<, /no|without/ !> NP >> TOP=t",
        "VP=target << /VBZ|VBD|VB/=neg >> TOP=t",
        "VP=vp <<- /free|negative|absent|ruled|out|doubtful|unlikely|excluded|resolved|given/=neg $ NP=head >> TOP=t >> S=s",
        "PP=head <<, IN=neg1 < NP=target >> TOP=t >> /S|NP|ADJP/=s $ /JJ|NP/=neg2",
        "PP=head $ /JJ|ADJP|NP/=neg <- NP=target >> TOP=t >> /S|NP/=s",
        "VP=vp <<- /free|negative|absent|ruled|out|doubtful|unlikely|excluded|resolved|given/=neg $ NP=head >> TOP=t >> S=s",
        "VP=head $ RB=neg <<, /VB*|MD/ >> TOP=t >> S=s",
        "VP=head $ RB=neg <<, /VB*|MD/=be >> TOP=t >> S=s",
        "SBAR=sbar",
        "NP=target <<, /DT|NN|RB/=neg <<, /no|without/ !> NP >> TOP=t",
    ];

    #[test]
    fn all_table_patterns_parse_and_print_back() {
        for text in TABLE_PATTERNS {
            let p = parse_pattern(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert_eq!(p.to_string(), text);
            assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn excise_pattern_structure() {
        let p = parse_pattern("NP=head <<, no >> TOP=t >> S=s").unwrap();
        assert_eq!(p.root.capture.as_deref(), Some("head"));
        assert_eq!(p.constraints.len(), 3);
        let rels: Vec<_> = p.constraints.iter().map(|c| c.relation).collect();
        assert_eq!(
            rels,
            [
                Relation::LeftmostDescendant,
                Relation::DominatedBy,
                Relation::DominatedBy
            ]
        );
        assert_eq!(p.captures(), ["head", "t", "s"]);
    }

    #[test]
    fn negated_parent_constraint() {
        let p = parse_pattern("NP=target << DT=neg <<, /no|without/ !> NP >> TOP=t").unwrap();
        let negs: Vec<bool> = p.constraints.iter().map(|c| c.negated).collect();
        assert_eq!(negs, [false, false, true, false]);
        assert_eq!(p.constraints[2].relation, Relation::ChildOf);
        assert_eq!(
            p.constraints[1].operand.root.matcher,
            LabelMatcher::Alternation(vec![
                LabelPattern::Exact("no".into()),
                LabelPattern::Exact("without".into())
            ])
        );
    }

    #[test]
    fn prefix_alternative() {
        let p = parse_pattern("VP <<, /VB*|MD/").unwrap();
        let m = &p.constraints[0].operand.root.matcher;
        assert!(m.matches("VBZ", Some("is")));
        assert!(m.matches("MD", Some("can")));
        assert!(!m.matches("NN", Some("cat")));
        // Tokens compare case-insensitively, prefixes included.
        assert!(m.matches("NN", Some("vbx")));
    }

    #[test]
    fn grouping_and_conjunction() {
        let p = parse_pattern("NP <<, no & << SBAR=sbar").unwrap();
        assert_eq!(p.constraints.len(), 2);
        let q = parse_pattern("S < (NP < DT=d) < VP").unwrap();
        assert_eq!(q.constraints.len(), 2);
        assert_eq!(q.constraints[0].operand.constraints.len(), 1);
        assert_eq!(q.to_string(), "S < (NP < DT=d) < VP");
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(
            parse_pattern("NP << "),
            Err(PatternError::UnexpectedEnd { offset: 6 })
        );
        assert!(matches!(
            parse_pattern("NP <<< DT"),
            Err(PatternError::UnknownRelation { offset: 3, .. })
        ));
        assert!(matches!(
            parse_pattern("NP .. DT"),
            Err(PatternError::UnknownRelation { offset: 3, .. })
        ));
        assert!(matches!(
            parse_pattern("NP $+ DT"),
            Err(PatternError::UnknownRelation { offset: 3, .. })
        ));
        assert_eq!(
            parse_pattern("NP < /DT|NN"),
            Err(PatternError::UnterminatedRegex { offset: 5 })
        );
        assert!(matches!(
            parse_pattern("NP < /DT||NN/"),
            Err(PatternError::EmptyAlternative { .. })
        ));
        assert!(matches!(
            parse_pattern("NP=x < DT=x"),
            Err(PatternError::DuplicateCapture { offset: 10, .. })
        ));
        assert!(matches!(
            parse_pattern("NP !< DT=x"),
            Err(PatternError::CaptureUnderNegation { .. })
        ));
        assert!(matches!(
            parse_pattern("NP DT"),
            Err(PatternError::ExpectedRelation { offset: 3 })
        ));
        assert!(matches!(
            parse_pattern("NP < (DT < x"),
            Err(PatternError::Unbalanced { .. })
        ));
        assert!(matches!(
            parse_pattern("NP= < DT"),
            Err(PatternError::MissingCaptureName { offset: 3 })
        ));
    }

    #[test]
    fn labels_may_carry_dollar_and_slash_escapes() {
        let p = parse_pattern("NP < PRP$ < /r\\/o/").unwrap();
        assert_eq!(
            p.constraints[0].operand.root.matcher,
            LabelMatcher::Literal(LabelPattern::Exact("PRP$".into()))
        );
        assert!(p.constraints[1]
            .operand
            .root
            .matcher
            .matches("NN", Some("r/o")));
        assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
    }
}
