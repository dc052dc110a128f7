//! Labeled constituency trees and their bracketed (Penn Treebank) form.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

/// Identifier of a node, unique within one tree.
///
/// Ids are assigned in pre-order when a tree is parsed. Surgery keeps the ids
/// of every surviving node, so a binding taken before an edit still addresses
/// the same nodes afterwards.
pub type NodeId = u32;

/// A node of a constituency tree.
///
/// Leaves are preterminals: they carry a POS tag as `label` and the word as
/// `token`. Inner nodes carry a category label and at least one child.
#[derive(Debug, Clone)]
pub struct Tree {
    id: NodeId,
    label: String,
    token: Option<String>,
    children: Vec<Tree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input at offset {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("expected '(' at offset {offset}")]
    ExpectedOpen { offset: usize },
    #[error("unbalanced ')' at offset {offset}")]
    Unbalanced { offset: usize },
    #[error("node without label at offset {offset}")]
    MissingLabel { offset: usize },
    #[error("empty node at offset {offset}")]
    EmptyNode { offset: usize },
    #[error("leaf token mixed with children at offset {offset}")]
    LeafWithChildren { offset: usize },
    #[error("trailing input at offset {offset}")]
    TrailingInput { offset: usize },
}

impl ParseError {
    /// Character offset (0-based) where the problem was found.
    pub fn offset(&self) -> usize {
        match *self {
            ParseError::UnexpectedEnd { offset }
            | ParseError::ExpectedOpen { offset }
            | ParseError::Unbalanced { offset }
            | ParseError::MissingLabel { offset }
            | ParseError::EmptyNode { offset }
            | ParseError::LeafWithChildren { offset }
            | ParseError::TrailingInput { offset } => offset,
        }
    }
}

impl Tree {
    /// A preterminal `(label token)`.
    pub fn leaf(label: impl Into<String>, token: impl Into<String>) -> Tree {
        Tree {
            id: 0,
            label: label.into(),
            token: Some(token.into()),
            children: Vec::new(),
        }
    }

    /// An inner node. Panics when `children` is empty, since a nonterminal
    /// without children has no bracketed form.
    pub fn node(label: impl Into<String>, children: Vec<Tree>) -> Tree {
        assert!(!children.is_empty(), "inner node needs at least one child");
        Tree {
            id: 0,
            label: label.into(),
            token: None,
            children,
        }
    }

    pub(crate) fn from_parts(
        id: NodeId,
        label: String,
        token: Option<String>,
        children: Vec<Tree>,
    ) -> Tree {
        Tree {
            id,
            label,
            token,
            children,
        }
    }

    /// The same node with a different id; descendants are untouched.
    pub fn with_id(mut self, id: NodeId) -> Tree {
        self.id = id;
        self
    }

    /// Reassigns ids in pre-order starting at zero.
    pub fn with_preorder_ids(mut self) -> Tree {
        let mut next = 0;
        self.renumber(&mut next);
        self
    }

    fn renumber(&mut self, next: &mut NodeId) {
        self.id = *next;
        *next += 1;
        for child in &mut self.children {
            child.renumber(next);
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn token(&self) -> Option<&str> {
        self.token.as_deref()
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Leaf tokens, left to right.
    pub fn yield_tokens(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_tokens(&mut out);
        out
    }

    fn collect_tokens<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.token {
            Some(tok) => out.push(tok),
            None => self.children.iter().for_each(|c| c.collect_tokens(out)),
        }
    }

    /// Ids of the leaves, left to right.
    pub fn leaf_ids(&self) -> Vec<NodeId> {
        self.preorder()
            .filter(|n| n.is_leaf())
            .map(|n| n.id)
            .collect()
    }

    /// Iterates over all nodes in pre-order.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }

    pub fn node_count(&self) -> usize {
        self.preorder().count()
    }

    pub fn max_id(&self) -> NodeId {
        self.preorder().map(|n| n.id).max().unwrap_or(0)
    }

    /// Finds the node with the given id.
    pub fn find(&self, id: NodeId) -> Option<&Tree> {
        self.preorder().find(|n| n.id == id)
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.preorder().any(|n| n.label == label)
    }

    /// Keeps only the leaves whose position falls in `range`, dropping
    /// nonterminals that end up empty. Returns `None` when nothing survives.
    /// Surviving nodes keep their ids.
    pub fn project_leaves(&self, range: Range<usize>) -> Option<Tree> {
        let mut position = 0;
        self.project(&range, &mut position)
    }

    fn project(&self, range: &Range<usize>, position: &mut usize) -> Option<Tree> {
        if self.is_leaf() {
            let keep = range.contains(position);
            *position += 1;
            return keep.then(|| self.clone());
        }
        let children: Vec<Tree> = self
            .children
            .iter()
            .filter_map(|c| c.project(range, position))
            .collect();
        if children.is_empty() {
            None
        } else {
            Some(Tree::from_parts(
                self.id,
                self.label.clone(),
                None,
                children,
            ))
        }
    }

    /// Single-line bracketed form.
    pub fn to_ptb(&self) -> String {
        self.to_string()
    }
}

/// Structural equality: labels, tokens and child order. Node ids are ignored.
impl PartialEq for Tree {
    fn eq(&self, other: &Tree) -> bool {
        self.label == other.label && self.token == other.token && self.children == other.children
    }
}

impl Eq for Tree {}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label)?;
        match &self.token {
            Some(tok) => write!(f, " {tok}")?,
            None => {
                for child in &self.children {
                    write!(f, " {child}")?;
                }
            }
        }
        write!(f, ")")
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a Tree>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a Tree;

    fn next(&mut self) -> Option<&'a Tree> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

/// Parses a bracketed tree such as `(NP (DT no) (NN evidence))`.
pub fn parse_ptb(text: &str) -> Result<Tree, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        next_id: 0,
    };
    parser.skip_ws();
    let tree = parser.node()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(match parser.chars[parser.pos] {
            ')' => ParseError::Unbalanced { offset: parser.pos },
            _ => ParseError::TrailingInput { offset: parser.pos },
        });
    }
    Ok(tree)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    next_id: NodeId,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn atom(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn node(&mut self) -> Result<Tree, ParseError> {
        let open = self.pos;
        match self.peek() {
            None => return Err(ParseError::UnexpectedEnd { offset: self.pos }),
            Some('(') => self.pos += 1,
            Some(')') => return Err(ParseError::Unbalanced { offset: self.pos }),
            Some(_) => return Err(ParseError::ExpectedOpen { offset: self.pos }),
        }
        let id = self.next_id;
        self.next_id += 1;

        self.skip_ws();
        match self.peek() {
            None => return Err(ParseError::UnexpectedEnd { offset: self.pos }),
            Some(')') => return Err(ParseError::EmptyNode { offset: open }),
            Some('(') => return Err(ParseError::MissingLabel { offset: open }),
            Some(_) => {}
        }
        let label = self.atom();

        let mut token: Option<String> = None;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(ParseError::UnexpectedEnd { offset: self.pos }),
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some('(') => {
                    if token.is_some() {
                        return Err(ParseError::LeafWithChildren { offset: self.pos });
                    }
                    children.push(self.node()?);
                }
                Some(_) => {
                    if token.is_some() || !children.is_empty() {
                        return Err(ParseError::LeafWithChildren { offset: self.pos });
                    }
                    token = Some(self.atom());
                }
            }
        }

        if token.is_none() && children.is_empty() {
            return Err(ParseError::EmptyNode { offset: open });
        }
        Ok(Tree::from_parts(id, label, token, children))
    }
}
