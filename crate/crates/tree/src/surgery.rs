//! Tree edits addressed by node id: `delete`, `excise` and `extract`, plus a
//! small script form driven by pattern captures.
//!
//! Every operation returns a new tree and keeps the ids of surviving nodes.

use std::fmt;

use thiserror::Error;

use crate::matcher::MatchBinding;
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("node {0} is not in the tree")]
    NodeNotFound(NodeId),
    #[error("cannot remove the root node")]
    RootRemoval,
    #[error("edit would leave the tree without leaves")]
    EmptyTree,
    #[error("node {top} does not dominate node {bottom}")]
    NotDominating { top: NodeId, bottom: NodeId },
    #[error("script refers to unbound capture `{0}`")]
    UnboundCapture(String),
    #[error("bad surgery script `{script}`: {reason}")]
    Syntax { script: String, reason: String },
}

/// Removes the node and its subtree. Ancestors left without children are
/// removed too.
pub fn delete(tree: &Tree, id: NodeId) -> Result<Tree, SurgeryError> {
    if tree.id() == id {
        return Err(SurgeryError::RootRemoval);
    }
    if tree.find(id).is_none() {
        return Err(SurgeryError::NodeNotFound(id));
    }
    prune(tree, id).ok_or(SurgeryError::EmptyTree)
}

fn prune(tree: &Tree, id: NodeId) -> Option<Tree> {
    if tree.id() == id {
        return None;
    }
    if tree.is_leaf() {
        return Some(tree.clone());
    }
    let children: Vec<Tree> = tree
        .children()
        .iter()
        .filter_map(|c| prune(c, id))
        .collect();
    if children.is_empty() {
        return None;
    }
    Some(Tree::from_parts(
        tree.id(),
        tree.label().to_string(),
        None,
        children,
    ))
}

/// Replaces `top` with the children of `bottom`, dropping every node on the
/// path between them along with their other children. When `bottom` is a
/// leaf it is kept in place of `top`. `top` may equal `bottom`.
pub fn excise(tree: &Tree, top: NodeId, bottom: NodeId) -> Result<Tree, SurgeryError> {
    if tree.id() == top {
        return Err(SurgeryError::RootRemoval);
    }
    let top_node = tree.find(top).ok_or(SurgeryError::NodeNotFound(top))?;
    if tree.find(bottom).is_none() {
        return Err(SurgeryError::NodeNotFound(bottom));
    }
    let bottom_node = top_node
        .find(bottom)
        .ok_or(SurgeryError::NotDominating { top, bottom })?;
    let replacement: Vec<Tree> = if bottom_node.is_leaf() {
        vec![bottom_node.clone()]
    } else {
        bottom_node.children().to_vec()
    };
    Ok(splice(tree, top, &replacement))
}

fn splice(tree: &Tree, top: NodeId, replacement: &[Tree]) -> Tree {
    if tree.is_leaf() {
        return tree.clone();
    }
    let mut children = Vec::with_capacity(tree.children().len());
    for child in tree.children() {
        if child.id() == top {
            children.extend(replacement.iter().cloned());
        } else {
            children.push(splice(child, top, replacement));
        }
    }
    Tree::from_parts(tree.id(), tree.label().to_string(), None, children)
}

/// The node as a standalone tree under a fresh `TOP` whose id is one past
/// the largest id in `tree`. A root already labeled `TOP` is returned as is.
pub fn extract(tree: &Tree, id: NodeId) -> Result<Tree, SurgeryError> {
    let node = tree.find(id).ok_or(SurgeryError::NodeNotFound(id))?;
    if node.id() == tree.id() && node.label() == "TOP" {
        return Ok(node.clone());
    }
    Ok(Tree::from_parts(
        tree.max_id() + 1,
        "TOP".to_string(),
        None,
        vec![node.clone()],
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Delete(String),
    Excise { top: String, bottom: String },
    Extract(String),
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Delete(name) => write!(f, "delete {name}"),
            Operation::Excise { top, bottom } => write!(f, "excise {top} {bottom}"),
            Operation::Extract(name) => write!(f, "extract {name}"),
        }
    }
}

/// Comma-separated operations such as `delete head,delete neg` or
/// `excise s target`. A clause without a verb repeats the preceding
/// `delete` or `extract` on a new name, so `delete a,b` deletes both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryScript {
    pub operations: Vec<Operation>,
}

impl SurgeryScript {
    pub fn parse(script: &str) -> Result<SurgeryScript, SurgeryError> {
        let err = |reason: &str| SurgeryError::Syntax {
            script: script.to_string(),
            reason: reason.to_string(),
        };
        let mut operations: Vec<Operation> = Vec::new();
        if script.trim().is_empty() {
            return Ok(SurgeryScript { operations });
        }
        for clause in script.split(',') {
            let words: Vec<&str> = clause.split_whitespace().collect();
            let op = match words.as_slice() {
                [] => return Err(err("empty clause")),
                ["delete", name] => Operation::Delete(name.to_string()),
                ["delete", ..] => return Err(err("delete takes one capture")),
                ["extract", name] => Operation::Extract(name.to_string()),
                ["extract", ..] => return Err(err("extract takes one capture")),
                ["excise", top, bottom] => Operation::Excise {
                    top: top.to_string(),
                    bottom: bottom.to_string(),
                },
                ["excise", ..] => return Err(err("excise takes two captures")),
                [name] => match operations.last() {
                    Some(Operation::Delete(_)) => Operation::Delete(name.to_string()),
                    Some(Operation::Extract(_)) => Operation::Extract(name.to_string()),
                    _ => return Err(err(&format!("unknown operation `{name}`"))),
                },
                [verb, ..] => return Err(err(&format!("unknown operation `{verb}`"))),
            };
            operations.push(op);
        }
        Ok(SurgeryScript { operations })
    }

    /// Capture names referenced by the script.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for op in &self.operations {
            match op {
                Operation::Delete(n) | Operation::Extract(n) => out.push(n.as_str()),
                Operation::Excise { top, bottom } => {
                    out.push(top.as_str());
                    out.push(bottom.as_str());
                }
            }
        }
        out
    }

    /// Applies the operations in order, resolving names through `binding`.
    pub fn apply(&self, tree: &Tree, binding: &MatchBinding) -> Result<Tree, SurgeryError> {
        let lookup = |name: &str| {
            binding
                .get(name)
                .ok_or_else(|| SurgeryError::UnboundCapture(name.to_string()))
        };
        let mut current = tree.clone();
        for op in &self.operations {
            match op {
                Operation::Delete(name) => current = delete(&current, lookup(name)?)?,
                Operation::Extract(name) => current = extract(&current, lookup(name)?)?,
                Operation::Excise { top, bottom } => {
                    current = excise(&current, lookup(top)?, lookup(bottom)?)?;
                }
            }
        }
        Ok(current)
    }
}

pub fn run_script(
    tree: &Tree,
    binding: &MatchBinding,
    script: &SurgeryScript,
) -> Result<Tree, SurgeryError> {
    script.apply(tree, binding)
}

impl fmt::Display for SurgeryScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.operations.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}
