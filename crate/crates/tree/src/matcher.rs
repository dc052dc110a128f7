//! Matching compiled patterns against trees.

use std::collections::BTreeMap;

use crate::pattern::{Pattern, Relation};
use crate::tree::{NodeId, Tree};

/// One successful match: the node bound to the pattern root plus the named
/// captures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchBinding {
    pub root: NodeId,
    pub captures: BTreeMap<String, NodeId>,
}

impl MatchBinding {
    pub fn get(&self, name: &str) -> Option<NodeId> {
        self.captures.get(name).copied()
    }
}

/// Flat pre-order view of a tree with parent and subtree-size tables.
struct Flat<'a> {
    nodes: Vec<&'a Tree>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Index one past the last descendant.
    end: Vec<usize>,
}

impl<'a> Flat<'a> {
    fn new(tree: &'a Tree) -> Flat<'a> {
        let mut flat = Flat {
            nodes: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            end: Vec::new(),
        };
        flat.push(tree, None);
        flat
    }

    fn push(&mut self, node: &'a Tree, parent: Option<usize>) -> usize {
        let i = self.nodes.len();
        self.nodes.push(node);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.end.push(0);
        for child in node.children() {
            let c = self.push(child, Some(i));
            self.children[i].push(c);
        }
        self.end[i] = self.nodes.len();
        i
    }

    /// Nodes standing in `relation` to `n`, in pre-order.
    fn related(&self, n: usize, relation: Relation) -> Vec<usize> {
        match relation {
            Relation::Parent => self.children[n].clone(),
            Relation::Dominates => (n + 1..self.end[n]).collect(),
            Relation::LeftmostDescendant => {
                let mut out = Vec::new();
                let mut cur = n;
                while let Some(&first) = self.children[cur].first() {
                    out.push(first);
                    cur = first;
                }
                out
            }
            Relation::RightmostDescendant => {
                let mut out = Vec::new();
                let mut cur = n;
                while let Some(&last) = self.children[cur].last() {
                    out.push(last);
                    cur = last;
                }
                out
            }
            Relation::LastChild => self.children[n].last().copied().into_iter().collect(),
            Relation::ChildOf => self.parent[n].into_iter().collect(),
            Relation::DominatedBy => {
                let mut out = Vec::new();
                let mut cur = n;
                while let Some(p) = self.parent[cur] {
                    out.push(p);
                    cur = p;
                }
                out.reverse();
                out
            }
            Relation::Sister => match self.parent[n] {
                Some(p) => self.children[p]
                    .iter()
                    .copied()
                    .filter(|&s| s != n)
                    .collect(),
                None => Vec::new(),
            },
        }
    }

    fn match_at(
        &self,
        pattern: &Pattern,
        n: usize,
        captures: &mut BTreeMap<String, NodeId>,
    ) -> bool {
        let node = self.nodes[n];
        if !pattern.root.matcher.matches(node.label(), node.token()) {
            return false;
        }
        let mut local = BTreeMap::new();
        if let Some(name) = &pattern.root.capture {
            local.insert(name.clone(), node.id());
        }
        for constraint in &pattern.constraints {
            let mut found = None;
            for candidate in self.related(n, constraint.relation) {
                let mut sub = BTreeMap::new();
                if self.match_at(&constraint.operand, candidate, &mut sub) {
                    found = Some(sub);
                    break;
                }
            }
            match (found, constraint.negated) {
                (Some(sub), false) => local.extend(sub),
                (None, true) => {}
                _ => return false,
            }
        }
        captures.extend(local);
        true
    }
}

/// Every node that the pattern root can bind, in pre-order, each with its
/// first binding.
///
/// Constraints never share variables, so the first binding is found by
/// choosing, for each constraint in turn, the first related node in
/// pre-order that satisfies it.
pub fn match_all(pattern: &Pattern, tree: &Tree) -> Vec<MatchBinding> {
    let flat = Flat::new(tree);
    (0..flat.nodes.len())
        .filter_map(|n| {
            let mut captures = BTreeMap::new();
            flat.match_at(pattern, n, &mut captures)
                .then(|| MatchBinding {
                    root: flat.nodes[n].id(),
                    captures,
                })
        })
        .collect()
}

/// The first match in pre-order, if any.
pub fn match_first(pattern: &Pattern, tree: &Tree) -> Option<MatchBinding> {
    let flat = Flat::new(tree);
    (0..flat.nodes.len()).find_map(|n| {
        let mut captures = BTreeMap::new();
        flat.match_at(pattern, n, &mut captures)
            .then(|| MatchBinding {
                root: flat.nodes[n].id(),
                captures,
            })
    })
}
