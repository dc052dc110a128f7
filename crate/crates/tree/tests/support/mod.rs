//! Test-only helpers shared by the tree tests and the acceptance suite:
//! a brute-force matcher written straight from the relation definitions,
//! random tree and pattern generators driven by a caller-supplied number
//! source, and structural checks for surgery results.
#![allow(dead_code)]

use std::collections::BTreeMap;

use clinsum_tree::{
    parse_ptb, LabelMatcher, LabelPattern, NodeId, Pattern, Relation, Tree,
};

/// Parent-array view of a tree. Index = pre-order position.
pub struct ParentArray {
    pub label: Vec<String>,
    pub token: Vec<Option<String>>,
    pub id: Vec<NodeId>,
    pub parent: Vec<Option<usize>>,
}

impl ParentArray {
    pub fn new(tree: &Tree) -> ParentArray {
        let mut pa = ParentArray {
            label: Vec::new(),
            token: Vec::new(),
            id: Vec::new(),
            parent: Vec::new(),
        };
        fn walk(t: &Tree, parent: Option<usize>, pa: &mut ParentArray) {
            let me = pa.label.len();
            pa.label.push(t.label().to_string());
            pa.token.push(t.token().map(str::to_string));
            pa.id.push(t.id());
            pa.parent.push(parent);
            for c in t.children() {
                walk(c, Some(me), pa);
            }
        }
        walk(tree, None, &mut pa);
        pa
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    fn siblings(&self, b: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.parent[x].is_some() && self.parent[x] == self.parent[b])
            .collect()
    }

    fn is_first_child(&self, b: usize) -> bool {
        self.parent[b].is_some() && self.siblings(b).into_iter().min() == Some(b)
    }

    fn is_last_child(&self, b: usize) -> bool {
        self.parent[b].is_some() && self.siblings(b).into_iter().max() == Some(b)
    }

    /// Walks up from `b`; true when `a` is met strictly above it.
    fn dominates(&self, a: usize, b: usize) -> bool {
        let mut cur = self.parent[b];
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    /// `a` dominates `b` and every step from `b` up to `a` leaves a first
    /// (or last) child.
    fn edge_chain(&self, a: usize, b: usize, first: bool) -> bool {
        if !self.dominates(a, b) {
            return false;
        }
        let mut cur = b;
        while cur != a {
            let ok = if first {
                self.is_first_child(cur)
            } else {
                self.is_last_child(cur)
            };
            if !ok {
                return false;
            }
            cur = self.parent[cur].unwrap();
        }
        true
    }

    /// `a REL b`.
    pub fn holds(&self, rel: Relation, a: usize, b: usize) -> bool {
        match rel {
            Relation::Parent => self.parent[b] == Some(a),
            Relation::Dominates => self.dominates(a, b),
            Relation::LeftmostDescendant => self.edge_chain(a, b, true),
            Relation::RightmostDescendant => self.edge_chain(a, b, false),
            Relation::LastChild => self.parent[b] == Some(a) && self.is_last_child(b),
            Relation::ChildOf => self.parent[a] == Some(b),
            Relation::DominatedBy => self.dominates(b, a),
            Relation::Sister => a != b && self.parent[a].is_some() && self.parent[a] == self.parent[b],
        }
    }

    fn desc_matches(&self, m: &LabelMatcher, n: usize) -> bool {
        let one = |p: &LabelPattern| {
            let label = &self.label[n];
            let tok = self.token[n].as_deref().map(str::to_lowercase);
            match p {
                LabelPattern::Exact(w) => label == w || tok.as_deref() == Some(&w.to_lowercase()),
                LabelPattern::Prefix(w) => {
                    label.starts_with(w.as_str())
                        || tok.is_some_and(|t| t.starts_with(&w.to_lowercase()))
                }
            }
        };
        match m {
            LabelMatcher::Wildcard => true,
            LabelMatcher::Literal(p) => one(p),
            LabelMatcher::Alternation(ps) => ps.iter().any(one),
        }
    }
}

/// Pattern nodes flattened in pre-order: (desc, link to the parent slot with
/// its relation and negation flag).
struct Slot<'p> {
    pattern: &'p Pattern,
    link: Option<(usize, Relation)>,
}

fn flatten<'p>(p: &'p Pattern, link: Option<(usize, Relation)>, out: &mut Vec<Slot<'p>>) {
    let me = out.len();
    out.push(Slot { pattern: p, link });
    for c in &p.constraints {
        if !c.negated {
            flatten(&c.operand, Some((me, c.relation)), out);
        }
    }
}

/// Does any assignment of `p` rooted at node `n` exist?
fn exists(pa: &ParentArray, p: &Pattern, n: usize) -> bool {
    first_assignment(pa, p, n).is_some()
}

/// Lexicographically smallest assignment (by pre-order positions of the
/// pattern's non-negated nodes) with the root fixed at `n`, found by
/// exhaustive backtracking.
fn first_assignment(pa: &ParentArray, p: &Pattern, n: usize) -> Option<Vec<usize>> {
    let mut slots = Vec::new();
    flatten(p, None, &mut slots);
    let mut assign = vec![usize::MAX; slots.len()];
    assign[0] = n;
    if !slot_ok(pa, &slots, &assign, 0) {
        return None;
    }
    search(pa, &slots, &mut assign, 1).then_some(assign)
}

fn slot_ok(pa: &ParentArray, slots: &[Slot], assign: &[usize], i: usize) -> bool {
    let node = assign[i];
    let slot = &slots[i];
    if !pa.desc_matches(&slot.pattern.root.matcher, node) {
        return false;
    }
    if let Some((parent_slot, rel)) = slot.link {
        if !pa.holds(rel, assign[parent_slot], node) {
            return false;
        }
    }
    // Negated constraints: no node at all may satisfy them.
    slot.pattern
        .constraints
        .iter()
        .filter(|c| c.negated)
        .all(|c| {
            (0..pa.len()).all(|m| !(pa.holds(c.relation, node, m) && exists(pa, &c.operand, m)))
        })
}

fn search(pa: &ParentArray, slots: &[Slot], assign: &mut Vec<usize>, i: usize) -> bool {
    if i == slots.len() {
        return true;
    }
    for m in 0..pa.len() {
        assign[i] = m;
        if slot_ok(pa, slots, assign, i) && search(pa, slots, assign, i + 1) {
            return true;
        }
    }
    assign[i] = usize::MAX;
    false
}

/// Brute-force `match_all`: (root id, captures) for every node that admits
/// an assignment.
pub fn oracle_match_all(p: &Pattern, tree: &Tree) -> Vec<(NodeId, BTreeMap<String, NodeId>)> {
    let pa = ParentArray::new(tree);
    let mut slots = Vec::new();
    flatten(p, None, &mut slots);
    let mut out = Vec::new();
    for n in 0..pa.len() {
        if let Some(assign) = first_assignment(&pa, p, n) {
            let captures = slots
                .iter()
                .zip(&assign)
                .filter_map(|(s, &node)| {
                    s.pattern
                        .root
                        .capture
                        .as_ref()
                        .map(|name| (name.clone(), pa.id[node]))
                })
                .collect();
            out.push((pa.id[n], captures));
        }
    }
    out
}

pub const PHRASES: [&str; 5] = ["S", "NP", "VP", "PP", "SBAR"];
pub const TAGS: [&str; 5] = ["DT", "NN", "NNS", "VB", "RB"];
pub const WORDS: [&str; 4] = ["no", "pain", "not", "seen"];

/// Random tree of at most `max_nodes` nodes with pre-order ids. `pick(n)`
/// must return a value in `0..n`.
pub fn random_tree(pick: &mut dyn FnMut(u32) -> u32, max_nodes: usize) -> Tree {
    fn grow(pick: &mut dyn FnMut(u32) -> u32, budget: &mut usize, depth: u32) -> Tree {
        *budget = budget.saturating_sub(1);
        let make_leaf = *budget < 2 || depth >= 5 || pick(4) == 0;
        if make_leaf {
            return Tree::leaf(
                TAGS[pick(TAGS.len() as u32) as usize],
                WORDS[pick(WORDS.len() as u32) as usize],
            );
        }
        let label = PHRASES[pick(PHRASES.len() as u32) as usize];
        let want = 1 + pick(3) as usize;
        let mut children = Vec::new();
        for _ in 0..want {
            if *budget == 0 {
                break;
            }
            children.push(grow(pick, budget, depth + 1));
        }
        if children.is_empty() {
            // Budget ran out: a preterminal always fits in the node we took.
            return Tree::leaf(TAGS[0], WORDS[0]);
        }
        Tree::node(label, children)
    }
    let mut budget = max_nodes.max(1);
    let tree = grow(pick, &mut budget, 0);
    parse_ptb(&tree.to_ptb()).expect("generated tree reparses")
}

/// Random pattern text over the eight relations.
pub fn random_pattern(pick: &mut dyn FnMut(u32) -> u32) -> String {
    fn desc(pick: &mut dyn FnMut(u32) -> u32, negated: bool, next: &mut u32) -> String {
        let all: Vec<&str> = PHRASES.iter().chain(&TAGS).chain(&WORDS).copied().collect();
        let mut s = match pick(6) {
            0 => "__".to_string(),
            1 => format!(
                "/{}|{}/",
                all[pick(all.len() as u32) as usize],
                all[pick(all.len() as u32) as usize]
            ),
            2 => ["N*", "V*", "S*", "/D*|PP/"][pick(4) as usize].to_string(),
            _ => all[pick(all.len() as u32) as usize].to_string(),
        };
        if !negated && pick(2) == 0 {
            s.push_str(&format!("=c{next}"));
            *next += 1;
        }
        s
    }
    fn pattern(
        pick: &mut dyn FnMut(u32) -> u32,
        depth: u32,
        negated: bool,
        next: &mut u32,
    ) -> String {
        let mut s = desc(pick, negated, next);
        let n = if depth >= 2 { 0 } else { pick(3) };
        for _ in 0..n {
            let rel = Relation::ALL[pick(8) as usize];
            let neg = pick(4) == 0;
            let operand = pattern(pick, depth + 1, negated || neg, next);
            let operand = if operand.contains(' ') {
                format!("({operand})")
            } else {
                operand
            };
            s.push_str(&format!(" {}{} {}", if neg { "!" } else { "" }, rel, operand));
        }
        s
    }
    let mut next = 0;
    pattern(pick, 0, false, &mut next)
}

/// Leaf iff token, and no nonterminal without children.
pub fn well_formed(t: &Tree) -> bool {
    t.preorder()
        .all(|n| n.token().is_some() == n.children().is_empty())
}

pub fn ids_unique(t: &Tree) -> bool {
    let mut ids: Vec<NodeId> = t.preorder().map(|n| n.id()).collect();
    let before = ids.len();
    ids.sort_unstable();
    ids.dedup();
    ids.len() == before
}

pub fn is_subsequence<T: PartialEq>(short: &[T], long: &[T]) -> bool {
    let mut it = long.iter();
    short.iter().all(|x| it.any(|y| y == x))
}

/// Deterministic number source over a fixed vector, for proptest inputs.
pub fn cycling(values: Vec<u32>) -> impl FnMut(u32) -> u32 {
    let mut i = 0usize;
    move |n| {
        let v = values[i % values.len()];
        i += 1;
        v % n
    }
}
