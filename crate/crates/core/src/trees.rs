//! Ternary trees and non-crossing trees.
//!
//! Non-crossing trees use the left/right-marker representation: the root has a
//! single ordered child list, every other node splits its children into a left
//! group and a right group.
//!
//! Wire formats (JSON):
//!
//! * ternary tree: `null` for the empty tree, `[left, middle, right]` for a node;
//! * non-crossing tree: `{"children": [node, ...]}` with node `{"left": [...], "right": [...]}`;
//! * tree pair: `{"first": ternary, "second": ternary}`.
//!
//! Traversals, encoding and decoding use explicit stacks so that degenerate
//! (path-like) trees with thousands of nodes are handled without deep recursion.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum TernaryTree {
    #[default]
    Empty,
    Node(Box<TernaryNode>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TernaryNode {
    pub left: TernaryTree,
    pub middle: TernaryTree,
    pub right: TernaryTree,
}

impl TernaryTree {
    pub fn node(left: TernaryTree, middle: TernaryTree, right: TernaryTree) -> Self {
        TernaryTree::Node(Box::new(TernaryNode { left, middle, right }))
    }

    /// A single node with three empty subtrees.
    pub fn leaf() -> Self {
        Self::node(TernaryTree::Empty, TernaryTree::Empty, TernaryTree::Empty)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, TernaryTree::Empty)
    }

    pub fn as_node(&self) -> Option<&TernaryNode> {
        match self {
            TernaryTree::Empty => None,
            TernaryTree::Node(n) => Some(n),
        }
    }

    /// Number of (internal) nodes.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let TernaryTree::Node(n) = t {
                count += 1;
                stack.extend([&n.left, &n.middle, &n.right]);
            }
        }
        count
    }
}

pub fn node_count(tree: &TernaryTree) -> usize {
    tree.node_count()
}

/// A non-root node of a non-crossing tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NcNode {
    pub left: Vec<NcNode>,
    pub right: Vec<NcNode>,
}

impl NcNode {
    pub fn leaf() -> Self {
        NcNode::default()
    }

    pub fn new(left: Vec<NcNode>, right: Vec<NcNode>) -> Self {
        NcNode { left, right }
    }

    pub fn child_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// Children in left-to-right order: left group, then right group.
    pub fn children(&self) -> impl DoubleEndedIterator<Item = &NcNode> {
        self.left.iter().chain(self.right.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NonCrossingTree {
    pub root: Vec<NcNode>,
}

impl NonCrossingTree {
    pub fn new(root: Vec<NcNode>) -> Self {
        NonCrossingTree { root }
    }

    /// Number of edges, i.e. of non-root nodes.
    pub fn edge_count(&self) -> usize {
        let mut count = 0;
        let mut stack: Vec<&NcNode> = self.root.iter().collect();
        while let Some(n) = stack.pop() {
            count += 1;
            stack.extend(n.children());
        }
        count
    }

    /// Non-root nodes in the order produced by repeatedly removing the
    /// leftmost leaf (a post-order over left-then-right children).
    pub fn leftmost_leaf_order(&self) -> Vec<&NcNode> {
        let mut out = Vec::new();
        let mut stack: Vec<(&NcNode, bool)> = self.root.iter().rev().map(|n| (n, false)).collect();
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                out.push(node);
            } else {
                stack.push((node, true));
                stack.extend(node.children().rev().map(|c| (c, false)));
            }
        }
        out
    }
}

/// `(u, j)` per non-root node in leftmost-leaf removal order, where `u` is the
/// number of children and `j` the number of left children.
pub fn nc_degree_pairs(tree: &NonCrossingTree) -> Vec<(usize, usize)> {
    tree.leftmost_leaf_order()
        .into_iter()
        .map(|n| (n.child_count(), n.left.len()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TreePair {
    pub first: TernaryTree,
    pub second: TernaryTree,
}

impl TreePair {
    pub fn new(first: TernaryTree, second: TernaryTree) -> Self {
        TreePair { first, second }
    }

    pub fn node_count(&self) -> usize {
        self.first.node_count() + self.second.node_count()
    }
}

/// JSON wire format for tree values.
pub trait TreeJson: Sized {
    fn to_json(&self) -> String;
    fn from_json(text: &str) -> Result<Self>;
}

fn parse_json(text: &str) -> Result<Value> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let v = serde::Deserialize::deserialize(&mut de).map_err(|e| Error::decode("$", e.to_string()))?;
    de.end().map_err(|e| Error::decode("$", e.to_string()))?;
    Ok(v)
}

pub fn encode_ternary(tree: &TernaryTree) -> String {
    enum Item<'a> {
        Tree(&'a TernaryTree),
        Text(&'static str),
    }
    let mut out = String::new();
    let mut stack = vec![Item::Tree(tree)];
    while let Some(item) = stack.pop() {
        match item {
            Item::Text(s) => out.push_str(s),
            Item::Tree(TernaryTree::Empty) => out.push_str("null"),
            Item::Tree(TernaryTree::Node(n)) => {
                out.push('[');
                stack.extend([
                    Item::Text("]"),
                    Item::Tree(&n.right),
                    Item::Text(","),
                    Item::Tree(&n.middle),
                    Item::Text(","),
                    Item::Tree(&n.left),
                ]);
            }
        }
    }
    out
}

fn decode_ternary_value(value: &Value, root_path: &str) -> Result<TernaryTree> {
    enum Frame<'a> {
        Enter(&'a Value, String),
        Build,
    }
    let mut stack = vec![Frame::Enter(value, root_path.to_string())];
    let mut built: Vec<TernaryTree> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(Value::Null, _) => built.push(TernaryTree::Empty),
            Frame::Enter(Value::Array(items), path) if items.len() == 3 => {
                stack.push(Frame::Build);
                for (k, item) in items.iter().enumerate().rev() {
                    stack.push(Frame::Enter(item, format!("{path}[{k}]")));
                }
            }
            Frame::Enter(_, path) => {
                return Err(Error::decode(path, "expected null or an array of three subtrees"));
            }
            Frame::Build => {
                let right = built.pop().expect("three subtrees");
                let middle = built.pop().expect("three subtrees");
                let left = built.pop().expect("three subtrees");
                built.push(TernaryTree::node(left, middle, right));
            }
        }
    }
    Ok(built.pop().expect("one tree"))
}

pub fn decode_ternary(text: &str) -> Result<TernaryTree> {
    decode_ternary_value(&parse_json(text)?, "$")
}

pub fn encode_noncrossing(tree: &NonCrossingTree) -> String {
    enum Item<'a> {
        Node(&'a NcNode),
        List(&'a [NcNode]),
        Text(&'static str),
    }
    let mut out = String::from("{\"children\":");
    let mut stack = vec![Item::Text("}"), Item::List(&tree.root)];
    while let Some(item) = stack.pop() {
        match item {
            Item::Text(s) => out.push_str(s),
            Item::List(nodes) => {
                out.push('[');
                stack.push(Item::Text("]"));
                for (k, n) in nodes.iter().enumerate().rev() {
                    stack.push(Item::Node(n));
                    if k > 0 {
                        stack.push(Item::Text(","));
                    }
                }
            }
            Item::Node(n) => {
                out.push_str("{\"left\":");
                stack.extend([Item::Text("}"), Item::List(&n.right), Item::Text(",\"right\":"), Item::List(&n.left)]);
            }
        }
    }
    out
}

fn expect_object<'a>(value: &'a Value, path: &str, keys: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::decode(path, format!("expected an object with keys {keys:?}")))?;
    if let Some(extra) = obj.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(Error::decode(path, format!("unexpected key {extra:?}")));
    }
    Ok(obj)
}

fn expect_list<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a [Value]> {
    match obj.get(key) {
        Some(Value::Array(items)) => Ok(items),
        Some(_) => Err(Error::decode(format!("{path}.{key}"), "expected an array")),
        None => Err(Error::decode(path, format!("missing key {key:?}"))),
    }
}

pub fn decode_noncrossing(text: &str) -> Result<NonCrossingTree> {
    enum Frame<'a> {
        Enter(&'a Value, String),
        Build(usize, usize),
    }
    let value = parse_json(text)?;
    let root = expect_object(&value, "$", &["children"])?;
    let children = expect_list(root, "children", "$")?;
    let mut stack: Vec<Frame> = children
        .iter()
        .enumerate()
        .rev()
        .map(|(k, v)| Frame::Enter(v, format!("$.children[{k}]")))
        .collect();
    let mut built: Vec<NcNode> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(v, path) => {
                let obj = expect_object(v, &path, &["left", "right"])?;
                let left = expect_list(obj, "left", &path)?;
                let right = expect_list(obj, "right", &path)?;
                stack.push(Frame::Build(left.len(), right.len()));
                for (k, c) in right.iter().enumerate().rev() {
                    stack.push(Frame::Enter(c, format!("{path}.right[{k}]")));
                }
                for (k, c) in left.iter().enumerate().rev() {
                    stack.push(Frame::Enter(c, format!("{path}.left[{k}]")));
                }
            }
            Frame::Build(nl, nr) => {
                let right = built.split_off(built.len() - nr);
                let left = built.split_off(built.len() - nl);
                built.push(NcNode { left, right });
            }
        }
    }
    Ok(NonCrossingTree { root: built })
}

pub fn encode_pair(pair: &TreePair) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"first\":{},\"second\":{}}}",
        encode_ternary(&pair.first),
        encode_ternary(&pair.second)
    );
    out
}

pub fn decode_pair(text: &str) -> Result<TreePair> {
    let value = parse_json(text)?;
    let obj = expect_object(&value, "$", &["first", "second"])?;
    let get = |key: &str| {
        obj.get(key)
            .ok_or_else(|| Error::decode("$", format!("missing key {key:?}")))
            .and_then(|v| decode_ternary_value(v, &format!("$.{key}")))
    };
    Ok(TreePair { first: get("first")?, second: get("second")? })
}

impl TreeJson for TernaryTree {
    fn to_json(&self) -> String {
        encode_ternary(self)
    }

    fn from_json(text: &str) -> Result<Self> {
        decode_ternary(text)
    }
}

impl TreeJson for NonCrossingTree {
    fn to_json(&self) -> String {
        encode_noncrossing(self)
    }

    fn from_json(text: &str) -> Result<Self> {
        decode_noncrossing(text)
    }
}

impl TreeJson for TreePair {
    fn to_json(&self) -> String {
        encode_pair(self)
    }

    fn from_json(text: &str) -> Result<Self> {
        decode_pair(text)
    }
}

/// Every ternary tree with exactly `n` nodes.
pub fn all_ternary_trees(n: usize) -> Vec<TernaryTree> {
    let mut by_size: Vec<Vec<TernaryTree>> = vec![vec![TernaryTree::Empty]];
    for size in 1..=n {
        let mut trees = Vec::new();
        for a in 0..size {
            for b in 0..size - a {
                let c = size - 1 - a - b;
                for l in &by_size[a] {
                    for m in &by_size[b] {
                        for r in &by_size[c] {
                            trees.push(TernaryTree::node(l.clone(), m.clone(), r.clone()));
                        }
                    }
                }
            }
        }
        by_size.push(trees);
    }
    by_size.swap_remove(n)
}

/// Every ordered forest of marker nodes with `n` nodes in total.
fn nc_forests(n: usize) -> Vec<Vec<Vec<NcNode>>> {
    let mut forests: Vec<Vec<Vec<NcNode>>> = vec![vec![Vec::new()]];
    let mut nodes: Vec<Vec<NcNode>> = vec![Vec::new()];
    for size in 1..=n {
        let mut ns = Vec::new();
        for a in 0..size {
            for l in &forests[a] {
                for r in &forests[size - 1 - a] {
                    ns.push(NcNode::new(l.clone(), r.clone()));
                }
            }
        }
        nodes.push(ns);
        let mut fs = Vec::new();
        for first in 1..=size {
            for head in &nodes[first] {
                for tail in &forests[size - first] {
                    let mut f = Vec::with_capacity(tail.len() + 1);
                    f.push(head.clone());
                    f.extend(tail.iter().cloned());
                    fs.push(f);
                }
            }
        }
        forests.push(fs);
    }
    forests
}

/// Every non-crossing tree (marker representation) with exactly `n` edges.
pub fn all_noncrossing_trees(n: usize) -> Vec<NonCrossingTree> {
    nc_forests(n).swap_remove(n).into_iter().map(NonCrossingTree::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use TernaryTree as T;

    fn fuss_catalan(n: u64) -> u64 {
        // 1/(2n+1) C(3n, n)
        let mut c: u64 = 1;
        for k in 0..n {
            c = c * (3 * n - k) / (k + 1);
        }
        c / (2 * n + 1)
    }

    #[test]
    fn node_counts() {
        assert_eq!(node_count(&T::Empty), 0);
        assert_eq!(node_count(&T::leaf()), 1);
        // root with three children; middle child has a middle child; right child has a left child
        let t = T::node(
            T::leaf(),
            T::node(T::Empty, T::leaf(), T::Empty),
            T::node(T::leaf(), T::Empty, T::Empty),
        );
        assert_eq!(node_count(&t), 6);
    }

    #[test]
    fn degree_pairs() {
        let three = NonCrossingTree::new(vec![NcNode::leaf(); 3]);
        assert_eq!(nc_degree_pairs(&three), vec![(0, 0); 3]);
        let chain = NonCrossingTree::new(vec![NcNode::new(vec![NcNode::new(vec![NcNode::leaf()], vec![])], vec![])]);
        assert_eq!(nc_degree_pairs(&chain), vec![(0, 0), (1, 1), (1, 1)]);
        assert!(nc_degree_pairs(&NonCrossingTree::default()).is_empty());
    }

    #[test]
    fn removal_order_prefers_left_group() {
        // node with one left leaf L and one right leaf R: order L, R, node
        let t = NonCrossingTree::new(vec![NcNode::new(vec![NcNode::leaf()], vec![NcNode::new(vec![NcNode::leaf()], vec![])])]);
        assert_eq!(nc_degree_pairs(&t), vec![(0, 0), (0, 0), (1, 1), (2, 1)]);
    }

    #[test]
    fn ternary_json_examples() {
        assert_eq!(encode_ternary(&T::leaf()), "[null,null,null]");
        assert_eq!(encode_ternary(&T::node(T::Empty, T::Empty, T::leaf())), "[null,null,[null,null,null]]");
        assert_eq!(encode_ternary(&T::Empty), "null");
        assert_eq!(decode_ternary(" [ null , null , [null,null,null] ] ").unwrap(), T::node(T::Empty, T::Empty, T::leaf()));
    }

    #[test]
    fn ternary_decode_errors_carry_path() {
        let err = decode_ternary("[null,[null,1,null],null]").unwrap_err();
        assert_eq!(err, Error::decode("$[1][1]", "expected null or an array of three subtrees"));
        assert!(matches!(decode_ternary("[null,null]"), Err(Error::Decode { .. })));
        assert!(matches!(decode_ternary("[null,null,null"), Err(Error::Decode { .. })));
    }

    #[test]
    fn noncrossing_json() {
        let t = NonCrossingTree::new(vec![NcNode::new(vec![NcNode::leaf()], vec![])]);
        let s = encode_noncrossing(&t);
        assert_eq!(s, r#"{"children":[{"left":[{"left":[],"right":[]}],"right":[]}]}"#);
        assert_eq!(decode_noncrossing(&s).unwrap(), t);
        // key order is not significant
        let reordered = r#"{"children":[{"right":[],"left":[{"right":[],"left":[]}]}]}"#;
        assert_eq!(decode_noncrossing(reordered).unwrap(), t);
        assert_eq!(encode_noncrossing(&NonCrossingTree::default()), r#"{"children":[]}"#);
    }

    #[test]
    fn noncrossing_decode_errors_carry_path() {
        let err = decode_noncrossing(r#"{"children":[{"left":[],"right":[{"left":[]}]}]}"#).unwrap_err();
        assert_eq!(err, Error::decode("$.children[0].right[0]", "missing key \"right\""));
        let err = decode_noncrossing(r#"{"kids":[]}"#).unwrap_err();
        assert!(matches!(err, Error::Decode { .. }));
    }

    #[test]
    fn pair_json() {
        let p = TreePair::new(T::leaf(), T::Empty);
        let s = encode_pair(&p);
        assert_eq!(s, r#"{"first":[null,null,null],"second":null}"#);
        assert_eq!(decode_pair(&s).unwrap(), p);
        assert!(decode_pair(r#"{"first":null}"#).is_err());
    }

    #[test]
    fn deep_trees_round_trip() {
        let mut t = T::Empty;
        for _ in 0..5000 {
            t = T::node(T::Empty, t, T::Empty);
        }
        assert_eq!(t.node_count(), 5000);
        let s = encode_ternary(&t);
        assert_eq!(decode_ternary(&s).unwrap(), t);
    }

    #[test]
    fn ternary_tree_counts() {
        for n in 0..=6 {
            let trees = all_ternary_trees(n);
            assert_eq!(trees.len() as u64, fuss_catalan(n as u64), "n = {n}");
            assert!(trees.iter().all(|t| t.node_count() == n));
            let unique: std::collections::HashSet<_> = trees.iter().collect();
            assert_eq!(unique.len(), trees.len());
        }
    }

    #[test]
    fn noncrossing_tree_counts() {
        for n in 0..=5 {
            let trees = all_noncrossing_trees(n);
            assert_eq!(trees.len() as u64, fuss_catalan(n as u64), "n = {n}");
            assert!(trees.iter().all(|t| t.edge_count() == n));
        }
    }

    #[test]
    fn json_round_trip_on_all_small_trees() {
        for n in 0..=6 {
            for t in all_ternary_trees(n) {
                assert_eq!(decode_ternary(&encode_ternary(&t)).unwrap(), t);
            }
        }
        for n in 0..=5 {
            for t in all_noncrossing_trees(n) {
                assert_eq!(decode_noncrossing(&encode_noncrossing(&t)).unwrap(), t);
            }
        }
    }
}
