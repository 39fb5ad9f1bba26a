//! Bijections between path classes and trees.
//!
//! * `phi`: S-Motzkin path ↔ ternary tree, one node per `(A, B, C)` split.
//! * `omega`: T-Motzkin path ↔ ordered pair of S-Motzkin paths (hence of ternary trees).
//! * non-crossing: S-Motzkin path ↔ non-crossing tree through the piece decomposition.
//!
//! The recursive definitions are unrolled onto explicit stacks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{classify, decompose_pieces, LatticePath, Step};
use crate::trees::{NcNode, NonCrossingTree, TernaryTree, TreePair};

/// Left, middle and right parts of an S-Motzkin path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PhiTriple {
    pub a: LatticePath,
    pub b: LatticePath,
    pub c: LatticePath,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct OmegaPair {
    pub a: LatticePath,
    pub b: LatticePath,
}

fn require_s_or_empty(path: &LatticePath, what: &str) -> Result<()> {
    if path.is_empty() || classify(path).s_motzkin {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be empty or S-Motzkin, got {path}")))
    }
}

/// Start index of the longest window `[start, end)` that begins with a Flat,
/// never dips below its start height and returns to it. Returns `end` if none.
fn maximal_window_start(path: &LatticePath, end: usize) -> usize {
    let steps = path.steps();
    let level = path.height_at(end);
    let mut best = end;
    let mut low = i64::MAX;
    for start in (0..end).rev() {
        low = low.min(path.height_at(start + 1));
        if low < level {
            break;
        }
        if steps[start] == Step::Flat && path.height_at(start) == level {
            best = start;
        }
    }
    best
}

pub fn phi_decompose(m: &LatticePath) -> Result<PhiTriple> {
    if m.is_empty() || !classify(m).s_motzkin {
        return Err(Error::domain(format!("phi_decompose needs a nonempty S-Motzkin path, got {m}")));
    }
    let s = m.steps();
    let h = m.heights();
    let last = s.len() - 1;
    let prev = (0..last).rev().find(|&k| h[k] == 0).expect("an S-path starts with a Flat contact");
    let up = prev + 1;
    let x = (0..up).rev().find(|&k| s[k] == Step::Flat).expect("an S-path starts with a Flat");
    let start = maximal_window_start(m, x);

    let a = LatticePath::new(s[start..x].to_vec());
    let b = LatticePath::new([&s[..start], &s[x + 1..up]].concat());
    let c = LatticePath::new(s[up + 1..last].to_vec());
    Ok(PhiTriple { a, b, c })
}

fn phi_join(a: &[Step], b: &[Step], c: &[Step]) -> Vec<Step> {
    let split = b.iter().rposition(|&s| s == Step::Up).map_or(0, |k| k + 1);
    let mut out = Vec::with_capacity(a.len() + b.len() + c.len() + 3);
    out.extend_from_slice(&b[..split]);
    out.extend_from_slice(a);
    out.push(Step::Flat);
    out.extend_from_slice(&b[split..]);
    out.push(Step::Up);
    out.extend_from_slice(c);
    out.push(Step::Down);
    out
}

pub fn phi_compose(t: &PhiTriple) -> Result<LatticePath> {
    require_s_or_empty(&t.a, "A")?;
    require_s_or_empty(&t.b, "B")?;
    require_s_or_empty(&t.c, "C")?;
    Ok(LatticePath::new(phi_join(t.a.steps(), t.b.steps(), t.c.steps())))
}

pub fn s_to_ternary(m: &LatticePath) -> Result<TernaryTree> {
    require_s_or_empty(m, "input")?;
    enum Frame {
        Enter(LatticePath),
        Build,
    }
    let mut stack = vec![Frame::Enter(m.clone())];
    let mut built: Vec<TernaryTree> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(p) if p.is_empty() => built.push(TernaryTree::Empty),
            Frame::Enter(p) => {
                let PhiTriple { a, b, c } = phi_decompose(&p)?;
                stack.extend([Frame::Build, Frame::Enter(c), Frame::Enter(b), Frame::Enter(a)]);
            }
            Frame::Build => {
                let right = built.pop().expect("right subtree");
                let middle = built.pop().expect("middle subtree");
                let left = built.pop().expect("left subtree");
                built.push(TernaryTree::node(left, middle, right));
            }
        }
    }
    Ok(built.pop().expect("one tree"))
}

pub fn ternary_to_s(tree: &TernaryTree) -> LatticePath {
    enum Frame<'a> {
        Enter(&'a TernaryTree),
        Build,
    }
    let mut stack = vec![Frame::Enter(tree)];
    let mut built: Vec<Vec<Step>> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(TernaryTree::Empty) => built.push(Vec::new()),
            Frame::Enter(TernaryTree::Node(n)) => {
                stack.extend([Frame::Build, Frame::Enter(&n.right), Frame::Enter(&n.middle), Frame::Enter(&n.left)]);
            }
            Frame::Build => {
                let c = built.pop().expect("C");
                let b = built.pop().expect("B");
                let a = built.pop().expect("A");
                built.push(phi_join(&a, &b, &c));
            }
        }
    }
    LatticePath::new(built.pop().expect("one path"))
}

pub fn omega_split(n: &LatticePath) -> Result<OmegaPair> {
    if !classify(n).t_motzkin {
        return Err(Error::domain(format!("omega_split needs a T-Motzkin path, got {n}")));
    }
    if n.is_empty() {
        return Ok(OmegaPair::default());
    }
    let s = n.steps();
    let x = s.iter().rposition(|&st| st == Step::Flat).expect("a nonempty T-path has a Flat");
    let with_flat = |parts: &[&[Step]]| {
        let mut v = vec![Step::Flat];
        for p in parts {
            v.extend_from_slice(p);
        }
        LatticePath::new(v)
    };
    if x + 1 == s.len() {
        return Ok(OmegaPair { a: LatticePath::empty(), b: with_flat(&[&s[..x]]) });
    }
    let start = maximal_window_start(n, x);
    let b = LatticePath::new(s[start..x].to_vec());
    let a = with_flat(&[&s[..start], &s[x + 1..]]);
    Ok(OmegaPair { a, b })
}

pub fn omega_join(p: &OmegaPair) -> Result<LatticePath> {
    require_s_or_empty(&p.a, "A")?;
    require_s_or_empty(&p.b, "B")?;
    let a = p.a.steps();
    let b = p.b.steps();
    let steps = match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (true, false) => {
            let mut v = b[1..].to_vec();
            v.push(Step::Flat);
            v
        }
        (false, _) => {
            let rest = &a[1..];
            let after = rest.iter().rposition(|&s| s == Step::Up).expect("an S-path has an Up") + 1;
            let mut v = Vec::with_capacity(a.len() + b.len());
            v.extend_from_slice(&rest[..after]);
            v.extend_from_slice(b);
            v.push(Step::Flat);
            v.extend_from_slice(&rest[after..]);
            v
        }
    };
    Ok(LatticePath::new(steps))
}

pub fn t_to_tree_pair(n: &LatticePath) -> Result<TreePair> {
    let OmegaPair { a, b } = omega_split(n)?;
    Ok(TreePair { first: s_to_ternary(&a)?, second: s_to_ternary(&b)? })
}

pub fn tree_pair_to_t(p: &TreePair) -> LatticePath {
    let pair = OmegaPair { a: ternary_to_s(&p.first), b: ternary_to_s(&p.second) };
    omega_join(&pair).expect("images of ternary trees are S-Motzkin paths")
}

pub fn s_to_noncrossing(m: &LatticePath) -> Result<NonCrossingTree> {
    require_s_or_empty(m, "input")?;
    if m.is_empty() {
        return Ok(NonCrossingTree::default());
    }
    let decomposition = decompose_pieces(m)?;

    // Arena of (left, right) child ids; children always have larger ids than their parent.
    let mut arena: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let root_children: Vec<usize> = (0..decomposition.final_downs).collect();
    arena.resize(decomposition.final_downs, Default::default());
    let mut open: Vec<usize> = root_children.clone();
    for piece in decomposition.pieces.iter().rev() {
        let (t, i) = piece.characteristic_pair();
        let node = open.pop().ok_or_else(|| Error::domain(format!("no node available for piece at {}", piece.up_position)))?;
        let first = arena.len();
        arena.resize(first + t, Default::default());
        let kids: Vec<usize> = (first..first + t).collect();
        arena[node] = (kids[..i - 1].to_vec(), kids[i - 1..].to_vec());
        open.extend(kids);
    }

    let mut done: Vec<Option<NcNode>> = vec![None; arena.len()];
    for id in (0..arena.len()).rev() {
        let (l, r) = std::mem::take(&mut arena[id]);
        let mut take = |ids: Vec<usize>| ids.into_iter().map(|k| done[k].take().expect("child built")).collect();
        let left = take(l);
        let right = take(r);
        done[id] = Some(NcNode { left, right });
    }
    Ok(NonCrossingTree::new(root_children.into_iter().map(|k| done[k].take().expect("root child")).collect()))
}

pub fn noncrossing_to_s(tree: &NonCrossingTree) -> LatticePath {
    let order = tree.leftmost_leaf_order();
    if order.is_empty() {
        return LatticePath::empty();
    }
    let mut steps = vec![Step::Flat];
    for node in &order[1..] {
        let (u, j) = (node.child_count(), node.left.len());
        steps.push(Step::Up);
        steps.extend(std::iter::repeat_n(Step::Down, j));
        steps.push(Step::Flat);
        steps.extend(std::iter::repeat_n(Step::Down, u - j));
    }
    steps.push(Step::Up);
    steps.extend(std::iter::repeat_n(Step::Down, tree.root.len()));
    LatticePath::new(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{generate_paths, PathKind};
    use crate::paths::parse_path;
    use crate::trees::{all_noncrossing_trees, all_ternary_trees, decode_noncrossing, decode_ternary};
    use std::collections::{HashMap, HashSet};
    use TernaryTree as T;

    fn p(s: &str) -> LatticePath {
        parse_path(s).unwrap()
    }

    fn example_s_path() -> LatticePath {
        LatticePath::from_deltas(&[0, 1, 0, -1, 1, 0, 1, -1, 0, -1, 1, 0, 1, -1, 0, 1, -1, -1])
    }

    fn example_t_path() -> LatticePath {
        LatticePath::from_deltas(&[1, 0, 1, 0, -1, -1, 1, 0, 1, 0, 1, -1, -1, 0, -1])
    }

    fn chain(dirs: &str) -> T {
        dirs.chars().rev().fold(T::leaf(), |t, d| match d {
            'L' => T::node(t, T::Empty, T::Empty),
            'M' => T::node(T::Empty, t, T::Empty),
            'R' => T::node(T::Empty, T::Empty, t),
            _ => unreachable!(),
        })
    }

    #[test]
    fn phi_worked_example() {
        let triple = phi_decompose(&example_s_path()).unwrap();
        assert_eq!(triple.a, LatticePath::from_deltas(&[0, 1, -1]));
        assert_eq!(triple.b, LatticePath::from_deltas(&[0, 1, 0, -1, 1, -1]));
        assert_eq!(triple.c, LatticePath::from_deltas(&[0, 1, -1, 0, 1, -1]));
        assert_eq!(phi_compose(&triple).unwrap(), example_s_path());

        let tree = s_to_ternary(&example_s_path()).unwrap();
        let expected = T::node(
            T::leaf(),
            T::node(T::Empty, T::leaf(), T::Empty),
            T::node(T::leaf(), T::Empty, T::Empty),
        );
        assert_eq!(tree, expected);
        assert_eq!(tree.node_count(), 6);
        assert_eq!(ternary_to_s(&tree), example_s_path());
    }

    #[test]
    fn phi_small_examples() {
        assert_eq!(phi_decompose(&p("hud")).unwrap(), PhiTriple::default());
        let t = phi_decompose(&p("hudhud")).unwrap();
        assert_eq!(t, PhiTriple { a: p("hud"), ..Default::default() });
        assert_eq!(phi_compose(&PhiTriple::default()).unwrap(), p("hud"));
        assert_eq!(phi_compose(&t).unwrap(), p("hudhud"));
        assert!(phi_decompose(&p("")).is_err());
        assert!(phi_decompose(&p("uhd")).is_err());
        assert!(phi_compose(&PhiTriple { a: p("uhd"), ..Default::default() }).is_err());
    }

    #[test]
    fn ternary_table() {
        let rows = [
            ("hudhudhud", "LL"),
            ("huhudhudd", "RL"),
            ("hudhuhdud", "ML"),
            ("huhuddhud", "LR"),
            ("huhdudhud", "LM"),
            ("huhuhddud", "MR"),
            ("huhduhdud", "MM"),
            ("huhuhdudd", "RM"),
            ("huhuhuddd", "RR"),
        ];
        for (path, dirs) in rows {
            assert_eq!(s_to_ternary(&p(path)).unwrap(), chain(dirs), "{path}");
        }
        let forks = [
            ("huhudhdud", T::node(T::leaf(), T::leaf(), T::Empty)),
            ("hudhuhudd", T::node(T::leaf(), T::Empty, T::leaf())),
            ("huhduhudd", T::node(T::Empty, T::leaf(), T::leaf())),
        ];
        for (path, tree) in forks {
            assert_eq!(s_to_ternary(&p(path)).unwrap(), tree, "{path}");
        }
    }

    #[test]
    fn phi_round_trips() {
        for n in 0..=6 {
            let mut seen = HashSet::new();
            for m in generate_paths(PathKind::S, n) {
                let tree = s_to_ternary(&m).unwrap();
                assert_eq!(tree.node_count(), n);
                assert_eq!(ternary_to_s(&tree), m);
                if !m.is_empty() {
                    let t = phi_decompose(&m).unwrap();
                    assert_eq!(t.a.len() + t.b.len() + t.c.len(), m.len() - 3);
                    for part in [&t.a, &t.b, &t.c] {
                        assert!(part.is_empty() || classify(part).s_motzkin);
                    }
                }
                assert!(seen.insert(tree));
            }
            for tree in all_ternary_trees(n) {
                let m = ternary_to_s(&tree);
                assert!(m.is_empty() || classify(&m).s_motzkin);
                assert_eq!(s_to_ternary(&m).unwrap(), tree);
            }
        }
    }

    #[test]
    fn deep_trees_do_not_overflow() {
        let mut t = T::Empty;
        for _ in 0..2000 {
            t = T::node(t, T::Empty, T::Empty);
        }
        let m = ternary_to_s(&t);
        assert_eq!(m.len(), 6000);
        assert_eq!(s_to_ternary(&m).unwrap(), t);
    }

    #[test]
    fn omega_worked_example() {
        let pair = omega_split(&example_t_path()).unwrap();
        assert_eq!(pair.a, LatticePath::from_deltas(&[0, 1, 0, 1, 0, -1, -1, 1, -1]));
        assert_eq!(pair.b, LatticePath::from_deltas(&[0, 1, 0, 1, -1, -1]));
        assert_eq!(omega_join(&pair).unwrap(), example_t_path());

        let trees = t_to_tree_pair(&example_t_path()).unwrap();
        assert_eq!(trees, TreePair::new(chain("MR"), chain("R")));
        assert_eq!(tree_pair_to_t(&trees), example_t_path());
    }

    #[test]
    fn omega_small_examples() {
        assert_eq!(omega_split(&p("")).unwrap(), OmegaPair::default());
        assert_eq!(omega_split(&p("uhd")).unwrap(), OmegaPair { a: p("hud"), b: p("") });
        assert_eq!(omega_split(&p("udh")).unwrap(), OmegaPair { a: p(""), b: p("hud") });
        assert_eq!(omega_split(&p("uhudhd")).unwrap(), OmegaPair { a: p("hud"), b: p("hud") });
        assert_eq!(omega_join(&OmegaPair { a: p("hud"), b: p("") }).unwrap(), p("uhd"));
        assert_eq!(omega_join(&OmegaPair { a: p(""), b: p("hud") }).unwrap(), p("udh"));
        assert_eq!(t_to_tree_pair(&p("")).unwrap(), TreePair::default());
        assert!(omega_split(&p("hud")).is_err());
    }

    #[test]
    fn omega_round_trips() {
        for n in 0..=5 {
            let mut seen = HashSet::new();
            let mut sizes: HashMap<(usize, usize), usize> = HashMap::new();
            for m in generate_paths(PathKind::T, n) {
                let pair = omega_split(&m).unwrap();
                assert_eq!(pair.a.len() + pair.b.len(), m.len());
                assert_eq!(omega_join(&pair).unwrap(), m);
                *sizes.entry((pair.a.len() / 3, pair.b.len() / 3)).or_default() += 1;
                assert!(seen.insert(pair));
            }
            // every (a, b) split of n is hit by all S_a * S_b pairs
            let s_counts: Vec<usize> = (0..=n).map(|k| generate_paths(PathKind::S, k).count()).collect();
            for a in 0..=n {
                assert_eq!(sizes.get(&(a, n - a)).copied().unwrap_or(0), s_counts[a] * s_counts[n - a]);
            }
            for a in 0..=n {
                for first in all_ternary_trees(a) {
                    for second in all_ternary_trees(n - a) {
                        let pair = TreePair::new(first.clone(), second);
                        let m = tree_pair_to_t(&pair);
                        assert!(classify(&m).t_motzkin);
                        assert_eq!(t_to_tree_pair(&m).unwrap(), pair);
                    }
                }
            }
        }
        assert_eq!(generate_paths(PathKind::T, 2).map(|m| omega_split(&m).unwrap()).collect::<HashSet<_>>().len(), 7);
    }

    #[test]
    fn noncrossing_table() {
        let rows = [
            ("hudhudhud", r#"[{"left":[{"left":[{"left":[],"right":[]}],"right":[]}],"right":[]}]"#),
            ("huhudhudd", r#"[{"left":[],"right":[]},{"left":[{"left":[],"right":[]}],"right":[]}]"#),
            ("hudhuhdud", r#"[{"left":[],"right":[{"left":[{"left":[],"right":[]}],"right":[]}]}]"#),
            ("huhudhdud", r#"[{"left":[{"left":[],"right":[]}],"right":[{"left":[],"right":[]}]}]"#),
            ("hudhuhudd", r#"[{"left":[{"left":[],"right":[]}],"right":[]},{"left":[],"right":[]}]"#),
            ("huhuddhud", r#"[{"left":[{"left":[],"right":[]},{"left":[],"right":[]}],"right":[]}]"#),
            ("huhdudhud", r#"[{"left":[{"left":[],"right":[{"left":[],"right":[]}]}],"right":[]}]"#),
            ("huhuhddud", r#"[{"left":[],"right":[{"left":[],"right":[]},{"left":[],"right":[]}]}]"#),
            ("huhduhdud", r#"[{"left":[],"right":[{"left":[],"right":[{"left":[],"right":[]}]}]}]"#),
            ("huhuhdudd", r#"[{"left":[],"right":[]},{"left":[],"right":[{"left":[],"right":[]}]}]"#),
            ("huhduhudd", r#"[{"left":[],"right":[{"left":[],"right":[]}]},{"left":[],"right":[]}]"#),
            ("huhuhuddd", r#"[{"left":[],"right":[]},{"left":[],"right":[]},{"left":[],"right":[]}]"#),
        ];
        for (path, children) in rows {
            let expected = decode_noncrossing(&format!(r#"{{"children":{children}}}"#)).unwrap();
            let tree = s_to_noncrossing(&p(path)).unwrap();
            assert_eq!(tree, expected, "{path}");
            assert_eq!(noncrossing_to_s(&tree), p(path));
        }
    }

    #[test]
    fn noncrossing_round_trips_and_inverse_agreement() {
        for n in 0..=5 {
            // forward map realised as the inverse of the explicit inverse
            let by_inverse: HashMap<LatticePath, NonCrossingTree> =
                all_noncrossing_trees(n).into_iter().map(|t| (noncrossing_to_s(&t), t)).collect();
            let paths: Vec<_> = generate_paths(PathKind::S, n).collect();
            assert_eq!(by_inverse.len(), paths.len());
            for m in paths {
                let tree = s_to_noncrossing(&m).unwrap();
                assert_eq!(tree.edge_count(), n);
                assert_eq!(noncrossing_to_s(&tree), m);
                assert_eq!(by_inverse[&m], tree);
            }
        }
        assert_eq!(s_to_noncrossing(&p("")).unwrap(), NonCrossingTree::default());
        assert_eq!(noncrossing_to_s(&NonCrossingTree::default()), p(""));
        assert!(s_to_noncrossing(&p("uhd")).is_err());
    }

    #[test]
    fn ternary_json_of_first_table_row() {
        let tree = s_to_ternary(&p("hudhudhud")).unwrap();
        assert_eq!(tree, decode_ternary("[[[null,null,null],null,null],null,null]").unwrap());
    }
}
