//! Lattice paths over the step set {Up, Flat, Down}.
//!
//! A [`LatticePath`] carries no class assumption; membership in the Motzkin,
//! S-Motzkin, T-Motzkin and U-path classes is answered by [`classify`].

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One step of a lattice path.
///
/// The derived ordering `Up < Flat < Down` is the canonical lexicographic
/// order used by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Flat,
    Down,
}

impl Step {
    pub fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Flat => 0,
            Step::Down => -1,
        }
    }

    /// Canonical lowercase character (`u`, `h`, `d`).
    pub fn to_char(self) -> char {
        match self {
            Step::Up => 'u',
            Step::Flat => 'h',
            Step::Down => 'd',
        }
    }

    pub fn from_char(c: char) -> Option<Step> {
        match c {
            'u' | 'U' | '+' => Some(Step::Up),
            'h' | 'H' | '0' => Some(Step::Flat),
            'd' | 'D' | '-' => Some(Step::Down),
            _ => None,
        }
    }

    /// Build a step from a height change in {-1, 0, 1}.
    pub fn from_delta(delta: i64) -> Option<Step> {
        match delta {
            1 => Some(Step::Up),
            0 => Some(Step::Flat),
            -1 => Some(Step::Down),
            _ => None,
        }
    }
}

/// A finite sequence of steps together with its height profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticePath {
    steps: Vec<Step>,
    // heights[k] is the height after step k+1
    heights: Vec<i64>,
}

impl LatticePath {
    pub fn new(steps: Vec<Step>) -> Self {
        let mut h = 0;
        let heights = steps
            .iter()
            .map(|s| {
                h += s.delta();
                h
            })
            .collect();
        LatticePath { steps, heights }
    }

    pub fn empty() -> Self {
        LatticePath::default()
    }

    /// Build a path from height changes, e.g. `[0, 1, -1]` for `hud`.
    ///
    /// Panics on a delta outside {-1, 0, 1}; intended for literals.
    pub fn from_deltas(deltas: &[i64]) -> Self {
        LatticePath::new(
            deltas
                .iter()
                .map(|&d| Step::from_delta(d).expect("step delta must be -1, 0 or 1"))
                .collect(),
        )
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Step> {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Heights h(1)..h(len): the partial sums of the step deltas.
    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// Height after `k` steps, with `height_at(0) == 0`.
    pub fn height_at(&self, k: usize) -> i64 {
        if k == 0 {
            0
        } else {
            self.heights[k - 1]
        }
    }

    pub fn count(&self, step: Step) -> usize {
        self.steps.iter().filter(|&&s| s == step).count()
    }

    /// Concatenate several paths.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a LatticePath>) -> LatticePath {
        let steps = parts.into_iter().flat_map(|p| p.steps.iter().copied()).collect();
        LatticePath::new(steps)
    }

    pub fn is_motzkin(&self) -> bool {
        self.heights.iter().all(|&h| h >= 0) && self.heights.last().copied().unwrap_or(0) == 0
    }
}

impl From<Vec<Step>> for LatticePath {
    fn from(steps: Vec<Step>) -> Self {
        LatticePath::new(steps)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_path(s)
    }
}

/// Parse `u/U/+`, `h/H/0`, `d/D/-`, ignoring whitespace.
pub fn parse_path(text: &str) -> Result<LatticePath> {
    let mut steps = Vec::with_capacity(text.len());
    for (position, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            continue;
        }
        match Step::from_char(c) {
            Some(s) => steps.push(s),
            None => return Err(Error::Parse { position, found: c }),
        }
    }
    Ok(LatticePath::new(steps))
}

/// Canonical lowercase `uhd` rendering.
pub fn format_path(path: &LatticePath) -> String {
    path.to_string()
}

pub fn heights(path: &LatticePath) -> Vec<i64> {
    path.heights().to_vec()
}

// JSON rendering: ["h","u","d",...]
impl Serialize for LatticePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.steps.len()))?;
        let mut buf = [0u8; 4];
        for s in &self.steps {
            seq.serialize_element(&*s.to_char().encode_utf8(&mut buf))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticePath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PathVisitor;

        impl<'de> Visitor<'de> for PathVisitor {
            type Value = LatticePath;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of single-character step strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LatticePath, A::Error> {
                let mut steps = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    let mut chars = s.chars();
                    let step = match (chars.next(), chars.next()) {
                        (Some(c), None) => Step::from_char(c),
                        _ => None,
                    };
                    steps.push(step.ok_or_else(|| de::Error::custom(format!("invalid step {s:?}")))?);
                }
                Ok(LatticePath::new(steps))
            }
        }

        deserializer.deserialize_seq(PathVisitor)
    }
}

/// Class membership flags of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PathClass {
    pub motzkin: bool,
    pub s_motzkin: bool,
    pub t_motzkin: bool,
    pub u_path: bool,
}

/// Checks length 3n, n of each step, first step `first`, and strict
/// alternation of the non-Down steps starting with `first`.
fn is_alternating_class(steps: &[Step], first: Step) -> bool {
    if steps.is_empty() {
        return true;
    }
    if !steps.len().is_multiple_of(3) || steps[0] != first {
        return false;
    }
    let second = if first == Step::Flat { Step::Up } else { Step::Flat };
    let n = steps.len() / 3;
    let mut downs = 0;
    let mut others = 0;
    for &s in steps {
        if s == Step::Down {
            downs += 1;
            continue;
        }
        let expected = if others % 2 == 0 { first } else { second };
        if s != expected {
            return false;
        }
        others += 1;
    }
    downs == n && others == 2 * n
}

pub fn classify(path: &LatticePath) -> PathClass {
    let motzkin = path.is_motzkin();
    let steps = path.steps();
    let s_motzkin = motzkin && is_alternating_class(steps, Step::Flat);
    let t_motzkin = motzkin && is_alternating_class(steps, Step::Up);
    // Prefixing a Flat leaves heights unchanged.
    let u_path = !steps.is_empty() && motzkin && is_alternating_class(&[&[Step::Flat], steps].concat(), Step::Flat);
    PathClass { motzkin, s_motzkin, t_motzkin, u_path }
}

/// Exchange every Flat with an Up; Down steps are untouched.
pub fn swap_flat_up(path: &LatticePath) -> LatticePath {
    path.steps()
        .iter()
        .map(|s| match s {
            Step::Flat => Step::Up,
            Step::Up => Step::Flat,
            Step::Down => Step::Down,
        })
        .collect::<Vec<_>>()
        .into()
}

/// The seven marked statistics of a Motzkin path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PathStatistics {
    /// Steps ending on the x-axis (the start point is not counted).
    pub returns: usize,
    pub peaks_ud: usize,
    pub peaks_uhd: usize,
    pub valleys_du: usize,
    pub valleys_dhu: usize,
    pub axis_valleys_du: usize,
    pub axis_valleys_dhu: usize,
}

pub fn path_statistics(path: &LatticePath) -> Result<PathStatistics> {
    if !path.is_motzkin() {
        return Err(Error::domain(format!("path {path} is not a Motzkin path")));
    }
    use Step::*;
    let s = path.steps();
    let h = path.heights();
    let mut st = PathStatistics {
        returns: h.iter().filter(|&&x| x == 0).count(),
        ..Default::default()
    };
    for (i, w) in s.windows(2).enumerate() {
        match (w[0], w[1]) {
            (Up, Down) => st.peaks_ud += 1,
            (Down, Up) => {
                st.valleys_du += 1;
                if h[i] == 0 {
                    st.axis_valleys_du += 1;
                }
            }
            _ => {}
        }
    }
    for (i, w) in s.windows(3).enumerate() {
        match (w[0], w[1], w[2]) {
            (Up, Flat, Down) => st.peaks_uhd += 1,
            (Down, Flat, Up) => {
                st.valleys_dhu += 1;
                // both interior points: after the Down and after the Flat
                if h[i] == 0 && h[i + 1] == 0 {
                    st.axis_valleys_dhu += 1;
                }
            }
            _ => {}
        }
    }
    Ok(st)
}

/// A maximal subpath of shape Up, Down*, Flat, Down*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    /// Index of the Up step within the whole path.
    pub up_position: usize,
    /// Offset `i` of the Flat step, counting the Up step as position 0.
    pub flat_position_i: usize,
    /// Total number `t` of Down steps in the piece.
    pub down_count_t: usize,
}

impl Piece {
    /// Build a piece from its characteristic pair `(t, i)`; requires `1 ≤ i ≤ t + 1`.
    pub fn from_pair(t: usize, i: usize, up_position: usize) -> Result<Piece> {
        if i == 0 || i > t + 1 {
            return Err(Error::domain(format!("invalid characteristic pair ({t}, {i})")));
        }
        Ok(Piece { up_position, flat_position_i: i, down_count_t: t })
    }

    /// The characteristic pair `(t, i)`.
    pub fn characteristic_pair(&self) -> (usize, usize) {
        (self.down_count_t, self.flat_position_i)
    }

    pub fn len(&self) -> usize {
        self.down_count_t + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn steps(&self) -> Vec<Step> {
        let before = self.flat_position_i - 1;
        let after = self.down_count_t - before;
        let mut v = Vec::with_capacity(self.len());
        v.push(Step::Up);
        v.extend(std::iter::repeat_n(Step::Down, before));
        v.push(Step::Flat);
        v.extend(std::iter::repeat_n(Step::Down, after));
        v
    }
}

/// An S-Motzkin path split as: initial Flat, pieces, final Up followed by Downs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDecomposition {
    pub pieces: Vec<Piece>,
    /// Number of Down steps after the final Up.
    pub final_downs: usize,
}

impl PieceDecomposition {
    /// Concatenate back into the original path.
    pub fn to_path(&self) -> LatticePath {
        let mut steps = vec![Step::Flat];
        for p in &self.pieces {
            steps.extend(p.steps());
        }
        steps.push(Step::Up);
        steps.extend(std::iter::repeat_n(Step::Down, self.final_downs));
        LatticePath::new(steps)
    }
}

/// Split a nonempty S-Motzkin path into its pieces (scanning left to right).
pub fn decompose_pieces(path: &LatticePath) -> Result<PieceDecomposition> {
    if path.is_empty() || !classify(path).s_motzkin {
        return Err(Error::domain(format!("decompose_pieces needs a nonempty S-Motzkin path, got {path:?}")));
    }
    let s = path.steps();
    let mut pieces = Vec::new();
    let mut p = 1;
    loop {
        debug_assert_eq!(s[p], Step::Up);
        let up = p;
        let mut k = p + 1;
        while k < s.len() && s[k] == Step::Down {
            k += 1;
        }
        if k == s.len() {
            return Ok(PieceDecomposition { pieces, final_downs: k - up - 1 });
        }
        if s[k] != Step::Flat {
            return Err(Error::domain(format!("unexpected {:?} at step {k}", s[k])));
        }
        let i = k - up;
        k += 1;
        while k < s.len() && s[k] == Step::Down {
            k += 1;
        }
        pieces.push(Piece { up_position: up, flat_position_i: i, down_count_t: k - up - 2 });
        p = k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LatticePath {
        parse_path(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("hud").steps(), &[Step::Flat, Step::Up, Step::Down]);
        assert!(p("").is_empty());
        assert_eq!(p("h u d h u d"), p("hudhud"));
        assert_eq!(p("0+-"), p("hud"));
        assert_eq!(p("HUD"), p("hud"));
    }

    #[test]
    fn parse_reports_position() {
        assert_eq!(parse_path("hux"), Err(Error::Parse { position: 2, found: 'x' }));
        assert_eq!(parse_path("h  q"), Err(Error::Parse { position: 3, found: 'q' }));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_path(&LatticePath::from_deltas(&[0, 1, -1])), "hud");
        assert_eq!(format_path(&LatticePath::empty()), "");
    }

    #[test]
    fn height_profiles() {
        assert_eq!(heights(&p("hud")), vec![0, 1, 0]);
        assert_eq!(heights(&p("uhd")), vec![1, 1, 0]);
        assert_eq!(heights(&p("uhudhd")), vec![1, 1, 2, 1, 1, 0]);
    }

    #[test]
    fn classify_small() {
        let c = classify(&p("hud"));
        assert!(c.motzkin && c.s_motzkin && !c.t_motzkin && !c.u_path);
        let e = classify(&LatticePath::empty());
        assert!(e.motzkin && e.s_motzkin && e.t_motzkin && !e.u_path);
        assert!(classify(&p("ud")).u_path);
        assert!(!classify(&p("du")).motzkin);
    }

    #[test]
    fn exactly_two_t_paths_of_length_three() {
        let all = ["u", "h", "d"];
        let mut t = Vec::new();
        for a in all {
            for b in all {
                for c in all {
                    let path = p(&format!("{a}{b}{c}"));
                    if classify(&path).t_motzkin {
                        t.push(path.to_string());
                    }
                }
            }
        }
        t.sort();
        assert_eq!(t, vec!["udh", "uhd"]);
    }

    #[test]
    fn swap_examples() {
        assert_eq!(swap_flat_up(&p("hud")), p("uhd"));
        assert!(classify(&swap_flat_up(&p("hud"))).t_motzkin);
        // the converse fails: "udh" swaps back to "hdu", which is not Motzkin
        assert!(!classify(&swap_flat_up(&p("udh"))).motzkin);
    }

    #[test]
    fn statistics_examples() {
        let s = path_statistics(&p("hud")).unwrap();
        assert_eq!(s, PathStatistics { returns: 2, peaks_ud: 1, ..Default::default() });

        let s = path_statistics(&p("huhdud")).unwrap();
        assert_eq!(
            s,
            PathStatistics {
                returns: 3,
                peaks_ud: 1,
                peaks_uhd: 1,
                valleys_du: 1,
                axis_valleys_du: 1,
                ..Default::default()
            }
        );

        let s = path_statistics(&p("hudhud")).unwrap();
        assert_eq!(
            s,
            PathStatistics {
                returns: 4,
                peaks_ud: 2,
                valleys_dhu: 1,
                axis_valleys_dhu: 1,
                ..Default::default()
            }
        );
    }

    #[test]
    fn statistics_reject_non_motzkin() {
        assert!(matches!(path_statistics(&p("du")), Err(Error::Domain(_))));
        assert!(matches!(path_statistics(&p("u")), Err(Error::Domain(_))));
    }

    #[test]
    fn pieces_of_figure_path() {
        let path = LatticePath::from_deltas(&[0, 1, -1, 0, 1, 0, 1, -1, 0, -1, 1, 0, 1, -1, -1]);
        let d = decompose_pieces(&path).unwrap();
        let pairs: Vec<_> = d.pieces.iter().map(Piece::characteristic_pair).collect();
        assert_eq!(pairs, vec![(1, 2), (0, 1), (2, 2), (0, 1)]);
        assert_eq!(d.final_downs, 2);
        assert_eq!(d.to_path(), path);
    }

    #[test]
    fn pieces_small() {
        let d = decompose_pieces(&p("hud")).unwrap();
        assert!(d.pieces.is_empty());
        assert_eq!(d.final_downs, 1);

        let d = decompose_pieces(&p("huhuhuddd")).unwrap();
        let pairs: Vec<_> = d.pieces.iter().map(Piece::characteristic_pair).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 1)]);
        assert_eq!(d.final_downs, 3);
    }

    #[test]
    fn pieces_reject_non_s_paths() {
        assert!(decompose_pieces(&LatticePath::empty()).is_err());
        assert!(decompose_pieces(&p("uhd")).is_err());
    }

    #[test]
    fn json_rendering() {
        let json = serde_json::to_string(&p("hud")).unwrap();
        assert_eq!(json, r#"["h","u","d"]"#);
        let back: LatticePath = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p("hud"));
        assert!(serde_json::from_str::<LatticePath>(r#"["hu"]"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_path() -> impl Strategy<Value = LatticePath> {
            prop::collection::vec(prop_oneof![Just(Step::Up), Just(Step::Flat), Just(Step::Down)], 0..40)
                .prop_map(LatticePath::new)
        }

        proptest! {
            #[test]
            fn format_parse_round_trip(path in any_path()) {
                prop_assert_eq!(parse_path(&format_path(&path)).unwrap(), path);
            }

            #[test]
            fn heights_are_partial_sums(path in any_path()) {
                let mut h = 0;
                for (k, s) in path.steps().iter().enumerate() {
                    h += s.delta();
                    prop_assert_eq!(path.heights()[k], h);
                }
            }

            #[test]
            fn class_implications(path in any_path()) {
                let c = classify(&path);
                prop_assert!(!c.s_motzkin || c.motzkin);
                prop_assert!(!c.t_motzkin || c.motzkin);
            }
        }
    }
}
