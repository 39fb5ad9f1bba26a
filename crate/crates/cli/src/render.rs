//! Drawings of paths and trees as ASCII art, standalone SVG, or a TikZ picture.
//!
//! Output depends only on the input value. Trees are laid out in layers: leaves take
//! consecutive columns in left-to-right order and each parent sits midway between its
//! outermost children.

use std::fmt::Write as _;
use std::str::FromStr;

use motzkin_core::{Error, LatticePath, NcNode, NonCrossingTree, Result, Step, TernaryTree};

const UNIT: f64 = 24.0;
const MARGIN: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Tikz,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            "tikz" => Ok(Format::Tikz),
            _ => Err(Error::Domain(format!("unknown render format {s:?}"))),
        }
    }
}

pub fn render_path(path: &LatticePath, format: Format) -> String {
    match format {
        Format::Ascii => path_ascii(path),
        Format::Svg => path_svg(path),
        Format::Tikz => path_tikz(path),
    }
}

pub fn render_ternary(tree: &TernaryTree, format: Format) -> String {
    render_layout(&Layout::from_ternary(tree), format)
}

pub fn render_noncrossing(tree: &NonCrossingTree, format: Format) -> String {
    render_layout(&Layout::from_noncrossing(tree), format)
}

/// `(x, y)` after each step, starting from the origin.
fn vertices(path: &LatticePath) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 0)];
    out.extend(path.heights().iter().enumerate().map(|(i, &h)| (i as i64 + 1, h)));
    out
}

/// Row `r` holds the steps whose higher endpoint sits at height `r`, so a path of
/// maximum height `m` takes `m + 1` rows.
fn path_ascii(path: &LatticePath) -> String {
    if path.is_empty() {
        return String::from("\n");
    }
    let heights = vertices(path);
    let top = heights.iter().map(|&(_, h)| h).max().unwrap_or(0);
    let mut rows = vec![vec![' '; path.len()]; top as usize + 1];
    for (i, step) in path.steps().iter().enumerate() {
        let h = heights[i].1;
        let (row, ch) = match step {
            Step::Up => (h + 1, '/'),
            Step::Down => (h, '\\'),
            Step::Flat => (h, '_'),
        };
        rows[row as usize][i] = ch;
    }
    let mut out = String::new();
    for row in rows.iter().rev() {
        let line: String = row.iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn svg_header(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    )
}

fn path_svg(path: &LatticePath) -> String {
    let pts = vertices(path);
    let top = pts.iter().map(|&(_, h)| h).max().unwrap_or(0);
    let width = path.len() as f64 * UNIT + 2.0 * MARGIN;
    let height = top as f64 * UNIT + 2.0 * MARGIN;
    let map = |(x, y): (i64, i64)| (MARGIN + x as f64 * UNIT, MARGIN + (top - y) as f64 * UNIT);
    let mut out = svg_header(width, height);
    let (x0, y0) = map((0, 0));
    let _ = writeln!(
        out,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
        width - MARGIN
    );
    let points: Vec<String> = pts.iter().map(|&p| map(p)).map(|(x, y)| format!("{x},{y}")).collect();
    let _ = writeln!(
        out,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
        points.join(" ")
    );
    for &p in &pts {
        let (x, y) = map(p);
        let _ = writeln!(out, "  <circle cx=\"{x}\" cy=\"{y}\" r=\"2.5\" fill=\"black\"/>");
    }
    out.push_str("</svg>\n");
    out
}

fn path_tikz(path: &LatticePath) -> String {
    let pts = vertices(path);
    let mut out = String::from("\\begin{tikzpicture}[scale=0.5]\n");
    for w in pts.windows(2) {
        let _ = writeln!(out, "  \\draw[thick] ({},{}) -- ({},{});", w[0].0, w[0].1, w[1].0, w[1].1);
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

/// A rooted plane tree with labelled edges, stored as an arena.
#[derive(Debug, Default)]
struct Layout {
    /// `(edge label from parent, children)`; node 0 is the root.
    nodes: Vec<(&'static str, Vec<usize>)>,
}

impl Layout {
    fn add(&mut self, parent: Option<usize>, label: &'static str) -> usize {
        let id = self.nodes.len();
        self.nodes.push((label, Vec::new()));
        if let Some(p) = parent {
            self.nodes[p].1.push(id);
        }
        id
    }

    fn from_ternary(tree: &TernaryTree) -> Layout {
        let mut layout = Layout::default();
        let mut stack = vec![(tree, None, "")];
        while let Some((t, parent, label)) = stack.pop() {
            if let Some(node) = t.as_node() {
                let id = layout.add(parent, label);
                // pushed in reverse so children are attached left to right
                stack.push((&node.right, Some(id), "R"));
                stack.push((&node.middle, Some(id), "M"));
                stack.push((&node.left, Some(id), "L"));
            }
        }
        layout
    }

    fn from_noncrossing(tree: &NonCrossingTree) -> Layout {
        let mut layout = Layout::default();
        let root = layout.add(None, "");
        let mut stack: Vec<(&NcNode, usize, &'static str)> = tree.root.iter().rev().map(|c| (c, root, "")).collect();
        while let Some((node, parent, label)) = stack.pop() {
            let id = layout.add(Some(parent), label);
            stack.extend(node.right.iter().rev().map(|c| (c, id, "R")));
            stack.extend(node.left.iter().rev().map(|c| (c, id, "L")));
        }
        layout
    }

    /// Column and depth of every node.
    fn positions(&self) -> Vec<(f64, usize)> {
        let mut pos = vec![(0.0, 0usize); self.nodes.len()];
        if self.nodes.is_empty() {
            return pos;
        }
        let mut next_leaf = 0.0;
        let mut stack = vec![(0usize, 0usize, false)];
        while let Some((id, depth, done)) = stack.pop() {
            let children = &self.nodes[id].1;
            if children.is_empty() {
                pos[id] = (next_leaf, depth);
                next_leaf += 1.0;
            } else if done {
                let first = pos[children[0]].0;
                let last = pos[*children.last().expect("non-empty")].0;
                pos[id] = ((first + last) / 2.0, depth);
            } else {
                stack.push((id, depth, true));
                stack.extend(children.iter().rev().map(|&c| (c, depth + 1, false)));
            }
        }
        pos
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(p, (_, cs))| cs.iter().map(move |&c| (p, c)))
    }
}

fn render_layout(layout: &Layout, format: Format) -> String {
    match format {
        Format::Ascii => layout_ascii(layout),
        Format::Svg => layout_svg(layout),
        Format::Tikz => layout_tikz(layout),
    }
}

fn layout_ascii(layout: &Layout) -> String {
    if layout.nodes.is_empty() {
        return String::from(".\n");
    }
    let mut out = String::from("o\n");
    outline(&mut out, layout, 0, "");
    out
}

/// Pre-order outline of the subtree below `root`, without recursion.
fn outline(out: &mut String, layout: &Layout, root: usize, root_prefix: &str) {
    let mut stack = vec![(root, root_prefix.to_string(), 0usize)];
    while let Some((id, prefix, next)) = stack.pop() {
        let children = &layout.nodes[id].1;
        if next >= children.len() {
            continue;
        }
        let c = children[next];
        let last = next + 1 == children.len();
        let _ = writeln!(out, "{prefix}{}{} o", if last { "`-" } else { "+-" }, layout.nodes[c].0);
        let child_prefix = format!("{prefix}{}", if last { "   " } else { "|  " });
        stack.push((id, prefix, next + 1));
        stack.push((c, child_prefix, 0));
    }
}

fn layout_svg(layout: &Layout) -> String {
    let pos = layout.positions();
    let cols = pos.iter().map(|p| p.0).fold(0.0, f64::max);
    let depth = pos.iter().map(|p| p.1).max().unwrap_or(0);
    let width = cols * UNIT + 2.0 * MARGIN;
    let height = depth as f64 * UNIT + 2.0 * MARGIN;
    let map = |(x, d): (f64, usize)| (MARGIN + x * UNIT, MARGIN + d as f64 * UNIT);
    let mut out = svg_header(width, height);
    for (p, c) in layout.edges() {
        let ((x1, y1), (x2, y2)) = (map(pos[p]), map(pos[c]));
        let _ = writeln!(out, "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"black\" stroke-width=\"1.5\"/>");
    }
    for &p in &pos {
        let (x, y) = map(p);
        let _ = writeln!(out, "  <circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"black\"/>");
    }
    out.push_str("</svg>\n");
    out
}

fn layout_tikz(layout: &Layout) -> String {
    let pos = layout.positions();
    let mut out = String::from("\\begin{tikzpicture}[scale=0.6]\n");
    for (p, c) in layout.edges() {
        let (a, b) = (pos[p], pos[c]);
        let _ = writeln!(
            out,
            "  \\draw ({},{}) -- ({},{}) node[midway,font=\\tiny,fill=white] {{{}}};",
            a.0,
            -(a.1 as i64),
            b.0,
            -(b.1 as i64),
            layout.nodes[c].0
        );
    }
    for &(x, d) in &pos {
        let _ = writeln!(out, "  \\fill ({x},{}) circle (3pt);", -(d as i64));
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
