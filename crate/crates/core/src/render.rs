//! ASCII, SVG and TikZ pictures of the tableau with its lines, of the
//! composition tableau, and of the matrix pattern of `e + V`.
//!
//! Every picture is first laid out as a [`Scene`] on a grid with row 1 on
//! top; the emitters only translate coordinates.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::lines::{build_section, matrix_pattern, read_lines, Cell, Label, LineSet, WeierstrassSection};
use crate::model::{BoxCoord, Composition, Tableau};
use crate::propagation::{propagate_diagram, ExtendedTableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Tikz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// The tableau with every line between boxes.
    T,
    /// The composition tableau: 1-lines from each fin, vertical `*` drops,
    /// dotted lines for the quadruplet extras.
    TInf,
    /// The `n x n` pattern with block boundaries.
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {what} {value:?}")]
pub struct ParseRenderError {
    what: &'static str,
    value: String,
}

impl FromStr for Format {
    type Err = ParseRenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            "tikz" => Ok(Format::Tikz),
            _ => Err(ParseRenderError { what: "format", value: s.into() }),
        }
    }
}

impl FromStr for Style {
    type Err = ParseRenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t" => Ok(Style::T),
            "tinf" => Ok(Style::TInf),
            "matrix" => Ok(Style::Matrix),
            _ => Err(ParseRenderError { what: "style", value: s.into() }),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::T => "t",
            Style::TInf => "tinf",
            Style::Matrix => "matrix",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphKind {
    Entry,
    Repeat,
    One,
    Star,
    OneVs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glyph {
    pub at: BoxCoord,
    pub text: String,
    pub kind: GlyphKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    One,
    Star,
    Vs,
}

impl SegmentKind {
    fn class(self) -> &'static str {
        match self {
            SegmentKind::One => "one",
            SegmentKind::Star => "star",
            SegmentKind::Vs => "vs",
        }
    }

    fn label(self) -> &'static str {
        match self {
            SegmentKind::Star => "*",
            _ => "1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub from: BoxCoord,
    pub to: BoxCoord,
    /// Entries joined, for text output.
    pub ends: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub style: Style,
    pub rows: usize,
    pub cols: usize,
    pub glyphs: Vec<Glyph>,
    pub segments: Vec<Segment>,
    /// Block sizes, drawn as separators in the matrix style.
    pub blocks: Vec<usize>,
}

pub fn scene(c: &Composition, style: Style) -> Scene {
    let (t, _, e) = propagate_diagram(c.diagram());
    let lines = read_lines(&e, &t);
    let section = build_section(&lines);
    match style {
        Style::T => tableau_scene(c, &t, &lines),
        Style::TInf => extended_scene(c, &t, &e, &lines, &section),
        Style::Matrix => matrix_scene(c, &section),
    }
}

fn tableau_scene(c: &Composition, t: &Tableau, lines: &LineSet) -> Scene {
    let glyphs = (1..=t.n())
        .map(|e| Glyph {
            at: t.box_of(e),
            text: e.to_string(),
            kind: GlyphKind::Entry,
        })
        .collect();
    let segments = lines
        .iter()
        .map(|l| Segment {
            kind: match l.label {
                Label::One => SegmentKind::One,
                Label::Star => SegmentKind::Star,
            },
            from: l.left_box,
            to: l.right_box,
            ends: l.coord(),
        })
        .collect();
    Scene {
        style: Style::T,
        rows: c.diagram().max_height(),
        cols: c.k(),
        glyphs,
        segments,
        blocks: c.parts().to_vec(),
    }
}

fn extended_scene(
    c: &Composition,
    t: &Tableau,
    e: &ExtendedTableau,
    lines: &LineSet,
    section: &WeierstrassSection,
) -> Scene {
    let g = e.grid();
    let mut glyphs = Vec::new();
    for col in 1..=g.cols() {
        for (row, entry) in g.column(col) {
            glyphs.push(Glyph {
                at: BoxCoord::new(row, col),
                text: entry.to_string(),
                kind: if e.is_repeat(row, col) {
                    GlyphKind::Repeat
                } else {
                    GlyphKind::Entry
                },
            });
        }
    }
    let below = |b: BoxCoord| BoxCoord::new(b.row + 1, b.col);
    let mut segments = Vec::new();
    for l in lines.iter() {
        segments.push(match l.label {
            Label::One => Segment {
                kind: SegmentKind::One,
                from: e.fin(l.left),
                to: l.right_box,
                ends: l.coord(),
            },
            Label::Star => Segment {
                kind: SegmentKind::Star,
                from: below(l.right_box),
                to: l.right_box,
                ends: l.coord(),
            },
        });
    }
    for q in &section.quadruplets {
        segments.push(Segment {
            kind: SegmentKind::Vs,
            from: below(t.box_of(q.2)),
            to: t.box_of(q.3),
            ends: q.extra(),
        });
    }
    Scene {
        style: Style::TInf,
        rows: g.used_rows(),
        cols: g.cols(),
        glyphs,
        segments,
        blocks: c.parts().to_vec(),
    }
}

fn matrix_scene(c: &Composition, section: &WeierstrassSection) -> Scene {
    let m = matrix_pattern(section, c, true);
    let n = m.n();
    let mut glyphs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let (text, kind) = match m.get(i, j) {
                Cell::Zero => continue,
                Cell::One => ("1", GlyphKind::One),
                Cell::Star => ("*", GlyphKind::Star),
                Cell::OneVS => ("1", GlyphKind::OneVs),
            };
            glyphs.push(Glyph {
                at: BoxCoord::new(i, j),
                text: text.into(),
                kind,
            });
        }
    }
    Scene {
        style: Style::Matrix,
        rows: n,
        cols: n,
        glyphs,
        segments: Vec::new(),
        blocks: m.blocks().to_vec(),
    }
}

pub fn render(c: &Composition, format: Format, style: Style) -> String {
    let s = scene(c, style);
    match format {
        Format::Ascii => ascii(&s),
        Format::Svg => svg(&s),
        Format::Tikz => tikz(&s),
    }
}

pub fn ascii(s: &Scene) -> String {
    let width = s.glyphs.iter().map(|g| g.text.len()).max().unwrap_or(1) + 2;
    let mut grid = vec![vec![String::new(); s.cols]; s.rows];
    for g in &s.glyphs {
        grid[g.at.row - 1][g.at.col - 1] = match g.kind {
            GlyphKind::Repeat => format!("({})", g.text),
            GlyphKind::OneVs => format!("[{}]", g.text),
            _ => g.text.clone(),
        };
    }
    let mut out = String::new();
    if s.style == Style::Matrix {
        let bounds = block_bounds(&s.blocks);
        for (i, row) in grid.iter().enumerate() {
            if i > 0 && bounds.contains(&i) {
                let _ = writeln!(out, "{}", separator_row(s.cols, &bounds));
            }
            for (j, cell) in row.iter().enumerate() {
                if j > 0 && bounds.contains(&j) {
                    out.push('|');
                }
                let text = if cell.is_empty() { "." } else { cell };
                let _ = write!(out, "{text:^3}");
            }
            out.push('\n');
        }
        return out;
    }
    for row in &grid {
        let line: String = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}", line.trim_end());
    }
    if !s.segments.is_empty() {
        out.push('\n');
    }
    for seg in &s.segments {
        let (a, b) = seg.ends;
        let _ = match seg.kind {
            SegmentKind::One => writeln!(out, "{a:>4} --1--> {b:<4} {} -> {}", seg.from, seg.to),
            SegmentKind::Star => writeln!(out, "{a:>4} --*--> {b:<4} {} -> {}", seg.from, seg.to),
            SegmentKind::Vs => writeln!(out, "{a:>4} ..1..> {b:<4} {} -> {}", seg.from, seg.to),
        };
    }
    out
}

fn block_bounds(blocks: &[usize]) -> Vec<usize> {
    blocks
        .iter()
        .scan(0, |acc, &b| {
            *acc += b;
            Some(*acc)
        })
        .collect()
}

fn separator_row(cols: usize, bounds: &[usize]) -> String {
    (0..cols)
        .map(|j| if j > 0 && bounds.contains(&j) { "+---" } else { "---" })
        .collect()
}

const CELL: f64 = 40.0;
const MARGIN: f64 = 20.0;

fn centre(b: BoxCoord) -> (f64, f64) {
    (
        MARGIN + (b.col as f64 - 0.5) * CELL,
        MARGIN + (b.row as f64 - 0.5) * CELL,
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn svg(s: &Scene) -> String {
    let w = 2.0 * MARGIN + s.cols as f64 * CELL;
    let h = 2.0 * MARGIN + s.rows as f64 * CELL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    out.push_str(concat!(
        "<style>\n",
        "  rect.entry { fill: white; stroke: black; }\n",
        "  rect.repeat { fill: #dde8ff; stroke: #3355aa; }\n",
        "  text { font-family: serif; font-size: 14px; text-anchor: middle; dominant-baseline: central; }\n",
        "  text.onevs { fill: #c00000; font-weight: bold; }\n",
        "  polyline { fill: none; stroke-width: 1.5; marker-end: url(#arrow); }\n",
        "  polyline.one { stroke: black; }\n",
        "  polyline.star { stroke: #c00000; }\n",
        "  polyline.vs { stroke: #c00000; stroke-dasharray: 2 3; }\n",
        "  line.block { stroke: #888888; }\n",
        "</style>\n",
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
    ));
    out.push_str("<g class=\"glyphs\">\n");
    for g in &s.glyphs {
        let (x, y) = centre(g.at);
        let class = match g.kind {
            GlyphKind::Entry => Some("entry"),
            GlyphKind::Repeat => Some("repeat"),
            _ => None,
        };
        if let Some(class) = class {
            let _ = writeln!(
                out,
                r#"  <rect class="{class}" x="{}" y="{}" width="{CELL}" height="{CELL}"/>"#,
                x - CELL / 2.0,
                y - CELL / 2.0
            );
        }
        let tclass = if g.kind == GlyphKind::OneVs { r#" class="onevs""# } else { "" };
        let _ = writeln!(out, r#"  <text{tclass} x="{x}" y="{y}">{}</text>"#, xml_escape(&g.text));
    }
    out.push_str("</g>\n");
    if s.style == Style::Matrix {
        out.push_str("<g class=\"blocks\">\n");
        for b in block_bounds(&s.blocks) {
            let p = MARGIN + b as f64 * CELL;
            let _ = writeln!(out, r#"  <line class="block" x1="{p}" y1="{MARGIN}" x2="{p}" y2="{}"/>"#, h - MARGIN);
            let _ = writeln!(out, r#"  <line class="block" x1="{MARGIN}" y1="{p}" x2="{}" y2="{p}"/>"#, w - MARGIN);
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g class=\"lines\">\n");
    for seg in &s.segments {
        let (x1, y1) = centre(seg.from);
        let (x2, y2) = centre(seg.to);
        let _ = writeln!(
            out,
            r#"  <polyline class="{}" points="{x1},{y1} {x2},{y2}"><title>{} {}</title></polyline>"#,
            seg.kind.class(),
            seg.ends.0,
            seg.ends.1
        );
        let _ = writeln!(
            out,
            r#"  <text class="label" x="{}" y="{}">{}</text>"#,
            (x1 + x2) / 2.0 + 6.0,
            (y1 + y2) / 2.0 - 6.0,
            seg.kind.label()
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn tikz(s: &Scene) -> String {
    let mut out = String::new();
    out.push_str(concat!(
        "\\begin{tikzpicture}[x=1cm, y=-1cm,\n",
        "  cell/.style={minimum size=1cm, inner sep=0pt},\n",
        "  repeat/.style={cell, fill=blue!10, text=blue!70!black},\n",
        "  one/.style={->, thick},\n",
        "  star/.style={->, thick, red!70!black},\n",
        "  vs/.style={->, dotted, thick, red!70!black},\n",
        "  block/.style={gray}]\n",
    ));
    for g in &s.glyphs {
        let (x, y) = (g.at.col, g.at.row);
        let _ = match g.kind {
            GlyphKind::Entry => writeln!(out, "  \\node[draw, cell] at ({x},{y}) {{${}$}};", g.text),
            GlyphKind::Repeat => writeln!(out, "  \\node[draw, repeat] at ({x},{y}) {{${}$}};", g.text),
            GlyphKind::One => writeln!(out, "  \\node at ({x},{y}) {{$1$}};"),
            GlyphKind::Star => writeln!(out, "  \\node at ({x},{y}) {{$\\ast$}};"),
            GlyphKind::OneVs => writeln!(out, "  \\node[red!70!black] at ({x},{y}) {{$\\mathbf{{1}}$}};"),
        };
    }
    if s.style == Style::Matrix {
        let n = s.cols as f64 + 0.5;
        for b in block_bounds(&s.blocks) {
            let p = b as f64 + 0.5;
            let _ = writeln!(out, "  \\draw[block] ({p},0.5) -- ({p},{n});");
            let _ = writeln!(out, "  \\draw[block] (0.5,{p}) -- ({n},{p});");
        }
    }
    for seg in &s.segments {
        let label = match seg.kind {
            SegmentKind::Star => "\\ast",
            _ => "1",
        };
        let _ = writeln!(
            out,
            "  \\draw[{}] ({},{}) -- ({},{}) node[midway, above, font=\\scriptsize] {{${label}$}};",
            seg.kind.class(),
            seg.from.col,
            seg.from.row,
            seg.to.col,
            seg.to.row
        );
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
