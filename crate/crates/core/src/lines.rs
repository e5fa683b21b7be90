//! Reading the line family off the composition tableau.
//!
//! Every one-row descent of an entry `t` into a cell `(u + 1, C)` gives a
//! `*` line from `t` to the entry of the box `(u, C)` above it (the step).
//! The way an entry stops gives at most one right-going `1` line:
//!
//! | stop               | target in column `C`  |
//! |--------------------|-----------------------|
//! | end of diagram     | none                  |
//! | tall column `C`    | row `v`               |
//! | blocked before `C` | row `v - 1`           |
//! | no descent at `C`  | row `v`               |
//!
//! where `v` is the row of the entry's rightmost cell.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{BoxCoord, Composition, Tableau};
use crate::propagation::{ExtendedTableau, StopKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "*")]
    Star,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::One => "1",
            Label::Star => "*",
        })
    }
}

/// Matrix coordinate `(i, j)` of a line.
pub type Coord = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Line {
    pub left: usize,
    pub right: usize,
    pub label: Label,
    pub left_box: BoxCoord,
    pub right_box: BoxCoord,
}

impl Line {
    pub fn new(t: &Tableau, left: usize, right: usize, label: Label) -> Self {
        Self {
            left,
            right,
            label,
            left_box: t.box_of(left),
            right_box: t.box_of(right),
        }
    }

    pub fn coord(&self) -> Coord {
        (self.left, self.right)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l({},{})[{}]", self.left, self.right, self.label)
    }
}

/// A line family, kept sorted by `(left, right)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Line>", into = "Vec<Line>")]
pub struct LineSet {
    lines: Vec<Line>,
}

impl From<Vec<Line>> for LineSet {
    fn from(mut lines: Vec<Line>) -> Self {
        lines.sort_by_key(|l| (l.left, l.right, l.label));
        lines.dedup();
        Self { lines }
    }
}

impl From<LineSet> for Vec<Line> {
    fn from(s: LineSet) -> Self {
        s.lines
    }
}

impl LineSet {
    pub fn iter(&self) -> impl Iterator<Item = &Line> {
        self.lines.iter()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn with_label(&self, label: Label) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(move |l| l.label == label)
    }

    pub fn coords(&self, label: Label) -> BTreeSet<Coord> {
        self.with_label(label).map(Line::coord).collect()
    }

    pub fn count(&self, label: Label) -> usize {
        self.with_label(label).count()
    }

    /// Lines with `entry` as left end point.
    pub fn right_going(&self, entry: usize, label: Label) -> impl Iterator<Item = &Line> {
        self.with_label(label).filter(move |l| l.left == entry)
    }

    /// Lines with `entry` as right end point.
    pub fn left_going(&self, entry: usize, label: Label) -> impl Iterator<Item = &Line> {
        self.with_label(label).filter(move |l| l.right == entry)
    }

    pub fn get(&self, left: usize, right: usize) -> Option<&Line> {
        self.lines.iter().find(|l| l.left == left && l.right == right)
    }

    /// A copy with the line `(left, right)` removed.
    pub fn without(&self, left: usize, right: usize) -> LineSet {
        LineSet {
            lines: self
                .lines
                .iter()
                .filter(|l| !(l.left == left && l.right == right))
                .copied()
                .collect(),
        }
    }

    /// Per-entry degrees `(right One, left One, left Star)`.
    pub fn degrees(&self, n: usize) -> Vec<(usize, usize, usize)> {
        let mut deg = vec![(0, 0, 0); n];
        for l in &self.lines {
            match l.label {
                Label::One => {
                    deg[l.left - 1].0 += 1;
                    deg[l.right - 1].1 += 1;
                }
                Label::Star => deg[l.right - 1].2 += 1,
            }
        }
        deg
    }
}

pub fn extract_star_lines(e: &ExtendedTableau, t: &Tableau) -> Vec<Line> {
    let mut out = Vec::new();
    for entry in 1..=t.n() {
        for landing in e.descents(entry) {
            let step = t.entry(landing.row - 1, landing.col).unwrap_or_else(|| {
                panic!("step above {landing} of entry {entry} is not a box of the diagram")
            });
            out.push(Line::new(t, entry, step, Label::Star));
        }
    }
    out
}

pub fn extract_one_lines(e: &ExtendedTableau, t: &Tableau) -> Vec<Line> {
    let mut out = Vec::new();
    for entry in 1..=t.n() {
        let stop = e.stop(entry);
        let Some(col) = stop.blocking_col else {
            continue;
        };
        let v = e.fin(entry).row;
        let row = match stop.kind {
            StopKind::EndOfDiagram => unreachable!("end of diagram has no blocking column"),
            StopKind::TallColumn | StopKind::NoDescent => v,
            StopKind::BlockedCell => v - 1,
        };
        let target = t.entry(row, col).unwrap_or_else(|| {
            panic!("1-line target (R{row},C{col}) of entry {entry} is not a box of the diagram")
        });
        out.push(Line::new(t, entry, target, Label::One));
    }
    out
}

pub fn read_lines(e: &ExtendedTableau, t: &Tableau) -> LineSet {
    let mut all = extract_one_lines(e, t);
    all.extend(extract_star_lines(e, t));
    LineSet::from(all)
}

/// `(i, j, k, l)` with `(i, j)`, `(k, l)` labelled 1 and `(j, k)` labelled `*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadruplet(pub usize, pub usize, pub usize, pub usize);

impl Quadruplet {
    /// The coordinate it adds to `e`.
    pub fn extra(&self) -> Coord {
        (self.1, self.3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WeierstrassSection {
    pub e: BTreeSet<Coord>,
    pub v: BTreeSet<Coord>,
    pub quadruplets: Vec<Quadruplet>,
    pub vs_extras: BTreeSet<Coord>,
}

impl WeierstrassSection {
    /// Coordinates spanning `E_VS`.
    pub fn e_vs(&self) -> BTreeSet<Coord> {
        self.e.union(&self.vs_extras).copied().collect()
    }

    /// For each quadruplet, whether its extra coordinate is new relative to
    /// `e` and to the extras of the quadruplets listed before it.
    pub fn extra_enlarges_span(&self) -> Vec<(Quadruplet, bool)> {
        let mut seen = self.e.clone();
        self.quadruplets
            .iter()
            .map(|q| (*q, seen.insert(q.extra())))
            .collect()
    }
}

pub fn build_section(lines: &LineSet) -> WeierstrassSection {
    let e = lines.coords(Label::One);
    let v = lines.coords(Label::Star);
    let into: BTreeMap<usize, Vec<usize>> = e.iter().fold(BTreeMap::new(), |mut m, &(i, j)| {
        m.entry(j).or_insert_with(Vec::new).push(i);
        m
    });
    let out_of: BTreeMap<usize, Vec<usize>> = e.iter().fold(BTreeMap::new(), |mut m, &(k, l)| {
        m.entry(k).or_insert_with(Vec::new).push(l);
        m
    });
    let mut quadruplets = Vec::new();
    for &(j, k) in &v {
        for &i in into.get(&j).into_iter().flatten() {
            for &l in out_of.get(&k).into_iter().flatten() {
                quadruplets.push(Quadruplet(i, j, k, l));
            }
        }
    }
    quadruplets.sort();
    let vs_extras = quadruplets.iter().map(Quadruplet::extra).collect();
    WeierstrassSection {
        e,
        v,
        quadruplets,
        vs_extras,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Zero,
    One,
    Star,
    OneVS,
}

/// The `n x n` picture of `e + V` (and optionally the extras of `e_VS`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPattern {
    n: usize,
    blocks: Vec<usize>,
    cells: Vec<Cell>,
}

impl MatrixPattern {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Diagonal block sizes.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Cell at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[(i - 1) * self.n + (j - 1)]
    }

    /// Block index of row/column `i`.
    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (b, &size) in self.blocks.iter().enumerate() {
            acc += size;
            if i <= acc {
                return b + 1;
            }
        }
        panic!("index {i} beyond n = {}", self.n)
    }
}

pub fn matrix_pattern(s: &WeierstrassSection, c: &Composition, include_vs: bool) -> MatrixPattern {
    let n = c.n();
    let mut cells = vec![Cell::Zero; n * n];
    let mut put = |(i, j): Coord, cell: Cell| cells[(i - 1) * n + (j - 1)] = cell;
    s.e.iter().for_each(|&x| put(x, Cell::One));
    s.v.iter().for_each(|&x| put(x, Cell::Star));
    if include_vs {
        s.vs_extras.iter().for_each(|&x| put(x, Cell::OneVS));
    }
    MatrixPattern {
        n,
        blocks: c.parts().to_vec(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::propagate_diagram;

    fn lines_of(parts: &[usize]) -> (Tableau, LineSet) {
        let c = Composition::new(parts.to_vec()).unwrap();
        let (t, _, e) = propagate_diagram(c.diagram());
        let l = read_lines(&e, &t);
        (t, l)
    }

    fn set(v: &[(usize, usize)]) -> BTreeSet<Coord> {
        v.iter().copied().collect()
    }

    #[test]
    fn five_six_three_example() {
        let (_, l) = lines_of(&[1, 2, 1, 1, 1, 2, 3]);
        assert_eq!(l.coords(Label::Star), set(&[(2, 4), (4, 5), (5, 6), (5, 8)]));
        assert_eq!(
            l.coords(Label::One),
            set(&[(1, 2), (3, 4), (6, 7), (7, 9), (8, 10), (2, 5), (4, 6), (5, 11)])
        );
    }

    #[test]
    fn two_two_one_one() {
        let (_, l) = lines_of(&[2, 2, 1, 1]);
        assert_eq!(l.coords(Label::Star), set(&[(2, 4), (5, 6)]));
        assert_eq!(l.coords(Label::One), set(&[(1, 3), (3, 5), (4, 6)]));
    }

    #[test]
    fn small_cases() {
        let (_, l) = lines_of(&[1, 1]);
        assert!(l.coords(Label::One).is_empty());
        assert_eq!(l.coords(Label::Star), set(&[(1, 2)]));

        let (_, l) = lines_of(&[1, 1, 1]);
        let s = build_section(&l);
        assert_eq!(s.e, set(&[(1, 3)]));
        assert_eq!(s.v, set(&[(1, 2), (2, 3)]));
        assert!(s.quadruplets.is_empty());

        let (_, l) = lines_of(&[4]);
        assert!(l.is_empty());
        assert_eq!(build_section(&l), WeierstrassSection::default());
    }

    #[test]
    fn line_boxes_follow_the_tableau() {
        let (t, l) = lines_of(&[1, 2, 4, 3, 2, 3, 4, 1, 1, 2]);
        let line = l.get(9, 19).unwrap();
        assert_eq!(line.label, Label::Star);
        assert_eq!(line.left_box, BoxCoord::new(2, 4));
        assert_eq!(line.right_box, t.box_of(19));
        assert!(l.get(19, 9).is_none());
    }

    #[test]
    fn matrix_pattern_rows() {
        let c = Composition::new(vec![1, 2, 4, 3, 2, 3, 4, 1, 1, 2]).unwrap();
        let (t, _, e) = propagate_diagram(c.diagram());
        let s = build_section(&read_lines(&e, &t));
        let m = matrix_pattern(&s, &c, true);
        let row9: Vec<(usize, Cell)> = (1..=23)
            .filter(|&j| m.get(9, j) != Cell::Zero)
            .map(|j| (j, m.get(9, j)))
            .collect();
        assert_eq!(
            row9,
            vec![
                (12, Cell::Star),
                (14, Cell::OneVS),
                (15, Cell::Star),
                (18, Cell::OneVS),
                (19, Cell::Star)
            ]
        );
        assert_eq!(m.get(21, 22), Cell::One);
        assert_eq!(m.block_of(23), 10);
        let plain = matrix_pattern(&s, &c, false);
        assert_eq!(plain.get(9, 14), Cell::Zero);

        let single = Composition::new(vec![3]).unwrap();
        let m = matrix_pattern(&WeierstrassSection::default(), &single, true);
        assert!((1..=3).all(|i| (1..=3).all(|j| m.get(i, j) == Cell::Zero)));
    }

    #[test]
    fn label_json() {
        assert_eq!(serde_json::to_string(&Label::Star).unwrap(), "\"*\"");
        assert_eq!(serde_json::from_str::<Label>("\"1\"").unwrap(), Label::One);
    }
}
