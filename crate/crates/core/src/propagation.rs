//! The composition tableau, built by pushing every entry rightwards.
//!
//! Entries are taken one at a time in increasing precedence order. An entry
//! sitting in row `v` of column `j` tries to enter column `j + 1`:
//!
//! * if the next column is shorter than `v`, it moves into row `v` when that
//!   cell is still free, and is blocked otherwise;
//! * if the next column has height exactly `v` and a left neighbour, it drops
//!   into row `v + 1` when that cell is free, and stops otherwise;
//! * if the next column is taller than `v`, it stops, the target being a box
//!   of the diagram that is already numbered.
//!
//! The result keeps every entry's trajectory and the reason it stopped, which
//! is what the line reading needs.

use serde::{Deserialize, Serialize};

use crate::model::{precedence_order, tableau_of, BoxCoord, Diagram, PrecedenceOrder, Tableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopKind {
    /// The entry reached the last column.
    EndOfDiagram,
    /// The next column is taller than the entry's row.
    TallColumn,
    /// The next column is shorter and the cell to the right is occupied.
    BlockedCell,
    /// The next column has the entry's row as its height, and either has no
    /// left neighbour or the cell below its bottom box is occupied.
    NoDescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StopRecord {
    pub kind: StopKind,
    /// The column the entry was stopped just before.
    pub blocking_col: Option<usize>,
}

impl StopRecord {
    fn end() -> Self {
        Self {
            kind: StopKind::EndOfDiagram,
            blocking_col: None,
        }
    }

    fn before(kind: StopKind, col: usize) -> Self {
        Self {
            kind,
            blocking_col: Some(col),
        }
    }
}

/// A rectangular grid of optional entries, `cols` wide and `rows` deep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Option<usize>>>", into = "Vec<Vec<Option<usize>>>")]
pub struct CellGrid {
    cols: usize,
    rows: usize,
    cells: Vec<Option<usize>>,
}

impl CellGrid {
    pub fn new(cols: usize, rows: usize) -> Self {
        Self {
            cols,
            rows,
            cells: vec![None; cols * rows],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    fn index(&self, row: usize, col: usize) -> Option<usize> {
        (row >= 1 && row <= self.rows && col >= 1 && col <= self.cols)
            .then(|| (col - 1) * self.rows + (row - 1))
    }

    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.index(row, col).and_then(|i| self.cells[i])
    }

    pub fn set(&mut self, row: usize, col: usize, value: Option<usize>) {
        let i = self
            .index(row, col)
            .unwrap_or_else(|| panic!("cell (R{row},C{col}) outside the grid"));
        self.cells[i] = value;
    }

    pub fn swap(&mut self, a: BoxCoord, b: BoxCoord) {
        let va = self.get(a.row, a.col);
        let vb = self.get(b.row, b.col);
        self.set(a.row, a.col, vb);
        self.set(b.row, b.col, va);
    }

    /// Filled cells of column `col`, top to bottom, with their rows.
    pub fn column(&self, col: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.rows).filter_map(move |r| self.get(r, col).map(|e| (r, e)))
    }

    /// Filled cells of row `row`, left to right, with their columns.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.cols).filter_map(move |c| self.get(row, c).map(|e| (c, e)))
    }

    /// Number of rows containing at least one entry.
    pub fn used_rows(&self) -> usize {
        (1..=self.rows)
            .rev()
            .find(|&r| self.row(r).next().is_some())
            .unwrap_or(0)
    }

    /// Rows top to bottom, trimmed to the used rows.
    pub fn to_rows(&self) -> Vec<Vec<Option<usize>>> {
        (1..=self.used_rows())
            .map(|r| (1..=self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Whether some column has an empty cell between two filled ones.
    pub fn has_column_gap(&self) -> bool {
        (1..=self.cols).any(|c| {
            let filled: Vec<usize> = self.column(c).map(|(r, _)| r).collect();
            filled.windows(2).any(|w| w[1] != w[0] + 1)
                || filled.first().is_some_and(|&r| r != 1)
        })
    }
}

impl TryFrom<Vec<Vec<Option<usize>>>> for CellGrid {
    type Error = String;

    fn try_from(rows: Vec<Vec<Option<usize>>>) -> Result<Self, Self::Error> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("grid rows have different lengths".into());
        }
        let mut grid = CellGrid::new(cols, rows.len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                grid.set(r + 1, c + 1, v);
            }
        }
        Ok(grid)
    }
}

impl From<CellGrid> for Vec<Vec<Option<usize>>> {
    fn from(g: CellGrid) -> Self {
        (1..=g.rows)
            .map(|r| (1..=g.cols).map(|c| g.get(r, c)).collect())
            .collect()
    }
}

/// The tableau together with every repeated entry placed by propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedTableau {
    heights: Vec<usize>,
    grid: CellGrid,
    trajectories: Vec<Vec<BoxCoord>>,
    stops: Vec<StopRecord>,
}

impl ExtendedTableau {
    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn k(&self) -> usize {
        self.heights.len()
    }

    pub fn n(&self) -> usize {
        self.trajectories.len()
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<usize> {
        self.grid.get(row, col)
    }

    /// Whether the cell lies outside the original diagram (a repeat).
    pub fn is_repeat(&self, row: usize, col: usize) -> bool {
        self.cell(row, col).is_some() && row > self.heights[col - 1]
    }

    /// Cells occupied by `entry`, left to right; the first is its own box.
    pub fn trajectory(&self, entry: usize) -> &[BoxCoord] {
        &self.trajectories[entry - 1]
    }

    pub fn stop(&self, entry: usize) -> StopRecord {
        self.stops[entry - 1]
    }

    /// Rightmost cell of `entry`.
    pub fn fin(&self, entry: usize) -> BoxCoord {
        *self.trajectories[entry - 1]
            .last()
            .expect("trajectory is never empty")
    }

    /// Cells `(u + 1, C)` where the entry dropped one row on entering `C`.
    pub fn descents(&self, entry: usize) -> impl Iterator<Item = BoxCoord> + '_ {
        self.trajectory(entry)
            .windows(2)
            .filter(|w| w[1].row == w[0].row + 1)
            .map(|w| w[1])
    }
}

pub fn propagate(d: Diagram<'_>, t: &Tableau, o: &PrecedenceOrder) -> ExtendedTableau {
    let k = d.k();
    let rows = d.max_height() + k;
    let has_left = d.left_neighbor_flags();
    let mut grid = CellGrid::new(k, rows);
    for e in 1..=t.n() {
        let b = t.box_of(e);
        grid.set(b.row, b.col, Some(e));
    }
    let mut trajectories = vec![Vec::new(); t.n()];
    let mut stops = vec![StopRecord::end(); t.n()];

    let place = |grid: &mut CellGrid, row: usize, col: usize, e: usize| {
        assert!(
            grid.get(row, col).is_none(),
            "placement of {e} at (R{row},C{col}) hits an occupied cell"
        );
        grid.set(row, col, Some(e));
    };

    for &e in o.sequence() {
        let start = t.box_of(e);
        let (mut row, mut col) = (start.row, start.col);
        let mut path = vec![start];
        let stop = loop {
            if col == k {
                break StopRecord::end();
            }
            let next = col + 1;
            let h = d.height(next);
            if h < row {
                if grid.get(row, next).is_some() {
                    break StopRecord::before(StopKind::BlockedCell, next);
                }
                place(&mut grid, row, next, e);
            } else if h == row {
                if !has_left[next - 1] || grid.get(row + 1, next).is_some() {
                    break StopRecord::before(StopKind::NoDescent, next);
                }
                row += 1;
                place(&mut grid, row, next, e);
            } else {
                break StopRecord::before(StopKind::TallColumn, next);
            }
            col = next;
            path.push(BoxCoord::new(row, col));
        };
        trajectories[e - 1] = path;
        stops[e - 1] = stop;
    }

    ExtendedTableau {
        heights: d.parts().to_vec(),
        grid,
        trajectories,
        stops,
    }
}

/// Convenience wrapper deriving the tableau and order from the diagram.
pub fn propagate_diagram(d: Diagram<'_>) -> (Tableau, PrecedenceOrder, ExtendedTableau) {
    let t = tableau_of(d);
    let o = precedence_order(d, &t);
    let e = propagate(d, &t, &o);
    (t, o, e)
}

/// Semistandard for the precedence order: strictly increasing down filled
/// columns, decreasing (weakly) along rows over filled cells, no column gaps.
pub fn is_semistandard(e: &ExtendedTableau, o: &PrecedenceOrder) -> bool {
    grid_is_semistandard(e.grid(), o)
}

pub fn grid_is_semistandard(g: &CellGrid, o: &PrecedenceOrder) -> bool {
    let n = o.sequence().len();
    let valid = |v: usize| (1..=n).contains(&v);
    for c in 1..=g.cols() {
        let col: Vec<usize> = g.column(c).map(|(_, v)| v).collect();
        if col.iter().any(|&v| !valid(v)) {
            return false;
        }
        if col.windows(2).any(|w| !o.precedes(w[0], w[1])) {
            return false;
        }
    }
    for r in 1..=g.rows() {
        let row: Vec<usize> = g.row(r).map(|(_, v)| v).collect();
        if row.windows(2).any(|w| o.precedes(w[0], w[1])) {
            return false;
        }
    }
    !g.has_column_gap()
}

/// Left-right mirror image with each entry replaced by its precedence rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorTableau {
    pub grid: CellGrid,
}

impl MirrorTableau {
    /// The classical conventions: strictly increasing down columns, weakly
    /// increasing along rows, and no gaps in rows or columns.
    pub fn is_classical(&self) -> bool {
        let g = &self.grid;
        for c in 1..=g.cols() {
            let col: Vec<usize> = g.column(c).map(|(_, v)| v).collect();
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
        }
        for r in 1..=g.rows() {
            let cells: Vec<(usize, usize)> = g.row(r).collect();
            if cells.windows(2).any(|w| w[0].1 > w[1].1 || w[1].0 != w[0].0 + 1) {
                return false;
            }
        }
        !g.has_column_gap()
    }
}

pub fn mirror_semistandard(e: &ExtendedTableau, o: &PrecedenceOrder) -> MirrorTableau {
    let g = e.grid();
    let mut out = CellGrid::new(g.cols(), g.rows());
    for c in 1..=g.cols() {
        for (r, v) in g.column(c) {
            out.set(r, g.cols() + 1 - c, Some(o.rank(v)));
        }
    }
    MirrorTableau { grid: out }
}

/// Values `r_1, ..., r_{s+1}` with `s` the maximal height; 0 marks no entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionMap(pub Vec<usize>);

impl CompositionMap {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `r_t` for 1-based `t`.
    pub fn get(&self, t: usize) -> usize {
        self.0[t - 1]
    }

    /// Row `t` with `r_t = entry`, if any.
    pub fn row_of(&self, entry: usize) -> Option<usize> {
        self.0.iter().position(|&v| v == entry).map(|i| i + 1)
    }

    pub fn nonzero_distinct(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.0.iter().filter(|&&v| v != 0).all(|&v| seen.insert(v))
    }
}

/// Probes the diagram with a virtual column of height `s + 2` on the right.
pub fn composition_map(d: Diagram<'_>) -> CompositionMap {
    composition_map_with_probe(d, d.max_height() + 2)
}

/// As [`composition_map`] with an explicit probe height, which must exceed
/// `s + 1` so that every probe stop is a tall-column stop.
pub fn composition_map_with_probe(d: Diagram<'_>, probe_height: usize) -> CompositionMap {
    let s = d.max_height();
    assert!(probe_height > s + 1, "probe height {probe_height} must exceed {}", s + 1);
    let mut parts = d.parts().to_vec();
    parts.push(probe_height);
    let augmented = Diagram::from_parts(&parts);
    let (t, _, ext) = propagate_diagram(augmented);
    let probe = augmented.k();
    let mut values = vec![0; s + 1];
    for e in 1..=t.n() {
        let stop = ext.stop(e);
        if stop.kind == StopKind::TallColumn && stop.blocking_col == Some(probe) {
            let row = ext.fin(e).row;
            assert!(values[row - 1] == 0, "two entries reach row {row} of the probe");
            values[row - 1] = e;
        }
    }
    CompositionMap(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_tableau, Composition};

    fn run(parts: &[usize]) -> (Tableau, PrecedenceOrder, ExtendedTableau) {
        let c = Composition::new(parts.to_vec()).unwrap();
        propagate_diagram(c.diagram())
    }

    fn repeats(e: &ExtendedTableau) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for c in 1..=e.k() {
            for (r, v) in e.grid().column(c) {
                if e.is_repeat(r, c) {
                    out.push((v, r, c));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn one_two_one() {
        let (_, o, e) = run(&[1, 2, 1]);
        assert_eq!(repeats(&e), vec![(2, 2, 3)]);
        assert_eq!(e.stop(3).kind, StopKind::BlockedCell);
        assert_eq!(e.stop(3).blocking_col, Some(3));
        assert_eq!(e.stop(1).kind, StopKind::TallColumn);
        assert_eq!(e.stop(4), StopRecord::end());
        assert!(is_semistandard(&e, &o));
    }

    #[test]
    fn repeated_entries_of_two_one_one_two_two() {
        let (_, _, e) = run(&[2, 1, 1, 2, 2]);
        assert_eq!(repeats(&e), vec![(2, 2, 2), (3, 2, 3), (3, 3, 4), (6, 3, 5)]);
    }

    #[test]
    fn last_column_of_two_one_one_two_one() {
        let (_, _, e) = run(&[2, 1, 1, 2, 1]);
        let col: Vec<usize> = e.grid().column(5).map(|(_, v)| v).collect();
        assert_eq!(col, vec![7, 5, 3]);
    }

    #[test]
    fn worked_example_trajectories() {
        let (_, _, e) = run(&[1, 2, 4, 3, 2, 3, 4, 1, 1, 2]);
        let cells = |v: &[(usize, usize)]| -> Vec<BoxCoord> {
            v.iter().map(|&(r, c)| BoxCoord::new(r, c)).collect()
        };
        assert_eq!(
            e.trajectory(9),
            cells(&[(2, 4), (3, 5), (4, 6), (5, 7), (5, 8), (5, 9), (5, 10)])
        );
        assert_eq!(e.trajectory(19), cells(&[(4, 7), (4, 8), (4, 9), (4, 10)]));
        // 16 is blocked by the earlier 20
        assert_eq!(e.trajectory(16), cells(&[(1, 7), (2, 8)]));
        assert_eq!(e.stop(16).kind, StopKind::BlockedCell);
    }

    #[test]
    fn single_column_is_unchanged() {
        let (t, o, e) = run(&[5]);
        assert!(repeats(&e).is_empty());
        assert!((1..=5).all(|v| e.trajectory(v) == [t.box_of(v)]));
        assert!(is_semistandard(&e, &o));
        let m = mirror_semistandard(&e, &o);
        assert!(m.is_classical());
        assert_eq!(m.grid.column(1).map(|(_, v)| v).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn swapped_row_breaks_semistandardness() {
        let (_, o, mut e) = run(&[2, 2, 1, 1]);
        assert!(is_semistandard(&e, &o));
        e.grid.swap(BoxCoord::new(1, 1), BoxCoord::new(1, 2));
        assert!(!is_semistandard(&e, &o));
    }

    #[test]
    fn mirror_examples() {
        for parts in [&[1usize, 2, 1][..], &[2, 1, 1, 2, 2]] {
            let (_, o, e) = run(parts);
            let m = mirror_semistandard(&e, &o);
            assert!(m.is_classical(), "{parts:?}");
        }
        let (_, o, e) = run(&[1, 2, 1]);
        let m = mirror_semistandard(&e, &o);
        // precedence ranks: 4->1, 2->2, 3->3, 1->4
        assert_eq!(m.grid.to_rows(), vec![vec![Some(1), Some(2), Some(4)], vec![Some(2), Some(3), None]]);
    }

    #[test]
    fn composition_map_examples() {
        let map = |parts: &[usize]| {
            let c = Composition::new(parts.to_vec()).unwrap();
            composition_map(c.diagram()).0
        };
        assert_eq!(map(&[2, 1]), vec![3, 2, 0]);
        assert_eq!(map(&[1, 1]), vec![2, 1]);
        assert_eq!(map(&[1, 2, 4, 3, 2, 3, 4, 1, 1]), vec![21, 20, 18, 19, 9]);
    }

    #[test]
    fn probe_height_does_not_matter() {
        let c = Composition::new(vec![1, 2, 4, 3, 2, 3, 4, 1, 1]).unwrap();
        let d = c.diagram();
        let s = d.max_height();
        assert_eq!(composition_map(d), composition_map_with_probe(d, s + 5));
    }

    #[test]
    #[should_panic(expected = "probe height")]
    fn probe_must_be_tall() {
        let c = Composition::new(vec![2, 1]).unwrap();
        composition_map_with_probe(c.diagram(), 3);
    }

    #[test]
    fn grid_json_shape() {
        let c = Composition::new(vec![1, 2, 1]).unwrap();
        let (d, t) = build_tableau(&c);
        let o = precedence_order(d, &t);
        let e = propagate(d, &t, &o);
        let json = serde_json::to_string(&e.grid().to_rows()).unwrap();
        assert_eq!(json, "[[1,2,4],[null,3,2]]");
        let back: CellGrid = serde_json::from_str(&json).unwrap();
        assert_eq!(back.get(2, 3), Some(2));
    }
}
