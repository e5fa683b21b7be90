//! Compositions, their column diagrams and the column-wise numbering.
//!
//! A composition `(c_1, ..., c_k)` of `n` describes a diagram of `k`
//! top-aligned columns, column `j` holding `c_j` boxes. Rows and columns are
//! 1-based throughout, row 1 being the top row. The tableau numbers the boxes
//! `1..=n` down each column, moving left to right.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `n` accepted by [`Composition::new`].
pub const MAX_N: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("composition has no parts")]
    Empty,
    #[error("part {index} is not a positive integer")]
    NonPositivePart { index: usize },
    #[error("composition of {n} exceeds the supported size {MAX_N}")]
    TooLarge { n: usize },
    #[error("cannot parse {token:?} as an integer")]
    Parse { token: String },
}

/// An ordered list of positive column heights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
    n: usize,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, ModelError> {
        if parts.is_empty() {
            return Err(ModelError::Empty);
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(ModelError::NonPositivePart { index: index + 1 });
        }
        let n = parts.iter().fold(0usize, |acc, &p| acc.saturating_add(p));
        if n > MAX_N {
            return Err(ModelError::TooLarge { n });
        }
        Ok(Self { parts, n })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// The composition formed by the first `len` parts.
    pub fn prefix(&self, len: usize) -> Result<Self, ModelError> {
        Self::new(self.parts[..len.min(self.parts.len())].to_vec())
    }

    /// The composition with one more column of height `height` on the right.
    pub fn with_column(&self, height: usize) -> Result<Self, ModelError> {
        let mut parts = self.parts.clone();
        parts.push(height);
        Self::new(parts)
    }

    pub fn diagram(&self) -> Diagram<'_> {
        Diagram { parts: &self.parts }
    }

    /// All compositions of `n`, in the order of the binary encoding of their
    /// cut points (`2^(n-1)` of them).
    pub fn all_of(n: usize) -> Vec<Composition> {
        if n == 0 {
            return Vec::new();
        }
        (0u64..1 << (n - 1))
            .map(|mask| {
                let mut parts = Vec::new();
                let mut current = 1;
                for i in 0..n - 1 {
                    if mask >> i & 1 == 1 {
                        parts.push(current);
                        current = 1;
                    } else {
                        current += 1;
                    }
                }
                parts.push(current);
                Composition::new(parts).expect("generated composition is valid")
            })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = ModelError;

    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(parts)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

/// Accepts comma- and/or whitespace-separated integers, e.g. `"1,2,1"` or
/// `"1 2 1"`.
impl FromStr for Composition {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        for (i, token) in s
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .enumerate()
        {
            let value: i64 = token.parse().map_err(|_| ModelError::Parse {
                token: token.to_string(),
            })?;
            if value <= 0 {
                return Err(ModelError::NonPositivePart { index: i + 1 });
            }
            parts.push(usize::try_from(value).map_err(|_| ModelError::Parse {
                token: token.to_string(),
            })?);
        }
        Self::new(parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxCoord {
    pub row: usize,
    pub col: usize,
}

impl BoxCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for BoxCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(R{},C{})", self.row, self.col)
    }
}

/// Two equal-height columns with no column of that height strictly between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NeighborPair {
    pub left: usize,
    pub right: usize,
    pub height: usize,
}

impl fmt::Display for NeighborPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(C{},C{},h={})", self.left, self.right, self.height)
    }
}

/// Borrowed view of a composition as a diagram of boxes.
///
/// Membership is arithmetic; nothing is materialized. A prefix of the parts
/// is again a diagram, which is how column truncations are represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diagram<'a> {
    parts: &'a [usize],
}

impl<'a> Diagram<'a> {
    /// View over already validated parts.
    pub(crate) fn from_parts(parts: &'a [usize]) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        Self { parts }
    }

    pub fn parts(&self) -> &'a [usize] {
        self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Height of column `col`, or 0 outside `1..=k`.
    pub fn height(&self, col: usize) -> usize {
        if col == 0 {
            0
        } else {
            self.parts.get(col - 1).copied().unwrap_or(0)
        }
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        row >= 1 && row <= self.height(col)
    }

    pub fn contains_box(&self, b: BoxCoord) -> bool {
        self.contains(b.row, b.col)
    }

    pub fn height_set(&self) -> BTreeSet<usize> {
        self.parts.iter().copied().collect()
    }

    pub fn max_height(&self) -> usize {
        self.parts.iter().copied().max().unwrap_or(0)
    }

    /// The diagram formed by the first `len` columns.
    pub fn prefix(&self, len: usize) -> Diagram<'a> {
        Diagram {
            parts: &self.parts[..len.min(self.parts.len())],
        }
    }

    /// Maximum height of the columns strictly between `from` and `to`.
    pub fn max_height_between(&self, from: usize, to: usize) -> usize {
        (from + 1..to).map(|c| self.height(c)).max().unwrap_or(0)
    }

    /// Rightmost column strictly left of `col` with the same height.
    pub fn left_neighbor(&self, col: usize) -> Option<usize> {
        let h = self.height(col);
        if h == 0 {
            return None;
        }
        (1..col).rev().find(|&c| self.height(c) == h)
    }

    /// Per column (index `col - 1`), whether it has a left neighbour.
    pub fn left_neighbor_flags(&self) -> Vec<bool> {
        let mut seen = BTreeSet::new();
        self.parts.iter().map(|&h| !seen.insert(h)).collect()
    }

    /// All neighbouring pairs, sorted by the right column.
    pub fn neighboring_pairs(&self) -> Vec<NeighborPair> {
        let mut last: HashMap<usize, usize> = HashMap::new();
        let mut pairs = Vec::new();
        for (i, &h) in self.parts.iter().enumerate() {
            let col = i + 1;
            if let Some(left) = last.insert(h, col) {
                pairs.push(NeighborPair {
                    left,
                    right: col,
                    height: h,
                });
            }
        }
        pairs
    }

    /// Rightmost column of height at least `t`.
    pub fn rightmost_at_least(&self, t: usize) -> Option<usize> {
        (1..=self.k()).rev().find(|&c| self.height(c) >= t)
    }
}

/// The diagram numbered `1..=n` down the columns, left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    heights: Vec<usize>,
    offsets: Vec<usize>,
    boxes: Vec<BoxCoord>,
}

impl Tableau {
    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn k(&self) -> usize {
        self.heights.len()
    }

    pub fn entry_at(&self, b: BoxCoord) -> Option<usize> {
        if b.col == 0 || b.col > self.heights.len() || b.row == 0 || b.row > self.heights[b.col - 1] {
            return None;
        }
        Some(self.offsets[b.col - 1] + b.row)
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<usize> {
        self.entry_at(BoxCoord::new(row, col))
    }

    /// Box holding `entry`. Panics when `entry` is not in `1..=n`.
    pub fn box_of(&self, entry: usize) -> BoxCoord {
        assert!(
            (1..=self.n()).contains(&entry),
            "entry {entry} outside 1..={}",
            self.n()
        );
        self.boxes[entry - 1]
    }

    /// Entries of column `col`, top to bottom.
    pub fn column(&self, col: usize) -> std::ops::RangeInclusive<usize> {
        let start = self.offsets[col - 1] + 1;
        start..=self.offsets[col - 1] + self.heights[col - 1]
    }

    /// Column of `entry`, i.e. its diagonal block in the matrix picture.
    pub fn block_of(&self, entry: usize) -> usize {
        self.box_of(entry).col
    }

    /// Rows of the tableau, each with one cell per column.
    pub fn to_rows(&self) -> Vec<Vec<Option<usize>>> {
        let rows = self.heights.iter().copied().max().unwrap_or(0);
        (1..=rows)
            .map(|r| (1..=self.k()).map(|c| self.entry(r, c)).collect())
            .collect()
    }
}

pub fn build_tableau(c: &Composition) -> (Diagram<'_>, Tableau) {
    let d = c.diagram();
    (d, tableau_of(d))
}

/// Numbering of an arbitrary diagram view (used for prefixes as well).
pub fn tableau_of(d: Diagram<'_>) -> Tableau {
    let mut offsets = Vec::with_capacity(d.k());
    let mut boxes = Vec::with_capacity(d.n());
    let mut seen = 0;
    for (i, &h) in d.parts().iter().enumerate() {
        offsets.push(seen);
        boxes.extend((1..=h).map(|row| BoxCoord::new(row, i + 1)));
        seen += h;
    }
    Tableau {
        heights: d.parts().to_vec(),
        offsets,
        boxes,
    }
}

/// The total order that increases down each column and from right to left
/// across columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceOrder {
    rank: Vec<usize>,
    sequence: Vec<usize>,
}

impl PrecedenceOrder {
    /// Position of `entry` in the increasing enumeration, starting at 1.
    pub fn rank(&self, entry: usize) -> usize {
        self.rank[entry - 1]
    }

    /// Entries in increasing order.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rank(a) < self.rank(b)
    }
}

pub fn precedence_order(d: Diagram<'_>, t: &Tableau) -> PrecedenceOrder {
    let sequence: Vec<usize> = (1..=d.k()).rev().flat_map(|col| t.column(col)).collect();
    let mut rank = vec![0; sequence.len()];
    for (i, &e) in sequence.iter().enumerate() {
        rank[e - 1] = i + 1;
    }
    PrecedenceOrder { rank, sequence }
}
