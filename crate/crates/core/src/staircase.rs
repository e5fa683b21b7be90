//! Column staircases and the extremal-box description of the composition
//! tableau, computed from column heights alone.
//!
//! Nothing here consults the insertion algorithm; the equivalence checks in
//! [`crate::verify`] compare the two descriptions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{tableau_of, BoxCoord, Diagram, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum OracleError {
    #[error("column {col} is outside the diagram")]
    ColumnOutOfRange { col: usize },
    #[error("entry {entry} is outside the tableau")]
    EntryOutOfRange { entry: usize },
    #[error("column {col} has height {height}, max height to its right is {right}: no replacement chain")]
    NotReplaceable {
        col: usize,
        height: usize,
        right: usize,
    },
    #[error("entry {entry} is never extremal in a prefix containing it")]
    NeverExtremal { entry: usize },
    #[error("entry {entry} is extremal in prefixes {prefixes:?}, which is not an interval starting at its column")]
    NonInterval { entry: usize, prefixes: Vec<usize> },
    #[error("entry {entry} at {at} is not the base {base} of its witnessing staircase")]
    BaseMismatch {
        entry: usize,
        at: BoxCoord,
        base: BoxCoord,
    },
}

/// A chain of columns of heights `height, height + 1, ..., depth`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase {
    pub height: usize,
    pub depth: usize,
    /// `columns[j]` has height `height + j`.
    pub columns: Vec<usize>,
    pub base: BoxCoord,
    /// No column of height `>= depth` lies right of the last column.
    pub right_extremal: bool,
}

impl Staircase {
    /// `i'_{u-1}, i'_u, ..., i'_c`: the base column followed by the staircase columns.
    pub fn profile(&self) -> Vec<usize> {
        std::iter::once(self.base.col)
            .chain(self.columns.iter().copied())
            .collect()
    }

    pub fn first_column(&self) -> usize {
        self.columns[0]
    }

    pub fn last_column(&self) -> usize {
        *self.columns.last().expect("a staircase has at least one column")
    }
}

/// One downward-maximal staircase per column that has a left neighbour,
/// ending at that column; sorted by last column.
pub fn enumerate_staircases(d: Diagram<'_>) -> Vec<Staircase> {
    let flags = d.left_neighbor_flags();
    let mut out = Vec::new();
    for last in 1..=d.k() {
        if !flags[last - 1] {
            continue;
        }
        let mut columns = vec![last];
        let mut j = last;
        while d.height(j) > 1 {
            let h = d.height(j);
            let next = (1..j).rev().find(|&i| d.height(i) + 1 >= h);
            match next {
                Some(i) if d.height(i) + 1 == h && flags[i - 1] => {
                    columns.push(i);
                    j = i;
                }
                _ => break,
            }
        }
        columns.reverse();
        let height = d.height(columns[0]);
        let depth = d.height(last);
        let base_col = (1..columns[0])
            .rev()
            .find(|&i| d.height(i) >= height)
            .expect("a column with a left neighbour has a column of at least its height to its left");
        let right_extremal = ((last + 1)..=d.k()).all(|i| d.height(i) < depth);
        out.push(Staircase {
            height,
            depth,
            columns,
            base: BoxCoord::new(height, base_col),
            right_extremal,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// Base of the right-extremal staircase of depth `t - 1`.
    StaircaseBase(Staircase),
    /// Row `t` of the rightmost column of height `>= t`.
    LowerPart { col: usize },
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleMap {
    pub values: Vec<usize>,
    pub witnesses: Vec<Witness>,
}

impl OracleMap {
    /// 1-based index `t` with `r_t = entry`.
    pub fn row_of(&self, entry: usize) -> Option<usize> {
        self.values.iter().position(|&v| v == entry).map(|i| i + 1)
    }
}

pub fn oracle_composition_map(d: Diagram<'_>, t: &Tableau) -> OracleMap {
    let s = d.max_height();
    let stairs = enumerate_staircases(d);
    let mut values = Vec::with_capacity(s + 1);
    let mut witnesses = Vec::with_capacity(s + 1);
    for row in 1..=s + 1 {
        let mut extremal = stairs
            .iter()
            .filter(|st| st.right_extremal && st.depth + 1 == row);
        let found = extremal.next();
        assert!(
            extremal.next().is_none(),
            "two right-extremal staircases of depth {}",
            row - 1
        );
        if let Some(st) = found {
            values.push(t.entry_at(st.base).expect("staircase base is a box"));
            witnesses.push(Witness::StaircaseBase(st.clone()));
        } else if let Some(col) = d.rightmost_at_least(row) {
            values.push(t.entry(row, col).expect("row within column height"));
            witnesses.push(Witness::LowerPart { col });
        } else {
            values.push(0);
            witnesses.push(Witness::Empty);
        }
    }
    OracleMap { values, witnesses }
}

/// Oracle maps of the prefixes `c_1..c_m`, for `m = 1..=k`, indexed by `m - 1`.
pub fn prefix_oracle_maps(d: Diagram<'_>) -> Vec<OracleMap> {
    (1..=d.k())
        .map(|m| {
            let p = d.prefix(m);
            oracle_composition_map(p, &tableau_of(p))
        })
        .collect()
}

/// Right-extremal entries of the full diagram with their witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalReport {
    /// Indexed by entry - 1.
    pub right_extremal: Vec<bool>,
    pub witnesses: Vec<(usize, Witness)>,
}

pub fn extremal_report(d: Diagram<'_>, t: &Tableau) -> ExtremalReport {
    let map = oracle_composition_map(d, t);
    let mut right_extremal = vec![false; t.n()];
    let mut witnesses = Vec::new();
    for (&v, w) in map.values.iter().zip(map.witnesses) {
        if v != 0 {
            right_extremal[v - 1] = true;
            witnesses.push((v, w));
        }
    }
    witnesses.sort_by_key(|(v, _)| *v);
    ExtremalReport {
        right_extremal,
        witnesses,
    }
}

/// Cells occupied by `entry` in the composition tableau, predicted from the
/// prefixes in which it is extremal.
pub fn profile_footprint(
    d: Diagram<'_>,
    t: &Tableau,
    entry: usize,
) -> Result<Vec<BoxCoord>, OracleError> {
    footprint_with(d, t, entry, &prefix_oracle_maps(d))
}

/// [`profile_footprint`] for every entry, sharing the prefix maps.
pub fn all_footprints(d: Diagram<'_>, t: &Tableau) -> Result<Vec<Vec<BoxCoord>>, OracleError> {
    let maps = prefix_oracle_maps(d);
    (1..=t.n()).map(|e| footprint_with(d, t, e, &maps)).collect()
}

fn footprint_with(
    d: Diagram<'_>,
    t: &Tableau,
    entry: usize,
    maps: &[OracleMap],
) -> Result<Vec<BoxCoord>, OracleError> {
    if entry == 0 || entry > t.n() {
        return Err(OracleError::EntryOutOfRange { entry });
    }
    let start = t.box_of(entry);
    let prefixes: Vec<usize> = (start.col..=d.k())
        .filter(|&m| maps[m - 1].row_of(entry).is_some())
        .collect();
    let Some(&last) = prefixes.last() else {
        return Err(OracleError::NeverExtremal { entry });
    };
    if prefixes.len() != last - start.col + 1 || prefixes[0] != start.col {
        return Err(OracleError::NonInterval { entry, prefixes });
    }
    let map = &maps[last - 1];
    let row = map.row_of(entry).expect("filtered above");
    match &map.witnesses[row - 1] {
        Witness::StaircaseBase(st) => {
            if st.base != start {
                return Err(OracleError::BaseMismatch {
                    entry,
                    at: start,
                    base: st.base,
                });
            }
            let mut profile = st.profile();
            profile.push(last + 1);
            let cells = (st.height - 1..=st.depth)
                .zip(profile.windows(2))
                .flat_map(|(m, w)| (w[0]..w[1]).map(move |col| BoxCoord::new(m + 1, col)))
                .collect();
            Ok(cells)
        }
        _ => Ok((start.col..=last)
            .map(|col| BoxCoord::new(start.row, col))
            .collect()),
    }
}

/// The chain `b_0, b_1, ..., b_m` starting at row `c^col + 1` of `col` and
/// ending at the base of a right-extremal staircase (or at `b_0`).
pub fn replacement_chain(d: Diagram<'_>, col: usize) -> Result<Vec<BoxCoord>, OracleError> {
    if col == 0 || col > d.k() {
        return Err(OracleError::ColumnOutOfRange { col });
    }
    let right = d.max_height_between(col, d.k() + 1);
    let height = d.height(col);
    if height != right + 1 {
        return Err(OracleError::NotReplaceable { col, height, right });
    }
    let mut chain = vec![BoxCoord::new(right + 1, col)];
    let mut stairs: Vec<Staircase> = enumerate_staircases(d)
        .into_iter()
        .filter(|st| st.depth == right && st.first_column() > col)
        .collect();
    stairs.sort_by_key(Staircase::last_column);
    for st in stairs {
        chain.push(st.base);
        if st.right_extremal {
            break;
        }
    }
    Ok(chain)
}
