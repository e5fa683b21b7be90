//! Exhaustive search for disjoint left-to-right chains covering the window
//! of each neighbouring pair.
//!
//! The window of a pair `(L, R)` of height `t` is every box in rows `<= t` and
//! columns `L..=R`. Only lines with both end points in the window are usable.
//! A cover assigns each window box outside column `R` one outgoing line, so
//! that every box outside column `L` receives exactly one. This yields `t`
//! chains from column `L` to column `R`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::Violation;
use crate::lines::{Coord, Label, LineSet};
use crate::model::{BoxCoord, Diagram, NeighborPair, Tableau};

/// Covers beyond this many are not enumerated.
pub const COVER_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCover {
    pub pair: NeighborPair,
    pub window: Vec<BoxCoord>,
    pub chains: Vec<Vec<usize>>,
    pub star_line: Coord,
}

/// A family of chosen lines `(left, right, label)`.
pub type Family = Vec<(usize, usize, Label)>;

/// Window boxes, column by column, top down.
pub fn window(d: Diagram<'_>, pair: &NeighborPair) -> Vec<BoxCoord> {
    (pair.left..=pair.right)
        .flat_map(|col| (1..=d.height(col).min(pair.height)).map(move |row| BoxCoord::new(row, col)))
        .collect()
}

/// All covers of the pair's window, up to `limit`.
pub fn find_covers(
    d: Diagram<'_>,
    t: &Tableau,
    lines: &LineSet,
    pair: &NeighborPair,
    limit: usize,
) -> Vec<Family> {
    let boxes = window(d, pair);
    let entries: Vec<usize> = boxes
        .iter()
        .map(|&b| t.entry_at(b).expect("window box in diagram"))
        .collect();
    let index: HashMap<usize, usize> = entries.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let mut out: Vec<Vec<(usize, Label)>> = vec![Vec::new(); boxes.len()];
    for l in lines.iter() {
        if let (Some(&a), Some(&b)) = (index.get(&l.left), index.get(&l.right)) {
            out[a].push((b, l.label));
        }
    }
    let sources: Vec<usize> = (0..boxes.len())
        .filter(|&i| boxes[i].col != pair.right)
        .collect();
    let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); pair.right - pair.left + 1];
    for (i, b) in boxes.iter().enumerate() {
        by_col[b.col - pair.left].push(i);
    }

    let mut search = Search {
        pair,
        boxes: &boxes,
        out: &out,
        sources: &sources,
        by_col: &by_col,
        used: vec![false; boxes.len()],
        chosen: Vec::new(),
        dead: HashSet::new(),
        found: Vec::new(),
        limit,
    };
    search.run(0);
    search
        .found
        .into_iter()
        .map(|fam| {
            fam.into_iter()
                .map(|(a, b, label)| (entries[a], entries[b], label))
                .collect()
        })
        .collect()
}

struct Search<'s> {
    pair: &'s NeighborPair,
    boxes: &'s [BoxCoord],
    out: &'s [Vec<(usize, Label)>],
    sources: &'s [usize],
    by_col: &'s [Vec<usize>],
    used: Vec<bool>,
    chosen: Vec<(usize, usize, Label)>,
    dead: HashSet<(usize, Vec<bool>)>,
    found: Vec<Vec<(usize, usize, Label)>>,
    limit: usize,
}

impl Search<'_> {
    /// Boxes of `col` cannot gain incoming lines once every source left of it is assigned.
    fn column_filled(&self, col: usize) -> bool {
        col == self.pair.left || self.by_col[col - self.pair.left].iter().all(|&i| self.used[i])
    }

    fn run(&mut self, idx: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        let col = match self.sources.get(idx) {
            Some(&s) => self.boxes[s].col,
            None => self.pair.right,
        };
        if !self.column_filled(col) {
            return;
        }
        if idx == self.sources.len() {
            self.found.push(self.chosen.clone());
            return;
        }
        let key = (idx, self.used.clone());
        if self.dead.contains(&key) {
            return;
        }
        let before = self.found.len();
        let src = self.sources[idx];
        for k in 0..self.out[src].len() {
            let (dst, label) = self.out[src][k];
            if self.used[dst] {
                continue;
            }
            self.used[dst] = true;
            self.chosen.push((src, dst, label));
            self.run(idx + 1);
            self.chosen.pop();
            self.used[dst] = false;
        }
        if self.found.len() == before {
            self.dead.insert(key);
        }
    }
}

/// The unique left-going star line into the bottom box of the right column.
pub fn star_into_pair(t: &Tableau, lines: &LineSet, pair: &NeighborPair) -> Result<Coord, Violation> {
    let bottom = t
        .entry(pair.height, pair.right)
        .expect("pair height is the right column height");
    let stars: Vec<Coord> = lines.left_going(bottom, Label::Star).map(|l| l.coord()).collect();
    match stars.as_slice() {
        [one] => Ok(*one),
        _ => Err(Violation::PairStar {
            pair: *pair,
            bottom,
            found: stars,
        }),
    }
}

fn chains_of(family: &Family, t: &Tableau, pair: &NeighborPair) -> Vec<Vec<usize>> {
    let succ: HashMap<usize, usize> = family.iter().map(|&(a, b, _)| (a, b)).collect();
    t.column(pair.left)
        .take(pair.height)
        .map(|start| {
            let mut chain = vec![start];
            while let Some(&next) = succ.get(chain.last().expect("nonempty")) {
                chain.push(next);
            }
            chain
        })
        .collect()
}

/// One cover per neighbouring pair, or every violation found.
pub fn chain_cover_check(
    d: Diagram<'_>,
    t: &Tableau,
    lines: &LineSet,
) -> Result<Vec<ChainCover>, Vec<Violation>> {
    let mut covers = Vec::new();
    let mut violations = Vec::new();
    for pair in d.neighboring_pairs() {
        let found = find_covers(d, t, lines, &pair, COVER_LIMIT);
        if found.len() != 1 {
            violations.push(Violation::CoverCount {
                pair,
                covers: found.iter().map(|f| chains_of(f, t, &pair)).collect(),
            });
            continue;
        }
        let family = &found[0];
        let stars: Vec<Coord> = family
            .iter()
            .filter(|x| x.2 == Label::Star)
            .map(|&(a, b, _)| (a, b))
            .collect();
        let expected = match star_into_pair(t, lines, &pair) {
            Ok(s) => s,
            Err(v) => {
                violations.push(v);
                continue;
            }
        };
        if stars != [expected] {
            violations.push(Violation::CoverStar {
                pair,
                expected,
                found: stars,
            });
            continue;
        }
        covers.push(ChainCover {
            pair,
            window: window(d, &pair),
            chains: chains_of(family, t, &pair),
            star_line: expected,
        });
    }
    if violations.is_empty() {
        Ok(covers)
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::read_lines;
    use crate::model::Composition;
    use crate::propagation::propagate_diagram;

    fn setup(parts: &[usize]) -> (Composition, Tableau, LineSet) {
        let c = Composition::new(parts.to_vec()).unwrap();
        let (t, _, e) = propagate_diagram(c.diagram());
        let l = read_lines(&e, &t);
        (c, t, l)
    }

    fn cover_for(covers: &[ChainCover], left: usize, right: usize) -> &ChainCover {
        covers
            .iter()
            .find(|c| c.pair.left == left && c.pair.right == right)
            .unwrap()
    }

    #[test]
    fn worked_example_pair() {
        let (c, t, l) = setup(&[1, 2, 4, 3, 2, 3, 4, 1, 1, 2]);
        let covers = chain_cover_check(c.diagram(), &t, &l).unwrap();
        assert_eq!(covers.len(), 6);
        let cc = cover_for(&covers, 3, 7);
        assert_eq!(
            cc.chains,
            vec![
                vec![4, 8, 11, 13, 16],
                vec![5, 9, 19],
                vec![6, 10, 12, 14, 17],
                vec![7, 15, 18]
            ]
        );
        assert_eq!(cc.star_line, (9, 19));
        assert_eq!(cc.window.len(), 4 + 3 + 2 + 3 + 4);
    }

    #[test]
    fn small_pairs() {
        let (c, t, l) = setup(&[2, 2, 1, 1]);
        let covers = chain_cover_check(c.diagram(), &t, &l).unwrap();
        let cc = cover_for(&covers, 1, 2);
        assert_eq!(cc.chains, vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(cc.star_line, (2, 4));

        let (c, t, l) = setup(&[2, 1, 1, 2, 2]);
        let covers = chain_cover_check(c.diagram(), &t, &l).unwrap();
        let cc = cover_for(&covers, 1, 4);
        assert_eq!(cc.chains, vec![vec![1, 3, 6], vec![2, 4, 5]]);
        assert_eq!(cc.star_line, (3, 6));
        assert!(l.get(3, 8).is_some());
    }

    #[test]
    fn removing_a_line_breaks_a_cover() {
        let (c, t, l) = setup(&[1, 2, 4, 3, 2, 3, 4, 1, 1, 2]);
        let broken = l.without(9, 19);
        let errs = chain_cover_check(c.diagram(), &t, &broken).unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::PairStar { .. } | Violation::CoverCount { .. })));
    }

    #[test]
    fn single_column_has_no_pairs() {
        let (c, t, l) = setup(&[3]);
        assert!(chain_cover_check(c.diagram(), &t, &l).unwrap().is_empty());
    }
}
