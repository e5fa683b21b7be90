//! Per-window and per-column consistency of a line family.

use serde::{Deserialize, Serialize};

use super::{AuditClause, Violation};
use super::chain_cover::star_into_pair;
use crate::lines::{Coord, Label, LineSet};
use crate::model::{Diagram, NeighborPair, Tableau};
use crate::propagation::CellGrid;
use crate::staircase::extremal_report;

/// A box of `[L, R[` whose right-going 1-line leaves the window, excused
/// because it is the left end of the pair's star line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopOver {
    pub pair: NeighborPair,
    pub entry: usize,
    pub star_line: Coord,
    pub one_line: Option<Coord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AuditReport {
    pub pairs: usize,
    pub columns: usize,
    pub lines: usize,
    pub exemptions: Vec<HopOver>,
}

struct Ctx<'a> {
    t: &'a Tableau,
    lines: &'a LineSet,
    violations: Vec<Violation>,
}

impl Ctx<'_> {
    fn fail(&mut self, clause: AuditClause, entry: usize, detail: String) {
        self.violations.push(Violation::Audit {
            clause,
            entry,
            detail,
        });
    }

    fn lefts(&self, entry: usize, label: Label) -> Vec<usize> {
        self.lines.left_going(entry, label).map(|l| l.left).collect()
    }

    fn rights(&self, entry: usize) -> Vec<usize> {
        self.lines.right_going(entry, Label::One).map(|l| l.right).collect()
    }

    fn row(&self, entry: usize) -> usize {
        self.t.box_of(entry).row
    }

    fn col(&self, entry: usize) -> usize {
        self.t.box_of(entry).col
    }
}

pub fn structural_audit(
    d: Diagram<'_>,
    t: &Tableau,
    grid: &CellGrid,
    lines: &LineSet,
) -> Result<AuditReport, Vec<Violation>> {
    let mut cx = Ctx {
        t,
        lines,
        violations: Vec::new(),
    };
    line_shapes(&mut cx);
    let pairs = d.neighboring_pairs();
    let mut exemptions = Vec::new();
    for pair in &pairs {
        window_clauses(&mut cx, pair, &mut exemptions);
    }
    column_discipline(&mut cx, d);
    star_descents(&mut cx);
    left_one_cross_check(&mut cx, grid);
    extremal_agreement(&mut cx, d);
    if cx.violations.is_empty() {
        Ok(AuditReport {
            pairs: pairs.len(),
            columns: d.k(),
            lines: lines.len(),
            exemptions,
        })
    } else {
        Err(cx.violations)
    }
}

fn line_shapes(cx: &mut Ctx<'_>) {
    let n = cx.t.n();
    let stars = cx.lines.coords(Label::Star);
    let mut bad = Vec::new();
    for l in cx.lines.iter() {
        if l.left == 0 || l.right == 0 || l.left > n || l.right > n {
            bad.push((l.left, format!("{l} has an end point outside 1..={n}")));
            continue;
        }
        let (a, b) = (cx.t.box_of(l.left), cx.t.box_of(l.right));
        if a != l.left_box || b != l.right_box {
            bad.push((l.left, format!("{l} records boxes {} {}, tableau has {a} {b}", l.left_box, l.right_box)));
        }
        if l.left >= l.right || a.col >= b.col {
            bad.push((l.left, format!("{l} is not left to right")));
        }
        let slack = if l.label == Label::One { 1 } else { 0 };
        if a.row > b.row + slack {
            bad.push((l.left, format!("{l} goes down from {a} to {b}")));
        }
        if l.label == Label::One && stars.contains(&l.coord()) {
            bad.push((l.left, format!("{l} carries both labels")));
        }
    }
    for (e, detail) in bad {
        cx.fail(AuditClause::LineShape, e, detail);
    }
}

fn window_clauses(cx: &mut Ctx<'_>, pair: &NeighborPair, exemptions: &mut Vec<HopOver>) {
    let star = match star_into_pair(cx.t, cx.lines, pair) {
        Ok(s) => s,
        Err(v) => {
            cx.violations.push(v);
            return;
        }
    };
    let (l, r, h) = (pair.left, pair.right, pair.height);
    let in_window = |cx: &Ctx<'_>, e: usize| {
        let b = cx.t.box_of(e);
        (l..=r).contains(&b.col) && b.row <= h
    };
    for col in l..=r {
        for e in cx.t.column(col).take(h) {
            if col > l && col < r {
                let lo = cx.lefts(e, Label::One);
                let ok = match lo.as_slice() {
                    [a] => (l..r).contains(&cx.col(*a)) && cx.row(*a) <= h,
                    _ => false,
                };
                if !ok {
                    cx.fail(
                        AuditClause::InteriorLeftOne,
                        e,
                        format!("pair {pair}: left-going 1-lines from {lo:?}"),
                    );
                }
            }
            if col < r {
                let ro = cx.rights(e);
                let ok = match ro.as_slice() {
                    [b] => in_window(cx, *b) && cx.col(*b) != l,
                    _ => false,
                };
                if ok {
                    continue;
                }
                if e == star.0 {
                    exemptions.push(HopOver {
                        pair: *pair,
                        entry: e,
                        star_line: star,
                        one_line: ro.first().map(|&b| (e, b)),
                    });
                } else {
                    cx.fail(
                        AuditClause::WindowRightOne,
                        e,
                        format!("pair {pair}: right-going 1-lines to {ro:?}"),
                    );
                }
            }
        }
    }
}

fn column_discipline(cx: &mut Ctx<'_>, d: Diagram<'_>) {
    let flags = d.left_neighbor_flags();
    for col in 2..=d.k() {
        let h = d.height(col);
        let left_max = d.max_height_between(0, col);
        let has = flags[col - 1];
        for (i, e) in cx.t.column(col).enumerate().map(|(i, e)| (i + 1, e)) {
            let lo = cx.lefts(e, Label::One);
            let ls = cx.lefts(e, Label::Star);
            let rows_ok = |cx: &Ctx<'_>, v: &[usize], max_row: usize| v.iter().all(|&a| cx.row(a) <= max_row);
            let ok = if has && i < h {
                lo.len() == 1 && ls.is_empty() && rows_ok(cx, &lo, i)
            } else if has {
                ls.len() == 1
                    && rows_ok(cx, &ls, i)
                    && lo.len() <= 1
                    && (left_max <= h || lo.len() == 1)
                    && rows_ok(cx, &lo, i + 1)
            } else if !ls.is_empty() {
                false
            } else if i <= left_max {
                lo.len() == 1 && rows_ok(cx, &lo, i)
            } else if i == left_max + 1 {
                lo.len() <= 1 && rows_ok(cx, &lo, i)
            } else {
                lo.is_empty()
            };
            if !ok {
                cx.fail(
                    AuditClause::ColumnDiscipline,
                    e,
                    format!("column {col} row {i}: left 1-lines from {lo:?}, left *-lines from {ls:?}"),
                );
            }
        }
    }
}

/// Star lines out of one entry reach rows `u, u + 1, ...` in increasing columns.
fn star_descents(cx: &mut Ctx<'_>) {
    let mut fails = Vec::new();
    for e in 1..=cx.t.n() {
        let mut targets: Vec<_> = cx
            .lines
            .right_going(e, Label::Star)
            .map(|l| cx.t.box_of(l.right))
            .collect();
        targets.sort_by_key(|b| b.col);
        let start = cx.row(e);
        if targets.iter().enumerate().any(|(i, b)| b.row != start + i) {
            fails.push((e, format!("*-line targets {targets:?} from row {start}")));
        }
    }
    for (e, detail) in fails {
        cx.fail(AuditClause::StarDescent, e, detail);
    }
}

/// The left-going 1-line into each box is read off the neighbouring cells
/// of the composition tableau.
fn left_one_cross_check(cx: &mut Ctx<'_>, grid: &CellGrid) {
    let mut fails = Vec::new();
    for e in 1..=cx.t.n() {
        let b = cx.t.box_of(e);
        let expected = if b.col == 1 {
            None
        } else {
            grid.get(b.row, b.col - 1).and_then(|side| {
                if grid.get(b.row + 1, b.col) != Some(side) {
                    Some(side)
                } else {
                    grid.get(b.row + 1, b.col - 1)
                }
            })
        };
        let found = cx.lefts(e, Label::One);
        if found != expected.into_iter().collect::<Vec<_>>() {
            fails.push((e, format!("expected left 1-line from {expected:?}, found {found:?}")));
        }
    }
    for (e, detail) in fails {
        cx.fail(AuditClause::LeftOneCrossCheck, e, detail);
    }
}

/// Entries without a right-going 1-line are exactly the oracle's extremal set.
fn extremal_agreement(cx: &mut Ctx<'_>, d: Diagram<'_>) {
    let report = extremal_report(d, cx.t);
    let mut fails = Vec::new();
    for e in 1..=cx.t.n() {
        let from_lines = cx.rights(e).is_empty();
        if from_lines != report.right_extremal[e - 1] {
            let oracle = report.right_extremal[e - 1];
            fails.push((e, format!("no right 1-line: {from_lines}, oracle extremal: {oracle}")));
        }
    }
    for (e, detail) in fails {
        cx.fail(AuditClause::Extremal, e, detail);
    }
}
