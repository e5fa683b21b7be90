//! Checks over a composition's tableau, composition tableau and line family.
//!
//! [`run_suite`] runs every check in a fixed order; each may be fed a line
//! family or composition tableau other than the computed one, which is how
//! negative controls are exercised.

pub mod audit;
pub mod chain_cover;
pub mod equivalence;
pub mod field;
pub mod rank;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lines::{build_section, read_lines, Coord, LineSet};
use crate::model::{BoxCoord, Composition, NeighborPair};
use crate::propagation::{grid_is_semistandard, propagate_diagram, CellGrid};
use crate::staircase::OracleError;

pub use audit::{structural_audit, AuditReport, HopOver};
pub use chain_cover::{chain_cover_check, ChainCover};
pub use equivalence::{equivalence_check, equivalence_check_grid, EquivalenceReport};
pub use rank::{rank_check, RankCertificate, RankError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditClause {
    LineShape,
    InteriorLeftOne,
    WindowRightOne,
    ColumnDiscipline,
    StarDescent,
    LeftOneCrossCheck,
    Extremal,
}

impl fmt::Display for AuditClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditClause::LineShape => "line-shape",
            AuditClause::InteriorLeftOne => "interior-left-one",
            AuditClause::WindowRightOne => "window-right-one",
            AuditClause::ColumnDiscipline => "column-discipline",
            AuditClause::StarDescent => "star-descent",
            AuditClause::LeftOneCrossCheck => "left-one-cross-check",
            AuditClause::Extremal => "extremal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Violation {
    #[error("composition tableau is not semistandard")]
    NotSemistandard,
    #[error("composition tableau differs from the tableau at {at}")]
    Restriction { at: BoxCoord },
    #[error("entry {entry} occupies columns {columns:?}, not an interval from its own column")]
    FootprintNotInterval { entry: usize, columns: Vec<usize> },
    #[error("{stars} *-lines but {pairs} neighbouring pairs")]
    StarCount { stars: usize, pairs: usize },
    #[error("entry {entry} has degrees (right 1, left 1, left *) = {degrees:?}")]
    Degree {
        entry: usize,
        degrees: (usize, usize, usize),
    },
    #[error("pair {pair}: {} covers found, expected exactly one", covers.len())]
    CoverCount {
        pair: NeighborPair,
        covers: Vec<Vec<Vec<usize>>>,
    },
    #[error("pair {pair}: bottom box {bottom} has left-going *-lines {found:?}")]
    PairStar {
        pair: NeighborPair,
        bottom: usize,
        found: Vec<Coord>,
    },
    #[error("pair {pair}: cover uses *-lines {found:?}, expected only {expected:?}")]
    CoverStar {
        pair: NeighborPair,
        expected: Coord,
        found: Vec<Coord>,
    },
    #[error("audit {clause} at entry {entry}: {detail}")]
    Audit {
        clause: AuditClause,
        entry: usize,
        detail: String,
    },
    #[error("prefix {prefix}: composition map {propagation:?}, oracle {oracle:?}")]
    MapMismatch {
        prefix: usize,
        propagation: Vec<usize>,
        oracle: Vec<usize>,
    },
    #[error("prefix {prefix}: composition map {map:?} repeats a nonzero value")]
    MapNotDistinct { prefix: usize, map: Vec<usize> },
    #[error("entry {entry}: composition tableau cells {tableau:?}, oracle footprint {oracle:?}")]
    FootprintMismatch {
        entry: usize,
        tableau: Vec<BoxCoord>,
        oracle: Vec<BoxCoord>,
    },
    #[error("oracle: {0}")]
    Oracle(OracleError),
    #[error("rank defects {defects:?} differ from {expected} (seed {seed}); investigate")]
    Rank {
        defects: Vec<usize>,
        expected: usize,
        seed: u64,
    },
}

/// Malformed externally supplied data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line ({left},{right}) has an end point outside 1..={n}")]
    LineOutOfRange { left: usize, right: usize, n: usize },
    #[error("grid has {cols} columns, composition has {k}")]
    GridShape { cols: usize, k: usize },
    #[error(transparent)]
    Rank(#[from] RankError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOptions {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            trials: 3,
            prime: field::MERSENNE_61,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub rank: Option<RankOptions>,
    pub lines: Option<LineSet>,
    pub grid: Option<CellGrid>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub composition: Composition,
    pub checks: Vec<CheckResult>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<RankCertificate>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Collector {
    checks: Vec<CheckResult>,
    violations: Vec<Violation>,
}

impl Collector {
    fn record(&mut self, name: &str, details: Vec<String>, violations: Vec<Violation>) {
        let mut details = details;
        details.extend(violations.iter().map(ToString::to_string));
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: violations.is_empty(),
            details,
        });
        self.violations.extend(violations);
    }
}

const CHECK_NAMES: [&str; 9] = [
    "restriction",
    "semistandard",
    "interval-footprints",
    "star-count",
    "degree-bounds",
    "chain-covers",
    "structural-audit",
    "equivalence",
    "rank",
];

/// Names of the checks in the order [`run_suite`] reports them.
pub fn check_names() -> &'static [&'static str] {
    &CHECK_NAMES
}

pub fn run_suite(c: &Composition, opts: &SuiteOptions) -> Result<SuiteReport, InputError> {
    let d = c.diagram();
    let (t, order, ext) = propagate_diagram(d);
    let n = c.n();
    let lines = match &opts.lines {
        Some(l) => {
            if let Some(bad) = l.iter().find(|l| l.left == 0 || l.right == 0 || l.left > n || l.right > n) {
                return Err(InputError::LineOutOfRange {
                    left: bad.left,
                    right: bad.right,
                    n,
                });
            }
            l.clone()
        }
        None => read_lines(&ext, &t),
    };
    let grid = match &opts.grid {
        Some(g) => {
            if g.cols() != c.k() {
                return Err(InputError::GridShape { cols: g.cols(), k: c.k() });
            }
            g
        }
        None => ext.grid(),
    };
    let mut col = Collector {
        checks: Vec::new(),
        violations: Vec::new(),
    };

    let restriction: Vec<Violation> = (1..=n)
        .map(|e| t.box_of(e))
        .filter(|b| grid.get(b.row, b.col) != t.entry_at(*b))
        .map(|at| Violation::Restriction { at })
        .take(1)
        .collect();
    col.record(CHECK_NAMES[0], vec![], restriction);

    let semi = if grid_is_semistandard(grid, &order) {
        vec![]
    } else {
        vec![Violation::NotSemistandard]
    };
    col.record(CHECK_NAMES[1], vec![], semi);

    let cells = equivalence::cells_by_entry(grid, n);
    let intervals = cells
        .iter()
        .enumerate()
        .filter_map(|(i, cs)| {
            let mut columns: Vec<usize> = cs.iter().map(|b| b.col).collect();
            columns.dedup();
            let first = t.box_of(i + 1).col;
            let ok = columns.iter().enumerate().all(|(j, &c)| c == first + j);
            (!ok).then_some(Violation::FootprintNotInterval {
                entry: i + 1,
                columns,
            })
        })
        .collect();
    col.record(CHECK_NAMES[2], vec![], intervals);

    let pairs = d.neighboring_pairs().len();
    let stars = lines.count(crate::lines::Label::Star);
    let count = if stars == pairs {
        vec![]
    } else {
        vec![Violation::StarCount { stars, pairs }]
    };
    col.record(CHECK_NAMES[3], vec![format!("{stars} *-lines, {pairs} pairs")], count);

    let degrees = lines
        .degrees(n)
        .into_iter()
        .enumerate()
        .filter(|(_, (a, b, c))| *a > 1 || *b > 1 || *c > 1)
        .map(|(i, degrees)| Violation::Degree {
            entry: i + 1,
            degrees,
        })
        .collect();
    col.record(CHECK_NAMES[4], vec![], degrees);

    match chain_cover_check(d, &t, &lines) {
        Ok(covers) => col.record(CHECK_NAMES[5], vec![format!("{} pairs covered", covers.len())], vec![]),
        Err(v) => col.record(CHECK_NAMES[5], vec![], v),
    }

    match structural_audit(d, &t, grid, &lines) {
        Ok(r) => col.record(
            CHECK_NAMES[6],
            r.exemptions
                .iter()
                .map(|h| {
                    format!(
                        "pair {}: entry {} exempt as left end of *-line {:?}",
                        h.pair, h.entry, h.star_line
                    )
                })
                .collect(),
            vec![],
        ),
        Err(v) => col.record(CHECK_NAMES[6], vec![], v),
    }

    match equivalence_check_grid(d, &t, grid) {
        Ok(r) => col.record(CHECK_NAMES[7], vec![format!("composition map {:?}", r.map)], vec![]),
        Err(v) => col.record(CHECK_NAMES[7], vec![], v),
    }

    let mut certificate = None;
    if let Some(ro) = &opts.rank {
        let section = build_section(&lines);
        let cert = rank_check(c, &section, ro.trials, ro.prime, ro.seed)?;
        let v = if cert.passed {
            vec![]
        } else {
            vec![Violation::Rank {
                defects: cert.defects(),
                expected: cert.expected_defect,
                seed: cert.seed,
            }]
        };
        col.record(
            CHECK_NAMES[8],
            vec![format!("defects {:?}, expected {}", cert.defects(), cert.expected_defect)],
            v,
        );
        certificate = Some(cert);
    }

    Ok(SuiteReport {
        composition: c.clone(),
        checks: col.checks,
        violations: col.violations,
        rank: certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BoxCoord;

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn worked_example_passes() {
        let opts = SuiteOptions {
            rank: Some(RankOptions::default()),
            ..Default::default()
        };
        let r = run_suite(&comp(&[1, 2, 4, 3, 2, 3, 4, 1, 1, 2]), &opts).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, check_names());
        assert!(r.rank.unwrap().passed);
    }

    #[test]
    fn rank_is_optional() {
        let r = run_suite(&comp(&[3, 1]), &SuiteOptions::default()).unwrap();
        assert!(r.passed());
        assert!(r.check("rank").is_none());
        assert_eq!(r.checks.len(), check_names().len() - 1);
    }

    #[test]
    fn swapped_grid_fails() {
        let c = comp(&[2, 2, 1, 1]);
        let (_, _, e) = propagate_diagram(c.diagram());
        let mut g = e.grid().clone();
        g.swap(BoxCoord::new(1, 1), BoxCoord::new(1, 2));
        let r = run_suite(&c, &SuiteOptions { grid: Some(g), ..Default::default() }).unwrap();
        assert!(!r.check("semistandard").unwrap().passed);
        assert!(!r.passed());
    }

    #[test]
    fn rejects_malformed_overrides() {
        let c = comp(&[2, 1]);
        let (t, _, e) = propagate_diagram(comp(&[2, 1, 1]).diagram());
        let lines = read_lines(&e, &t);
        let opts = SuiteOptions { lines: Some(lines), ..Default::default() };
        assert!(matches!(run_suite(&c, &opts), Err(InputError::LineOutOfRange { .. })));
        let opts = SuiteOptions { grid: Some(CellGrid::new(3, 4)), ..Default::default() };
        assert_eq!(run_suite(&c, &opts), Err(InputError::GridShape { cols: 3, k: 2 }));
    }
}
