//! Agreement between the insertion algorithm and the staircase oracle.

use serde::{Deserialize, Serialize};

use super::Violation;
use crate::model::{tableau_of, BoxCoord, Composition, Diagram, Tableau};
use crate::propagation::{composition_map, propagate_diagram, CellGrid};
use crate::staircase::{all_footprints, oracle_composition_map};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub prefixes: usize,
    pub entries: usize,
    /// Composition map of the full diagram.
    pub map: Vec<usize>,
}

/// Cells of each entry (index `entry - 1`) in column order.
pub fn cells_by_entry(grid: &CellGrid, n: usize) -> Vec<Vec<BoxCoord>> {
    let mut out = vec![Vec::new(); n];
    for col in 1..=grid.cols() {
        for (row, e) in grid.column(col) {
            if (1..=n).contains(&e) {
                out[e - 1].push(BoxCoord::new(row, col));
            }
        }
    }
    out
}

/// Prefix composition maps and per-entry footprints, checked against `grid`.
pub fn equivalence_check_grid(
    d: Diagram<'_>,
    t: &Tableau,
    grid: &CellGrid,
) -> Result<EquivalenceReport, Vec<Violation>> {
    let mut violations = Vec::new();
    let mut map = Vec::new();
    for m in 1..=d.k() {
        let p = d.prefix(m);
        let probe = composition_map(p).0;
        let oracle = oracle_composition_map(p, &tableau_of(p)).values;
        let mut nonzero: Vec<usize> = probe.iter().copied().filter(|&v| v != 0).collect();
        let count = nonzero.len();
        nonzero.sort_unstable();
        nonzero.dedup();
        if nonzero.len() != count {
            violations.push(Violation::MapNotDistinct {
                prefix: m,
                map: probe.clone(),
            });
        }
        if probe != oracle {
            violations.push(Violation::MapMismatch {
                prefix: m,
                propagation: probe.clone(),
                oracle,
            });
        }
        map = probe;
    }
    match all_footprints(d, t) {
        Ok(predicted) => {
            let actual = cells_by_entry(grid, t.n());
            for (i, (p, a)) in predicted.into_iter().zip(actual).enumerate() {
                if p != a {
                    violations.push(Violation::FootprintMismatch {
                        entry: i + 1,
                        tableau: a,
                        oracle: p,
                    });
                }
            }
        }
        Err(e) => violations.push(Violation::Oracle(e)),
    }
    if violations.is_empty() {
        Ok(EquivalenceReport {
            prefixes: d.k(),
            entries: t.n(),
            map,
        })
    } else {
        Err(violations)
    }
}

pub fn equivalence_check(c: &Composition) -> Result<EquivalenceReport, Vec<Violation>> {
    let d = c.diagram();
    let (t, _, e) = propagate_diagram(d);
    equivalence_check_grid(d, &t, e.grid())
}
