//! The JSON report and its plain-text tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lines::{build_section, read_lines, Label, LineSet, WeierstrassSection};
use crate::model::Composition;
use crate::propagation::{propagate_diagram, ExtendedTableau};
use crate::verify::SuiteReport;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedCell {
    pub entry: usize,
    /// The cell lies outside the diagram.
    pub repeat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub composition: Composition,
    pub n: usize,
    pub tableau: Vec<Vec<Option<usize>>>,
    pub extended: Vec<Vec<Option<ExtendedCell>>>,
    pub lines: LineSet,
    pub section: WeierstrassSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<SuiteReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

pub fn extended_rows(e: &ExtendedTableau) -> Vec<Vec<Option<ExtendedCell>>> {
    let g = e.grid();
    (1..=g.used_rows())
        .map(|r| {
            (1..=g.cols())
                .map(|c| {
                    g.get(r, c).map(|entry| ExtendedCell {
                        entry,
                        repeat: e.is_repeat(r, c),
                    })
                })
                .collect()
        })
        .collect()
}

impl Report {
    pub fn build(c: &Composition) -> Self {
        let (t, _, e) = propagate_diagram(c.diagram());
        let lines = read_lines(&e, &t);
        let section = build_section(&lines);
        Self {
            schema: SCHEMA,
            composition: c.clone(),
            n: c.n(),
            tableau: t.to_rows(),
            extended: extended_rows(&e),
            lines,
            section,
            verification: None,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn lines_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "composition {}  n = {}", self.composition, self.n);
        let _ = writeln!(out, "{:>5} {:>5}  {:<5} {:<9} to", "i", "j", "label", "from");
        for l in self.lines.iter() {
            let _ = writeln!(
                out,
                "{:>5} {:>5}  {:<5} {:<9} {}",
                l.left,
                l.right,
                l.label.to_string(),
                l.left_box.to_string(),
                l.right_box.to_string()
            );
        }
        let _ = writeln!(
            out,
            "{} lines labelled 1, {} labelled *",
            self.lines.count(Label::One),
            self.lines.count(Label::Star)
        );
        out
    }

    pub fn section_table(&self) -> String {
        let s = &self.section;
        let mut out = String::new();
        let _ = writeln!(out, "composition {}  n = {}", self.composition, self.n);
        let _ = writeln!(out, "e:      {}", join_pairs(&s.e));
        let _ = writeln!(out, "V:      {}", join_pairs(&s.v));
        let quads: Vec<String> = s
            .quadruplets
            .iter()
            .map(|q| format!("({},{},{},{})", q.0, q.1, q.2, q.3))
            .collect();
        let _ = writeln!(out, "VS:     {}", quads.join(" "));
        let _ = writeln!(out, "extras: {}", join_pairs(&s.vs_extras));
        for (q, new) in s.extra_enlarges_span() {
            if !new {
                let _ = writeln!(
                    out,
                    "note: extra ({},{}) of ({},{},{},{}) is already spanned",
                    q.1, q.3, q.0, q.1, q.2, q.3
                );
            }
        }
        out
    }
}

fn join_pairs<'a>(set: impl IntoIterator<Item = &'a (usize, usize)>) -> String {
    set.into_iter()
        .map(|(i, j)| format!("({i},{j})"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c: Composition = "1,2,4,3,2,3,4,1,1,2".parse().unwrap();
        let r = Report::build(&c);
        let json = r.to_json();
        assert_eq!(Report::from_json(&json).unwrap(), r);
        assert_eq!(Report::build(&c).to_json(), json);
        assert!(json.starts_with("{\n  \"schema\": 1,"));
        assert!(!json.contains("timing"));
    }

    #[test]
    fn repeats_are_flagged() {
        let r = Report::build(&"1,2,1".parse().unwrap());
        assert_eq!(r.extended[1][2], Some(ExtendedCell { entry: 2, repeat: true }));
        assert_eq!(r.extended[1][1], Some(ExtendedCell { entry: 3, repeat: false }));
        let single = Report::build(&"5".parse().unwrap());
        let plain: Vec<Vec<Option<usize>>> = single
            .extended
            .iter()
            .map(|row| row.iter().map(|c| c.map(|c| c.entry)).collect())
            .collect();
        assert_eq!(plain, single.tableau);
    }

    #[test]
    fn tables() {
        let r = Report::build(&"1,1,1".parse().unwrap());
        let s = r.section_table();
        assert!(s.contains("e:      (1,3)\n"));
        assert!(s.contains("V:      (1,2) (2,3)\n"));
        assert!(r.lines_table().ends_with("1 lines labelled 1, 2 labelled *\n"));
    }
}
