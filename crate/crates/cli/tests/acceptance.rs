//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use comptab::lines::{build_section, read_lines, Label, LineSet, Quadruplet};
use comptab::model::{BoxCoord, Composition};
use comptab::propagation::{composition_map, propagate_diagram};
use comptab::report::Report;
use comptab::staircase::oracle_composition_map;
use comptab::verify::field::MERSENNE_61;
use comptab::verify::chain_cover::window;
use comptab::verify::{chain_cover_check, run_suite, RankOptions, SuiteOptions, SuiteReport};
use rayon::prelude::*;
use serde_json::Value;

const WORKED: &str = "1,2,4,3,2,3,4,1,1,2";

type Outcome = Result<String, String>;

fn comp(s: &str) -> Composition {
    s.parse().unwrap()
}

fn pairs(v: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    v.iter().copied().collect()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn within(what: &str, took: Duration, limit: Duration) -> Result<(), String> {
    if took < limit {
        Ok(())
    } else {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    }
}

fn golden_lines() -> Outcome {
    let c = comp(WORKED);
    let start = Instant::now();
    let (t, _, e) = propagate_diagram(c.diagram());
    let lines = read_lines(&e, &t);
    let took = start.elapsed();
    expect(
        "1-lines",
        lines.coords(Label::One),
        pairs(&[
            (1, 2), (2, 4), (3, 5), (4, 8), (5, 9), (6, 10), (7, 15), (8, 11), (10, 12),
            (11, 13), (12, 14), (13, 16), (14, 17), (15, 18), (16, 21), (17, 20), (18, 23), (21, 22),
        ]),
    )?;
    expect(
        "*-lines",
        lines.coords(Label::Star),
        pairs(&[(9, 12), (9, 15), (9, 19), (16, 20), (20, 21), (20, 23)]),
    )?;
    expect("line count", lines.len(), 24)?;
    within("line extraction", took, Duration::from_millis(10))?;
    Ok(format!("18 + 6 lines exact in {took:?}"))
}

fn golden_quadruplets() -> Outcome {
    let c = comp(WORKED);
    let (t, _, e) = propagate_diagram(c.diagram());
    let s = build_section(&read_lines(&e, &t));
    expect(
        "quadruplets",
        s.quadruplets.clone(),
        vec![Quadruplet(5, 9, 12, 14), Quadruplet(5, 9, 15, 18), Quadruplet(17, 20, 21, 22)],
    )?;
    expect("extras", s.vs_extras, pairs(&[(9, 14), (9, 18), (20, 22)]))?;
    Ok("3 quadruplets, extras (9,14) (9,18) (20,22)".into())
}

fn golden_second_example() -> Outcome {
    let c = comp("1,2,1,1,1,2,3");
    let (t, _, e) = propagate_diagram(c.diagram());
    let l = read_lines(&e, &t);
    expect(
        "1-lines",
        l.coords(Label::One),
        pairs(&[(1, 2), (3, 4), (6, 7), (7, 9), (8, 10), (2, 5), (4, 6), (5, 11)]),
    )?;
    expect("*-lines", l.coords(Label::Star), pairs(&[(2, 4), (4, 5), (5, 6), (5, 8)]))?;
    Ok("8 + 4 lines exact".into())
}

fn golden_repeats() -> Outcome {
    let c = comp("2,1,1,2,2");
    let (t, _, e) = propagate_diagram(c.diagram());
    let mut extras = Vec::new();
    for col in 1..=c.k() {
        for (row, entry) in e.grid().column(col) {
            if t.entry(row, col).is_none() {
                extras.push((entry, BoxCoord::new(row, col)));
            }
        }
    }
    expect(
        "extra entries of 2,1,1,2,2",
        extras,
        vec![
            (2, BoxCoord::new(2, 2)),
            (3, BoxCoord::new(2, 3)),
            (3, BoxCoord::new(3, 4)),
            (6, BoxCoord::new(3, 5)),
        ],
    )?;
    let c = comp("2,1,1,2,1");
    let (_, _, e) = propagate_diagram(c.diagram());
    let last: Vec<usize> = e.grid().column(5).map(|(_, v)| v).collect();
    expect("last column of 2,1,1,2,1", last, vec![7, 5, 3])?;
    Ok("four extras; last column 7,5,3".into())
}

fn golden_map() -> Outcome {
    let c = comp("2,1");
    let (d, t) = comptab::build_tableau(&c);
    expect("propagation", composition_map(d).values().to_vec(), vec![3, 2, 0])?;
    expect("staircase oracle", oracle_composition_map(d, &t).values, vec![3, 2, 0])?;
    Ok("(3,2,0) by both".into())
}

fn all_up_to(n: usize) -> Vec<Composition> {
    (1..=n).flat_map(Composition::all_of).collect()
}

fn failures(reports: &[SuiteReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}: {}", r.composition, r.violations[0]))
        .collect()
}

fn exhaustive_sweep() -> Outcome {
    let all = all_up_to(11);
    expect("compositions", all.len(), 2047)?;
    let opts = SuiteOptions::default();
    let start = Instant::now();
    let serial: Vec<SuiteReport> = all.iter().map(|c| run_suite(c, &opts).unwrap()).collect();
    let serial_time = start.elapsed();
    let start = Instant::now();
    let parallel: Vec<SuiteReport> = all.par_iter().map(|c| run_suite(c, &opts).unwrap()).collect();
    let parallel_time = start.elapsed();
    let bad = failures(&serial);
    if !bad.is_empty() {
        return Err(format!("{} violating compositions, first {}", bad.len(), bad[0]));
    }
    expect("parallel agrees with serial", &parallel, &serial)?;
    let checks: Vec<&str> = serial[0].checks.iter().map(|c| c.name.as_str()).collect();
    within("single-threaded sweep", serial_time, Duration::from_secs(120))?;
    within("parallel sweep", parallel_time, Duration::from_secs(30))?;
    Ok(format!(
        "2047 compositions, 0 violations over {}; {serial_time:.2?} serial, {parallel_time:.2?} parallel",
        checks.join(",")
    ))
}

fn rank_certificates() -> Outcome {
    let all = all_up_to(7);
    let opts = SuiteOptions {
        rank: Some(RankOptions {
            trials: 3,
            prime: MERSENNE_61,
            seed: 20_240_601,
        }),
        ..Default::default()
    };
    let start = Instant::now();
    let reports: Vec<SuiteReport> = all.iter().map(|c| run_suite(c, &opts).unwrap()).collect();
    let took = start.elapsed();
    let mut bad = Vec::new();
    for r in &reports {
        let cert = r.rank.as_ref().ok_or("missing certificate")?;
        if !cert.passed || cert.ranks.len() != 3 || cert.prime != MERSENNE_61 {
            bad.push(format!("{}: defects {:?}, expected {}", r.composition, cert.defects(), cert.expected_defect));
        }
    }
    if !bad.is_empty() {
        return Err(format!("{} failing certificates, first {}", bad.len(), bad[0]));
    }
    within("rank certificates", took, Duration::from_secs(30))?;
    Ok(format!("{} compositions x 3 trials, defect = #pairs, {took:.2?}", reports.len()))
}

fn comptab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_comptab"))
        .args(args)
        .output()
        .expect("comptab binary runs")
}

fn check_failed(out: &std::process::Output, name: &str) -> Result<(), String> {
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON: {e}"))?;
    let checks = v["verification"]["checks"].as_array().ok_or("no checks")?;
    let check = checks.iter().find(|c| c["name"] == name).ok_or("check missing")?;
    if check["passed"] == false {
        Ok(())
    } else {
        Err(format!("{name} still passes"))
    }
}

fn negative_controls() -> Outcome {
    let dir = std::env::temp_dir().join(format!("comptab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let file = dir.join("mutated.json");
    let path = file.to_str().unwrap().to_string();

    let c = comp(WORKED);
    let report = Report::build(&c);
    let (t, _, e) = propagate_diagram(c.diagram());
    let ones: Vec<(usize, usize)> = report.lines.coords(Label::One).into_iter().collect();
    let mut missed = Vec::new();
    for &(i, j) in &ones {
        let reduced: LineSet = report.lines.without(i, j);
        let cover_detects = chain_cover_check(c.diagram(), &t, &reduced).is_err();
        let mut mutated = report.clone();
        mutated.lines = reduced;
        std::fs::write(&file, mutated.to_json()).map_err(|e| e.to_string())?;
        let out = comptab(&["verify", WORKED, "--no-rank", "--json", "--lines", &path]);
        expect(&format!("exit without ({i},{j})"), out.status.code(), Some(1))?;
        if cover_detects {
            check_failed(&out, "chain-covers").map_err(|m| format!("without ({i},{j}): {m}"))?;
        } else {
            let windows = c
                .diagram()
                .neighboring_pairs()
                .iter()
                .filter(|p| {
                    let w = window(c.diagram(), p);
                    w.contains(&t.box_of(i)) && w.contains(&t.box_of(j))
                })
                .count();
            missed.push(format!("({i},{j}) (inside {windows} pair windows)"));
        }
    }

    let g = e.grid();
    let mut swaps = 0;
    for row in 1..=g.rows() {
        let cells: Vec<(usize, usize)> = g.row(row).collect();
        for w in cells.windows(2) {
            let ((ca, va), (cb, vb)) = (w[0], w[1]);
            if va == vb {
                continue;
            }
            let mut rows = report.extended.clone();
            let (a, b) = (rows[row - 1][ca - 1], rows[row - 1][cb - 1]);
            rows[row - 1][ca - 1] = b;
            rows[row - 1][cb - 1] = a;
            let mut mutated = report.clone();
            mutated.extended = rows;
            std::fs::write(&file, mutated.to_json()).map_err(|e| e.to_string())?;
            let out = comptab(&["verify", WORKED, "--no-rank", "--json", "--extended", &path]);
            let what = format!("swap of {va} and {vb} in row {row}");
            expect(&format!("exit after {what}"), out.status.code(), Some(1))?;
            check_failed(&out, "semistandard").map_err(|m| format!("{what}: {m}"))?;
            swaps += 1;
        }
    }
    std::fs::remove_dir_all(&dir).map_err(|e| e.to_string())?;
    if swaps == 0 {
        return Err("no row swaps exercised".into());
    }
    let summary = format!(
        "all {} single 1-line removals and {swaps} row swaps exit 1",
        ones.len()
    );
    if missed.is_empty() {
        Ok(format!("{summary}; chain covers break for every removal"))
    } else {
        Err(format!(
            "chain_cover_check still passes without {}; {summary}",
            missed.join(", ")
        ))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden line set of the worked example", golden_lines),
        ("quadruplets and extras of the worked example", golden_quadruplets),
        ("line set of 1,2,1,1,1,2,3", golden_second_example),
        ("repeated entries of 2,1,1,2,2 and 2,1,1,2,1", golden_repeats),
        ("composition map of 2,1", golden_map),
        ("exhaustive sweep n <= 11", exhaustive_sweep),
        ("rank certificates n <= 7", rank_certificates),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        match outcome {
            Ok(msg) => println!("PASS [{}] {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
