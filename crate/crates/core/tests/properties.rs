use comptab::lines::{read_lines, Label};
use comptab::model::{Composition, MAX_N};
use comptab::propagation::{
    composition_map, composition_map_with_probe, is_semistandard, mirror_semistandard, propagate_diagram,
};
use comptab::verify::{run_suite, SuiteOptions};
use proptest::prelude::*;

fn compositions() -> impl Strategy<Value = Composition> {
    prop::collection::vec(1usize..=5, 1..=9).prop_map(|p| Composition::new(p).unwrap())
}

#[test]
fn exhaustive_suite_up_to_eleven() {
    let mut total = 0;
    for n in 1..=11 {
        let all = Composition::all_of(n);
        assert_eq!(all.len(), 1 << (n - 1));
        for c in all {
            let r = run_suite(&c, &SuiteOptions::default()).unwrap();
            assert!(r.passed(), "{c}: {:?}", r.violations);
            total += 1;
        }
    }
    assert_eq!(total, 2047);
}

proptest! {
    #[test]
    fn tableau_is_a_bijection(c in compositions()) {
        let (_, t) = comptab::build_tableau(&c);
        for e in 1..=c.n() {
            prop_assert_eq!(t.entry_at(t.box_of(e)), Some(e));
        }
    }

    #[test]
    fn precedence_within_columns(c in compositions()) {
        let d = c.diagram();
        let (t, o, _) = propagate_diagram(d);
        for col in 1..=c.k() {
            let entries: Vec<usize> = t.column(col).collect();
            for w in entries.windows(2) {
                prop_assert!(o.precedes(w[0], w[1]));
            }
        }
        prop_assert_eq!(o.sequence()[0], t.entry(1, c.k()).unwrap());
    }

    #[test]
    fn pair_count_formula(c in compositions()) {
        let d = c.diagram();
        let expected: usize = d.height_set().iter()
            .map(|h| c.parts().iter().filter(|&&p| p == *h).count() - 1)
            .sum();
        prop_assert_eq!(d.neighboring_pairs().len(), expected);
        for col in 1..=c.k() {
            let has = c.parts()[..col - 1].contains(&c.parts()[col - 1]);
            prop_assert_eq!(d.left_neighbor(col).is_some(), has);
        }
    }

    #[test]
    fn composition_tableau_shape(c in compositions()) {
        let d = c.diagram();
        let (t, o, e) = propagate_diagram(d);
        prop_assert!(is_semistandard(&e, &o));
        prop_assert!(mirror_semistandard(&e, &o).is_classical());
        for entry in 1..=c.n() {
            let tr = e.trajectory(entry);
            prop_assert_eq!(tr[0], t.box_of(entry));
            for w in tr.windows(2) {
                prop_assert_eq!(w[1].col, w[0].col + 1);
                prop_assert!(w[1].row == w[0].row || w[1].row == w[0].row + 1);
                if w[1].row == w[0].row + 1 {
                    prop_assert_eq!(d.height(w[1].col), w[0].row);
                    prop_assert!(d.left_neighbor(w[1].col).is_some());
                }
            }
        }
    }

    #[test]
    fn prefix_causality(c in compositions()) {
        let (_, _, full) = propagate_diagram(c.diagram());
        for j in 1..=c.k() {
            let p = c.prefix(j).unwrap();
            let (_, _, pe) = propagate_diagram(p.diagram());
            for col in 1..=j {
                let a: Vec<_> = pe.grid().column(col).collect();
                let b: Vec<_> = full.grid().column(col).collect();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn probe_stabilises(c in compositions()) {
        let d = c.diagram();
        let s = d.max_height();
        let map = composition_map(d);
        prop_assert_eq!(&map, &composition_map_with_probe(d, s + 5));
        prop_assert!(map.nonzero_distinct());
    }

    #[test]
    fn line_invariants(c in compositions()) {
        let (t, _, e) = propagate_diagram(c.diagram());
        let l = read_lines(&e, &t);
        prop_assert_eq!(l.count(Label::Star), c.diagram().neighboring_pairs().len());
        prop_assert!(l.coords(Label::One).is_disjoint(&l.coords(Label::Star)));
        for line in l.iter() {
            prop_assert!(line.left < line.right);
            prop_assert!(t.block_of(line.left) < t.block_of(line.right));
        }
        let sec = comptab::build_section(&l);
        prop_assert!(sec.quadruplets.len() <= l.count(Label::Star));
    }
}

#[test]
fn size_cap() {
    assert!(Composition::new(vec![1; MAX_N]).is_ok());
    assert!(Composition::new(vec![1; MAX_N + 1]).is_err());
}
