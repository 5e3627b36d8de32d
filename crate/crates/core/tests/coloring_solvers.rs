mod common;

use common::{arb_digraph, arb_graph, chromatic_oracle, dichromatic_oracle, has_cycle, matrix};
use dirminor::coloring::{chromatic_number, dichromatic_number, find_monochromatic_cycle, is_k_dicolorable};
use dirminor::generate::{bidirected_complete, directed_cycle, random_digraph, random_tournament, rng};
use dirminor::iso::nonisomorphic_digraphs;
use dirminor::{biorient, Digraph, Error, Graph};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn known_values() {
    assert_eq!(dichromatic_number(&Digraph::new(0)).unwrap().0, 0);
    assert_eq!(dichromatic_number(&Digraph::new(3)).unwrap().0, 1);
    assert_eq!(dichromatic_number(&directed_cycle(7).unwrap()).unwrap().0, 2);
    assert_eq!(dichromatic_number(&bidirected_complete(7)).unwrap().0, 7);
    assert_eq!(chromatic_number(&Graph::complete(5)).unwrap().0, 5);
    assert_eq!(chromatic_number(&Graph::new(0)).unwrap().0, 0);
}

#[test]
fn k_dicolorability_edges() {
    let c3 = directed_cycle(3).unwrap();
    assert!(matches!(is_k_dicolorable(&c3, 0), Err(Error::InvalidInput(_))));
    assert!(is_k_dicolorable(&c3, 1).unwrap().is_none());
    let w = is_k_dicolorable(&c3, 2).unwrap().unwrap();
    assert!(w.is_valid_for(&c3));
    assert!(matches!(dichromatic_number(&Digraph::new(65)), Err(Error::TooLarge { .. })));
}

#[test]
fn matches_partition_oracle_on_small_classes() {
    for n in 0..=4 {
        for d in nonisomorphic_digraphs(n).unwrap() {
            let (k, w) = dichromatic_number(&d).unwrap();
            assert_eq!(k, dichromatic_oracle(&d), "{d:?}");
            assert!(w.is_valid_for(&d));
        }
    }
}

#[test]
fn matches_partition_oracle_on_random_digraphs() {
    let mut r = rng(2024);
    for _ in 0..120 {
        let n = r.gen_range(1..=8);
        let d = if r.gen_bool(0.2) {
            random_tournament(n, &mut r)
        } else {
            let p = r.gen_range(0.1..0.95);
            random_digraph(n, p, &mut r)
        };
        assert_eq!(dichromatic_number(&d).unwrap().0, dichromatic_oracle(&d), "{d:?}");
    }
}

#[test]
fn monochromatic_cycle_is_shortest() {
    let d = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 1)]).unwrap();
    let cycle = find_monochromatic_cycle(&d, &[0; 5]).unwrap().unwrap();
    assert_eq!(cycle.len(), 2);
    assert!(find_monochromatic_cycle(&d, &[0, 1, 0, 1, 0]).unwrap().is_none());
    assert!(find_monochromatic_cycle(&d, &[0, 1]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bioriented_dichromatic_equals_chromatic(g in arb_graph(8)) {
        let (k, w) = dichromatic_number(&biorient(&g)).unwrap();
        let (c, pc) = chromatic_number(&g).unwrap();
        prop_assert_eq!(k, c);
        prop_assert_eq!(c, chromatic_oracle(&g));
        prop_assert!(pc.is_valid_for(&g));
        prop_assert!(w.is_valid_for(&biorient(&g)));
    }

    #[test]
    fn witness_classes_are_acyclic(d in arb_digraph(9)) {
        let (k, w) = dichromatic_number(&d).unwrap();
        let m = matrix(&d);
        prop_assert_eq!(w.colors_used(), k);
        for class in w.classes() {
            prop_assert!(!has_cycle(&m, class.as_slice()));
        }
        if k >= 2 {
            prop_assert!(is_k_dicolorable(&d, k - 1).unwrap().is_none());
        }
    }

    #[test]
    fn monochromatic_cycles_are_real(d in arb_digraph(8), seed in any::<u64>()) {
        let mut r = rng(seed);
        let colors: Vec<usize> = d.vertices().map(|_| r.gen_range(0..2)).collect();
        match find_monochromatic_cycle(&d, &colors).unwrap() {
            Some(c) => {
                prop_assert!(c.iter().all(|&v| colors[v] == colors[c[0]]));
                let closed: Vec<usize> = c.iter().copied().chain([c[0]]).collect();
                prop_assert!(closed.windows(2).all(|w| d.has_arc(w[0], w[1])));
            }
            None => {
                let m = matrix(&d);
                for col in 0..2 {
                    let class: Vec<usize> = d.vertices().filter(|&v| colors[v] == col).collect();
                    prop_assert!(!has_cycle(&m, &class));
                }
            }
        }
    }
}
