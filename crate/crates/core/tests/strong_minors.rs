mod common;

use common::strong_model_oracle;
use dirminor::butterfly::inflate;
use dirminor::coloring::dichromatic_number;
use dirminor::generate::{bidirected_complete, directed_cycle, random_digraph, random_graph, rng};
use dirminor::iso::nonisomorphic_digraphs;
use dirminor::strong_minor::{
    clique_minor_pipeline, clique_minor_run, compose_models, find_clique_minor, find_strengthened_model,
    find_strong_model, hadwiger_threshold, promote_to_bioriented, StrongMinorModel,
};
use dirminor::{biorient, Digraph, Error, Graph, VertexSet};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn search_agrees_with_label_enumeration() {
    let patterns = [
        Digraph::new(1),
        bidirected_complete(2),
        directed_cycle(3).unwrap(),
        Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap(),
        bidirected_complete(3),
    ];
    for n in 1..=4 {
        for host in nonisomorphic_digraphs(n).unwrap() {
            for pattern in &patterns {
                let found = find_strong_model(&host, pattern).unwrap();
                assert_eq!(found.is_some(), strong_model_oracle(&host, pattern), "{host:?} {pattern:?}");
                if let Some(m) = found {
                    m.check(false).unwrap();
                }
            }
        }
    }
}

#[test]
fn search_agrees_on_random_hosts() {
    let mut r = rng(17);
    for _ in 0..60 {
        let n = r.gen_range(3..=6);
        let host = random_digraph(n, r.gen_range(0.2..0.8), &mut r);
        let pattern = random_digraph(3, 0.5, &mut r);
        let found = find_strong_model(&host, &pattern).unwrap();
        assert_eq!(found.is_some(), strong_model_oracle(&host, &pattern));
    }
}

#[test]
fn threshold_and_guards() {
    assert_eq!(hadwiger_threshold(4), Some(4));
    assert_eq!(hadwiger_threshold(7), None);
    assert!(matches!(clique_minor_pipeline(&bidirected_complete(3), 0), Err(Error::InvalidInput(_))));
    assert!(matches!(clique_minor_pipeline(&bidirected_complete(3), 7), Err(Error::Unsupported(_))));
}

#[test]
fn pipeline_on_bidirected_cliques() {
    // Parts are digons, so the quotient of the bidirected K_{2t} is K_t.
    for t in 1..=4 {
        let d = bidirected_complete(2 * t);
        let model = clique_minor_pipeline(&d, t).unwrap().unwrap();
        assert_eq!(model.pattern, bidirected_complete(t));
        model.check(false).unwrap();
        assert!(clique_minor_pipeline(&d, t + 1).unwrap().is_none());
    }
}

#[test]
fn pipeline_reports_unforced() {
    let run = clique_minor_run(&directed_cycle(5).unwrap(), 2).unwrap();
    assert!(run.model.is_none());
    assert_eq!(run.quotient_coloring().k, 1);
}

#[test]
fn strengthened_models_on_small_cliques() {
    let k3 = bidirected_complete(3);
    assert!(find_strong_model(&bidirected_complete(4), &k3).unwrap().is_some());
    assert!(find_strengthened_model(&bidirected_complete(4), &k3).unwrap().is_none());
    let m = find_strengthened_model(&bidirected_complete(6), &k3).unwrap().unwrap();
    m.check(true).unwrap();
}

#[test]
fn undirected_clique_minor_search() {
    assert!(find_clique_minor(&Graph::complete(3), 4).unwrap().is_none());
    let petersen = Graph::from_edges(
        10,
        [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ],
    )
    .unwrap();
    let m = find_clique_minor(&petersen, 5).unwrap().unwrap();
    m.check().unwrap();
    let promoted = promote_to_bioriented(&m, &biorient(&petersen)).unwrap();
    promoted.check(false).unwrap();
}

#[test]
fn composition_is_transitive() {
    let mut r = rng(5);
    for _ in 0..30 {
        let inner = inflate(&bidirected_complete(4), 3, &mut r);
        let outer = StrongMinorModel {
            host: bidirected_complete(4),
            pattern: bidirected_complete(2),
            branch_sets: vec![VertexSet::from(vec![0, 2]), VertexSet::from(vec![1, 3])],
        };
        let composed = compose_models(&outer, &inner).unwrap();
        composed.check(false).unwrap();
        assert_eq!(composed.host, inner.host);
    }
    let wrong = StrongMinorModel::identity(&directed_cycle(3).unwrap());
    let inner = StrongMinorModel::identity(&bidirected_complete(3));
    assert!(compose_models(&wrong, &inner).is_err());
}

#[test]
fn json_round_trip() {
    let m = inflate(&directed_cycle(3).unwrap(), 3, &mut rng(1));
    let back: StrongMinorModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inflations_verify_and_are_found(seed in any::<u64>(), max_part in 1usize..=4) {
        let mut r = rng(seed);
        let pattern = random_digraph(3, 0.5, &mut r);
        let model = inflate(&pattern, max_part, &mut r);
        prop_assert!(model.is_valid(false));
        prop_assert!(find_strong_model(&model.host, &pattern).unwrap().is_some());
    }

    #[test]
    fn pipeline_models_verify(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(4..=9);
        let g = random_graph(n, r.gen_range(0.5..0.95), &mut r);
        let d = biorient(&g);
        let (k, _) = dichromatic_number(&d).unwrap();
        let t = (k.div_ceil(2)).clamp(1, 6);
        let run = clique_minor_run(&d, t).unwrap();
        // The lifted colouring uses at most twice the quotient's colours.
        prop_assert!(2 * run.quotient_coloring().k >= k);
        let model = run.model.unwrap();
        prop_assert!(model.is_valid(false));
        prop_assert_eq!(model.pattern, bidirected_complete(t));
    }
}
