mod common;

use common::{arb_digraph, arb_graph};
use dirminor::butterfly::{extract_butterfly, inflate};
use dirminor::certificate::{verify, Certificate, CertificateDocument, CertificateInput};
use dirminor::coloring::dichromatic_number;
use dirminor::decomposition::certify_decomposition;
use dirminor::generate::{bidirected_complete, directed_cycle, rng};
use dirminor::io::{parse_digraph, parse_graph, write_digraph, write_graph};
use dirminor::strong_minor::clique_minor_pipeline;
use dirminor::subdivision::build_subdivision;
use dirminor::Error;
use proptest::prelude::*;

#[test]
fn parse_errors_name_their_line() {
    match parse_digraph("# header follows\n3 2\n0 1\n1 1\n") {
        Err(Error::Parse { line, message }) => {
            assert_eq!(line, 4);
            assert!(message.contains("loop"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

fn round_trip(doc: &CertificateDocument) {
    let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
    assert_eq!(&back, doc);
    verify(&back).unwrap();
}

#[test]
fn every_kind_round_trips() {
    let d = bidirected_complete(6);
    let (k, coloring) = dichromatic_number(&d).unwrap();
    round_trip(&CertificateDocument::new(
        CertificateInput::digraph(&d),
        Certificate::Dicoloring { dichromatic_number: k, coloring },
    ));
    round_trip(&CertificateDocument::new(
        CertificateInput::digraph(&d),
        Certificate::Decomposition(certify_decomposition(&d).unwrap()),
    ));
    let model = clique_minor_pipeline(&d, 3).unwrap().unwrap();
    round_trip(&CertificateDocument::new(
        CertificateInput::digraph(&d),
        Certificate::StrongModel { t: 3, model: model.clone() },
    ));
    let inflated = inflate(&bidirected_complete(4), 3, &mut rng(2));
    round_trip(&CertificateDocument::new(
        CertificateInput::digraph(&inflated.host),
        Certificate::ButterflyTrace { t: 2, trace: extract_butterfly(&inflated).unwrap() },
    ));
    let f = directed_cycle(3).unwrap();
    let sub = inflate(&f, 3, &mut rng(9));
    round_trip(&CertificateDocument::new(
        CertificateInput { digraph: sub.host.clone(), pattern: Some(f) },
        Certificate::Subdivision(build_subdivision(&sub).unwrap()),
    ));
}

#[test]
fn mismatched_documents_fail() {
    let d = bidirected_complete(6);
    let model = clique_minor_pipeline(&d, 3).unwrap().unwrap();
    let other = bidirected_complete(5);
    let doc = CertificateDocument::new(CertificateInput::digraph(&other), Certificate::StrongModel { t: 3, model: model.clone() });
    assert!(verify(&doc).is_err());
    let wrong_t = CertificateDocument::new(CertificateInput::digraph(&d), Certificate::StrongModel { t: 2, model });
    assert!(verify(&wrong_t).is_err());
    assert!(matches!(CertificateDocument::from_json("{\n\"kind\": 1"), Err(Error::Parse { line: 2, .. })));
}

proptest! {
    #[test]
    fn digraph_files_round_trip(d in arb_digraph(10)) {
        let text = write_digraph(&d);
        let back = parse_digraph(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(write_digraph(&back), text);
    }

    #[test]
    fn graph_files_round_trip(g in arb_graph(10)) {
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn dicoloring_certificates_round_trip(d in arb_digraph(8)) {
        let (k, coloring) = dichromatic_number(&d).unwrap();
        let doc = CertificateDocument::new(
            CertificateInput::digraph(&d),
            Certificate::Dicoloring { dichromatic_number: k, coloring },
        );
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        prop_assert!(verify(&back).is_ok());
        prop_assert_eq!(back, doc);
    }
}
