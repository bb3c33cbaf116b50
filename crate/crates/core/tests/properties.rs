//! Property tests for the serialization and hashing invariants.

mod common;

use proptest::prelude::*;
use provcorp::nanopub::PLACEHOLDER;
use provcorp::rdf::{canonical_nquads, parse_trig, serialize_trig, Dataset, Quad, Term};

fn arb_iri() -> impl Strategy<Value = String> {
    (
        prop_oneof![
            Just("http://example.org/"),
            Just("https://w3id.org/provcorp/vocab/"),
            Just("urn:test:"),
        ],
        "[a-zA-Z][a-zA-Z0-9_.-]{0,12}",
    )
        .prop_map(|(ns, local)| format!("{ns}{local}"))
}

fn arb_literal() -> impl Strategy<Value = Term> {
    prop_oneof![
        // printable plus the escapes and some multibyte characters
        "[ -~æøé\n\r\t\"\\\\]{0,20}".prop_map(Term::string),
        any::<i32>().prop_map(|n| Term::int(n as i64)),
        ("[ -~]{0,10}", prop_oneof![Just("en"), Just("de")])
            .prop_map(|(s, lang)| Term::lang_string(s, lang)),
    ]
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![arb_iri().prop_map(Term::iri), arb_literal()]
}

prop_compose! {
    fn arb_quad()(
        s in arb_iri(),
        p in arb_iri(),
        o in arb_term(),
        g in prop_oneof![Just("http://example.org/g1"), Just("http://example.org/g2")],
    ) -> Quad {
        Quad::new(Term::iri(s), Term::iri(p), o, Term::iri(g)).expect("valid quad")
    }
}

fn arb_dataset() -> impl Strategy<Value = Dataset> {
    proptest::collection::vec(arb_quad(), 1..20).prop_map(|quads| {
        let mut dataset: Dataset = quads.into_iter().collect();
        dataset.bind_prefix("ex", "http://example.org/");
        dataset.bind_prefix("xsd", "http://www.w3.org/2001/XMLSchema#");
        dataset
    })
}

proptest! {
    /// parse_trig(serialize_trig(d)) is the identity up to quad-set equality.
    #[test]
    fn trig_round_trip(dataset in arb_dataset()) {
        let text = serialize_trig(&dataset);
        let parsed = parse_trig(&text).expect("own output parses");
        prop_assert!(parsed.quad_set_eq(&dataset), "round trip diverged:\n{text}");
    }

    /// Serialization is a pure function of the dataset.
    #[test]
    fn trig_deterministic(dataset in arb_dataset()) {
        prop_assert_eq!(serialize_trig(&dataset), serialize_trig(&dataset));
    }

    /// The canonical form does not depend on quad order.
    #[test]
    fn canonical_order_independent(dataset in arb_dataset(), seed in any::<u64>()) {
        let mut quads = dataset.quads().to_vec();
        // deterministic shuffle driven by the seed
        let n = quads.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            quads.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled: Dataset = quads.into_iter().collect();
        prop_assert_eq!(
            canonical_nquads(&dataset, PLACEHOLDER).unwrap(),
            canonical_nquads(&shuffled, PLACEHOLDER).unwrap()
        );
    }
}
