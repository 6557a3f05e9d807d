use artin_core::certifier::{certify_free, check, raag_gamma};
use artin_core::linkgeom::{m2_link_distance, quotient_distance, QuotientMetric};
use artin_core::word::{S, T};
use artin_core::{AngularValue, EllipticSpec, FreenessCertificate, LinkPoint, PresentationGraph, Word};
use proptest::prelude::*;

fn arb_word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0usize..2, any::<bool>()), 0..max)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| artin_core::Letter::new(g, i)).collect()))
}

fn arb_point() -> impl Strategy<Value = LinkPoint> {
    (arb_word(6), 0usize..3, 0usize..2).prop_map(|(word, kind, gen)| match kind {
        0 => LinkPoint::Element { word },
        1 => LinkPoint::Coset { word, gen },
        _ => LinkPoint::Edge { word, gen, offset: AngularValue::new(1, 100) },
    })
}

fn point_json_round_trip(p: &LinkPoint) -> LinkPoint {
    serde_json::from_str(&serde_json::to_string(p).unwrap()).unwrap()
}

fn reduced(p: &LinkPoint) -> LinkPoint {
    let mut p = p.clone();
    match &mut p {
        LinkPoint::Element { word } | LinkPoint::Coset { word, .. } | LinkPoint::Edge { word, .. } => {
            *word = word.freely_reduced()
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_metric_is_symmetric(p in arb_point(), q in arb_point(), m in 3u32..6) {
        prop_assert_eq!(quotient_distance(m, &p, &q).unwrap(), quotient_distance(m, &q, &p).unwrap());
    }

    #[test]
    fn quotient_metric_is_left_invariant(p in arb_point(), q in arb_point(), h in arb_word(6), m in 3u32..6) {
        let d = quotient_distance(m, &p, &q).unwrap();
        prop_assert_eq!(quotient_distance(m, &p.translate(&h), &q.translate(&h)).unwrap(), d);
    }

    #[test]
    fn quotient_metric_triangle(p in arb_point(), q in arb_point(), r in arb_point(), m in 3u32..5) {
        let metric = QuotientMetric::new(m).unwrap();
        let pq = metric.distance(&p, &q).unwrap();
        let qr = metric.distance(&q, &r).unwrap();
        let pr = metric.distance(&p, &r).unwrap();
        prop_assert!(pr <= pq + qr);
    }

    #[test]
    fn the_center_acts_trivially_on_the_quotient(p in arb_point(), m in 3u32..6) {
        let delta = artin_core::garside::delta_word(m, S);
        let z = if m % 2 == 0 { delta } else { delta.power(2) };
        let moved = p.translate(&z);
        prop_assert_eq!(quotient_distance(m, &p, &moved).unwrap(), AngularValue::ZERO);
    }

    #[test]
    fn m2_metric_is_left_invariant(p in arb_point(), q in arb_point(), h in arb_word(6)) {
        let d = m2_link_distance(&p, &q).unwrap();
        prop_assert!(d <= AngularValue::PI);
        prop_assert_eq!(m2_link_distance(&p.translate(&h), &q.translate(&h)).unwrap(), d);
    }

    #[test]
    fn link_points_round_trip_through_json(p in arb_point()) {
        prop_assert_eq!(reduced(&point_json_round_trip(&p)), reduced(&p));
    }
}

#[test]
fn distinct_generator_axes_meet_at_pi_over_m() {
    for m in 3..=6u32 {
        let p = LinkPoint::Coset { word: Word::empty(), gen: S };
        let q = LinkPoint::Coset { word: Word::empty(), gen: T };
        assert_eq!(quotient_distance(m, &p, &q).unwrap(), AngularValue::pi_over(m as u64));
    }
}

#[test]
fn certificates_round_trip_and_recheck() {
    let g = PresentationGraph::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        &[(0, 1, 2), (1, 2, 2), (1, 3, 2)],
    )
    .unwrap();
    for (x, y) in [("a", "c"), ("a", "d"), ("c", "d")] {
        let gamma = raag_gamma(&g, x, y).unwrap();
        let cert =
            certify_free(&g, &EllipticSpec::generator(x), &EllipticSpec::generator(y), &gamma, &Default::default())
                .unwrap();
        let text = serde_json::to_string_pretty(&cert).unwrap();
        let back: FreenessCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        let report = check(&back).unwrap();
        assert_eq!(report.n, cert.n);
    }
}
