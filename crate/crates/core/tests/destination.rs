use proptest::prelude::*;
use square4_core::{classify, compute_destination, diameter, is_square, pt, Payload, Point, Similarity, Snapshot, Tolerance};

/// Thin Hexagon with both inner robots on the main diagonal: the side they
/// step off to is chosen in the local frame, so the result is only
/// equivariant up to that choice.
fn frame_dependent(p: &[Point; 4]) -> bool {
    let Ok(c) = classify(p, Tolerance::default()) else { return false };
    match c.payload {
        Payload::ThinHexagon { hexagon } => [c.roles[2], c.roles[3]]
            .iter()
            .all(|&k| hexagon.side_of_diagonal(p[k], c.eps.dist) == 0),
        _ => false,
    }
}

fn arb_snapshot() -> impl Strategy<Value = Snapshot> {
    proptest::array::uniform3((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| pt(x, y)))
        .prop_map(|others| Snapshot { others })
        .prop_filter("separated", |s| {
            let p = s.positions();
            (0..4).all(|i| (i + 1..4).all(|j| p[i].dist(p[j]) > 1e-3))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn destination_is_equivariant(s in arb_snapshot(), angle in 0.0..6.3f64, reflect: bool, scale in -3.0..3.0f64) {
        prop_assume!(!frame_dependent(&s.positions()));
        let t = Similarity::new(angle, reflect, 10f64.powf(scale), Point::ORIGIN);
        let ts = Snapshot { others: s.others.map(|q| t.apply(q)) };
        let want = t.apply(compute_destination(&s));
        let got = compute_destination(&ts);
        prop_assert!(got.dist(want) <= 1e-9 * diameter(&ts.positions()), "{:?} -> {:?} vs {:?}", s, got, want);
    }

    #[test]
    fn destination_ignores_order_of_others(s in arb_snapshot(), perm in 0usize..6) {
        let o = s.others;
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let shuffled = Snapshot { others: orders[perm].map(|i| o[i]) };
        let (a, b) = (compute_destination(&s), compute_destination(&shuffled));
        prop_assert!(a.dist(b) <= 1e-9 * diameter(&s.positions()));
    }
}

#[test]
fn square_is_a_fixed_point() {
    let sq = Snapshot { others: [pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)] };
    assert!(is_square(&sq.positions(), Tolerance::new(1e-6).unwrap()));
    assert_eq!(compute_destination(&sq), Point::ORIGIN);
}
