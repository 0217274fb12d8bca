use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use square4_core::geom::{convex_cyclic_order, point_in_triangle};
use square4_core::{is_square, pt, Point, Similarity, ThinHexagon, Tolerance};

fn square_tol() -> Tolerance {
    Tolerance::new(1e-6).unwrap()
}

/// Barycentric containment with exact-ish rational weights; the oracle for
/// triangles that are far from degenerate.
fn barycentric_inside(p: Point, a: Point, b: Point, c: Point) -> Option<bool> {
    let det = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
    if det.abs() < 1e-3 {
        return None;
    }
    let l1 = ((b.y - c.y) * (p.x - c.x) + (c.x - b.x) * (p.y - c.y)) / det;
    let l2 = ((c.y - a.y) * (p.x - c.x) + (a.x - c.x) * (p.y - c.y)) / det;
    let l3 = 1.0 - l1 - l2;
    let m = l1.min(l2).min(l3);
    if m.abs() < 1e-6 {
        return None;
    }
    Some(m > 0.0)
}

#[test]
fn point_in_triangle_matches_barycentric_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..100_000 {
        let q: [Point; 4] = core::array::from_fn(|_| pt(rng.gen(), rng.gen()));
        let Some(want) = barycentric_inside(q[3], q[0], q[1], q[2]) else { continue };
        assert_eq!(point_in_triangle(q[3], q[0], q[1], q[2], 1e-12), want, "{q:?}");
        checked += 1;
    }
    assert!(checked > 90_000);
}

#[test]
fn collinear_triangle_is_its_covering_segment() {
    let (a, b, c) = (pt(0.0, 0.0), pt(1.0, 0.0), pt(3.0, 0.0));
    assert!(point_in_triangle(pt(2.0, 0.0), a, b, c, 1e-12));
    assert!(!point_in_triangle(pt(2.0, 0.1), a, b, c, 1e-12));
    assert!(!point_in_triangle(pt(-0.5, 0.0), a, b, c, 1e-12));
}

#[test]
fn cyclic_order_traces_the_hull() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20_000 {
        let p: [Point; 4] = core::array::from_fn(|_| pt(rng.gen(), rng.gen()));
        if let Some(o) = convex_cyclic_order(&p, 1e-12) {
            // Consecutive edges all turn the same way.
            let turns: Vec<f64> = (0..4)
                .map(|k| {
                    let (a, b, c) = (p[o[k]], p[o[(k + 1) % 4]], p[o[(k + 2) % 4]]);
                    (b - a).cross(c - b)
                })
                .collect();
            assert!(turns.iter().all(|t| *t > 0.0) || turns.iter().all(|t| *t < 0.0), "{p:?}");
        }
    }
}

fn arb_point() -> impl Strategy<Value = Point> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| pt(x, y))
}

proptest! {
    #[test]
    fn is_square_ignores_labels_and_similarities(
        c in arb_point(), side in 1e-3..1e3f64, angle in 0.0..6.3f64, reflect: bool, perm in 0usize..24,
    ) {
        let sq = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        let s = Similarity::new(angle, reflect, side, c);
        let mut p = sq.map(|q| s.apply(q));
        let mut idx = [0usize, 1, 2, 3];
        let mut k = perm;
        for i in (1..4).rev() {
            idx.swap(i, k % (i + 1));
            k /= i + 1;
        }
        p = idx.map(|i| p[i]);
        prop_assert!(is_square(&p, square_tol()));
        let mut bent = p;
        bent[0] = bent[0] + pt(side * 1e-3, 0.0);
        prop_assert!(!is_square(&bent, square_tol()));
    }

    #[test]
    fn non_squares_rejected(a in arb_point(), b in arb_point(), c in arb_point(), d in arb_point()) {
        let p = [a, b, c, d];
        let mut dist: Vec<f64> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| p[i].dist(p[j])).collect();
        dist.sort_by(f64::total_cmp);
        let spread = (dist[3] - dist[0]) / dist[5];
        prop_assume!(spread > 1e-3);
        prop_assert!(!is_square(&p, square_tol()));
    }

    #[test]
    fn similarity_round_trip(p in arb_point(), o in arb_point(), angle in 0.0..6.3f64, reflect: bool, scale in 1e-3..1e3f64) {
        let s = Similarity::new(angle, reflect, scale, o);
        let back = s.invert(s.apply(p));
        prop_assert!(back.dist(p) <= 1e-9 * (1.0 + p.norm()));
    }

    #[test]
    fn hexagon_vertices_are_contained(e1 in arb_point(), e2 in arb_point()) {
        prop_assume!(e1.dist(e2) > 1e-3);
        let h = ThinHexagon::new(e1, e2).unwrap();
        let tol = 1e-9 * h.length;
        for v in h.vertices {
            prop_assert!(h.contains(v, tol));
        }
        prop_assert!(h.contains(e1.midpoint(e2), 0.0));
        let out = e1.midpoint(e2) + h.normal() * h.length;
        prop_assert!(!h.contains(out, tol));
    }
}
