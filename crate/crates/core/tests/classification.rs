use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use square4_core::classifier::{satisfies_non_convex, satisfies_orthogonal, satisfies_thin_hexagon};
use square4_core::{classify, pt, ClassifyError, ConfigClass, Eps, Point, Similarity, Tolerance};

fn random_config(rng: &mut impl Rng) -> [Point; 4] {
    match rng.gen_range(0..4) {
        // Three on a line.
        0 => {
            let mut p: [Point; 4] = core::array::from_fn(|_| pt(rng.gen(), 0.0));
            p[3] = pt(rng.gen(), rng.gen());
            p
        }
        // All four on a line.
        1 => core::array::from_fn(|_| pt(rng.gen(), 0.0)),
        // Lattice points, which produce many exact ties.
        2 => core::array::from_fn(|_| pt(rng.gen_range(0..5) as f64, rng.gen_range(0..5) as f64)),
        _ => core::array::from_fn(|_| pt(rng.gen(), rng.gen())),
    }
}

#[test]
fn classification_is_total() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut seen = [0usize; 7];
    for _ in 0..50_000 {
        let p = random_config(&mut rng);
        match classify(&p, tol) {
            Ok(c) => seen[c.class.index() as usize - 1] += 1,
            Err(ClassifyError::Coincident(..)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
}

#[test]
fn priority_is_respected() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50_000 {
        let p = random_config(&mut rng);
        let Ok(c) = classify(&p, tol) else { continue };
        let eps = Eps::for_points(&p, tol);
        let (o, h, n) = (satisfies_orthogonal(&p, eps), satisfies_thin_hexagon(&p, eps), satisfies_non_convex(&p, eps));
        let expected = if o {
            Some(ConfigClass::Orthogonal)
        } else if h {
            Some(ConfigClass::ThinHexagon)
        } else if n {
            Some(ConfigClass::NonConvex)
        } else {
            None
        };
        match expected {
            Some(e) => assert_eq!(c.class, e, "{p:?}"),
            None => assert!(c.class.has_frame(), "{p:?}"),
        }
    }
}

#[test]
fn spec_examples() {
    let tol = Tolerance::default();
    let c = |p: [Point; 4]| classify(&p, tol).unwrap().class;
    assert_eq!(c([pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, -1.0)]), ConfigClass::Orthogonal);
    assert_eq!(c([pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 4.0), pt(1.0, 1.0)]), ConfigClass::NonConvex);
    assert!(matches!(
        classify(&[pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)], tol),
        Err(ClassifyError::Coincident(0, 1))
    ));
    assert!(matches!(classify(&[pt(f64::NAN, 0.0), pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)], tol), Err(ClassifyError::NonFinite)));
}

fn arb_config() -> impl Strategy<Value = [Point; 4]> {
    proptest::array::uniform4((0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y)| pt(x, y)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn class_ignores_labels(p in arb_config(), perm in 0usize..24) {
        let tol = Tolerance::default();
        let Ok(base) = classify(&p, tol) else { return Ok(()) };
        let mut idx = [0usize, 1, 2, 3];
        let mut k = perm;
        for i in (1..4).rev() {
            idx.swap(i, k % (i + 1));
            k /= i + 1;
        }
        let q = idx.map(|i| p[i]);
        prop_assert_eq!(classify(&q, tol).unwrap().class, base.class);
    }

    #[test]
    fn class_ignores_similarities(p in arb_config(), angle in 0.0..6.3f64, reflect: bool, scale in -3.0..3.0f64) {
        let tol = Tolerance::default();
        let Ok(base) = classify(&p, tol) else { return Ok(()) };
        let s = Similarity::new(angle, reflect, 10f64.powf(scale), pt(0.3, -7.0));
        prop_assert_eq!(classify(&p.map(|q| s.apply(q)), tol).unwrap().class, base.class);
    }
}
