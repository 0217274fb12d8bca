//! Sampling suites for the construction, the class transitions and the
//! algorithm's invariants.
//!
//! Every check uses its own arithmetic (orientation tests, atan2 angles,
//! turtle walks) rather than the library predicate under test.

use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use square4_core::classifier::hexagon_candidate;
use square4_core::construction::build_target_frame;
use square4_core::geom::{convex_cyclic_order, others};
use square4_core::{
    classify, compute_destination, destination_in, diameter, plan, ClassifyError, ConfigClass, Eps, Payload, Point,
    Similarity, Snapshot, ThinHexagon, Tolerance,
};

use crate::adversary::{Adversary, MinProgress};
use crate::generate::{generate, random_frames, Family, GenParams};
use crate::sim::{Action, World};

/// Relative tolerances of the suites.
pub const RELABEL_TOL: f64 = 1e-9;
pub const EQUIVARIANCE_TOL: f64 = 1e-9;
pub const CONSISTENCY_TOL: f64 = 1e-9;
pub const CLOSURE_TOL: f64 = 1e-12;
pub const ANGLE_TOL_DEG: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: u64,
    pub failures: u64,
    /// Largest observed error, in the suite's own unit.
    pub worst: f64,
    pub note: String,
    pub counterexample: Option<[Point; 4]>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, samples: 0, failures: 0, worst: 0.0, note: String::new(), counterexample: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }

    fn fail(&mut self, p: [Point; 4]) {
        self.failures += 1;
        self.counterexample.get_or_insert(p);
    }

    fn observe(&mut self, err: f64) {
        if err > self.worst {
            self.worst = err;
        }
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection by orientation signs.
pub fn segments_meet(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

fn shoelace(p: &[Point; 4]) -> f64 {
    (0..4).map(|i| p[i].x * p[(i + 1) % 4].y - p[(i + 1) % 4].x * p[i].y).sum::<f64>() / 2.0
}

/// Uniform points in the unit square until they form a strictly convex,
/// non-orthogonal quadrilateral; returned in cyclic order.
pub fn sample_convex(rng: &mut impl Rng, tol: Tolerance) -> [Point; 4] {
    loop {
        let p: [Point; 4] = core::array::from_fn(|_| Point::new(rng.gen(), rng.gen()));
        let eps = Eps::for_points(&p, tol);
        let Some(o) = convex_cyclic_order(&p, eps.dist) else { continue };
        let r = o.map(|i| p[i]);
        if build_target_frame(r, eps).is_ok() {
            return r;
        }
    }
}

/// All eight relabelings give the same targets and center.
pub fn relabeling(n: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("relabeling");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let r = sample_convex(&mut rng, tol);
        let eps = Eps::for_points(&r, tol);
        let base = build_target_frame(r, eps).expect("sampled frame");
        let diam = diameter(&r);
        let mut worst: f64 = 0.0;
        for rot in 0..4 {
            for mirror in [false, true] {
                let idx: [usize; 4] =
                    core::array::from_fn(|k| if mirror { (rot + 4 - k) % 4 } else { (rot + k) % 4 });
                let Ok(f) = build_target_frame(idx.map(|i| r[i]), eps) else {
                    worst = f64::INFINITY;
                    continue;
                };
                for k in 0..4 {
                    worst = worst.max(f.targets[k].dist(base.targets[idx[k]]) / diam);
                }
                worst = worst.max(f.center.dist(base.center) / diam);
            }
        }
        rep.samples += 1;
        rep.observe(worst);
        if !(worst <= RELABEL_TOL) {
            rep.fail(r);
        }
    }
    rep.note = format!("max target deviation {:.3e} x diameter (limit {RELABEL_TOL:e})", rep.worst);
    rep
}

/// Target square has the robots' orientation and the four pathways are
/// pairwise disjoint.
pub fn orientation_and_pathways(n: u64, seed: u64, tol: Tolerance) -> (SuiteReport, SuiteReport) {
    let mut orient_rep = SuiteReport::new("orientation");
    let mut cross_rep = SuiteReport::new("pathways");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let r = sample_convex(&mut rng, tol);
        let eps = Eps::for_points(&r, tol);
        let f = build_target_frame(r, eps).expect("sampled frame");
        orient_rep.samples += 1;
        let (a_r, a_t) = (shoelace(&r), shoelace(&f.targets));
        if a_r.signum() != a_t.signum() || a_t == 0.0 {
            orient_rep.fail(r);
        }
        cross_rep.samples += 1;
        let mut crossed = false;
        for i in 0..4 {
            for j in i + 1..4 {
                if segments_meet(r[i], f.targets[i], r[j], f.targets[j]) {
                    crossed = true;
                }
            }
        }
        if crossed {
            cross_rep.fail(r);
        }
    }
    orient_rep.note = format!("{} sign mismatches", orient_rep.failures);
    cross_rep.note = format!("{} samples with crossing pathways", cross_rep.failures);
    (orient_rep, cross_rep)
}

/// World states met at Looks along short `min_progress` runs from `family`,
/// kept when `keep` accepts them.
pub fn harvest(
    family: Family,
    seed: u64,
    count: usize,
    tol: Tolerance,
    keep: impl Fn(&[Point; 4]) -> bool,
) -> Vec<[Point; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut runs = 0;
    while out.len() < count && runs < 100 * count.max(1) {
        runs += 1;
        let Ok(p) = generate(family, &mut rng, GenParams::default()) else { break };
        let frames = random_frames(&mut rng);
        let delta = 10f64.powf(rng.gen_range(-3.0..-1.0));
        let mut w = World::new(p, frames, delta, tol);
        let mut adv = MinProgress::new(rng.gen());
        let per_run = 8;
        let mut taken = 0;
        for _ in 0..50_000 {
            if w.terminated() || taken >= per_run || out.len() >= count {
                break;
            }
            let d = adv.decide(&w);
            if d.action == Action::LookCompute && rng.gen_bool(0.05) {
                let q = w.positions();
                if keep(&q) {
                    out.push(q);
                    taken += 1;
                }
            }
            if w.step(d).is_err() {
                break;
            }
        }
    }
    out
}

fn is_class(p: &[Point; 4], tol: Tolerance, c: ConfigClass) -> bool {
    classify(p, tol).map_or(false, |k| k.class == c)
}

/// No Pinwheel has both robots of an opposite pair blocked, nor both
/// short-diagonal robots hindered.
pub fn pinwheel_obstruction(n: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("pinwheel_obstruction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = (n / 2) as usize;
    let mut states: Vec<[Point; 4]> = (0..half)
        .filter_map(|_| generate(Family::PerClass(ConfigClass::Pinwheel), &mut rng, GenParams::default()).ok())
        .collect();
    states.extend(harvest(Family::Uniform, seed ^ 0x9e37, n as usize - half, tol, |q| {
        is_class(q, tol, ConfigClass::Pinwheel)
    }));
    let (mut blocked_any, mut hindered_any, mut finished_any) = (0, 0, 0);
    for p in states {
        let Ok(c) = classify(&p, tol) else { continue };
        let Some(fd) = c.frame() else { continue };
        rep.samples += 1;
        let ob: [_; 4] = core::array::from_fn(|k| fd.frame.obstructions(k, c.eps));
        if ob.iter().any(|o| o.blocked.is_some()) {
            blocked_any += 1;
        }
        if fd.attrs.iter().any(|a| a.finished) {
            finished_any += 1;
        }
        let both_blocked = (0..2).any(|k| ob[k].blocked.is_some() && ob[k + 2].blocked.is_some());
        let (a, b) = (fd.frame_index(c.roles[0]), fd.frame_index(c.roles[2]));
        let open = |k: usize| !fd.attrs[k].finished;
        let both_hindered = ob[a].hindered.is_some() && ob[b].hindered.is_some() && open(a) && open(b);
        if ob[a].hindered.is_some() || ob[b].hindered.is_some() {
            hindered_any += 1;
        }
        if both_blocked || both_hindered {
            rep.fail(p);
        }
    }
    rep.note = format!(
        "{} Pinwheels ({} with a blocked robot, {} with a hindered short-diagonal robot, {} with a finished robot)",
        rep.samples, blocked_any, hindered_any, finished_any
    );
    rep
}

/// Moving a convergent pair of a Flowing or Scissors configuration along its
/// pathways, in any interleaving, never yields a Thin Hexagon.
pub fn no_thin_hexagon(n: u64, seed: u64, tol: Tolerance, grid: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("no_thin_hexagon");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0u64;
    let wanted = [ConfigClass::Flowing, ConfigClass::Scissors];
    let mut pool: Vec<[Point; 4]> = Vec::new();
    let mut grid_points = 0u64;
    while rep.samples < n && attempts < 200 * n.max(1) {
        attempts += 1;
        if pool.is_empty() {
            let class = wanted[rng.gen_range(0..2)];
            if rng.gen_bool(0.5) {
                if let Ok(p) = generate(Family::PerClass(class), &mut rng, GenParams::default()) {
                    pool.push(p);
                }
            } else {
                pool = harvest(Family::Uniform, rng.gen(), 32, tol, |q| {
                    classify(q, tol).map_or(false, |c| wanted.contains(&c.class))
                });
            }
            continue;
        }
        let p = pool.pop().unwrap();
        let Ok(pl) = plan(&p, tol) else { continue };
        let Some(fd) = pl.classification.frame() else { continue };
        if pl.moves.len() != 2 {
            continue;
        }
        let (m1, m2) = (pl.moves[0].robot, pl.moves[1].robot);
        let (k1, k2) = (fd.frame_index(m1), fd.frame_index(m2));
        if (k1 + 2) % 4 == k2 || fd.frame.pair_relation(&fd.attrs, k1, k2).convergent != Some(true) {
            continue;
        }
        rep.samples += 1;
        let (g1, g2) = (fd.attrs_of(m1).target, fd.attrs_of(m2).target);
        let mut bad = false;
        for i in 0..=grid {
            for j in 0..=grid {
                let mut q = p;
                q[m1] = p[m1].lerp(g1, i as f64 / grid as f64);
                q[m2] = p[m2].lerp(g2, j as f64 / grid as f64);
                grid_points += 1;
                if is_class(&q, tol, ConfigClass::ThinHexagon) {
                    bad = true;
                }
            }
        }
        if bad {
            rep.fail(p);
        }
    }
    rep.note = format!("{} instances, {} grid positions classified", rep.samples, grid_points);
    rep
}

fn angle_deg(prev: Point, at: Point, next: Point) -> f64 {
    let a = (prev.y - at.y).atan2(prev.x - at.x);
    let b = (next.y - at.y).atan2(next.x - at.x);
    let mut d = (a - b).abs().to_degrees();
    if d > 180.0 {
        d = 360.0 - d;
    }
    d
}

/// Closure of the turtle walk, the 50/155 degree angles, havens on the
/// perpendicular bisector, and the havens configuration being Orthogonal.
pub fn hexagon_geometry(n: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("hexagon_geometry");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut closure, mut angle, mut bisector): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let e1 = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        let e2 = e1 + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        let Ok(h) = ThinHexagon::new(e1, e2) else { continue };
        let l = e1.dist(e2);
        let v = h.vertices;
        rep.samples += 1;
        let mut ok = true;

        // Walk the edges with measured lengths and turns.
        let mut pos = v[0];
        let mut heading = (v[1].y - v[0].y).atan2(v[1].x - v[0].x);
        for k in 0..6 {
            let len = v[k].dist(v[(k + 1) % 6]);
            pos = pos + Point::new(heading.cos(), heading.sin()) * len;
            let interior = angle_deg(v[k], v[(k + 1) % 6], v[(k + 2) % 6]);
            heading += (180.0 - interior).to_radians();
        }
        let res = pos.dist(v[0]) / l;
        closure = closure.max(res);
        ok &= res < CLOSURE_TOL;
        ok &= (v[1] - v[0] + (v[2] - v[1]) + (v[3] - v[2]) + (v[4] - v[3]) + (v[5] - v[4]) + (v[0] - v[5])).norm() / l
            < CLOSURE_TOL;

        for k in 0..6 {
            let a = angle_deg(v[(k + 5) % 6], v[k], v[(k + 1) % 6]);
            let want = if k == 0 || k == 3 { 50.0 } else { 155.0 };
            angle = angle.max((a - want).abs());
            ok &= (a - want).abs() <= ANGLE_TOL_DEG;
        }

        let hv = h.havens();
        let mid = e1.midpoint(e2);
        let u = (e2 - e1) / l;
        let off = (hv[0].midpoint(hv[1]).dist(mid) / l).max(((hv[1] - hv[0]).dot(u)).abs() / l);
        bisector = bisector.max(off);
        ok &= off < CLOSURE_TOL;
        ok &= is_class(&[e1, e2, hv[0], hv[1]], tol, ConfigClass::Orthogonal);
        if !ok {
            rep.fail([e1, e2, hv[0], hv[1]]);
        }
    }
    rep.worst = angle;
    rep.note = format!(
        "walk closure {closure:.2e} L, edge-sum closure < {CLOSURE_TOL:e} L, angle error {angle:.2e} deg, haven offset {bisector:.2e} L"
    );
    rep
}

fn random_similarity(rng: &mut impl Rng) -> Similarity {
    Similarity::new(rng.gen_range(0.0..TAU), rng.gen_bool(0.5), 10f64.powf(rng.gen_range(-3.0..3.0)), Point::ORIGIN)
}

/// Whether the snapshot falls in the Thin Hexagon sub-case whose side choice
/// is taken from the local frame.
pub fn frame_dependent(p: &[Point; 4], tol: Tolerance) -> bool {
    match classify(p, tol) {
        Ok(c) => match c.payload {
            Payload::ThinHexagon { hexagon } => {
                let (k, l) = (c.roles[2], c.roles[3]);
                hexagon.side_of_diagonal(p[k], c.eps.dist) == 0 && hexagon.side_of_diagonal(p[l], c.eps.dist) == 0
            }
            _ => false,
        },
        Err(_) => false,
    }
}

fn snapshot_of(p: &[Point; 4], i: usize) -> Snapshot {
    let o = others(i);
    Snapshot { others: o.map(|j| p[j] - p[i]) }
}

fn mixed_states(n: usize, seed: u64, tol: Tolerance) -> Vec<[Point; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families = [
        Family::Uniform,
        Family::ThreeCollinear,
        Family::NearHexagon,
        Family::NearOrthogonal,
        Family::Symmetric,
        Family::PerClass(ConfigClass::Pinwheel),
        Family::PerClass(ConfigClass::Scissors),
        Family::PerClass(ConfigClass::Flowing),
        Family::PerClass(ConfigClass::OneDiscordant),
        Family::PerClass(ConfigClass::NonConvex),
    ];
    let direct = n / 2;
    let mut out: Vec<[Point; 4]> = (0..direct)
        .filter_map(|i| generate(families[i % families.len()], &mut rng, GenParams::default()).ok())
        .collect();
    out.extend(harvest(Family::Uniform, rng.gen(), n - out.len(), tol, |_| true));
    out
}

/// `compute_destination` commutes with rotations, reflections and scalings.
pub fn equivariance(n: u64, per: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("equivariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
    let mut skipped = 0;
    for p in mixed_states(n as usize, seed, tol) {
        let i = rng.gen_range(0..4);
        let s = snapshot_of(&p, i);
        if frame_dependent(&s.positions(), tol) {
            skipped += 1;
            continue;
        }
        let d = compute_destination(&s);
        rep.samples += 1;
        let mut bad = false;
        for _ in 0..per {
            let t = random_similarity(&mut rng);
            let ts = Snapshot { others: s.others.map(|q| t.apply(q)) };
            let td = compute_destination(&ts);
            let err = td.dist(t.apply(d)) / diameter(&ts.positions());
            rep.observe(err);
            if !(err <= EQUIVARIANCE_TOL) {
                bad = true;
            }
        }
        if bad {
            rep.fail(s.positions());
        }
    }
    rep.note = format!(
        "{} snapshots x {per} similarities, worst {:.2e} x diameter, {skipped} frame-dependent snapshots skipped",
        rep.samples, rep.worst
    );
    rep
}

/// Each robot, computing in its own frame, arrives at the destination of
/// the world-frame plan.
pub fn consistency(n: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("consistency");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0);
    let mut skipped = 0;
    for p in mixed_states(n as usize, seed.wrapping_add(1), tol) {
        if frame_dependent(&p, tol) {
            skipped += 1;
            continue;
        }
        let Ok(pl) = plan(&p, tol) else {
            rep.fail(p);
            continue;
        };
        let frames = random_frames(&mut rng);
        let w = World::new(p, frames, 1.0, tol);
        rep.samples += 1;
        let diam = diameter(&p);
        let mut bad = false;
        for i in 0..4 {
            let mine = w.look_compute(i).map(|d| d.dist(destination_in(&p, &pl, i)) / diam);
            match mine {
                Ok(e) => {
                    rep.observe(e);
                    bad |= !(e <= CONSISTENCY_TOL);
                }
                Err(_) => bad = true,
            }
        }
        if bad {
            rep.fail(p);
        }
    }
    rep.note = format!("{} states, worst {:.2e} x diameter, {skipped} frame-dependent skipped", rep.samples, rep.worst);
    rep
}

/// Movers' swept segments are pairwise disjoint and miss the static robots.
pub fn anti_collision(n: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("anti_collision");
    for p in mixed_states(n as usize, seed.wrapping_add(2), tol) {
        let Ok(pl) = plan(&p, tol) else { continue };
        rep.samples += 1;
        let dest: [Point; 4] = core::array::from_fn(|i| destination_in(&p, &pl, i));
        let moving = |i: usize| pl.move_of(i).is_some();
        let mut bad = false;
        for i in 0..4 {
            for j in i + 1..4 {
                if !moving(i) && !moving(j) {
                    continue;
                }
                if segments_meet(p[i], dest[i], p[j], dest[j]) {
                    bad = true;
                }
            }
        }
        if bad {
            rep.fail(p);
        }
    }
    rep.note = format!("{} plans", rep.samples);
    rep
}

/// Classification is total on non-degenerate inputs.
pub fn totality(n: u64, seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rep = SuiteReport::new("classification_totality");
    for p in mixed_states(n as usize, seed.wrapping_add(3), tol) {
        rep.samples += 1;
        if matches!(classify(&p, tol), Err(ClassifyError::Unclassifiable(_))) {
            rep.fail(p);
        }
    }
    rep.note = format!("{} states", rep.samples);
    rep
}

/// Everything `check-lemmas` runs, with `n` samples per suite.
pub fn all_suites(n: u64, seed: u64, tol: Tolerance) -> Vec<SuiteReport> {
    let (l2, c3) = orientation_and_pathways(n, seed.wrapping_add(1), tol);
    vec![
        relabeling(n, seed, tol),
        l2,
        c3,
        pinwheel_obstruction(n.max(1000), seed.wrapping_add(2), tol),
        no_thin_hexagon(n.max(1000), seed.wrapping_add(3), tol, 12),
        hexagon_geometry(n, seed.wrapping_add(4), tol),
        equivariance(n, 10, seed.wrapping_add(5), tol),
        consistency(n, seed.wrapping_add(6), tol),
        anti_collision(n, seed.wrapping_add(7), tol),
        totality(n, seed.wrapping_add(8), tol),
    ]
}

/// Whether some pair of robots spans a thin hexagon holding the other two.
pub fn has_thin_hexagon(p: &[Point; 4], tol: Tolerance) -> bool {
    let eps = Eps::for_points(p, tol);
    (0..4).any(|i| (i + 1..4).any(|j| hexagon_candidate(p, i, j, eps).is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use square4_core::pt;

    #[test]
    fn oracle_segments() {
        assert!(segments_meet(pt(0.0, 0.0), pt(2.0, 2.0), pt(0.0, 2.0), pt(2.0, 0.0)));
        assert!(segments_meet(pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 0.0), pt(1.0, 5.0)));
        assert!(!segments_meet(pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, -1.0), pt(2.0, 1.0)));
    }

    #[test]
    fn small_suites_pass() {
        let tol = Tolerance::default();
        for r in [relabeling(50, 1, tol), hexagon_geometry(50, 2, tol), equivariance(40, 3, 3, tol)] {
            assert!(r.passed(), "{r:?}");
        }
    }
}
