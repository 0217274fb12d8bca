//! Configuration classes, evaluated in priority order.
//!
//! A class is satisfied when some relabeling of the four robots fulfils its
//! definition; the first satisfied class in the list wins. Role assignments
//! are derived from geometry alone so every robot reaches the same verdict
//! regardless of the order in which it received the points.

use core::cmp::Ordering;
use core::fmt;

use crate::construction::{build_target_frame, RobotAttrs, TargetFrame};
use crate::geom::{
    convex_cyclic_order, diameter, others, point_in_triangle, segment_intersection, Crossing, Eps, Point, Segment,
    ThinHexagon, Tolerance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigClass {
    Orthogonal,
    ThinHexagon,
    NonConvex,
    Pinwheel,
    Scissors,
    Flowing,
    OneDiscordant,
}

impl ConfigClass {
    pub const ALL: [ConfigClass; 7] = [
        ConfigClass::Orthogonal,
        ConfigClass::ThinHexagon,
        ConfigClass::NonConvex,
        ConfigClass::Pinwheel,
        ConfigClass::Scissors,
        ConfigClass::Flowing,
        ConfigClass::OneDiscordant,
    ];

    /// Position in the priority list, starting at 1.
    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(k: u8) -> Option<Self> {
        ConfigClass::ALL.get(usize::from(k).wrapping_sub(1)).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ConfigClass::Orthogonal => "orthogonal",
            ConfigClass::ThinHexagon => "thin_hexagon",
            ConfigClass::NonConvex => "non_convex",
            ConfigClass::Pinwheel => "pinwheel",
            ConfigClass::Scissors => "scissors",
            ConfigClass::Flowing => "flowing",
            ConfigClass::OneDiscordant => "one_discordant",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        ConfigClass::ALL.iter().copied().find(|c| c.name() == s)
    }

    pub fn has_frame(self) -> bool {
        self.index() >= 4
    }
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassifyError {
    NonFinite,
    /// Two robots closer than the tolerance.
    Coincident(usize, usize),
    /// No class definition matched. The paper's case analysis says this
    /// cannot happen; the positions are kept for diagnosis.
    Unclassifiable([Point; 4]),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::NonFinite => f.write_str("non-finite coordinate"),
            ClassifyError::Coincident(i, j) => write!(f, "robots {i} and {j} coincide"),
            ClassifyError::Unclassifiable(p) => {
                write!(f, "unclassifiable configuration [{}, {}, {}, {}]", p[0], p[1], p[2], p[3])
            }
        }
    }
}

/// The target frame of a convex, non-orthogonal configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameData {
    pub frame: TargetFrame,
    /// `order[k]` is the input index of the robot at frame index `k`.
    pub order: [usize; 4],
    /// Attributes by frame index.
    pub attrs: [RobotAttrs; 4],
}

impl FrameData {
    pub fn frame_index(&self, robot: usize) -> usize {
        self.order.iter().position(|&o| o == robot).expect("robot present in frame")
    }

    /// Attributes of an input-indexed robot.
    pub fn attrs_of(&self, robot: usize) -> &RobotAttrs {
        &self.attrs[self.frame_index(robot)]
    }

    pub fn opposite_of(&self, robot: usize) -> usize {
        self.order[(self.frame_index(robot) + 2) % 4]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Payload {
    Orthogonal { center: Point, radius: f64 },
    ThinHexagon { hexagon: ThinHexagon },
    NonConvex,
    Frame(FrameData),
}

/// Class label plus role assignment. `roles[k]` is the input index of the
/// robot playing label `r_{k+1}` in the class definition:
///
/// * Orthogonal: segments `r1 r3` and `r2 r4` are the orthogonal pair.
/// * Thin Hexagon: `r1`, `r2` are the extremes.
/// * Non-Convex: `r4` lies in triangle `r1 r2 r3`.
/// * Pinwheel: `r1 r3` is the shorter diagonal (roles in cyclic order).
/// * Scissors: `r1 r2` and `r3 r4` are divergent.
/// * Flowing: `r1 r2` divergent, `r3 r4` convergent.
/// * One Discordant: `r4` is the discordant robot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub class: ConfigClass,
    pub roles: [usize; 4],
    pub payload: Payload,
    pub eps: Eps,
}

impl Classification {
    pub fn frame(&self) -> Option<&FrameData> {
        match &self.payload {
            Payload::Frame(f) => Some(f),
            _ => None,
        }
    }
}

const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn classify(positions: &[Point; 4], tol: Tolerance) -> Result<Classification, ClassifyError> {
    if positions.iter().any(|p| !p.is_finite()) {
        return Err(ClassifyError::NonFinite);
    }
    let eps = Eps::for_points(positions, tol);
    for (i, j) in PAIRS {
        if positions[i].dist(positions[j]) <= eps.dist {
            return Err(ClassifyError::Coincident(i, j));
        }
    }
    if let Some(c) = orthogonal(positions, eps) {
        return Ok(c);
    }
    if let Some(c) = thin_hexagon(positions, eps) {
        return Ok(c);
    }
    if let Some(c) = non_convex(positions, eps) {
        return Ok(c);
    }
    frame_class(positions, eps).ok_or(ClassifyError::Unclassifiable(*positions))
}

/// Orthogonal test for one pairing: segments `a b` and `c d`. Returns the
/// intersection point and `|cos|` of the angle between them.
pub fn orthogonal_pair(p: &[Point; 4], pr: [usize; 4], eps: Eps) -> Option<(Point, f64)> {
    let (a, b, c, d) = (p[pr[0]], p[pr[1]], p[pr[2]], p[pr[3]]);
    let u = b - a;
    let w = d - c;
    let cos = u.dot(w).abs() / (u.norm() * w.norm());
    if cos > eps.rel {
        return None;
    }
    let hit = segment_intersection(&Segment::new(a, b), &Segment::new(c, d), eps.dist)?;
    if hit.within_first && hit.kind != Crossing::Extension {
        Some((hit.point, cos))
    } else {
        None
    }
}

/// Definitions of the classes that do not need a target frame, checked in
/// isolation (used by the priority-consistency audits).
pub fn satisfies_orthogonal(p: &[Point; 4], eps: Eps) -> bool {
    PAIRINGS.iter().any(|&pr| orthogonal_pair(p, pr, eps).is_some())
}

pub fn satisfies_thin_hexagon(p: &[Point; 4], eps: Eps) -> bool {
    PAIRS.iter().any(|&(i, j)| hexagon_candidate(p, i, j, eps).is_some())
}

pub fn satisfies_non_convex(p: &[Point; 4], eps: Eps) -> bool {
    (0..4).any(|m| contained_in_others(p, m, eps))
}

fn orthogonal(p: &[Point; 4], eps: Eps) -> Option<Classification> {
    let mut best: Option<(f64, [usize; 4], Point)> = None;
    for pr in PAIRINGS {
        if let Some((center, cos)) = orthogonal_pair(p, pr, eps) {
            if best.map_or(true, |b| cos < b.0) {
                best = Some((cos, [pr[0], pr[2], pr[1], pr[3]], center));
            }
        }
    }
    let (_, roles, center) = best?;
    let radius = p.iter().map(|q| q.dist(center)).fold(0.0, f64::max);
    Some(Classification { class: ConfigClass::Orthogonal, roles, payload: Payload::Orthogonal { center, radius }, eps })
}

fn remaining(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&k| k != i && k != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// The hexagon with extremes `i`, `j` if it qualifies for the Thin Hexagon class.
pub fn hexagon_candidate(p: &[Point; 4], i: usize, j: usize, eps: Eps) -> Option<ThinHexagon> {
    hexagon_candidate_within(p, i, j, eps.dist, eps)
}

/// [`hexagon_candidate`] with containment slack `slack` instead of the
/// tolerance.
pub fn hexagon_candidate_within(p: &[Point; 4], i: usize, j: usize, slack: f64, eps: Eps) -> Option<ThinHexagon> {
    let h = ThinHexagon::new(p[i], p[j]).ok()?;
    let (k, l) = remaining(i, j);
    if h.contains(p[k], slack) && h.contains(p[l], slack) && !h.on_adjacent_beacons(p[k], p[l], eps.dist) {
        Some(h)
    } else {
        None
    }
}

fn thin_hexagon(p: &[Point; 4], eps: Eps) -> Option<Classification> {
    let mut cands: [Option<([usize; 4], ThinHexagon)>; 6] = [None; 6];
    let mut longest: f64 = 0.0;
    for (n, &(i, j)) in PAIRS.iter().enumerate() {
        if let Some(h) = hexagon_candidate(p, i, j, eps) {
            let (k, l) = remaining(i, j);
            longest = longest.max(h.length);
            cands[n] = Some(([i, j, k, l], h));
        }
    }
    let mut roles_buf = [[0usize; 4]; 6];
    let mut n = 0;
    for (roles, h) in cands.iter().flatten() {
        if h.length >= longest - eps.dist {
            roles_buf[n] = *roles;
            n += 1;
        }
    }
    if n == 0 {
        return None;
    }
    let roles = role_assignment_tiebreak(p, &roles_buf[..n], eps);
    let hexagon = ThinHexagon::new(p[roles[0]], p[roles[1]]).ok()?;
    Some(Classification { class: ConfigClass::ThinHexagon, roles, payload: Payload::ThinHexagon { hexagon }, eps })
}

fn contained_in_others(p: &[Point; 4], m: usize, eps: Eps) -> bool {
    let t = others(m);
    point_in_triangle(p[m], p[t[0]], p[t[1]], p[t[2]], eps.dist)
}

fn non_convex(p: &[Point; 4], eps: Eps) -> Option<Classification> {
    let mut buf = [[0usize; 4]; 4];
    let mut n = 0;
    for m in 0..4 {
        if contained_in_others(p, m, eps) {
            let t = others(m);
            buf[n] = [t[0], t[1], t[2], m];
            n += 1;
        }
    }
    if n == 0 {
        return None;
    }
    let roles = role_assignment_tiebreak(p, &buf[..n], eps);
    Some(Classification { class: ConfigClass::NonConvex, roles, payload: Payload::NonConvex, eps })
}

/// Frame-index splits into two pairs of robots with perpendicular guidelines.
const SPLITS: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(1, 2), (3, 0)]];

fn frame_class(p: &[Point; 4], eps: Eps) -> Option<Classification> {
    let order = convex_cyclic_order(p, eps.dist)?;
    let r = [p[order[0]], p[order[1]], p[order[2]], p[order[3]]];
    let frame = build_target_frame(r, eps).ok()?;
    let attrs = frame.all_attrs(eps);
    let fd = FrameData { frame, order, attrs };
    let w = |k: usize| order[k];
    let make = |class, roles| Some(Classification { class, roles, payload: Payload::Frame(fd), eps });

    let sign = |k: usize| attrs[k].sign();
    let all_concordant = PAIRS.iter().all(|&(i, j)| sign(i) * sign(j) >= 0);
    if all_concordant {
        let d02 = r[0].dist(r[2]);
        let d13 = r[1].dist(r[3]);
        let roles = if d02 <= d13 { [w(0), w(1), w(2), w(3)] } else { [w(1), w(2), w(3), w(0)] };
        return make(ConfigClass::Pinwheel, roles);
    }

    let div = |(i, j): (usize, usize)| frame.pair_relation(&attrs, i, j).divergent == Some(true);
    let conv = |(i, j): (usize, usize)| frame.pair_relation(&attrs, i, j).convergent == Some(true);

    let mut buf = [[0usize; 4]; 4];
    let mut n = 0;
    for [a, b] in SPLITS {
        if div(a) && div(b) {
            buf[n] = [w(a.0), w(a.1), w(b.0), w(b.1)];
            n += 1;
        }
    }
    if n > 0 {
        return make(ConfigClass::Scissors, role_assignment_tiebreak(p, &buf[..n], eps));
    }

    for [a, b] in SPLITS {
        for (d, c) in [(a, b), (b, a)] {
            if div(d) && conv(c) {
                buf[n] = [w(d.0), w(d.1), w(c.0), w(c.1)];
                n += 1;
            }
        }
    }
    if n > 0 {
        // Prefer the reading that moves robots closest to their targets: the
        // preference survives the motion it triggers.
        let key = |roles: &[usize; 4]| {
            let mut ds = [f64::INFINITY; 4];
            if let Ok(m) = flowing_movers(&fd, roles, eps) {
                for (slot, &rb) in ds.iter_mut().zip(m.iter().flatten()) {
                    *slot = fd.attrs_of(rb).offset.abs();
                }
            }
            ds.sort_by(f64::total_cmp);
            ds
        };
        let roles = best_by_key(p, &buf[..n], eps, key);
        return make(ConfigClass::Flowing, roles);
    }

    for m in 0..4 {
        let o = others(m);
        let trio_concordant = [(o[0], o[1]), (o[0], o[2]), (o[1], o[2])].iter().all(|&(i, j)| sign(i) * sign(j) >= 0);
        let lone = o.iter().all(|&i| sign(i) * sign(m) <= 0);
        if trio_concordant && lone {
            buf[n] = [w((m + 1) % 4), w((m + 2) % 4), w((m + 3) % 4), w(m)];
            n += 1;
        }
    }
    if n > 0 {
        let key = |roles: &[usize; 4]| [fd.attrs_of(roles[3]).offset.abs()];
        let roles = best_by_key(p, &buf[..n], eps, key);
        return make(ConfigClass::OneDiscordant, roles);
    }
    None
}

/// Movers under the Flowing rules for a given role assignment. `Err` signals
/// a tie between the two unfinished robots when an opposite pair is finished.
pub fn flowing_movers(fd: &FrameData, roles: &[usize; 4], eps: Eps) -> Result<[Option<usize>; 2], ()> {
    let fin = |r: usize| fd.attrs_of(r).finished;
    let opposite_finished = (0..2).any(|k| fin(fd.order[k]) && fin(fd.order[k + 2]));
    if opposite_finished {
        let mut open = [None; 2];
        let mut n = 0;
        for &r in &fd.order {
            if !fin(r) && n < 2 {
                open[n] = Some(r);
                n += 1;
            }
        }
        return match open {
            [Some(a), Some(b)] => {
                let (da, db) = (fd.attrs_of(a).offset.abs(), fd.attrs_of(b).offset.abs());
                if (da - db).abs() <= eps.dist {
                    Err(())
                } else if da < db {
                    Ok([Some(a), None])
                } else {
                    Ok([Some(b), None])
                }
            }
            other => Ok(other),
        };
    }
    match (fin(roles[0]), fin(roles[1])) {
        (true, false) => Ok([Some(fd.opposite_of(roles[0])), None]),
        (false, true) => Ok([Some(fd.opposite_of(roles[1])), None]),
        _ => Ok([Some(roles[2]).filter(|&r| !fin(r)), Some(roles[3]).filter(|&r| !fin(r))]),
    }
}

fn cmp_tol(a: &[f64], b: &[f64], tol: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x.total_cmp(y);
        }
    }
    Ordering::Equal
}

fn best_by_key<const N: usize>(
    p: &[Point; 4],
    candidates: &[[usize; 4]],
    eps: Eps,
    key: impl Fn(&[usize; 4]) -> [f64; N],
) -> [usize; 4] {
    let keys: [[f64; N]; 4] = core::array::from_fn(|i| candidates.get(i).map_or([f64::INFINITY; N], &key));
    let best = (0..candidates.len()).map(|i| keys[i]).min_by(|a, b| cmp_tol(a, b, eps.dist)).unwrap();
    let mut kept = [[0usize; 4]; 6];
    let mut n = 0;
    for (i, c) in candidates.iter().enumerate() {
        if cmp_tol(&keys[i], &best, eps.dist) == Ordering::Equal {
            kept[n] = *c;
            n += 1;
        }
    }
    role_assignment_tiebreak(p, &kept[..n], eps)
}

/// Deterministic choice among valid role assignments using only
/// similarity-invariant data: the label-ordered inter-robot distances,
/// normalized by the diameter, compared lexicographically. An exact residual
/// tie means the configuration is symmetric under a relabeling, and the first
/// candidate is returned.
pub fn role_assignment_tiebreak(p: &[Point; 4], candidates: &[[usize; 4]], eps: Eps) -> [usize; 4] {
    assert!(!candidates.is_empty(), "tie-break needs at least one candidate");
    if candidates.len() == 1 {
        return candidates[0];
    }
    let diam = diameter(p);
    let key = |r: &[usize; 4]| -> [f64; 6] {
        let mut k = [0.0; 6];
        for (slot, &(i, j)) in k.iter_mut().zip(PAIRS.iter()) {
            *slot = p[r[i]].dist(p[r[j]]) / diam;
        }
        k
    };
    let mut best = candidates[0];
    let mut best_key = key(&best);
    for c in &candidates[1..] {
        let k = key(c);
        if cmp_tol(&k, &best_key, eps.rel) == Ordering::Less {
            best = *c;
            best_key = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, SIN_25};

    fn cls(p: [Point; 4]) -> Classification {
        classify(&p, Tolerance::default()).unwrap()
    }

    #[test]
    fn orthogonal_example() {
        let c = cls([pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, -1.0)]);
        assert_eq!(c.class, ConfigClass::Orthogonal);
        match c.payload {
            Payload::Orthogonal { center, radius } => {
                assert!(center.dist(pt(0.0, 0.0)) < 1e-15);
                assert_eq!(radius, 2.0);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn thin_hexagon_example() {
        let c = cls([pt(0.0, 0.0), pt(10.0, 0.0), pt(3.0, 0.1), pt(6.0, -0.1)]);
        assert_eq!(c.class, ConfigClass::ThinHexagon);
        let mut ext = [c.roles[0], c.roles[1]];
        ext.sort();
        assert_eq!(ext, [0, 1]);
    }

    #[test]
    fn collinear_is_thin_hexagon_over_hull_extremes() {
        let c = cls([pt(0.0, 0.0), pt(1.0, 0.0), pt(3.0, 0.0), pt(7.0, 0.0)]);
        assert_eq!(c.class, ConfigClass::ThinHexagon);
        let mut ext = [c.roles[0], c.roles[1]];
        ext.sort();
        assert_eq!(ext, [0, 3]);
    }

    #[test]
    fn non_convex_example() {
        let c = cls([pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 4.0), pt(1.0, 1.0)]);
        assert_eq!(c.class, ConfigClass::NonConvex);
        assert_eq!(c.roles[3], 3);
    }

    #[test]
    fn havens_are_orthogonal() {
        let h = ThinHexagon::new(pt(0.0, 0.0), pt(10.0, 0.0)).unwrap();
        let hv = h.havens();
        let c = cls([pt(0.0, 0.0), pt(10.0, 0.0), hv[0], hv[1]]);
        assert_eq!(c.class, ConfigClass::Orthogonal);
        assert!((hv[0].y - 2.5 * SIN_25).abs() < 1e-15);
    }

    #[test]
    fn square_is_orthogonal_at_max_radius() {
        let c = cls([pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]);
        assert_eq!(c.class, ConfigClass::Orthogonal);
        match c.payload {
            Payload::Orthogonal { center, radius } => {
                assert!(center.dist(pt(0.5, 0.5)) < 1e-15);
                assert!((radius - 0.5f64.sqrt()).abs() < 1e-15);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn coincident_rejected() {
        let r = classify(&[pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)], Tolerance::default());
        assert_eq!(r.unwrap_err(), ClassifyError::Coincident(0, 1));
    }

    #[test]
    fn single_candidate_unchanged() {
        let p = [pt(0.0, 0.0), pt(1.0, 0.0), pt(5.0, 1.0), pt(2.0, 7.0)];
        let eps = Eps::for_points(&p, Tolerance::default());
        assert_eq!(role_assignment_tiebreak(&p, &[[3, 1, 0, 2]], eps), [3, 1, 0, 2]);
    }

    #[test]
    fn class_names_round_trip() {
        for c in ConfigClass::ALL {
            assert_eq!(ConfigClass::from_name(c.name()), Some(c));
            assert_eq!(ConfigClass::from_index(c.index()), Some(c));
        }
    }
}
