//! The Compute step: class-specific move plans and cautious truncation.
//!
//! Plans are computed on world (or local) positions with no reference to the
//! input order, so relabeling the robots relabels the plan and nothing else.

use alloc::vec::Vec;
use core::fmt;

use crate::classifier::{classify, flowing_movers, hexagon_candidate_within, ClassifyError, Classification, ConfigClass, FrameData, Payload};
use crate::geom::{others, segment_intersection, Crossing, Eps, Line, Point, Segment, ThinHexagon, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlgorithmErrorKind {
    Classify(ClassifyError),
    NoInteriorFoot,
    FlowingTie,
    /// Both short-diagonal robots of a Pinwheel blocked or both hindered.
    BothObstructed,
    /// Both short-diagonal robots of a Pinwheel inside the extremes' hexagon.
    BothContained,
}

/// A planning failure, with the configuration that caused it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmError {
    pub kind: AlgorithmErrorKind,
    pub positions: [Point; 4],
}

impl fmt::Display for AlgorithmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            AlgorithmErrorKind::Classify(e) => return write!(f, "{e}"),
            AlgorithmErrorKind::NoInteriorFoot => "no altitude foot interior to an edge",
            AlgorithmErrorKind::FlowingTie => "flowing tie between unfinished robots",
            AlgorithmErrorKind::BothObstructed => "pinwheel with both short-diagonal robots obstructed",
            AlgorithmErrorKind::BothContained => "pinwheel with both short-diagonal robots in the hexagon",
        };
        let p = &self.positions;
        write!(f, "{what} at [{}, {}, {}, {}]", p[0], p[1], p[2], p[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trigger {
    HexagonBoundary,
    Blocked,
    HindranceMidpoint,
    Hindrance,
    /// The mover's segment becomes orthogonal to the opposite segment.
    OrthogonalLine,
    /// The mover enters a thin hexagon spanned by other robots, or starts
    /// spanning one that contains the other two.
    HexagonForms,
    /// The mover passes a corner of the target square.
    Corner,
    Goal,
}

impl Trigger {
    pub fn name(self) -> &'static str {
        match self {
            Trigger::HexagonBoundary => "hexagon_boundary",
            Trigger::Blocked => "blocked",
            Trigger::HindranceMidpoint => "hindrance_midpoint",
            Trigger::Hindrance => "hindrance",
            Trigger::OrthogonalLine => "orthogonal_line",
            Trigger::HexagonForms => "hexagon_forms",
            Trigger::Corner => "corner",
            Trigger::Goal => "goal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub point: Point,
    /// Parameter along mover -> goal.
    pub param: f64,
    pub trigger: Trigger,
}

pub type CriticalPointSet = Vec<CriticalPoint>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Move {
    pub robot: usize,
    pub goal: Point,
    pub cautious: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MovePlan {
    pub classification: Classification,
    /// Robots whose goal differs from their position.
    pub moves: Vec<Move>,
    /// A hexagon that stays fixed while the plan runs.
    pub hexagon: Option<ThinHexagon>,
}

impl MovePlan {
    pub fn class(&self) -> ConfigClass {
        self.classification.class
    }

    pub fn move_of(&self, robot: usize) -> Option<&Move> {
        self.moves.iter().find(|m| m.robot == robot)
    }

    pub fn movers(&self) -> impl Iterator<Item = usize> + '_ {
        self.moves.iter().map(|m| m.robot)
    }
}

/// Four points as seen by one robot: itself at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapshot {
    pub others: [Point; 3],
}

impl Snapshot {
    pub fn positions(&self) -> [Point; 4] {
        [Point::ORIGIN, self.others[0], self.others[1], self.others[2]]
    }
}

fn err(kind: AlgorithmErrorKind, p: &[Point; 4]) -> AlgorithmError {
    AlgorithmError { kind, positions: *p }
}

pub fn plan(positions: &[Point; 4], tol: Tolerance) -> Result<MovePlan, AlgorithmError> {
    let c = classify(positions, tol).map_err(|e| err(AlgorithmErrorKind::Classify(e), positions))?;
    plan_for(positions, c)
}

/// Plan for an already computed classification of `positions`.
pub fn plan_for(positions: &[Point; 4], c: Classification) -> Result<MovePlan, AlgorithmError> {
    let mut out = MovePlan { classification: c, moves: Vec::new(), hexagon: None };
    let eps = c.eps;
    match c.payload {
        Payload::Orthogonal { center, radius } => plan_orthogonal(positions, center, radius, &c.roles, eps, &mut out),
        Payload::ThinHexagon { hexagon } => plan_thin_hexagon(positions, &hexagon, &c.roles, eps, &mut out),
        Payload::NonConvex => plan_non_convex(positions, &c.roles, eps, &mut out)?,
        Payload::Frame(fd) => match c.class {
            ConfigClass::Pinwheel => plan_pinwheel(positions, &fd, &c.roles, eps, &mut out)?,
            ConfigClass::Scissors => plan_scissors(positions, &fd, &mut out),
            ConfigClass::Flowing => plan_flowing(positions, &fd, &c.roles, eps, &mut out)?,
            _ => plan_one_discordant(&fd, &c.roles, &mut out),
        },
    }
    let dist = eps.dist;
    out.moves.retain(|m| m.goal.dist(positions[m.robot]) > dist);
    Ok(out)
}

fn push(out: &mut MovePlan, robot: usize, goal: Point, cautious: bool) {
    out.moves.push(Move { robot, goal, cautious });
}

fn plan_orthogonal(p: &[Point; 4], c: Point, radius: f64, roles: &[usize; 4], eps: Eps, out: &mut MovePlan) {
    for k in 0..4 {
        let i = roles[k];
        let partner = roles[(k + 2) % 4];
        let v = p[i] - c;
        let d = v.norm();
        if (d - radius).abs() <= eps.dist {
            continue;
        }
        let dir = if d <= eps.dist { (c - p[partner]).unit() } else { Some(v / d) };
        if let Some(dir) = dir {
            push(out, i, c + dir * radius, false);
        }
    }
}

/// Normal of `h` on the side picked by the input coordinate system: upward,
/// or rightward when the diagonal is vertical.
fn preferred_normal(h: &ThinHexagon) -> Point {
    let n = h.normal();
    if n.y > 0.0 || (n.y == 0.0 && n.x > 0.0) {
        n
    } else {
        -n
    }
}

fn off_diagonal(h: &ThinHexagon, p: Point, n: Point) -> Point {
    let (t, _) = h.local(p);
    p + n * (0.5 * h.chord_half_width(t))
}

fn plan_thin_hexagon(p: &[Point; 4], h: &ThinHexagon, roles: &[usize; 4], eps: Eps, out: &mut MovePlan) {
    let (k, l) = (roles[2], roles[3]);
    let sk = h.side_of_diagonal(p[k], eps.dist);
    let sl = h.side_of_diagonal(p[l], eps.dist);
    let nrm = h.normal();
    match (sk, sl) {
        (0, 0) => {
            let n = preferred_normal(h);
            push(out, k, off_diagonal(h, p[k], n), false);
            push(out, l, off_diagonal(h, p[l], n), false);
        }
        (0, s) => push(out, k, off_diagonal(h, p[k], nrm * -f64::from(s)), false),
        (s, 0) => push(out, l, off_diagonal(h, p[l], nrm * -f64::from(s)), false),
        (a, b) if a != b => {
            let havens = h.havens();
            let haven = |s: i8| if s > 0 { havens[0] } else { havens[1] };
            let (hk, hl) = (haven(a), haven(b));
            let (dk, dl) = (p[k].dist(hk), p[l].dist(hl));
            let (at_k, at_l) = (dk <= eps.dist, dl <= eps.dist);
            if at_k || at_l {
                if !at_k {
                    push(out, k, hk, false);
                }
                if !at_l {
                    push(out, l, hl, false);
                }
            } else if (dk - dl).abs() <= eps.dist {
                push(out, k, hk, false);
                push(out, l, hl, false);
            } else if dk < dl {
                push(out, k, hk, false);
            } else {
                push(out, l, hl, false);
            }
        }
        (s, _) => {
            let b = h.beacons();
            // Beacon nearer h1 first.
            let (near, far) = if s > 0 { (b[0], b[1]) } else { (b[3], b[2]) };
            let straight = p[k].dist(near) + p[l].dist(far);
            let swapped = p[k].dist(far) + p[l].dist(near);
            let k_near = if (straight - swapped).abs() <= eps.dist {
                h.local(p[k]).0 <= h.local(p[l]).0
            } else {
                straight < swapped
            };
            if k_near {
                push(out, k, near, false);
                push(out, l, far, false);
            } else {
                push(out, k, far, false);
                push(out, l, near, false);
            }
        }
    }
}

/// Feet of the altitudes of triangle `t` that lie strictly inside an edge.
pub fn interior_altitude_feet(t: [Point; 3], tol: f64) -> Vec<Point> {
    let mut feet = Vec::new();
    for a in 0..3 {
        let (b, c) = (t[(a + 1) % 3], t[(a + 2) % 3]);
        let Some(line) = Line::through(b, c) else { continue };
        let len = b.dist(c);
        let s = line.coordinate(t[a]);
        if s > tol && s < len - tol {
            feet.push(line.at(s));
        }
    }
    feet
}

fn plan_non_convex(p: &[Point; 4], roles: &[usize; 4], eps: Eps, out: &mut MovePlan) -> Result<(), AlgorithmError> {
    let m = roles[3];
    let feet = interior_altitude_feet([p[roles[0]], p[roles[1]], p[roles[2]]], eps.dist);
    let me = p[m];
    let best = feet.iter().map(|f| f.dist(me)).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(err(AlgorithmErrorKind::NoInteriorFoot, p));
    }
    let near: Vec<Point> = feet.into_iter().filter(|f| f.dist(me) <= best + eps.dist).collect();
    let goal = if near.len() == 1 {
        near[0]
    } else {
        // Order equidistant feet by the configuration they would produce.
        let key = |f: Point| {
            let mut q = *p;
            q[m] = f;
            feet_key(&q, m, eps.dist)
        };
        let mut pick = near[0];
        for &f in &near[1..] {
            if key(f) < key(pick) {
                pick = f;
            }
        }
        pick
    };
    push(out, m, goal, false);
    Ok(())
}

/// Sorted distances from the mover to the triangle, quantized at `tol`.
fn feet_key(q: &[Point; 4], m: usize, tol: f64) -> [i64; 3] {
    let o = others(m);
    let mut d = [q[m].dist(q[o[0]]), q[m].dist(q[o[1]]), q[m].dist(q[o[2]])];
    d.sort_by(f64::total_cmp);
    d.map(|x| libm::round(x / tol) as i64)
}

fn plan_pinwheel(
    p: &[Point; 4],
    fd: &FrameData,
    roles: &[usize; 4],
    eps: Eps,
    out: &mut MovePlan,
) -> Result<(), AlgorithmError> {
    let [a, b, c, d] = *roles;
    let at = |r: usize| fd.attrs_of(r);
    let hexagon = ThinHexagon::new(p[b], p[d]).ok();
    if at(a).finished && at(c).finished {
        let (in_a, in_c) = match &hexagon {
            Some(h) => (h.contains(p[a], eps.dist), h.contains(p[c], eps.dist)),
            None => (false, false),
        };
        match (in_a, in_c) {
            (true, true) => return Err(err(AlgorithmErrorKind::BothContained, p)),
            (false, false) => {
                push(out, b, at(b).target, true);
                push(out, d, at(d).target, true);
            }
            _ => {
                let x = if in_a { a } else { c };
                let (db, dd) = (p[b].dist(p[x]), p[d].dist(p[x]));
                if (db - dd).abs() <= eps.dist {
                    push(out, b, at(b).target, true);
                    push(out, d, at(d).target, true);
                } else {
                    let mover = if db < dd { b } else { d };
                    push(out, mover, at(mover).target, true);
                }
            }
        }
        return Ok(());
    }
    let ob_a = fd.frame.obstructions(fd.frame_index(a), eps);
    let ob_c = fd.frame.obstructions(fd.frame_index(c), eps);
    let open = |r: usize| !at(r).finished;
    match (ob_a.blocked, ob_c.blocked) {
        (Some(_), Some(_)) => return Err(err(AlgorithmErrorKind::BothObstructed, p)),
        (Some(v), None) => {
            push(out, a, v.point, true);
            return Ok(());
        }
        (None, Some(v)) => {
            push(out, c, v.point, true);
            return Ok(());
        }
        (None, None) => {}
    }
    match (ob_a.hindered.filter(|_| open(a)), ob_c.hindered.filter(|_| open(c))) {
        (Some(_), Some(_)) => return Err(err(AlgorithmErrorKind::BothObstructed, p)),
        (Some(v), None) => {
            push(out, a, v.point, true);
            return Ok(());
        }
        (None, Some(v)) => {
            push(out, c, v.point, true);
            return Ok(());
        }
        (None, None) => {}
    }
    out.hexagon = hexagon;
    let inside = |r: usize| hexagon.map_or(false, |h| h.contains(p[r], eps.dist));
    for (r, partner) in [(a, c), (c, a)] {
        if !open(r) {
            continue;
        }
        // A robot already in the hexagon lets its partner arrive first.
        if inside(r) && open(partner) && !inside(partner) {
            continue;
        }
        push(out, r, at(r).target, true);
    }
    Ok(())
}

fn plan_scissors(p: &[Point; 4], fd: &FrameData, out: &mut MovePlan) {
    let external: Vec<usize> = fd.order.iter().copied().filter(|&r| fd.attrs_of(r).external).collect();
    let internal: Vec<usize> = fd.order.iter().copied().filter(|&r| fd.attrs_of(r).internal).collect();
    let target = |r: usize| fd.attrs_of(r).target;
    if external.len() == 1 {
        push(out, external[0], target(external[0]), true);
    } else if internal.iter().all(|&r| fd.attrs_of(r).finished) {
        for &r in &external {
            push(out, r, target(r), true);
        }
    } else {
        for &r in internal.iter().filter(|&&r| !fd.attrs_of(r).finished) {
            push(out, r, target(r), true);
        }
        if external.len() == 2 {
            out.hexagon = ThinHexagon::new(p[external[0]], p[external[1]]).ok();
        }
    }
}

fn plan_flowing(
    p: &[Point; 4],
    fd: &FrameData,
    roles: &[usize; 4],
    eps: Eps,
    out: &mut MovePlan,
) -> Result<(), AlgorithmError> {
    let movers = flowing_movers(fd, roles, eps).map_err(|()| err(AlgorithmErrorKind::FlowingTie, p))?;
    for r in movers.into_iter().flatten() {
        push(out, r, fd.attrs_of(r).target, true);
    }
    Ok(())
}

fn plan_one_discordant(fd: &FrameData, roles: &[usize; 4], out: &mut MovePlan) {
    let r = roles[3];
    push(out, r, fd.attrs_of(r).target, true);
}

/// Critical points on the segment from `mover` to its goal, ascending, ending
/// with the goal. Points at the start of the segment are skipped.
pub fn critical_points(p: &[Point; 4], plan: &MovePlan, mover: usize) -> CriticalPointSet {
    let eps = plan.classification.eps;
    let Some(mv) = plan.move_of(mover) else {
        return alloc::vec![CriticalPoint { point: p[mover], param: 0.0, trigger: Trigger::Goal }];
    };
    let from = p[mover];
    let goal = mv.goal;
    let path = Segment::new(from, goal);
    let len = path.length();
    let mut out = Vec::new();
    let goal_pt = CriticalPoint { point: goal, param: 1.0, trigger: Trigger::Goal };
    if !mv.cautious || len <= eps.dist {
        out.push(goal_pt);
        return out;
    }
    let start = eps.dist / len;
    let mut add = |param: f64, trigger: Trigger| {
        if param > start && param < 1.0 {
            out.push(CriticalPoint { point: path.at(param), param, trigger });
        }
    };
    let rest = others(mover);
    let co_mover = |r: usize| plan.moves.iter().any(|m| m.robot == r && r != mover);
    let single = plan.moves.len() == 1;

    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let (j, k) = (rest[x], rest[y]);
        let Some(hit) = segment_intersection(&path, &Segment::new(p[j], p[k]), eps.dist) else { continue };
        if !hit.within_first {
            continue;
        }
        match hit.kind {
            Crossing::Interior | Crossing::Endpoint => add(hit.s, Trigger::Blocked),
            Crossing::Extension if co_mover(j) || co_mover(k) => add(0.5 * hit.s, Trigger::HindranceMidpoint),
            Crossing::Extension => add(hit.s, Trigger::Hindrance),
        }
    }
    if let Some(h) = &plan.hexagon {
        for s in h.boundary_crossings(&path, eps.dist) {
            add(s, Trigger::HexagonBoundary);
        }
    }
    if single {
        single_mover_events(p, plan, mover, &path, start, eps, &mut add);
    }
    out.sort_by(|a, b| a.param.total_cmp(&b.param));
    out.dedup_by(|a, b| (a.param - b.param).abs() * len <= eps.dist);
    out.push(goal_pt);
    out
}

/// Events that can change the class while only `mover` moves.
fn single_mover_events(
    p: &[Point; 4],
    plan: &MovePlan,
    mover: usize,
    path: &Segment,
    start: f64,
    eps: Eps,
    add: &mut impl FnMut(f64, Trigger),
) {
    let rest = others(mover);
    let at = |t: f64| {
        let mut q = *p;
        q[mover] = path.at(t);
        q
    };

    // Entering a static hexagon that already holds the fourth robot.
    for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (j, k, l) = (rest[x], rest[y], rest[z]);
        let Ok(h) = ThinHexagon::new(p[j], p[k]) else { continue };
        if h.contains(p[l], eps.dist) && !h.contains(path.a, eps.dist) {
            for s in h.boundary_crossings(path, eps.dist) {
                add(s, Trigger::HexagonForms);
            }
        }
    }

    // A hexagon spanned by the mover and another robot coming to hold the
    // remaining two. Zero slack puts the stop strictly inside the tolerance
    // band, so every frame agrees on the class there.
    for x in 0..3 {
        let j = rest[x];
        let forms = |t: f64| {
            let q = at(t);
            hexagon_candidate_within(&q, mover, j, 0.0, eps).is_some()
        };
        if let Some(t) = first_true(start, &forms) {
            add(t, Trigger::HexagonForms);
        }
    }

    // The mover's segment to a partner becoming orthogonal to the other two.
    let d = path.b - path.a;
    for x in 0..3 {
        let a = rest[x];
        let [b, c] = match x {
            0 => [rest[1], rest[2]],
            1 => [rest[0], rest[2]],
            _ => [rest[0], rest[1]],
        };
        let w = p[c] - p[b];
        let den = d.dot(w);
        if den == 0.0 {
            continue;
        }
        let t = -(path.a - p[a]).dot(w) / den;
        if t > start && t < 1.0 {
            let q = at(t);
            let hit = segment_intersection(&Segment::new(q[mover], p[a]), &Segment::new(p[b], p[c]), eps.dist);
            if hit.map_or(false, |h| h.within_first && h.kind != Crossing::Extension) {
                add(t, Trigger::OrthogonalLine);
            }
        }
    }

    if plan.class() == ConfigClass::Scissors {
        if let Some(fd) = plan.classification.frame() {
            let a = fd.attrs_of(mover);
            let off = a.offset.abs();
            if a.external && off > fd.frame.half_side {
                add((off - fd.frame.half_side) / off, Trigger::Corner);
            }
        }
    }
}

const SCAN_STEPS: usize = 48;

/// First parameter in `(0, 1)` where `f` turns true, located by a coarse
/// scan followed by bisection. An event closer than `start` is pushed to
/// `2 * start` so the mover still crosses it. `None` if `f` holds at 0.
fn first_true(start: f64, f: &impl Fn(f64) -> bool) -> Option<f64> {
    if f(0.0) {
        return None;
    }
    let mut lo = 0.0;
    for i in 1..=SCAN_STEPS {
        let t = (i as f64) / (SCAN_STEPS as f64);
        if f(t) {
            let mut hi = t;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi.max(2.0 * start));
        }
        lo = t;
    }
    None
}

/// First critical point on the mover's segment toward its goal.
pub fn cautious_destination(p: &[Point; 4], plan: &MovePlan, mover: usize) -> Point {
    critical_points(p, plan, mover)[0].point
}

/// Destination of robot `robot` under `plan`: its position when it does not move.
pub fn destination_in(p: &[Point; 4], plan: &MovePlan, robot: usize) -> Point {
    match plan.move_of(robot) {
        None => p[robot],
        Some(m) if !m.cautious => m.goal,
        Some(_) => cautious_destination(p, plan, robot),
    }
}

pub fn try_compute_destination(s: &Snapshot, tol: Tolerance) -> Result<Point, AlgorithmError> {
    let p = s.positions();
    let plan = plan(&p, tol)?;
    Ok(destination_in(&p, &plan, 0))
}

/// Compute step of one robot, in its own coordinates.
///
/// # Panics
///
/// On an invalid snapshot or a configuration the case analysis rules out.
pub fn compute_destination(s: &Snapshot) -> Point {
    match try_compute_destination(s, Tolerance::default()) {
        Ok(p) => p,
        Err(e) => panic!("compute failed: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{is_square, pt, SIN_25};

    fn goals(p: [Point; 4]) -> [Point; 4] {
        let plan = plan(&p, Tolerance::default()).unwrap();
        core::array::from_fn(|i| destination_in(&p, &plan, i))
    }

    fn close(a: Point, b: Point) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn orthogonal_goals() {
        let g = goals([pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, -1.0)]);
        let want = [pt(-2.0, 0.0), pt(2.0, 0.0), pt(0.0, 2.0), pt(0.0, -2.0)];
        for (a, b) in g.iter().zip(want) {
            assert!(close(*a, b), "{a} vs {b}");
        }
    }

    #[test]
    fn square_is_fixed() {
        let p = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        let plan = plan(&p, Tolerance::default()).unwrap();
        assert!(plan.moves.is_empty());
        let d = compute_destination(&Snapshot { others: [pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)] });
        assert_eq!(d, Point::ORIGIN);
    }

    #[test]
    fn robot_at_center_moves_away_from_partner() {
        let d = compute_destination(&Snapshot { others: [pt(2.0, 0.0), pt(-2.0, 0.0), pt(0.0, 3.0)] });
        assert!(close(d, pt(0.0, -3.0)), "{d}");
    }

    #[test]
    fn non_convex_handoff_endgame() {
        let p = [pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 4.0), pt(2.0, 2.0)];
        let g = goals(p);
        assert!(close(g[3], pt(4.0, 4.0)), "{}", g[3]);
        assert!(is_square(&g, Tolerance::new(1e-9).unwrap()));
    }

    #[test]
    fn contained_robot_goes_to_hypotenuse() {
        let d = compute_destination(&Snapshot { others: [pt(-1.0, -1.0), pt(3.0, -1.0), pt(-1.0, 3.0)] });
        assert!(close(d, pt(1.0, 1.0)), "{d}");
    }

    #[test]
    fn nearest_interior_foot() {
        let tri = [pt(0.0, 0.0), pt(4.0, 0.0), pt(2.0, 3.6)];
        let me = pt(2.0, 1.0);
        let p = [tri[0], tri[1], tri[2], me];
        let g = goals(p);
        // Projection oracle.
        let mut best = (f64::INFINITY, Point::ORIGIN);
        for a in 0..3 {
            let (b, c) = (tri[(a + 1) % 3], tri[(a + 2) % 3]);
            let d = c - b;
            let s = (tri[a] - b).dot(d) / d.dot(d);
            let f = b + d * s;
            if s > 0.0 && s < 1.0 && f.dist(me) < best.0 {
                best = (f.dist(me), f);
            }
        }
        assert!(close(g[3], best.1), "{} vs {}", g[3], best.1);
    }

    #[test]
    fn hexagon_different_sides_closer_moves() {
        let p = [pt(0.0, 0.0), pt(10.0, 0.0), pt(3.0, 0.1), pt(6.0, -0.1)];
        let plan = plan(&p, Tolerance::default()).unwrap();
        let hy = 2.5 * SIN_25;
        let d2 = pt(3.0, 0.1).dist(pt(5.0, hy));
        let d3 = pt(6.0, -0.1).dist(pt(5.0, -hy));
        assert!(d3 < d2);
        assert_eq!(plan.moves.len(), 1);
        assert_eq!(plan.moves[0].robot, 3);
        assert!(close(plan.moves[0].goal, pt(5.0, -hy)));
    }

    #[test]
    fn hexagon_symmetric_tie_moves_both() {
        let p = [pt(0.0, 0.0), pt(10.0, 0.0), pt(4.0, 0.1), pt(6.0, -0.1)];
        let plan = plan(&p, Tolerance::default()).unwrap();
        assert_eq!(plan.moves.len(), 2);
    }

    #[test]
    fn hexagon_same_side_beacons() {
        let p = [pt(0.0, 0.0), pt(10.0, 0.0), pt(3.0, 0.2), pt(6.0, 0.2)];
        let g = goals(p);
        let h = ThinHexagon::new(p[0], p[1]).unwrap();
        let v = h.vertices;
        let straight = p[2].dist(v[1]) + p[3].dist(v[2]);
        let swapped = p[2].dist(v[2]) + p[3].dist(v[1]);
        assert!(straight < swapped);
        assert!(close(g[2], v[1]) && close(g[3], v[2]));
    }

    #[test]
    fn hexagon_diagonal_robot_crosses() {
        let p = [pt(0.0, 0.0), pt(10.0, 0.0), pt(3.0, 0.0), pt(6.0, 0.5)];
        let g = goals(p);
        let half = 0.5 * (3.0 * crate::geom::TAN_25).min(2.5 * SIN_25);
        assert!(close(g[2], pt(3.0, -half)), "{}", g[2]);
        assert_eq!(g[3], p[3]);
    }

    #[test]
    fn no_move_when_not_a_mover() {
        let p = [pt(0.0, 0.0), pt(10.0, 0.0), pt(3.0, 0.1), pt(6.0, -0.1)];
        let plan = plan(&p, Tolerance::default()).unwrap();
        assert_eq!(destination_in(&p, &plan, 0), p[0]);
        let cps = critical_points(&p, &plan, 0);
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].trigger, Trigger::Goal);
    }

    #[test]
    fn first_true_bisects() {
        let t = first_true(0.0, &|t: f64| t > 0.3).unwrap();
        assert!((t - 0.3).abs() < 1e-12);
        assert_eq!(first_true(0.01, &|t: f64| t > 0.001), Some(0.02));
        assert_eq!(first_true(0.0, &|_| true), None);
        assert_eq!(first_true(0.0, &|_| false), None);
    }
}
