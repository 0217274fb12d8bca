//! Planar primitives shared by every other module.
//!
//! All containment predicates are closed and take an absolute distance
//! tolerance. Callers obtain that tolerance from [`Eps::for_points`], which
//! scales the relative epsilon by the configuration diameter so that every
//! predicate is invariant under uniform scaling.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// sin 25°, the half-angle at the extremes of a thin hexagon.
pub const SIN_25: f64 = 0.422_618_261_740_699_44;
/// cos 25°.
pub const COS_25: f64 = 0.906_307_787_036_649_96;
/// tan 25°.
pub const TAN_25: f64 = 0.466_307_658_154_998_59;

/// A point (or free vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

pub const fn pt(x: f64, y: f64) -> Point {
    Point { x, y }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// `x1*y2 - x2*y1`.
    pub fn cross(self, o: Point) -> f64 {
        cross(self, o)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn unit(self) -> Option<Point> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn lerp(self, to: Point, t: f64) -> Point {
        self + (to - self) * t
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, k: f64) -> Point {
        Point::new(self.x / k, self.y / k)
    }
}

/// Cross product of two plane vectors, `x1*y2 - x2*y1`.
pub fn cross(u: Point, v: Point) -> f64 {
    u.x * v.y - v.x * u.y
}

/// Twice the signed area of the triangle `abc` (positive when counter-clockwise).
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b - a, c - a)
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(points[i].dist(points[j]));
        }
    }
    d
}

/// Relative tolerance, applied after normalizing by the configuration diameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps_rel: f64) -> Result<Self, GeomError> {
        if eps_rel > 0.0 && eps_rel.is_finite() {
            Ok(Tolerance { eps_rel })
        } else {
            Err(GeomError::InvalidTolerance)
        }
    }
}

/// A tolerance resolved against a concrete configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eps {
    /// Dimensionless tolerance used for angle cosines and length ratios.
    pub rel: f64,
    /// Distance tolerance, `rel * diameter`.
    pub dist: f64,
}

impl Eps {
    pub fn for_points(points: &[Point], tol: Tolerance) -> Eps {
        Eps { rel: tol.eps_rel, dist: tol.eps_rel * diameter(points) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeomError {
    DegenerateDiagonal,
    InvalidTolerance,
    NonFinite,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::DegenerateDiagonal => f.write_str("thin hexagon extremes coincide"),
            GeomError::InvalidTolerance => f.write_str("tolerance must be positive and finite"),
            GeomError::NonFinite => f.write_str("non-finite coordinate"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn at(&self, t: f64) -> Point {
        self.a.lerp(self.b, t)
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let l2 = d.norm2();
        if l2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / l2).clamp(0.0, 1.0);
        p.dist(self.at(t))
    }
}

/// An infinite line with unit direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub origin: Point,
    pub dir: Point,
}

impl Line {
    /// `None` if `dir` is the zero vector.
    pub fn new(origin: Point, dir: Point) -> Option<Self> {
        dir.unit().map(|dir| Line { origin, dir })
    }

    pub fn through(a: Point, b: Point) -> Option<Self> {
        Line::new(a, b - a)
    }

    /// Signed offset of `p` from the origin, measured along the direction.
    pub fn coordinate(&self, p: Point) -> f64 {
        (p - self.origin).dot(self.dir)
    }

    pub fn at(&self, s: f64) -> Point {
        self.origin + self.dir * s
    }

    /// Signed perpendicular distance, positive to the left of the direction.
    pub fn side_distance(&self, p: Point) -> f64 {
        cross(self.dir, p - self.origin)
    }
}

/// Orthogonal projection of `p` onto `l`.
pub fn foot_of_perpendicular(p: Point, l: &Line) -> Point {
    l.at(l.coordinate(p))
}

/// Where an intersection point sits relative to the second segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    Interior,
    Endpoint,
    Extension,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Intersection {
    pub point: Point,
    /// Parameter along the first segment (0 at `a`, 1 at `b`).
    pub s: f64,
    /// Parameter along the second segment or line.
    pub t: f64,
    /// Whether the point lies on the first segment (closed, within tolerance).
    pub within_first: bool,
    /// Position relative to the second segment.
    pub kind: Crossing,
}

fn line_params(p: Point, d1: Point, q: Point, d2: Point) -> Option<(f64, f64)> {
    let den = cross(d1, d2);
    if den.abs() <= 1e-14 * d1.norm() * d2.norm() || den == 0.0 {
        return None;
    }
    let w = q - p;
    Some((cross(w, d2) / den, cross(w, d1) / den))
}

/// Intersection of the supporting lines of `s` and `t`, classified against both
/// segments with absolute tolerance `tol`. `None` when the lines are parallel.
pub fn segment_intersection(s: &Segment, t: &Segment, tol: f64) -> Option<Intersection> {
    let d1 = s.b - s.a;
    let d2 = t.b - t.a;
    let (ps, pt_) = line_params(s.a, d1, t.a, d2)?;
    let ts = tol / d1.norm();
    let tt = tol / d2.norm();
    let kind = if pt_ < -tt || pt_ > 1.0 + tt {
        Crossing::Extension
    } else if pt_.abs() <= tt || (pt_ - 1.0).abs() <= tt {
        Crossing::Endpoint
    } else {
        Crossing::Interior
    };
    Some(Intersection {
        point: s.a + d1 * ps,
        s: ps,
        t: pt_,
        within_first: ps >= -ts && ps <= 1.0 + ts,
        kind,
    })
}

/// Intersection of a segment with a line; `kind` is always `Interior` because
/// a line has no endpoints.
pub fn segment_line_intersection(s: &Segment, l: &Line, tol: f64) -> Option<Intersection> {
    let d1 = s.b - s.a;
    let (ps, pl) = line_params(s.a, d1, l.origin, l.dir)?;
    let ts = tol / d1.norm();
    Some(Intersection {
        point: s.a + d1 * ps,
        s: ps,
        t: pl,
        within_first: ps >= -ts && ps <= 1.0 + ts,
        kind: Crossing::Interior,
    })
}

/// Closed, tolerance-aware containment of `p` in triangle `abc`. A collinear
/// triangle contains exactly the points of its covering segment.
pub fn point_in_triangle(p: Point, a: Point, b: Point, c: Point, tol: f64) -> bool {
    let ab = a.dist(b);
    let bc = b.dist(c);
    let ca = c.dist(a);
    let longest = ab.max(bc).max(ca);
    let area2 = orient(a, b, c);
    if area2.abs() <= tol * longest {
        let cover = if longest == ab {
            Segment::new(a, b)
        } else if longest == bc {
            Segment::new(b, c)
        } else {
            Segment::new(c, a)
        };
        return cover.distance_to(p) <= tol;
    }
    let sgn = area2.signum();
    for (u, v, len) in [(a, b, ab), (b, c, bc), (c, a, ca)] {
        if sgn * orient(u, v, p) / len < -tol {
            return false;
        }
    }
    true
}

/// Cyclic order of four points in strictly convex position, starting at index 0.
pub fn convex_cyclic_order(p: &[Point; 4], tol: f64) -> Option<[usize; 4]> {
    for i in 0..4 {
        let o = others(i);
        if point_in_triangle(p[i], p[o[0]], p[o[1]], p[o[2]], tol) {
            return None;
        }
    }
    for k in 1..4 {
        let rest: [usize; 2] = match k {
            1 => [2, 3],
            2 => [1, 3],
            _ => [1, 2],
        };
        let sj = orient(p[0], p[k], p[rest[0]]);
        let sl = orient(p[0], p[k], p[rest[1]]);
        if sj * sl < 0.0 {
            return Some([0, rest[0], k, rest[1]]);
        }
    }
    None
}

/// The three indices other than `i`, ascending.
pub fn others(i: usize) -> [usize; 3] {
    match i {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

/// True iff the four points form a square within relative tolerance `tol`.
pub fn is_square(p: &[Point; 4], tol: Tolerance) -> bool {
    let mut d = [0.0f64; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            d[k] = p[i].dist(p[j]);
            k += 1;
        }
    }
    d.sort_by(f64::total_cmp);
    let diam = d[5];
    if !(diam > 0.0) || !diam.is_finite() {
        return false;
    }
    let e = tol.eps_rel * diam;
    let side = (d[0] + d[1] + d[2] + d[3]) / 4.0;
    let diag = side * core::f64::consts::SQRT_2;
    side > e && d[..4].iter().all(|x| (x - side).abs() <= e) && d[4..].iter().all(|x| (x - diag).abs() <= e)
}

/// Thin hexagon `h1..h6` with extremes `h1`, `h4`: short edges of length `L/4`
/// at 25° to the main diagonal, interior angles 50° at the extremes and 155°
/// at the four beacons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThinHexagon {
    /// `h1..h6` counter-clockwise, `h2`, `h3` on the left of `h1 -> h4`.
    pub vertices: [Point; 6],
    /// Main diagonal length `L`.
    pub length: f64,
    /// `(L/4) sin 25°`.
    pub height: f64,
    u: Point,
    n: Point,
}

impl ThinHexagon {
    pub fn new(e1: Point, e2: Point) -> Result<Self, GeomError> {
        if !e1.is_finite() || !e2.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let d = e2 - e1;
        let length = d.norm();
        let scale = e1.norm().max(e2.norm()).max(f64::MIN_POSITIVE);
        if !(length > 1e-12 * scale) {
            return Err(GeomError::DegenerateDiagonal);
        }
        let u = d / length;
        let n = u.perp();
        let a = length / 4.0;
        let fwd = u * (a * COS_25);
        let up = n * (a * SIN_25);
        let vertices = [e1, e1 + fwd + up, e2 - fwd + up, e2, e2 - fwd - up, e1 + fwd - up];
        Ok(ThinHexagon { vertices, length, height: a * SIN_25, u, n })
    }

    pub fn extremes(&self) -> (Point, Point) {
        (self.vertices[0], self.vertices[3])
    }

    /// `h2, h3, h5, h6`. Adjacent pairs are `(0, 1)` and `(2, 3)`.
    pub fn beacons(&self) -> [Point; 4] {
        let v = &self.vertices;
        [v[1], v[2], v[4], v[5]]
    }

    /// Midpoints of the long edges: left side first.
    pub fn havens(&self) -> [Point; 2] {
        let v = &self.vertices;
        [v[1].midpoint(v[2]), v[4].midpoint(v[5])]
    }

    /// Unit vector along the main diagonal.
    pub fn axis(&self) -> Point {
        self.u
    }

    /// Unit normal pointing to the `h2`/`h3` side.
    pub fn normal(&self) -> Point {
        self.n
    }

    /// `(abscissa along h1->h4, signed offset toward the h2 side)`.
    pub fn local(&self, p: Point) -> (f64, f64) {
        let w = p - self.vertices[0];
        (w.dot(self.u), cross(self.u, w))
    }

    /// Signed distance to the boundary, positive inside.
    pub fn margin(&self, p: Point) -> f64 {
        let (t, s) = self.local(p);
        let s = s.abs();
        let left = t * SIN_25 - s * COS_25;
        let top = self.height - s;
        let right = (self.length - t) * SIN_25 - s * COS_25;
        left.min(top).min(right)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.margin(p) >= -tol
    }

    pub fn on_main_diagonal(&self, p: Point, tol: f64) -> bool {
        let (t, s) = self.local(p);
        s.abs() <= tol && t >= -tol && t <= self.length + tol
    }

    /// `0` on the diagonal line, `1` on the `h2` side, `-1` on the `h6` side.
    pub fn side_of_diagonal(&self, p: Point, tol: f64) -> i8 {
        let (_, s) = self.local(p);
        if s.abs() <= tol {
            0
        } else if s > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Index into [`ThinHexagon::beacons`] of the beacon at `p`, if any.
    pub fn on_beacon(&self, p: Point, tol: f64) -> Option<usize> {
        self.beacons().iter().position(|b| b.dist(p) <= tol)
    }

    pub fn on_haven(&self, p: Point, tol: f64) -> Option<usize> {
        self.havens().iter().position(|h| h.dist(p) <= tol)
    }

    /// True when `a` and `b` sit on two adjacent beacons.
    pub fn on_adjacent_beacons(&self, a: Point, b: Point, tol: f64) -> bool {
        match (self.on_beacon(a, tol), self.on_beacon(b, tol)) {
            (Some(i), Some(j)) => i != j && i / 2 == j / 2,
            _ => false,
        }
    }

    /// Half the width of the hexagon at abscissa `t`.
    pub fn chord_half_width(&self, t: f64) -> f64 {
        (t * TAN_25).min(self.height).min((self.length - t) * TAN_25).max(0.0)
    }

    /// Parameters in `[0, 1]` at which `seg` meets the boundary, ascending.
    pub fn boundary_crossings(&self, seg: &Segment, tol: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for k in 0..6 {
            let edge = Segment::new(self.vertices[k], self.vertices[(k + 1) % 6]);
            if let Some(hit) = segment_intersection(seg, &edge, tol) {
                if hit.within_first && hit.kind != Crossing::Extension {
                    out.push(hit.s.clamp(0.0, 1.0));
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        out
    }
}

/// Build the thin hexagon with extremes `e1`, `e2`.
pub fn build_thin_hexagon(e1: Point, e2: Point) -> Result<ThinHexagon, GeomError> {
    ThinHexagon::new(e1, e2)
}

/// A similarity of the plane: `offset + scale * R(angle) * F(p)`, where `F`
/// mirrors the y axis when `reflect` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    cos: f64,
    sin: f64,
    pub reflect: bool,
    pub scale: f64,
    pub offset: Point,
}

impl Similarity {
    pub fn new(angle: f64, reflect: bool, scale: f64, offset: Point) -> Self {
        Similarity { cos: libm::cos(angle), sin: libm::sin(angle), reflect, scale, offset }
    }

    pub fn identity() -> Self {
        Similarity::new(0.0, false, 1.0, Point::ORIGIN)
    }

    /// The linear part only (no offset).
    pub fn apply_vector(&self, v: Point) -> Point {
        let y = if self.reflect { -v.y } else { v.y };
        Point::new(self.cos * v.x - self.sin * y, self.sin * v.x + self.cos * y) * self.scale
    }

    pub fn apply(&self, p: Point) -> Point {
        self.offset + self.apply_vector(p)
    }

    pub fn invert(&self, p: Point) -> Point {
        let v = (p - self.offset) / self.scale;
        let x = self.cos * v.x + self.sin * v.y;
        let y = -self.sin * v.x + self.cos * v.y;
        Point::new(x, if self.reflect { -y } else { y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn cross_examples() {
        assert_eq!(cross(pt(1.0, 0.0), pt(0.0, 1.0)), 1.0);
        assert_eq!(cross(pt(2.0, 3.0), pt(2.0, 3.0)), 0.0);
        assert_eq!(cross(pt(3.0, 1.0), pt(-1.0, 1.0)), 4.0);
    }

    #[test]
    fn trig_constants_match_libm() {
        let a = 25.0f64.to_radians();
        assert!((SIN_25 - libm::sin(a)).abs() < 1e-16);
        assert!((COS_25 - libm::cos(a)).abs() < 1e-16);
        assert!((TAN_25 - libm::tan(a)).abs() < 1e-16);
    }

    #[test]
    fn intersection_examples() {
        let s = Segment::new(pt(0.0, 0.0), pt(2.0, 2.0));
        let t = Segment::new(pt(0.0, 2.0), pt(2.0, 0.0));
        let hit = segment_intersection(&s, &t, TOL).unwrap();
        assert!(hit.point.dist(pt(1.0, 1.0)) < 1e-15);
        assert_eq!(hit.kind, Crossing::Interior);
        assert!(hit.within_first);

        let s = Segment::new(pt(0.0, 0.0), pt(1.0, 0.0));
        let t = Segment::new(pt(0.0, 1.0), pt(1.0, 1.0));
        assert!(segment_intersection(&s, &t, TOL).is_none());

        let s = Segment::new(pt(0.0, 0.0), pt(4.0, 0.0));
        let t = Segment::new(pt(1.0, 1.0), pt(1.0, 3.0));
        let hit = segment_intersection(&s, &t, TOL).unwrap();
        assert!(hit.point.dist(pt(1.0, 0.0)) < 1e-15);
        assert_eq!(hit.kind, Crossing::Extension);
        assert!(hit.within_first);
    }

    #[test]
    fn endpoint_hit() {
        let s = Segment::new(pt(0.0, -1.0), pt(0.0, 1.0));
        let t = Segment::new(pt(0.0, 0.0), pt(3.0, 0.0));
        assert_eq!(segment_intersection(&s, &t, TOL).unwrap().kind, Crossing::Endpoint);
    }

    #[test]
    fn triangle_examples() {
        let (a, b, c) = (pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 4.0));
        assert!(point_in_triangle(pt(1.0, 1.0), a, b, c, TOL));
        assert!(point_in_triangle(pt(2.0, 2.0), a, b, c, TOL));
        assert!(!point_in_triangle(pt(5.0, 5.0), a, b, c, TOL));
    }

    #[test]
    fn degenerate_triangle_is_its_segment() {
        let (a, b, c) = (pt(0.0, 0.0), pt(1.0, 0.0), pt(3.0, 0.0));
        assert!(point_in_triangle(pt(2.0, 0.0), a, b, c, TOL));
        assert!(point_in_triangle(pt(3.0, 0.0), a, b, c, TOL));
        assert!(!point_in_triangle(pt(3.5, 0.0), a, b, c, TOL));
        assert!(!point_in_triangle(pt(2.0, 0.1), a, b, c, TOL));
    }

    #[test]
    fn cyclic_order_examples() {
        let sq = [pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)];
        let o = convex_cyclic_order(&sq, TOL).unwrap();
        // 0 and 1 are opposite corners
        assert_eq!(o[2], 1);
        assert!(convex_cyclic_order(&[pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 4.0), pt(1.0, 1.0)], TOL).is_none());
        assert!(convex_cyclic_order(&[pt(0.0, 0.0), pt(4.0, 0.0), pt(2.0, 2.0), pt(0.0, 4.0)], TOL).is_none());
    }

    #[test]
    fn hexagon_over_x_axis() {
        let h = build_thin_hexagon(pt(0.0, 0.0), pt(4.0, 0.0)).unwrap();
        assert!(h.vertices[1].dist(pt(COS_25, SIN_25)) < 1e-15);
        assert!(h.vertices[2].dist(pt(4.0 - COS_25, SIN_25)) < 1e-15);
        let hv = h.havens();
        assert!(hv[0].dist(pt(2.0, SIN_25)) < 1e-15);
        assert!(hv[1].dist(pt(2.0, -SIN_25)) < 1e-15);
        assert!(h.contains(pt(2.0, 0.1), TOL));
        assert!(!h.contains(pt(2.0, 1.0), TOL));
        assert!(h.contains(h.vertices[1], TOL));
        assert_eq!(h.on_beacon(h.vertices[1], TOL), Some(0));
        assert!(h.on_adjacent_beacons(h.vertices[1], h.vertices[2], TOL));
        assert!(!h.on_adjacent_beacons(h.vertices[2], h.vertices[4], TOL));
        assert_eq!(h.on_haven(pt(2.0, -SIN_25), TOL), Some(1));
    }

    #[test]
    fn degenerate_diagonal_rejected() {
        assert_eq!(build_thin_hexagon(pt(1.0, 1.0), pt(1.0, 1.0)), Err(GeomError::DegenerateDiagonal));
    }

    #[test]
    fn chord_half_width_profile() {
        let h = build_thin_hexagon(pt(0.0, 0.0), pt(4.0, 0.0)).unwrap();
        assert!((h.chord_half_width(2.0) - h.height).abs() < 1e-15);
        assert!((h.chord_half_width(0.5) - 0.5 * TAN_25).abs() < 1e-15);
        assert_eq!(h.chord_half_width(0.0), 0.0);
    }

    #[test]
    fn boundary_crossings_vertical_chord() {
        let h = build_thin_hexagon(pt(0.0, 0.0), pt(4.0, 0.0)).unwrap();
        let seg = Segment::new(pt(2.0, -1.0), pt(2.0, 1.0));
        let c = h.boundary_crossings(&seg, TOL);
        assert_eq!(c.len(), 2);
        assert!((seg.at(c[0]).y + SIN_25).abs() < 1e-12);
        assert!((seg.at(c[1]).y - SIN_25).abs() < 1e-12);
    }

    #[test]
    fn square_examples() {
        let t = Tolerance::default();
        assert!(is_square(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)], t));
        assert!(is_square(&[pt(0.0, 0.0), pt(2.0, 1.0), pt(1.0, 3.0), pt(-1.0, 2.0)], t));
        assert!(!is_square(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 1.0), pt(0.0, 1.0)], t));
    }

    #[test]
    fn foot_examples() {
        let x_axis = Line::new(pt(0.0, 0.0), pt(1.0, 0.0)).unwrap();
        assert_eq!(foot_of_perpendicular(pt(1.0, 1.0), &x_axis), pt(1.0, 0.0));
        let l = Line::through(pt(4.0, 0.0), pt(0.0, 4.0)).unwrap();
        assert!(foot_of_perpendicular(pt(0.0, 0.0), &l).dist(pt(2.0, 2.0)) < 1e-15);
        let on = l.at(1.5);
        assert!(foot_of_perpendicular(on, &l).dist(on) < 1e-15);
    }

    #[test]
    fn similarity_round_trip() {
        let s = Similarity::new(0.7, true, 3.5, pt(-2.0, 1.0));
        let p = pt(0.3, -4.1);
        assert!(s.invert(s.apply(p)).dist(p) < 1e-14);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(1e-9).is_ok());
    }
}
