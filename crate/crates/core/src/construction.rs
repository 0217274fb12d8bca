//! Target-square construction for a strictly convex quadrilateral with
//! non-orthogonal diagonals, and the per-robot attributes derived from it.
//!
//! Indices in this module are frame indices: `robots[0..4]` in the cyclic
//! order the frame was built with. Opposite robots are `(0, 2)` and `(1, 3)`.

use core::fmt;

use crate::geom::{cross, orient, segment_intersection, Crossing, Eps, Line, Point, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameError {
    NotConvex,
    OrthogonalDiagonals,
    /// Convergence is only defined for robots with perpendicular guidelines.
    OppositePairConvergence,
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::NotConvex => f.write_str("quadrilateral is not strictly convex"),
            FrameError::OrthogonalDiagonals => f.write_str("diagonals are orthogonal"),
            FrameError::OppositePairConvergence => f.write_str("convergence undefined for opposite robots"),
        }
    }
}

/// Guidelines, outer square `Q`, target square and targets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetFrame {
    pub robots: [Point; 4],
    /// Auxiliary point with `|r1 q| = |r2 r4|` and `r1 q` perpendicular to `r2 r4`.
    pub q: Point,
    /// `guidelines[i]` passes through `robots[i]`; 0 and 2 share a direction,
    /// 1 and 3 share the perpendicular one.
    pub guidelines: [Line; 4],
    /// `outer[k]` is the corner shared by guidelines `k` and `k + 1`.
    pub outer: [Point; 4],
    /// Vertices of the target square; `targets[i]` lies on `guidelines[i]`.
    pub targets: [Point; 4],
    pub center: Point,
    /// Half the side of `Q`.
    pub half_side: f64,
}

/// Per-robot attributes read off a frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotAttrs {
    /// `(r_i - c) x (p_i - c)`.
    pub signed_distance: f64,
    /// Position of the robot along its guideline, relative to its target.
    pub offset: f64,
    pub finished: bool,
    pub internal: bool,
    pub external: bool,
    pub opposite: usize,
    pub target: Point,
    pub pathway: Segment,
}

impl RobotAttrs {
    /// `0` when finished, otherwise the sign of the signed distance.
    pub fn sign(&self) -> i8 {
        if self.finished {
            0
        } else if self.signed_distance > 0.0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairRelation {
    pub concordant: bool,
    pub discordant: bool,
    /// `Some` only for discordant robots with perpendicular guidelines.
    pub convergent: Option<bool>,
    pub divergent: Option<bool>,
}

/// A point where a pathway meets the segment (blocked) or the extension
/// (hindered) of the segment between two other robots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obstruction {
    pub point: Point,
    /// Parameter along the pathway, in `(0, 1]`.
    pub param: f64,
    pub pair: (usize, usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Obstructions {
    pub blocked: Option<Obstruction>,
    pub hindered: Option<Obstruction>,
}

pub fn build_target_frame(r: [Point; 4], eps: Eps) -> Result<TargetFrame, FrameError> {
    if !is_strictly_convex(&r, eps.dist) {
        return Err(FrameError::NotConvex);
    }
    let d13 = r[2] - r[0];
    let d24 = r[3] - r[1];
    if d13.dot(d24).abs() <= eps.rel * d13.norm() * d24.norm() {
        return Err(FrameError::OrthogonalDiagonals);
    }

    // q = r1 + (r4 - r2) turned a quarter, on the side facing the line r2 r4.
    let mut turn = d24.perp();
    if turn.dot(r[1] - r[0]) < 0.0 {
        turn = -turn;
    }
    let q = r[0] + turn;
    let e = (q - r[2]).unit().ok_or(FrameError::OrthogonalDiagonals)?;
    let n = e.perp();

    let along = |p: Point| p.dot(e);
    let across = |p: Point| p.dot(n);
    let at = |a: f64, b: f64| e * a + n * b;

    let ce = 0.5 * (along(r[1]) + along(r[3]));
    let cn = 0.5 * (across(r[0]) + across(r[2]));
    let center = at(ce, cn);

    let guidelines = [
        Line { origin: r[0], dir: e },
        Line { origin: r[1], dir: n },
        Line { origin: r[2], dir: e },
        Line { origin: r[3], dir: n },
    ];
    let outer = [
        at(along(r[1]), across(r[0])),
        at(along(r[1]), across(r[2])),
        at(along(r[3]), across(r[2])),
        at(along(r[3]), across(r[0])),
    ];
    let targets = [
        at(ce, across(r[0])),
        at(along(r[1]), cn),
        at(ce, across(r[2])),
        at(along(r[3]), cn),
    ];
    let half_side = 0.25 * ((across(r[2]) - across(r[0])).abs() + (along(r[3]) - along(r[1])).abs());

    Ok(TargetFrame { robots: r, q, guidelines, outer, targets, center, half_side })
}

fn is_strictly_convex(r: &[Point; 4], tol: f64) -> bool {
    let mut sign = 0.0;
    for i in 0..4 {
        let a = r[i];
        let b = r[(i + 1) % 4];
        let c = r[(i + 2) % 4];
        let len = a.dist(b);
        if len == 0.0 {
            return false;
        }
        let h = orient(a, b, c) / len;
        if h.abs() <= tol {
            return false;
        }
        if sign == 0.0 {
            sign = h.signum();
        } else if h.signum() != sign {
            return false;
        }
    }
    true
}

impl TargetFrame {
    /// Corner of `Q` shared by the guidelines of non-opposite robots `i`, `j`.
    pub fn corner(&self, i: usize, j: usize) -> Option<Point> {
        if (i + 4 - j) % 4 == 1 {
            Some(self.outer[j])
        } else if (j + 4 - i) % 4 == 1 {
            Some(self.outer[i])
        } else {
            None
        }
    }

    pub fn opposite(i: usize) -> usize {
        (i + 2) % 4
    }

    pub fn attrs(&self, i: usize, eps: Eps) -> RobotAttrs {
        let r = self.robots[i];
        let p = self.targets[i];
        let offset = self.guidelines[i].coordinate(r) - self.guidelines[i].coordinate(p);
        let finished = offset.abs() <= eps.dist;
        let internal = offset.abs() < self.half_side - eps.dist;
        RobotAttrs {
            signed_distance: cross(r - self.center, p - self.center),
            offset,
            finished,
            internal,
            external: !internal,
            opposite: TargetFrame::opposite(i),
            target: p,
            pathway: Segment::new(r, p),
        }
    }

    pub fn all_attrs(&self, eps: Eps) -> [RobotAttrs; 4] {
        [self.attrs(0, eps), self.attrs(1, eps), self.attrs(2, eps), self.attrs(3, eps)]
    }

    /// Whether `p_i` lies on the segment from `r_i` to the corner `g`.
    fn heads_away_from(&self, a: &RobotAttrs, i: usize, g: Point) -> bool {
        if a.finished {
            return true;
        }
        let l = &self.guidelines[i];
        let gamma = l.coordinate(g) - l.coordinate(self.targets[i]);
        a.offset * gamma < 0.0
    }

    pub fn pair_relation(&self, attrs: &[RobotAttrs; 4], i: usize, j: usize) -> PairRelation {
        let (si, sj) = (attrs[i].sign(), attrs[j].sign());
        let prod = si * sj;
        let concordant = prod >= 0;
        let discordant = prod <= 0;
        let (convergent, divergent) = match (discordant, self.corner(i, j)) {
            (true, Some(g)) => {
                let conv = self.heads_away_from(&attrs[i], i, g) && self.heads_away_from(&attrs[j], j, g);
                let both_finished = attrs[i].finished && attrs[j].finished;
                (Some(conv), Some(!conv || both_finished))
            }
            _ => (None, None),
        };
        PairRelation { concordant, discordant, convergent, divergent }
    }

    /// Convergence of a non-opposite pair, ignoring the sign condition.
    pub fn converge(&self, attrs: &[RobotAttrs; 4], i: usize, j: usize) -> Result<bool, FrameError> {
        let g = self.corner(i, j).ok_or(FrameError::OppositePairConvergence)?;
        Ok(self.heads_away_from(&attrs[i], i, g) && self.heads_away_from(&attrs[j], j, g))
    }

    pub fn obstructions(&self, i: usize, eps: Eps) -> Obstructions {
        let path = Segment::new(self.robots[i], self.targets[i]);
        let mut others = [(0usize, Point::ORIGIN); 3];
        let mut k = 0;
        for j in 0..4 {
            if j != i {
                others[k] = (j, self.robots[j]);
                k += 1;
            }
        }
        path_obstructions(&path, &others, eps.dist)
    }

    pub fn blocked(&self, i: usize, eps: Eps) -> Option<Obstruction> {
        self.obstructions(i, eps).blocked
    }

    pub fn hindered(&self, i: usize, eps: Eps) -> Option<Obstruction> {
        self.obstructions(i, eps).hindered
    }
}

/// Nearest blocking and hindering points of `path` against the three segments
/// joining pairs of `others`. Hits at either end of the path are ignored.
pub fn path_obstructions(path: &Segment, others: &[(usize, Point); 3], tol: f64) -> Obstructions {
    let len = path.length();
    let mut out = Obstructions::default();
    if len <= tol {
        return out;
    }
    let start = tol / len;
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let (j, a) = others[x];
        let (k, b) = others[y];
        let Some(hit) = segment_intersection(path, &Segment::new(a, b), tol) else {
            continue;
        };
        // A hit at the goal itself leaves the move unchanged.
        if !hit.within_first || hit.s <= start || (1.0 - hit.s) * len <= tol {
            continue;
        }
        let ob = Obstruction { point: hit.point, param: hit.s.min(1.0), pair: (j, k) };
        let slot = match hit.kind {
            Crossing::Interior | Crossing::Endpoint => &mut out.blocked,
            Crossing::Extension => &mut out.hindered,
        };
        if slot.map_or(true, |o| ob.param < o.param) {
            *slot = Some(ob);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{is_square, pt, Tolerance};

    fn eps(r: &[Point; 4]) -> Eps {
        Eps::for_points(r, Tolerance::default())
    }

    #[test]
    fn worked_example_invariants() {
        let r = [pt(0.0, 0.0), pt(4.0, 0.0), pt(5.0, 3.0), pt(1.0, 2.0)];
        let f = build_target_frame(r, eps(&r)).unwrap();
        assert!(is_square(&f.outer, Tolerance::default()));
        assert!(is_square(&f.targets, Tolerance::default()));
        for i in 0..4 {
            assert!(f.guidelines[i].side_distance(f.targets[i]).abs() < 1e-12);
            let m = f.outer[(i + 3) % 4].midpoint(f.outer[i]);
            assert!(m.dist(f.targets[i]) < 1e-12);
        }
        assert!(((f.q - r[0]).norm() - (r[3] - r[1]).norm()).abs() < 1e-12);
        assert!((f.q - r[0]).dot(r[3] - r[1]).abs() < 1e-12);
    }

    #[test]
    fn finished_at_target() {
        let r = [pt(0.0, 0.0), pt(4.0, 0.0), pt(5.0, 3.0), pt(1.0, 2.0)];
        let e = eps(&r);
        let f = build_target_frame(r, e).unwrap();
        let mut moved = r;
        moved[1] = f.targets[1];
        let g = build_target_frame(moved, e).unwrap();
        let a = g.attrs(1, e);
        assert!(a.finished);
        assert!(a.signed_distance.abs() < 1e-12);
        assert_eq!(a.sign(), 0);
    }

    #[test]
    fn orthogonal_and_concave_rejected() {
        let r = [pt(-1.0, 0.0), pt(0.0, -1.0), pt(1.0, 0.0), pt(0.0, 2.0)];
        assert_eq!(build_target_frame(r, eps(&r)), Err(FrameError::OrthogonalDiagonals));
        let r = [pt(0.0, 0.0), pt(4.0, 0.0), pt(1.0, 1.0), pt(0.0, 4.0)];
        assert_eq!(build_target_frame(r, eps(&r)), Err(FrameError::NotConvex));
    }

    #[test]
    fn opposite_pair_has_no_convergence() {
        let r = [pt(0.0, 0.0), pt(4.0, 0.0), pt(5.0, 3.0), pt(1.0, 2.0)];
        let e = eps(&r);
        let f = build_target_frame(r, e).unwrap();
        let a = f.all_attrs(e);
        assert_eq!(f.converge(&a, 0, 2), Err(FrameError::OppositePairConvergence));
        assert_eq!(f.pair_relation(&a, 1, 3).convergent, None);
    }

    #[test]
    fn both_finished_pair_is_everything() {
        let r = [pt(0.0, 0.0), pt(4.0, 0.0), pt(5.0, 3.0), pt(1.0, 2.0)];
        let e = eps(&r);
        let f = build_target_frame(r, e).unwrap();
        let mut m = r;
        m[0] = f.targets[0];
        m[1] = f.targets[1];
        let g = build_target_frame(m, e).unwrap();
        let a = g.all_attrs(e);
        let rel = g.pair_relation(&a, 0, 1);
        assert!(rel.concordant && rel.discordant);
        assert_eq!(rel.convergent, Some(true));
        assert_eq!(rel.divergent, Some(true));
    }

    #[test]
    fn sign_product_relations() {
        let r = [pt(0.0, 0.0), pt(4.0, 0.0), pt(5.0, 3.0), pt(1.0, 2.0)];
        let e = eps(&r);
        let f = build_target_frame(r, e).unwrap();
        let mut a = f.all_attrs(e);
        a[0].signed_distance = 2.0;
        a[1].signed_distance = 3.0;
        a[0].finished = false;
        a[1].finished = false;
        let rel = f.pair_relation(&a, 0, 1);
        assert!(rel.concordant && !rel.discordant);
        assert_eq!(rel.convergent, None);
    }

    #[test]
    fn obstruction_scan_classifies_hits() {
        let path = Segment::new(pt(0.0, 0.0), pt(10.0, 0.0));
        let others = [(1, pt(2.0, -1.0)), (2, pt(2.0, 1.0)), (3, pt(6.0, 3.0))];
        let ob = path_obstructions(&path, &others, 1e-9);
        let b = ob.blocked.unwrap();
        assert!(b.point.dist(pt(2.0, 0.0)) < 1e-12);
        assert_eq!(b.pair, (1, 2));
        // line through (2,-1),(6,3) crosses y=0 at x=3, inside the segment: blocked too,
        // but farther; the line through (2,1),(6,3) meets y=0 at x=0 (the start, ignored).
        assert!(ob.hindered.is_none());
    }
}
