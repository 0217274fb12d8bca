//! Discrete-event ASYNC engine.
//!
//! Time is the event sequence. Each robot alternates an atomic Look+Compute
//! with a Move phase made of adversary-sized advances toward the computed
//! destination. Robots see positions only, through their own frames.

use square4_core::{
    classify, diameter, is_square, plan, try_compute_destination, AlgorithmError, ClassifyError, ConfigClass, Point,
    Similarity, Snapshot, Tolerance,
};
use thiserror::Error;

use crate::adversary::Adversary;
use crate::trace::{EventKind, TraceEvent, TraceSink};

/// Square detection tolerance, relative to the diameter.
pub const SQUARE_TOL: f64 = 1e-6;
/// Collision threshold, relative to the diameter.
pub const COLLISION_TOL: f64 = 1e-12;
pub const DEFAULT_EVENTS_MAX: u64 = 1_000_000;

/// A robot's private coordinate system. Translation is implicit: the robot
/// is always at its own origin.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FrameAssignment {
    pub theta: f64,
    #[serde(default)]
    pub reflect: bool,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for FrameAssignment {
    fn default() -> Self {
        FrameAssignment { theta: 0.0, reflect: false, scale: 1.0 }
    }
}

impl FrameAssignment {
    /// Local-to-world map for a robot standing at `origin`.
    pub fn similarity(&self, origin: Point) -> Similarity {
        Similarity::new(self.theta, self.reflect, self.scale, origin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Moving,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotState {
    pub position: Point,
    pub phase: Phase,
    /// Where the current move started.
    pub start: Point,
    /// Pending destination, meaningful while moving.
    pub destination: Point,
    /// Distance covered in the current move.
    pub moved: f64,
}

impl RobotState {
    fn idle(p: Point) -> Self {
        RobotState { position: p, phase: Phase::Idle, start: p, destination: p, moved: 0.0 }
    }

    pub fn pending(&self) -> Option<Point> {
        (self.phase == Phase::Moving).then_some(self.destination)
    }

    pub fn path_length(&self) -> f64 {
        self.start.dist(self.destination)
    }

    pub fn remaining(&self) -> f64 {
        (self.path_length() - self.moved).max(0.0)
    }

    pub fn arrived(&self) -> bool {
        self.position == self.destination
    }
}

#[derive(Clone, Debug)]
pub struct World {
    pub robots: [RobotState; 4],
    pub frames: [FrameAssignment; 4],
    pub delta: f64,
    pub tol: Tolerance,
    pub clock: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    LookCompute,
    /// Advance by an absolute world distance, clamped at the destination.
    Advance(f64),
    EndMove,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub robot: usize,
    pub action: Action,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum StepError {
    #[error("illegal decision {0:?}")]
    IllegalDecision(Decision),
    #[error("compute failed: {0}")]
    Algorithm(AlgorithmError),
}

impl World {
    pub fn new(positions: [Point; 4], frames: [FrameAssignment; 4], delta: f64, tol: Tolerance) -> Self {
        World { robots: positions.map(RobotState::idle), frames, delta, tol, clock: 0 }
    }

    pub fn positions(&self) -> [Point; 4] {
        self.robots.map(|r| r.position)
    }

    pub fn all_idle(&self) -> bool {
        self.robots.iter().all(|r| r.phase == Phase::Idle)
    }

    /// Whether `EndMove` is currently legal for robot `i`.
    pub fn can_end(&self, i: usize) -> bool {
        let r = &self.robots[i];
        r.phase == Phase::Moving && (r.arrived() || r.moved >= self.delta)
    }

    /// The snapshot robot `i` would take now, in its local coordinates.
    pub fn snapshot(&self, i: usize) -> Snapshot {
        let me = self.robots[i].position;
        let sim = self.frames[i].similarity(me);
        let mut others = [Point::ORIGIN; 3];
        let mut k = 0;
        for (j, r) in self.robots.iter().enumerate() {
            if j != i {
                others[k] = sim.invert(r.position);
                k += 1;
            }
        }
        Snapshot { others }
    }

    /// Look and Compute of robot `i`, mapped back to world coordinates.
    pub fn look_compute(&self, i: usize) -> Result<Point, AlgorithmError> {
        let local = try_compute_destination(&self.snapshot(i), self.tol)?;
        let me = self.robots[i].position;
        if local == Point::ORIGIN {
            Ok(me)
        } else {
            Ok(self.frames[i].similarity(me).apply(local))
        }
    }

    /// Apply one adversary decision. On error the world is unchanged.
    pub fn step(&mut self, d: Decision) -> Result<(), StepError> {
        let illegal = Err(StepError::IllegalDecision(d));
        if d.robot >= 4 {
            return illegal;
        }
        let i = d.robot;
        match d.action {
            Action::LookCompute => {
                if self.robots[i].phase != Phase::Idle {
                    return illegal;
                }
                let dest = self.look_compute(i).map_err(StepError::Algorithm)?;
                let r = &mut self.robots[i];
                r.phase = Phase::Moving;
                r.start = r.position;
                r.destination = dest;
                r.moved = 0.0;
            }
            Action::Advance(dist) => {
                let r = &mut self.robots[i];
                if r.phase != Phase::Moving || !(dist >= 0.0) {
                    return illegal;
                }
                let len = r.path_length();
                // Snap when the leftover is round-off.
                if r.moved + dist >= len * (1.0 - 1e-15) {
                    r.moved = len;
                    r.position = r.destination;
                } else {
                    r.moved += dist;
                    r.position = r.start.lerp(r.destination, r.moved / len);
                }
            }
            Action::EndMove => {
                if !self.can_end(i) {
                    return illegal;
                }
                let r = &mut self.robots[i];
                r.phase = Phase::Idle;
                r.start = r.position;
                r.destination = r.position;
                r.moved = 0.0;
            }
        }
        self.clock += 1;
        Ok(())
    }

    /// Closest pair closer than the collision threshold.
    pub fn collision(&self) -> Option<(usize, usize)> {
        let p = self.positions();
        let limit = COLLISION_TOL * diameter(&p);
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i].dist(p[j]) < limit {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Square formed, everybody idle, and nobody would move on a new Look.
    pub fn terminated(&self) -> bool {
        if !self.all_idle() {
            return false;
        }
        let p = self.positions();
        let tol = Tolerance { eps_rel: SQUARE_TOL };
        if !is_square(&p, tol) {
            return false;
        }
        let slack = SQUARE_TOL * diameter(&p);
        (0..4).all(|i| self.look_compute(i).map_or(false, |d| d.dist(p[i]) <= slack))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    FormedSquare { events: u64, positions: [Point; 4] },
    Collision { events: u64, robots: (usize, usize), positions: [Point; 4] },
    Timeout { events: u64, positions: [Point; 4] },
    AssertionFailure { events: u64, message: String, positions: [Point; 4] },
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::FormedSquare { .. } => "formed_square",
            Outcome::Collision { .. } => "collision",
            Outcome::Timeout { .. } => "timeout",
            Outcome::AssertionFailure { .. } => "assertion_failure",
        }
    }

    pub fn events(&self) -> u64 {
        match self {
            Outcome::FormedSquare { events, .. }
            | Outcome::Collision { events, .. }
            | Outcome::Timeout { events, .. }
            | Outcome::AssertionFailure { events, .. } => *events,
        }
    }

    pub fn positions(&self) -> [Point; 4] {
        match self {
            Outcome::FormedSquare { positions, .. }
            | Outcome::Collision { positions, .. }
            | Outcome::Timeout { positions, .. }
            | Outcome::AssertionFailure { positions, .. } => *positions,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::FormedSquare { .. })
    }

    /// Collisions and assertion failures contradict the correctness claim.
    pub fn is_falsification(&self) -> bool {
        matches!(self, Outcome::Collision { .. } | Outcome::AssertionFailure { .. })
    }
}

/// A world-class transition seen by the monotonicity audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassChange {
    pub event: u64,
    pub from: ConfigClass,
    pub to: ConfigClass,
}

impl ClassChange {
    /// Class index went up, other than the ThinHexagon to Scissors handoff.
    pub fn is_violation(&self) -> bool {
        self.to.index() > self.from.index() && !(self.from == ConfigClass::ThinHexagon && self.to == ConfigClass::Scissors)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub start_class: Option<ConfigClass>,
    pub looks: u64,
    pub class_changes: Vec<ClassChange>,
    /// Moving robots whose pending destination disagreed with the new plan
    /// at a class change.
    pub stale_plans: u64,
}

impl RunStats {
    pub fn violations(&self) -> impl Iterator<Item = &ClassChange> {
        self.class_changes.iter().filter(|c| c.is_violation())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub outcome: Outcome,
    pub stats: RunStats,
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub events_max: u64,
    /// Classify the world after every position change.
    pub audit: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { events_max: DEFAULT_EVENTS_MAX, audit: true }
    }
}

fn world_class(w: &World) -> Result<ConfigClass, ClassifyError> {
    classify(&w.positions(), w.tol).map(|c| c.class)
}

fn emit(sink: &mut dyn TraceSink, w: &World, robot: Option<usize>, kind: EventKind, class: Option<ConfigClass>, dest: Option<Point>) {
    if sink.enabled() {
        let e = TraceEvent::new(w.clock, robot, kind, &w.positions(), class, dest);
        sink.record(&e);
    }
}

/// Count moving robots whose pending destination differs from what they
/// would compute now.
fn stale_count(w: &World) -> u64 {
    let p = w.positions();
    let Ok(plan) = plan(&p, w.tol) else { return 0 };
    let slack = SQUARE_TOL * diameter(&p);
    let mut n = 0;
    for (i, r) in w.robots.iter().enumerate() {
        if let Some(pending) = r.pending() {
            let now = square4_core::destination_in(&p, &plan, i);
            if now.dist(pending) > slack && !r.arrived() {
                n += 1;
            }
        }
    }
    n
}

/// Drive `world` with `adversary` until termination, failure or the event limit.
pub fn run(mut world: World, adversary: &mut dyn Adversary, limits: Limits, sink: &mut dyn TraceSink) -> RunReport {
    let mut stats = RunStats::default();
    let fail = |w: &World, message: String| Outcome::AssertionFailure { events: w.clock, message, positions: w.positions() };
    let mut current = match world_class(&world) {
        Ok(c) => c,
        Err(e) => {
            return RunReport { outcome: fail(&world, e.to_string()), stats };
        }
    };
    stats.start_class = Some(current);
    emit(sink, &world, None, EventKind::ClassChange, Some(current), None);

    let outcome = loop {
        if world.terminated() {
            emit(sink, &world, None, EventKind::SquareFormed, Some(current), None);
            break Outcome::FormedSquare { events: world.clock, positions: world.positions() };
        }
        if world.clock >= limits.events_max {
            break Outcome::Timeout { events: world.clock, positions: world.positions() };
        }
        let d = adversary.decide(&world);
        let first_advance = matches!(d.action, Action::Advance(_)) && world.robots[d.robot].moved == 0.0;
        if let Err(e) = world.step(d) {
            break fail(&world, e.to_string());
        }
        let r = world.robots[d.robot];
        match d.action {
            Action::LookCompute => {
                stats.looks += 1;
                if sink.enabled() {
                    emit(sink, &world, Some(d.robot), EventKind::Look, None, None);
                    let class = world_class(&world).ok();
                    emit(sink, &world, Some(d.robot), EventKind::Compute, class, Some(r.destination));
                }
            }
            Action::Advance(_) => {
                let kind = if first_advance { EventKind::MoveStart } else { EventKind::MoveStep };
                emit(sink, &world, Some(d.robot), kind, None, Some(r.destination));
                if let Some(pair) = world.collision() {
                    break Outcome::Collision { events: world.clock, robots: pair, positions: world.positions() };
                }
                if limits.audit {
                    match world_class(&world) {
                        Ok(c) if c != current => {
                            stats.class_changes.push(ClassChange { event: world.clock, from: current, to: c });
                            stats.stale_plans += stale_count(&world);
                            current = c;
                            emit(sink, &world, None, EventKind::ClassChange, Some(c), None);
                        }
                        Ok(_) => {}
                        Err(e) => break fail(&world, e.to_string()),
                    }
                }
            }
            Action::EndMove => emit(sink, &world, Some(d.robot), EventKind::MoveEnd, None, None),
        }
    };
    sink.finish();
    RunReport { outcome, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{RoundRobin, Synchronous};
    use crate::trace::NullSink;
    use square4_core::pt;

    fn world(p: [Point; 4], delta: f64) -> World {
        World::new(p, [FrameAssignment::default(); 4], delta, Tolerance::default())
    }

    #[test]
    fn square_maintenance() {
        let mut w = world([pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)], 0.1);
        w.step(Decision { robot: 0, action: Action::LookCompute }).unwrap();
        assert_eq!(w.robots[0].destination, pt(0.0, 0.0));
        assert!(w.can_end(0));
        w.step(Decision { robot: 0, action: Action::EndMove }).unwrap();
    }

    #[test]
    fn advance_and_clamp() {
        let mut w = world([pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, -1.0)], 1.0);
        let r = &mut w.robots[3];
        r.phase = Phase::Moving;
        r.destination = pt(0.0, 4.0);
        r.start = pt(0.0, -1.0);
        w.step(Decision { robot: 3, action: Action::Advance(2.0) }).unwrap();
        assert_eq!(w.robots[3].position, pt(0.0, 1.0));
        assert!(w.can_end(3));
        w.delta = 3.0;
        assert!(!w.can_end(3));
        let before = w.clone();
        assert!(w.step(Decision { robot: 3, action: Action::EndMove }).is_err());
        assert_eq!(w.robots, before.robots);
        w.step(Decision { robot: 3, action: Action::Advance(7.0) }).unwrap();
        assert_eq!(w.robots[3].position, pt(0.0, 4.0));
        assert!(w.can_end(3));
    }

    #[test]
    fn advance_while_idle_rejected() {
        let mut w = world([pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)], 0.1);
        assert!(w.step(Decision { robot: 1, action: Action::Advance(0.5) }).is_err());
        assert_eq!(w.clock, 0);
    }

    #[test]
    fn orthogonal_synchronous_one_cycle() {
        let w = world([pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, -1.0)], 10.0);
        let rep = run(w, &mut Synchronous::default(), Limits::default(), &mut NullSink);
        let want = [pt(-2.0, 0.0), pt(2.0, 0.0), pt(0.0, 2.0), pt(0.0, -2.0)];
        match rep.outcome {
            Outcome::FormedSquare { positions, .. } => {
                for (a, b) in positions.iter().zip(want) {
                    assert!(a.dist(b) < 1e-12);
                }
            }
            o => panic!("{o:?}"),
        }
        assert_eq!(rep.stats.looks, 4);
    }

    #[test]
    fn square_terminates_immediately() {
        let w = world([pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)], 0.1);
        let rep = run(w, &mut RoundRobin::default(), Limits::default(), &mut NullSink);
        assert_eq!(rep.outcome.events(), 0);
        assert!(rep.outcome.is_success());
    }
}
