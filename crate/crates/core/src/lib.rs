//! Square formation for four asynchronous oblivious robots.
//!
//! The crate is `no_std` (with `alloc`). It holds the geometry kernel, the
//! target-square construction, the configuration classifier and the
//! per-robot Compute function. Simulation and IO live in the `square4` crate.

#![no_std]

extern crate alloc;

pub mod algorithm;
pub mod classifier;
pub mod construction;
pub mod geom;

pub use algorithm::{
    compute_destination, critical_points, destination_in, plan, plan_for, try_compute_destination, AlgorithmError,
    AlgorithmErrorKind, CriticalPoint, CriticalPointSet, Move, MovePlan, Snapshot, Trigger,
};
pub use classifier::{classify, role_assignment_tiebreak, Classification, ClassifyError, ConfigClass, FrameData, Payload};
pub use construction::{build_target_frame, FrameError, PairRelation, RobotAttrs, TargetFrame};
pub use geom::{
    diameter, is_square, pt, segment_intersection, Eps, GeomError, Line, Point, Segment, Similarity, ThinHexagon,
    Tolerance,
};
