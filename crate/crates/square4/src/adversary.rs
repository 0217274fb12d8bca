//! Built-in schedulers.

use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sim::{Action, Decision, Phase, World};

pub trait Adversary {
    fn decide(&mut self, w: &World) -> Decision;
}

fn finish_move(w: &World, i: usize) -> Decision {
    let r = &w.robots[i];
    let action = if r.arrived() { Action::EndMove } else { Action::Advance(r.remaining()) };
    Decision { robot: i, action }
}

/// All robots Look together, then all complete their moves.
#[derive(Clone, Debug, Default)]
pub struct Synchronous {
    moving_round: bool,
}

impl Adversary for Synchronous {
    fn decide(&mut self, w: &World) -> Decision {
        if !self.moving_round {
            if let Some(i) = w.robots.iter().position(|r| r.phase == Phase::Idle) {
                return Decision { robot: i, action: Action::LookCompute };
            }
            self.moving_round = true;
        }
        if let Some(i) = w.robots.iter().position(|r| r.phase == Phase::Moving) {
            return finish_move(w, i);
        }
        self.moving_round = false;
        Decision { robot: 0, action: Action::LookCompute }
    }
}

/// One complete cycle at a time, rotating through the robots.
#[derive(Clone, Debug, Default)]
pub struct RoundRobin {
    next: usize,
}

impl Adversary for RoundRobin {
    fn decide(&mut self, w: &World) -> Decision {
        let i = self.next;
        if w.robots[i].phase == Phase::Idle {
            return Decision { robot: i, action: Action::LookCompute };
        }
        let d = finish_move(w, i);
        if d.action == Action::EndMove {
            self.next = (i + 1) % 4;
        }
        d
    }
}

/// Seeded random interleaving with random advance lengths, ending moves
/// early whenever allowed.
#[derive(Clone, Debug)]
pub struct RandomAsync {
    rng: ChaCha8Rng,
}

impl RandomAsync {
    pub fn new(seed: u64) -> Self {
        RandomAsync { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Adversary for RandomAsync {
    fn decide(&mut self, w: &World) -> Decision {
        let i = self.rng.gen_range(0..4);
        let r = &w.robots[i];
        if r.phase == Phase::Idle {
            return Decision { robot: i, action: Action::LookCompute };
        }
        if w.can_end(i) && (r.arrived() || self.rng.gen_bool(0.6)) {
            return Decision { robot: i, action: Action::EndMove };
        }
        let step = if self.rng.gen_bool(0.2) { r.remaining() } else { w.delta * self.rng.gen_range(0.1..2.0) };
        Decision { robot: i, action: Action::Advance(step.min(r.remaining())) }
    }
}

/// Every move stops after exactly `delta` (or on arrival), with Looks
/// randomly interleaved against other robots' moves.
#[derive(Clone, Debug)]
pub struct MinProgress {
    rng: ChaCha8Rng,
}

impl MinProgress {
    pub fn new(seed: u64) -> Self {
        MinProgress { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Adversary for MinProgress {
    fn decide(&mut self, w: &World) -> Decision {
        let i = self.rng.gen_range(0..4);
        let r = &w.robots[i];
        if r.phase == Phase::Idle {
            return Decision { robot: i, action: Action::LookCompute };
        }
        if w.can_end(i) {
            return Decision { robot: i, action: Action::EndMove };
        }
        Decision { robot: i, action: Action::Advance((w.delta - r.moved).min(r.remaining())) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryKind {
    Synchronous,
    RoundRobin,
    RandomAsync,
    MinProgress,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 4] =
        [AdversaryKind::Synchronous, AdversaryKind::RoundRobin, AdversaryKind::RandomAsync, AdversaryKind::MinProgress];

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::Synchronous => "synchronous",
            AdversaryKind::RoundRobin => "round_robin",
            AdversaryKind::RandomAsync => "random_async",
            AdversaryKind::MinProgress => "min_progress",
        }
    }

    pub fn build(self, seed: u64) -> Box<dyn Adversary + Send> {
        match self {
            AdversaryKind::Synchronous => Box::new(Synchronous::default()),
            AdversaryKind::RoundRobin => Box::new(RoundRobin::default()),
            AdversaryKind::RandomAsync => Box::new(RandomAsync::new(seed)),
            AdversaryKind::MinProgress => Box::new(MinProgress::new(seed)),
        }
    }
}

impl FromStr for AdversaryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AdversaryKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown adversary `{s}`"))
    }
}

impl core::fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}
