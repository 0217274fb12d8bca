//! Sweeps over many independent runs.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use square4_core::{ConfigClass, Point, Tolerance};

use crate::adversary::AdversaryKind;
use crate::generate::{generate, random_frames, Family, GenError, GenParams};
use crate::sim::{run, ClassChange, Limits, Outcome, World};
use crate::trace::NullSink;

pub const CSV_HEADER: &str = "# square4-batch v1";

#[derive(Clone, Debug)]
pub struct BatchSpec {
    pub n: u64,
    pub family: Family,
    pub adversaries: Vec<AdversaryKind>,
    pub deltas: Vec<f64>,
    pub seed: u64,
    pub tol: Tolerance,
    pub events_max: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub config_seed: u64,
    pub adversary: AdversaryKind,
    pub delta: f64,
    pub start: [Point; 4],
    pub start_class: Option<ConfigClass>,
    pub outcome: Outcome,
    pub looks: u64,
    pub class_changes: usize,
    pub violations: Vec<ClassChange>,
    pub stale_plans: u64,
}

/// Start configuration and frames of trial `config_seed`.
pub fn trial_setup(family: Family, config_seed: u64) -> Result<([Point; 4], [crate::sim::FrameAssignment; 4]), GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config_seed);
    let p = generate(family, &mut rng, GenParams::default())?;
    Ok((p, random_frames(&mut rng)))
}

pub fn run_trial(spec: &BatchSpec, config_seed: u64, adversary: AdversaryKind, delta: f64) -> Result<TrialResult, GenError> {
    let (start, frames) = trial_setup(spec.family, config_seed)?;
    let world = World::new(start, frames, delta, spec.tol);
    let mut adv = adversary.build(config_seed);
    let rep = run(world, adv.as_mut(), Limits { events_max: spec.events_max, audit: true }, &mut NullSink);
    Ok(TrialResult {
        config_seed,
        adversary,
        delta,
        start,
        start_class: rep.stats.start_class,
        looks: rep.stats.looks,
        class_changes: rep.stats.class_changes.len(),
        violations: rep.stats.violations().copied().collect(),
        stale_plans: rep.stats.stale_plans,
        outcome: rep.outcome,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BatchSummary {
    pub results: Vec<TrialResult>,
}

impl BatchSummary {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn successes(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_success()).count()
    }

    pub fn count(&self, name: &str) -> usize {
        self.results.iter().filter(|r| r.outcome.name() == name).count()
    }

    pub fn max_events(&self) -> u64 {
        self.results.iter().map(|r| r.outcome.events()).max().unwrap_or(0)
    }

    pub fn falsifications(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_falsification()).count()
    }

    pub fn unclassifiable(&self) -> usize {
        self.results
            .iter()
            .filter(|r| matches!(&r.outcome, Outcome::AssertionFailure { message, .. } if message.contains("unclassifiable")))
            .count()
    }

    pub fn monotonicity_violations(&self) -> usize {
        self.results.iter().map(|r| r.violations.len()).sum()
    }

    pub fn stale_plans(&self) -> u64 {
        self.results.iter().map(|r| r.stale_plans).sum()
    }

    /// Process exit code: 0 all formed, 3 any falsification, else 2.
    pub fn exit_code(&self) -> i32 {
        if self.falsifications() > 0 {
            3
        } else if self.successes() < self.total() {
            2
        } else {
            0
        }
    }

    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        writeln!(out, "config_seed,adversary,delta,start_class,outcome,events,looks,class_changes,violations,stale_plans")?;
        for r in &self.results {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.config_seed,
                r.adversary,
                r.delta,
                r.start_class.map_or("none", ConfigClass::name),
                r.outcome.name(),
                r.outcome.events(),
                r.looks,
                r.class_changes,
                r.violations.len(),
                r.stale_plans
            )?;
        }
        Ok(())
    }
}

/// Run every (config, adversary, delta) combination. Results come back in a
/// fixed order regardless of scheduling.
pub fn run_batch(spec: &BatchSpec) -> Result<BatchSummary, GenError> {
    let mut jobs = Vec::new();
    for &adv in &spec.adversaries {
        for &delta in &spec.deltas {
            for i in 0..spec.n {
                jobs.push((spec.seed.wrapping_add(i), adv, delta));
            }
        }
    }
    let results: Result<Vec<_>, _> =
        jobs.par_iter().map(|&(seed, adv, delta)| run_trial(spec, seed, adv, delta)).collect();
    Ok(BatchSummary { results: results? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batch_is_deterministic() {
        let spec = BatchSpec {
            n: 5,
            family: Family::Uniform,
            adversaries: AdversaryKind::ALL.to_vec(),
            deltas: vec![0.1],
            seed: 100,
            tol: Tolerance::default(),
            events_max: 100_000,
        };
        let a = run_batch(&spec).unwrap();
        let b = run_batch(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 20);
        assert_eq!(a.exit_code(), 0);
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 22);
    }
}
