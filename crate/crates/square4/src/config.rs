//! Run configuration as a single JSON document.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use square4_core::{Point, Tolerance};

use crate::adversary::AdversaryKind;
use crate::generate::{generate, random_frames, Family, GenParams};
use crate::sim::{FrameAssignment, DEFAULT_EVENTS_MAX};

/// Environment variable overriding the relative geometry tolerance.
pub const EPS_ENV: &str = "SQUARE4_EPS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Explicit start. When absent the start is drawn from `family` with `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<[[f64; 2]; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Explicit frames. When absent they are randomized from `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<FrameAssignment>>,
    pub delta: f64,
    pub adversary: AdversaryKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

/// A configuration with every random choice made.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedRun {
    pub positions: [Point; 4],
    pub frames: [FrameAssignment; 4],
    pub delta: f64,
    pub adversary: AdversaryKind,
    pub seed: u64,
    pub tol: Tolerance,
    pub events_max: u64,
}

/// Tolerance from `explicit`, else from the environment, else the default.
pub fn tolerance(explicit: Option<f64>) -> Result<Tolerance, ConfigError> {
    let from_env = match std::env::var(EPS_ENV) {
        Ok(s) => Some(s.trim().parse::<f64>().map_err(|e| ConfigError::Invalid(format!("{EPS_ENV}: {e}")))?),
        Err(_) => None,
    };
    match explicit.or(from_env) {
        Some(e) => Tolerance::new(e).map_err(|e| ConfigError::Invalid(e.to_string())),
        None => Ok(Tolerance::default()),
    }
}

impl RunConfig {
    pub fn new(adversary: AdversaryKind, delta: f64, seed: u64) -> Self {
        RunConfig {
            positions: None,
            family: None,
            frames: None,
            delta,
            adversary,
            seed,
            eps_rel: None,
            events_max: None,
            trace: None,
            svg: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<ResolvedRun, ConfigError> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(ConfigError::Invalid(format!("delta must be positive, got {}", self.delta)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let positions = match (&self.positions, &self.family) {
            (Some(p), _) => p.map(|[x, y]| Point::new(x, y)),
            (None, fam) => {
                let family: Family = fam.as_deref().unwrap_or("uniform").parse().map_err(ConfigError::Invalid)?;
                generate(family, &mut rng, GenParams::default()).map_err(|e| ConfigError::Invalid(e.to_string()))?
            }
        };
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(ConfigError::Invalid("non-finite position".into()));
        }
        let frames = match &self.frames {
            Some(f) => {
                let f: [FrameAssignment; 4] = f
                    .clone()
                    .try_into()
                    .map_err(|v: Vec<_>| ConfigError::Invalid(format!("expected 4 frames, got {}", v.len())))?;
                if f.iter().any(|a| !(a.scale > 0.0 && a.scale.is_finite() && a.theta.is_finite())) {
                    return Err(ConfigError::Invalid("frame scale must be positive and angles finite".into()));
                }
                f
            }
            None => random_frames(&mut rng),
        };
        Ok(ResolvedRun {
            positions,
            frames,
            delta: self.delta,
            adversary: self.adversary,
            seed: self.seed,
            tol: tolerance(self.eps_rel)?,
            events_max: self.events_max.unwrap_or(DEFAULT_EVENTS_MAX),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_shaped_json_parses() {
        let text = r#"{
            "positions": [[-1, 0], [1, 0], [0, 2], [0, -1]],
            "frames": [{"theta": 0.5, "reflect": true, "scale": 2.0}, {"theta": 0}, {"theta": 1}, {"theta": 2}],
            "delta": 0.1, "adversary": "round_robin", "seed": 3
        }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.positions[2], Point::new(0.0, 2.0));
        assert!(r.frames[0].reflect);
        assert_eq!(r.frames[1].scale, 1.0);
        assert_eq!(r.adversary, AdversaryKind::RoundRobin);
    }

    #[test]
    fn round_trip_and_determinism() {
        let mut cfg = RunConfig::new(AdversaryKind::MinProgress, 0.01, 9);
        cfg.family = Some("near_hexagon".into());
        let back: RunConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.resolve().unwrap(), back.resolve().unwrap());
    }

    #[test]
    fn bad_inputs_rejected() {
        let mut cfg = RunConfig::new(AdversaryKind::Synchronous, 0.0, 0);
        assert!(cfg.resolve().is_err());
        cfg.delta = 0.1;
        cfg.frames = Some(vec![FrameAssignment::default(); 3]);
        assert!(cfg.resolve().is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"delta": 1, "adversary": "nope"}"#).is_err());
    }
}
