//! Initial-configuration families.

use core::f64::consts::TAU;
use core::str::FromStr;

use rand::Rng;
use square4_core::{classify, ConfigClass, Point, Similarity, ThinHexagon, Tolerance};

/// Attempt cap for rejection sampling.
pub const MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform,
    Collinear,
    ThreeCollinear,
    NearOrthogonal,
    NearHexagon,
    Symmetric,
    PerClass(ConfigClass),
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Uniform => "uniform".into(),
            Family::Collinear => "collinear".into(),
            Family::ThreeCollinear => "three_collinear".into(),
            Family::NearOrthogonal => "near_orthogonal".into(),
            Family::NearHexagon => "near_hexagon".into(),
            Family::Symmetric => "symmetric".into(),
            Family::PerClass(c) => format!("per_class({})", c.index()),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "uniform" => Family::Uniform,
            "collinear" => Family::Collinear,
            "three_collinear" => Family::ThreeCollinear,
            "near_orthogonal" => Family::NearOrthogonal,
            "near_hexagon" => Family::NearHexagon,
            "symmetric" => Family::Symmetric,
            _ => {
                let inner = s
                    .strip_prefix("per_class(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown family `{s}`"))?;
                let class = inner
                    .parse::<u8>()
                    .ok()
                    .and_then(ConfigClass::from_index)
                    .or_else(|| ConfigClass::from_name(inner))
                    .ok_or_else(|| format!("unknown class `{inner}`"))?;
                Family::PerClass(class)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    /// Minimum pairwise separation.
    pub floor: f64,
    /// Perturbation size for the `near_*` families.
    pub perturbation: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { floor: 1e-3, perturbation: 1e-4 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("no {family} sample after {attempts} attempts")]
pub struct GenError {
    pub family: String,
    pub attempts: u64,
}

pub fn min_separation(p: &[Point; 4]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..4 {
        for j in i + 1..4 {
            m = m.min(p[i].dist(p[j]));
        }
    }
    m
}

fn unit_point(rng: &mut impl Rng) -> Point {
    Point::new(rng.gen(), rng.gen())
}

/// Random rotation and translation keeping the sample inside roughly the unit square.
fn place(rng: &mut impl Rng, p: [Point; 4]) -> [Point; 4] {
    let center = Point::new(0.5, 0.5);
    let mid = p.iter().fold(Point::ORIGIN, |a, &b| a + b) / 4.0;
    let s = Similarity::new(rng.gen_range(0.0..TAU), rng.gen_bool(0.5), 1.0, center);
    p.map(|q| s.apply(q - mid))
}

fn perturb(rng: &mut impl Rng, p: Point, size: f64) -> Point {
    p + Point::new(rng.gen_range(-size..=size), rng.gen_range(-size..=size))
}

fn attempt(family: Family, rng: &mut impl Rng, g: GenParams) -> Option<[Point; 4]> {
    let p = match family {
        Family::Uniform => [unit_point(rng), unit_point(rng), unit_point(rng), unit_point(rng)],
        Family::Collinear => {
            let ts: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-0.5..0.5));
            place(rng, ts.map(|t| Point::new(t, 0.0)))
        }
        Family::ThreeCollinear => {
            let ts: [f64; 3] = core::array::from_fn(|_| rng.gen_range(-0.5..0.5));
            let off = Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            place(rng, [Point::new(ts[0], 0.0), Point::new(ts[1], 0.0), Point::new(ts[2], 0.0), off])
        }
        Family::NearOrthogonal => {
            // Two segments crossing at right angles, then jittered.
            let a = rng.gen_range(0.05..0.5);
            let b = rng.gen_range(0.0..a);
            let c = rng.gen_range(0.05..0.5);
            let d = rng.gen_range(0.0..c);
            let raw = [Point::new(-a, 0.0), Point::new(a - b, 0.0), Point::new(0.0, -c), Point::new(0.0, c - d)];
            // Half the samples stay exactly orthogonal.
            let size = if rng.gen_bool(0.5) { 0.0 } else { g.perturbation * rng.gen::<f64>() };
            let jittered = raw.map(|q| perturb(rng, q, size));
            place(rng, jittered)
        }
        Family::NearHexagon => {
            let h = ThinHexagon::new(Point::new(-0.5, 0.0), Point::new(0.5, 0.0)).ok()?;
            let mut inner = [Point::ORIGIN; 2];
            for slot in &mut inner {
                let t = rng.gen_range(0.0..h.length);
                let w = h.chord_half_width(t);
                let s = rng.gen_range(-w..=w);
                *slot = Point::new(-0.5 + t, s);
            }
            let size = g.perturbation * rng.gen::<f64>();
            let raw = [Point::new(-0.5, 0.0), Point::new(0.5, 0.0), inner[0], inner[1]];
            let jittered = raw.map(|q| perturb(rng, q, size));
            place(rng, jittered)
        }
        Family::Symmetric => {
            let a = Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let b = Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let raw = if rng.gen_bool(0.5) {
                // Mirror image across the y axis.
                [a, b, Point::new(-a.x, a.y), Point::new(-b.x, b.y)]
            } else {
                // Half-turn symmetry.
                [a, b, -a, -b]
            };
            place(rng, raw)
        }
        Family::PerClass(_) => unreachable!("handled by the caller"),
    };
    (min_separation(&p) >= g.floor).then_some(p)
}

const MIXTURE: [Family; 6] = [
    Family::Uniform,
    Family::Collinear,
    Family::ThreeCollinear,
    Family::NearOrthogonal,
    Family::NearHexagon,
    Family::Symmetric,
];

/// One sample of `family`. `PerClass` draws from a mixture of the other
/// families until the classifier returns the requested class.
pub fn generate(family: Family, rng: &mut impl Rng, g: GenParams) -> Result<[Point; 4], GenError> {
    let err = GenError { family: family.name(), attempts: MAX_ATTEMPTS };
    for _ in 0..MAX_ATTEMPTS {
        let sample = match family {
            Family::PerClass(want) => {
                // Weight the mixture toward families that hit the class often.
                let base = if rng.gen_bool(0.5) { Family::Uniform } else { MIXTURE[rng.gen_range(0..MIXTURE.len())] };
                attempt(base, rng, g).filter(|p| classify(p, Tolerance::default()).map_or(false, |c| c.class == want))
            }
            f => attempt(f, rng, g),
        };
        if let Some(p) = sample {
            return Ok(p);
        }
    }
    Err(err)
}

/// Random local frames: any rotation, either handedness, scale log-uniform
/// over four decades.
pub fn random_frames(rng: &mut impl Rng) -> [crate::sim::FrameAssignment; 4] {
    core::array::from_fn(|_| crate::sim::FrameAssignment {
        theta: rng.gen_range(0.0..TAU),
        reflect: rng.gen_bool(0.5),
        scale: 10f64.powf(rng.gen_range(-2.0..2.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn family_names_parse() {
        for f in MIXTURE {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("per_class(4)".parse::<Family>().unwrap(), Family::PerClass(ConfigClass::Pinwheel));
        assert_eq!("per_class(scissors)".parse::<Family>().unwrap(), Family::PerClass(ConfigClass::Scissors));
        assert!("per_class(9)".parse::<Family>().is_err());
    }

    #[test]
    fn separation_floor_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = GenParams::default();
        for f in MIXTURE {
            for _ in 0..200 {
                let p = generate(f, &mut rng, g).unwrap();
                assert!(min_separation(&p) >= g.floor);
            }
        }
    }

    #[test]
    fn per_class_audited() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for c in ConfigClass::ALL {
            let p = generate(Family::PerClass(c), &mut rng, GenParams::default()).unwrap();
            assert_eq!(classify(&p, Tolerance::default()).unwrap().class, c);
        }
    }
}
