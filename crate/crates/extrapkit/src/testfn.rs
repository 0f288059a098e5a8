//! Deterministic test-function generation: step discretizations of the
//! standard families and seeded random step functions. The same seed always
//! produces byte-identical output.

use crate::error::{Error, Result};
use crate::stepfn::StepFn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generator family for `(0, 1]`-supported test functions.
#[derive(Debug, Clone)]
pub enum Family {
    /// `chi_(0, a]`.
    Indicator { a: f64 },
    /// `t^(-a)` sampled on a log grid down to `t_min`.
    Power { a: f64, t_min: f64 },
    /// `log^beta(e/t)` sampled on a log grid down to `t_min`.
    LogPow { beta: f64, t_min: f64 },
    /// Mixture of indicators with the given heights and widths.
    IndicatorMix { parts: Vec<(f64, f64)> },
    /// Seeded random step function.
    Random { seed: u64 },
}

pub fn generate(family: &Family, n_pieces: usize) -> Result<StepFn> {
    match family {
        Family::Indicator { a } => StepFn::indicator(*a, 1.0),
        Family::Power { a, t_min } => {
            if *a >= 1.0 {
                return Err(Error::Parameter(format!(
                    "power discretizations need a < 1 to stay integrable, got {a}"
                )));
            }
            StepFn::from_samples(|t| t.powf(-a), 1.0, *t_min, n_pieces)
        }
        Family::LogPow { beta, t_min } => {
            StepFn::from_samples_right(|t| (std::f64::consts::E / t).ln().powf(*beta), 1.0, *t_min, n_pieces)
        }
        Family::IndicatorMix { parts } => {
            let mut f = StepFn::constant(0.0, 1.0)?;
            for &(width, height) in parts {
                f = f.add(&StepFn::indicator(width.clamp(1e-12, 1.0), 1.0)?.scale(height))?;
            }
            Ok(f)
        }
        Family::Random { seed } => Ok(random_step(*seed, n_pieces)),
    }
}

/// A seeded random step function on `(0, 1]` with `n` pieces.
pub fn random_step(seed: u64, n: usize) -> StepFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lens: Vec<f64> = (0..n.max(1)).map(|_| rng.gen_range(0.01f64..1.0)).collect();
    let total: f64 = lens.iter().sum();
    lens.iter_mut().for_each(|l| *l /= total);
    let pieces: Vec<(f64, f64)> = lens.iter().map(|&l| (l, rng.gen_range(0.0f64..4.0))).collect();
    // the length normalization leaves at most one ulp of drift; absorb it
    let drift: f64 = 1.0 - pieces.iter().map(|p| p.0).sum::<f64>();
    let mut pieces = pieces;
    pieces.last_mut().unwrap().0 += drift;
    StepFn::new(1.0, pieces).expect("random step construction is total")
}

/// The seeded random suite used by the verification harness: function `i`
/// derives its stream from `base_seed + i`.
pub fn random_suite(base_seed: u64, count: usize, pieces: usize) -> Vec<StepFn> {
    (0..count).map(|i| random_step(base_seed.wrapping_add(i as u64), pieces)).collect()
}
