use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{peel, EdgeVertexCode};
use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 0.01;
/// Bisection stops after this many midpoints regardless of width.
pub const BISECTION_LEVELS: usize = 12;

const Z95: f64 = 1.959_963_984_540_054;

/// Independent stream for one trial, a pure function of its inputs so
/// results do not depend on thread count or scheduling.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    key[24..].copy_from_slice(b"cstore-p");
    ChaCha8Rng::from_seed(key)
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Probability that a vertex is functional.
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl CurvePoint {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn covers(&self, q: f64) -> bool {
        self.wilson_lo <= q && q <= self.wilson_hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    /// Bracket `[lo, hi]` around the crossing of success probability 1/2.
    pub lo: f64,
    pub hi: f64,
    pub estimate: f64,
    pub levels: usize,
    /// Success stays on one side of 1/2 over all of `[0, 1]`.
    pub degenerate: bool,
    pub seed: u64,
    pub trials_per_point: usize,
    /// Every evaluated point, sorted by `p`.
    pub curve: Vec<CurvePoint>,
}

fn evaluate(code: &EdgeVertexCode, p: f64, trials: usize, seed: u64) -> Result<CurvePoint> {
    let n = code.n();
    let successes = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, p.to_bits(), i);
            let erased: Vec<usize> = (0..n).filter(|_| !rng.random_bool(p)).collect();
            peel(code, &erased).map(|s| s.is_complete() as usize)
        })
        .sum::<Result<usize>>()?;
    let (wilson_lo, wilson_hi) = wilson_interval(successes, trials);
    Ok(CurvePoint {
        p,
        trials,
        successes,
        wilson_lo,
        wilson_hi,
    })
}

/// Success probability of peeling when each vertex is functional
/// independently with probability `p`, at every `p` in `grid`.
pub fn success_curve(code: &EdgeVertexCode, grid: &[f64], trials: usize, seed: u64) -> Result<Vec<CurvePoint>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial per point".into()));
    }
    if let Some(p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    grid.iter().map(|&p| evaluate(code, p, trials, seed)).collect()
}

/// Bisects for the functional-vertex probability at which peeling succeeds
/// half the time.
pub fn estimate_pc(code: &EdgeVertexCode, trials_per_point: usize, seed: u64) -> Result<PcEstimate> {
    if trials_per_point == 0 {
        return Err(Error::InvalidParameter("need at least one trial per point".into()));
    }
    let at = |p| evaluate(code, p, trials_per_point, seed);
    let mut curve = vec![at(0.0)?, at(1.0)?];
    let (mut lo, mut hi) = (0.0, 1.0);
    let degenerate = curve[0].rate() >= 0.5 || curve[1].rate() < 0.5;
    let mut levels = 0;
    if !degenerate {
        while hi - lo >= BISECTION_WIDTH && levels < BISECTION_LEVELS {
            let mid = (lo + hi) / 2.0;
            let point = at(mid)?;
            if point.rate() >= 0.5 {
                hi = mid;
            } else {
                lo = mid;
            }
            curve.push(point);
            levels += 1;
        }
    }
    curve.sort_by(|a, b| a.p.total_cmp(&b.p));
    Ok(PcEstimate {
        lo,
        hi,
        estimate: (lo + hi) / 2.0,
        levels,
        degenerate,
        seed,
        trials_per_point,
        curve,
    })
}

/// No adjacent pair (by `p`) where success drops with disjoint intervals.
pub fn curve_is_monotone(curve: &[CurvePoint]) -> bool {
    let mut sorted: Vec<&CurvePoint> = curve.iter().collect();
    sorted.sort_by(|a, b| a.p.total_cmp(&b.p));
    sorted.windows(2).all(|w| w[1].wilson_hi >= w[0].wilson_lo)
}
