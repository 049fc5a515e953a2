//! Gromov products with basepoint the identity, finite-scale hyperbolicity
//! estimates, and the choice of the Floyd scale parameter `a`.
//!
//! Hyperbolicity is measured with the four-point condition
//! `(x|y) >= min((x|z), (z|y)) - δ` at basepoint `1`. Estimates over a finite
//! ball are lower bounds for the constant of the whole group and are labelled
//! as estimates everywhere they are reported.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::{distance, Ball};
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};

/// Exact Gromov product, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GromovProduct {
    pub twice: u64,
}

impl GromovProduct {
    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// `(x|y) = ½(|x| + |y| - d(x, y))`.
pub fn gromov_product(
    group: &Group,
    x: &GroupElement,
    y: &GroupElement,
    cap: u64,
) -> Result<GromovProduct> {
    let lx = group.word_length(x)?;
    let ly = group.word_length(y)?;
    if lx > cap || ly > cap {
        return Err(Error::DistanceCapExceeded { cap });
    }
    let d = distance(group, x, y, cap)?;
    Ok(GromovProduct { twice: lx + ly - d })
}

/// Word lengths and pairwise word distances of every vertex of a ball.
///
/// Distances come from group arithmetic, so they are exact even for pairs
/// whose geodesics leave the ball.
#[derive(Debug, Clone)]
pub struct GromovTable {
    n: usize,
    lengths: Vec<u32>,
    distances: Vec<u32>,
}

/// Largest ball accepted by [`GromovTable::new`].
pub const MAX_TABLE_VERTICES: usize = 20_000;

impl GromovTable {
    pub fn new(ball: &Ball) -> Result<Self> {
        let n = ball.len();
        if n > MAX_TABLE_VERTICES {
            return Err(Error::ResourceCap {
                radius: ball.radius(),
                limit: MAX_TABLE_VERTICES,
            });
        }
        let group = ball.group();
        let inverses: Vec<_> = ball
            .elements()
            .iter()
            .map(|x| group.invert_unchecked(x))
            .collect();
        let mut distances = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = group.multiply_unchecked(&inverses[i], ball.element(j));
                let d = group.word_length_unchecked(&diff) as u32;
                distances[i * n + j] = d;
                distances[j * n + i] = d;
            }
        }
        Ok(GromovTable {
            n,
            lengths: ball.lengths().to_vec(),
            distances,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> u32 {
        self.distances[i * self.n + j]
    }

    /// Twice the Gromov product of vertices `i` and `j`.
    pub fn product_twice(&self, i: usize, j: usize) -> u64 {
        (self.lengths[i] + self.lengths[j] - self.distance(i, j)) as u64
    }

    pub fn product(&self, i: usize, j: usize) -> GromovProduct {
        GromovProduct {
            twice: self.product_twice(i, j),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimate {
    /// Twice the estimate, which is always a half-integer.
    pub twice: u64,
    pub radius: u32,
    pub mode: DeltaMode,
    pub triples_examined: u64,
    /// Ball indices `(x, y, z)` attaining the maximum, if it is positive.
    pub witness: Option<(usize, usize, usize)>,
}

impl DeltaEstimate {
    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// Four-point hyperbolicity estimate over triples of the ball:
/// the maximum of `min((x|z), (z|y)) - (x|y)`, floored at zero.
pub fn estimate_delta(ball: &Ball, mode: DeltaMode) -> Result<DeltaEstimate> {
    let table = GromovTable::new(ball)?;
    Ok(estimate_delta_with_table(&table, ball.radius(), mode))
}

pub fn estimate_delta_with_table(
    table: &GromovTable,
    radius: u32,
    mode: DeltaMode,
) -> DeltaEstimate {
    let n = table.len();
    let mut best = 0u64;
    let mut witness = None;
    let mut examined = 0u64;
    let mut consider = |x: usize, y: usize, z: usize| {
        let xy = table.product_twice(x, y);
        let via = table.product_twice(x, z).min(table.product_twice(z, y));
        if via > xy && via - xy > best {
            best = via - xy;
            witness = Some((x, y, z));
        }
    };
    match mode {
        DeltaMode::Exhaustive => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        consider(x, y, z);
                    }
                }
            }
            examined = (n as u64).pow(3);
        }
        DeltaMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let z = rng.gen_range(0..n);
                consider(x, y, z);
                examined += 1;
            }
        }
    }
    DeltaEstimate {
        twice: best,
        radius,
        mode,
        triples_examined: examined,
        witness,
    }
}

/// Exhaustive estimates for every radius `1..=ball.radius()`, reusing one
/// distance table.
pub fn delta_profile(ball: &Ball, mode: DeltaMode) -> Result<Vec<DeltaEstimate>> {
    let mut out = Vec::new();
    for r in 1..=ball.radius() {
        let sub = ball.truncate(r);
        let table = GromovTable::new(&sub)?;
        out.push(estimate_delta_with_table(&table, r, mode));
    }
    Ok(out)
}

/// Flags linear growth of the estimate with the radius, the signature of a
/// non-hyperbolic Cayley graph at finite scale.
///
/// The profile must hold consecutive radii starting at 1 and reach `R >= 4`.
/// Growth is flagged when the estimate rises between `⌊R/2⌋` and `R` with
/// slope at least 1/3; a hyperbolic group's estimate saturates instead.
pub fn looks_non_hyperbolic(profile: &[DeltaEstimate]) -> bool {
    let Some(last) = profile.last() else {
        return false;
    };
    let r = last.radius;
    if r < 4 {
        return false;
    }
    let half = r / 2;
    let Some(mid) = profile.iter().find(|e| e.radius == half) else {
        return false;
    };
    // In units of 1/2: 3·gain >= R - half <=> 3·gain_twice >= 2(R - half).
    let gain_twice = last.twice.saturating_sub(mid.twice);
    gain_twice > 0 && 3 * gain_twice >= 2 * u64::from(r - half)
}

/// Default scale when the estimate is zero.
pub const DEFAULT_SCALE: f64 = std::f64::consts::LN_2;

pub const DEFAULT_SAFETY: f64 = 0.9;

/// `e^{3δa} - 1 < √2 - 1`.
pub fn scale_condition_holds(delta: f64, a: f64) -> bool {
    a > 0.0 && (3.0 * delta * a).exp_m1() < SQRT_2 - 1.0
}

/// Picks `a > 0` with `e^{3δa} - 1 < √2 - 1`: `ln 2` when `δ = 0`, otherwise
/// `safety · ln(√2) / (3δ)`.
pub fn choose_scale_parameter(delta: f64, safety: f64) -> Result<f64> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta must be finite and >= 0, got {delta}"
        )));
    }
    if !(safety > 0.0 && safety < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "safety must lie in (0, 1), got {safety}"
        )));
    }
    let a = if delta == 0.0 {
        DEFAULT_SCALE
    } else {
        safety * SQRT_2.ln() / (3.0 * delta)
    };
    debug_assert!(scale_condition_holds(delta, a));
    Ok(a)
}
