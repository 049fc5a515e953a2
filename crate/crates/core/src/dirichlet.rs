//! p-Dirichlet energies, the p-Laplacian, and p-harmonic Dirichlet problems
//! on Cayley-graph balls.
//!
//! Energies run over ordered pairs `(g, s)` with `g` and `g·s` both in the
//! ball, so every undirected edge is counted twice. A vertex is interior when
//! `|g| < R`; all of its neighbours then lie in the ball. The Dirichlet
//! problem fixes values on the sphere `S_R` and minimizes the energy over the
//! interior by cyclic coordinate minimization.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::Ball;
use crate::error::{Error, Result};

/// Real values indexed by ball vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "field value at {i} is not finite"
            )));
        }
        Ok(ScalarField { values })
    }

    pub fn constant(ball: &Ball, c: f64) -> Self {
        ScalarField {
            values: vec![c; ball.len()],
        }
    }

    pub fn from_fn(ball: &Ball, mut f: impl FnMut(usize) -> f64) -> Self {
        ScalarField {
            values: (0..ball.len()).map(&mut f).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.values[i] = v;
    }

    /// Boundary trace on the sphere of the ball's radius.
    pub fn trace(&self, ball: &Ball) -> BTreeMap<usize, f64> {
        ball.sphere(ball.radius())
            .into_iter()
            .map(|i| (i, self.values[i]))
            .collect()
    }

    pub fn sup_distance(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_field(ball: &Ball, f: &ScalarField) -> Result<()> {
    if f.len() == ball.len() {
        Ok(())
    } else {
        Err(Error::FieldMismatch {
            expected: ball.len(),
            got: f.len(),
        })
    }
}

fn check_exponent(p: f64, min_exclusive: bool) -> Result<()> {
    let ok = if min_exclusive { p > 1.0 } else { p >= 1.0 };
    if ok && p.is_finite() {
        Ok(())
    } else {
        let bound = if min_exclusive { "> 1" } else { ">= 1" };
        Err(Error::InvalidParameter(format!(
            "exponent p must be {bound}, got {p}"
        )))
    }
}

/// `E_p(f) = Σ_{s∈S} Σ_g |f(g·s) - f(g)|^p` over pairs inside the ball.
pub fn dirichlet_energy(ball: &Ball, f: &ScalarField, p: f64) -> Result<f64> {
    check_field(ball, f)?;
    check_exponent(p, false)?;
    Ok(energy_unchecked(ball, &f.values, p))
}

fn energy_unchecked(ball: &Ball, v: &[f64], p: f64) -> f64 {
    let mut total = 0.0;
    for g in 0..ball.len() {
        for h in ball.neighbors(g).iter().flatten() {
            total += (v[*h] - v[g]).abs().powf(p);
        }
    }
    total
}

/// `(E_p(f) + |f(1)|^p)^{1/p}`.
pub fn dp_norm(ball: &Ball, f: &ScalarField, p: f64) -> Result<f64> {
    let e = dirichlet_energy(ball, f, p)?;
    Ok((e + f.get(0).abs().powf(p)).powf(1.0 / p))
}

/// `|t|^{p-2} t`, taken as zero at `t = 0` for every `p`.
fn signed_power(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.abs().powf(p - 1.0).copysign(t)
    }
}

/// `(Δ_p f)(g) = Σ_s |f(g·s) - f(g)|^{p-2} (f(g·s) - f(g))`.
pub fn p_laplacian(ball: &Ball, f: &ScalarField, p: f64, g: usize) -> Result<f64> {
    check_field(ball, f)?;
    check_exponent(p, true)?;
    if g >= ball.len() {
        return Err(Error::InvalidParameter(format!(
            "vertex {g} is not in the ball"
        )));
    }
    laplacian_at(ball, &f.values, p, g).ok_or(Error::NotInterior(g))
}

fn laplacian_at(ball: &Ball, v: &[f64], p: f64, g: usize) -> Option<f64> {
    let mut acc = 0.0;
    for h in ball.neighbors(g) {
        acc += signed_power(v[(*h)?] - v[g], p);
    }
    Some(acc)
}

fn interior(ball: &Ball) -> Vec<usize> {
    (0..ball.len())
        .filter(|&i| ball.length(i) < ball.radius())
        .collect()
}

/// `max |Δ_p f(g)|` over interior vertices.
pub fn harmonic_residual(ball: &Ball, f: &ScalarField, p: f64) -> Result<f64> {
    check_field(ball, f)?;
    check_exponent(p, true)?;
    let inner = interior(ball);
    if inner.is_empty() {
        return Err(Error::NoInterior);
    }
    Ok(residual_unchecked(ball, &f.values, p, &inner))
}

fn residual_unchecked(ball: &Ball, v: &[f64], p: f64, inner: &[usize]) -> f64 {
    inner
        .iter()
        .map(|&g| laplacian_at(ball, v, p, g).map_or(f64::INFINITY, f64::abs))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub p: f64,
    /// Target for the max interior residual `|Δ_p h|`.
    pub tolerance: f64,
    /// Bracket width at which a one-dimensional subproblem stops.
    pub subproblem_tolerance: f64,
    /// Target for the estimated distance to the fixed point, extrapolated
    /// from successive sweep updates. Matters for p far from 2, where a
    /// small residual alone does not pin the solution down.
    pub step_tolerance: f64,
    pub max_sweeps: usize,
}

impl SolverConfig {
    pub fn new(p: f64) -> Self {
        SolverConfig {
            p,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        check_exponent(self.p, true)?;
        if !(self.tolerance > 0.0 && self.subproblem_tolerance > 0.0 && self.step_tolerance > 0.0) {
            return Err(Error::InvalidParameter(
                "solver tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            p: 2.0,
            tolerance: 1e-10,
            subproblem_tolerance: 1e-12,
            step_tolerance: 1e-10,
            max_sweeps: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub sweeps: usize,
    pub residual: f64,
    /// Energy before the first sweep followed by the energy after each sweep.
    pub energy_trace: Vec<f64>,
    /// Residual matching each entry of `energy_trace`.
    pub residual_trace: Vec<f64>,
    pub converged: bool,
}

/// Initial interior values for [`solve_dirichlet_from`].
#[derive(Debug, Clone, PartialEq)]
pub enum Initialization {
    /// Mean of the boundary values everywhere.
    BoundaryMean,
    /// Uniform in `[min, max]` of the boundary values.
    Random {
        seed: u64,
    },
    Field(ScalarField),
}

/// Minimizes `E_p` over fields agreeing with `boundary` on `S_R`.
pub fn solve_dirichlet(
    ball: &Ball,
    boundary: &BTreeMap<usize, f64>,
    config: &SolverConfig,
) -> Result<(ScalarField, SolverReport)> {
    solve_dirichlet_from(ball, boundary, config, &Initialization::BoundaryMean)
}

pub fn solve_dirichlet_from(
    ball: &Ball,
    boundary: &BTreeMap<usize, f64>,
    config: &SolverConfig,
    init: &Initialization,
) -> Result<(ScalarField, SolverReport)> {
    config.validate()?;
    let sphere = ball.sphere(ball.radius());
    if boundary.len() != sphere.len() || sphere.iter().any(|i| !boundary.contains_key(i)) {
        return Err(Error::BoundaryMismatch(format!(
            "expected values on the {} vertices of S_{}, got {} entries",
            sphere.len(),
            ball.radius(),
            boundary.len()
        )));
    }
    if let Some((i, _)) = boundary.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "boundary value at {i} is not finite"
        )));
    }

    let lo = boundary.values().copied().fold(f64::INFINITY, f64::min);
    let hi = boundary.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let mut v = match init {
        Initialization::BoundaryMean => {
            let mean = if boundary.is_empty() {
                0.0
            } else {
                boundary.values().sum::<f64>() / boundary.len() as f64
            };
            vec![mean; ball.len()]
        }
        Initialization::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..ball.len())
                .map(|_| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
                .collect()
        }
        Initialization::Field(f) => {
            check_field(ball, f)?;
            f.values.clone()
        }
    };
    for (&i, &b) in boundary {
        v[i] = b;
    }

    let p = config.p;
    let inner = interior(ball);
    let mut energy = energy_unchecked(ball, &v, p);
    let mut residual = residual_unchecked(ball, &v, p, &inner);
    let mut report = SolverReport {
        sweeps: 0,
        residual,
        energy_trace: vec![energy],
        residual_trace: vec![residual],
        converged: residual <= config.tolerance,
    };
    let mut neighbor_values = Vec::with_capacity(ball.degree());
    let mut previous_step = f64::INFINITY;

    while !report.converged && report.sweeps < config.max_sweeps {
        let mut step: f64 = 0.0;
        let mut decrease = 0.0;
        for &g in &inner {
            neighbor_values.clear();
            neighbor_values.extend(
                ball.neighbors(g)
                    .iter()
                    .map(|h| v[h.expect("interior vertex")]),
            );
            let (t, delta) = minimize_local(&neighbor_values, v[g], p, config.subproblem_tolerance);
            step = step.max((t - v[g]).abs());
            decrease += delta;
            v[g] = t;
        }
        // Every accepted update lowers its local energy, and each edge is
        // seen from both ends, so the trace is nonincreasing by construction
        // rather than up to rounding of a fresh sum.
        energy += 2.0 * decrease;
        residual = residual_unchecked(ball, &v, p, &inner);
        report.sweeps += 1;
        report.energy_trace.push(energy);
        report.residual_trace.push(residual);
        report.residual = residual;
        let scale = v.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let remaining = if step <= 8.0 * f64::EPSILON * scale {
            0.0
        } else if step < previous_step {
            // Linear-rate extrapolation of the distance to the fixed point.
            step / (1.0 - step / previous_step)
        } else {
            f64::INFINITY
        };
        previous_step = step;
        report.converged = residual <= config.tolerance && remaining <= config.step_tolerance;
    }

    Ok((ScalarField { values: v }, report))
}

// φ(t) = Σ |t - v_i|^p and its derivative up to the factor p.
fn local_energy(values: &[f64], t: f64, p: f64) -> f64 {
    values.iter().map(|&x| (t - x).abs().powf(p)).sum()
}

fn local_slope(values: &[f64], t: f64, p: f64) -> f64 {
    values.iter().map(|&x| signed_power(t - x, p)).sum()
}

fn local_curvature(values: &[f64], t: f64, p: f64) -> f64 {
    (p - 1.0)
        * values
            .iter()
            .map(|&x| (t - x).abs().powf(p - 2.0))
            .sum::<f64>()
}

/// Minimizer of `Σ |t - v_i|^p` over `t`, by Newton steps safeguarded with
/// bisection inside `[min v, max v]`.
/// Returns the new value and the (nonpositive) change in local energy.
fn minimize_local(values: &[f64], current: f64, p: f64, tol: f64) -> (f64, f64) {
    let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let before = local_energy(values, current, p);
    if lo == hi {
        // Exact minimum 0; the energy cannot rise.
        return (lo, -before);
    }
    let (min_v, max_v) = (lo, hi);
    let mut t = current.clamp(lo, hi);
    for _ in 0..200 {
        let slope = local_slope(values, t, p);
        if slope == 0.0 {
            break;
        }
        if slope > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        if hi - lo <= tol * hi.abs().max(lo.abs()).max(1.0) {
            t = 0.5 * (lo + hi);
            break;
        }
        let curvature = local_curvature(values, t, p);
        let newton = t - slope / curvature;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= tol * t.abs().max(1.0) {
            t = next;
            break;
        }
        t = next;
    }

    // For p < 2 the slope jumps steeply near each v_i; when the minimizer
    // sits on a neighbour value, landing on it exactly gives the smallest
    // residual.
    if p < 2.0 {
        let mut best = (local_slope(values, t, p).abs(), t);
        for &x in values {
            if (x - t).abs() <= 1e-6 * (max_v - min_v) {
                let s = local_slope(values, x, p).abs();
                if s < best.0 {
                    best = (s, x);
                }
            }
        }
        t = best.1;
    }

    let after = local_energy(values, t, p);
    if after <= before {
        (t, after - before)
    } else {
        (current, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `f - h`; vanishes on the sphere.
    pub u: ScalarField,
    /// p-harmonic in the interior with the boundary trace of `f`.
    pub h: ScalarField,
    pub report: SolverReport,
}

/// Splits `f = u + h` with `h` the p-harmonic extension of the trace of `f`
/// on `S_R` and `u` vanishing on `S_R`.
pub fn decompose(ball: &Ball, f: &ScalarField, config: &SolverConfig) -> Result<Decomposition> {
    check_field(ball, f)?;
    let (h, report) = solve_dirichlet(ball, &f.trace(ball), config)?;
    let u = ScalarField {
        values: f.values.iter().zip(&h.values).map(|(a, b)| a - b).collect(),
    };
    Ok(Decomposition { u, h, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::groups::{Group, GroupElement};
    use approx::assert_relative_eq;

    fn z_ball(r: u32) -> Ball {
        build_ball(&Group::abelian(1).unwrap(), r).unwrap()
    }

    fn coord(ball: &Ball, i: usize) -> i64 {
        match ball.element(i) {
            GroupElement::Vector(v) => v[0],
            _ => unreachable!(),
        }
    }

    #[test]
    fn energy_examples() {
        let ball = z_ball(2);
        let one = ScalarField::constant(&ball, 3.0);
        assert_eq!(dirichlet_energy(&ball, &one, 2.0).unwrap(), 0.0);
        let delta = ScalarField::from_fn(&ball, |i| if i == 0 { 1.0 } else { 0.0 });
        assert_eq!(dirichlet_energy(&ball, &delta, 2.0).unwrap(), 4.0);
        assert_relative_eq!(
            dp_norm(&ball, &delta, 2.0).unwrap(),
            5f64.sqrt(),
            epsilon = 1e-12
        );
        assert_relative_eq!(dp_norm(&ball, &one, 2.0).unwrap(), 3.0, epsilon = 1e-12);
        let zero = ScalarField::constant(&ball, 0.0);
        assert_eq!(dp_norm(&ball, &zero, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn path_energy() {
        // The path 0..4 is the part of B_2 of Z shifted by 2.
        let ball = z_ball(2);
        let f = ScalarField::from_fn(&ball, |i| (coord(&ball, i) + 2) as f64 / 4.0);
        assert_relative_eq!(
            dirichlet_energy(&ball, &f, 3.0).unwrap(),
            0.125,
            epsilon = 1e-15
        );
    }

    #[test]
    fn laplacian_examples() {
        let ball = z_ball(3);
        let linear = ScalarField::from_fn(&ball, |i| coord(&ball, i) as f64);
        for g in 0..ball.len() {
            if ball.length(g) < 3 {
                for p in [1.5, 2.0, 3.0] {
                    assert_eq!(p_laplacian(&ball, &linear, p, g).unwrap(), 0.0);
                }
            }
        }
        let delta = ScalarField::from_fn(&ball, |i| if i == 0 { 1.0 } else { 0.0 });
        let one = ball.index_of(&GroupElement::Vector(vec![1])).unwrap();
        assert_eq!(p_laplacian(&ball, &delta, 3.0, one).unwrap(), 1.0);
        assert_eq!(p_laplacian(&ball, &delta, 3.0, 0).unwrap(), -2.0);
        let edge = ball.index_of(&GroupElement::Vector(vec![3])).unwrap();
        assert_eq!(
            p_laplacian(&ball, &delta, 3.0, edge),
            Err(Error::NotInterior(edge))
        );
    }

    #[test]
    fn zero_differences_below_two() {
        let ball = z_ball(2);
        let flat = ScalarField::from_fn(&ball, |i| if coord(&ball, i) >= 0 { 1.0 } else { 0.0 });
        let v = p_laplacian(&ball, &flat, 1.5, 0).unwrap();
        assert!(v.is_finite());
        assert_eq!(v, -1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let ball = z_ball(2);
        let short = ScalarField::new(vec![0.0; 2]).unwrap();
        assert!(matches!(
            dirichlet_energy(&ball, &short, 2.0),
            Err(Error::FieldMismatch {
                expected: 5,
                got: 2
            })
        ));
        let f = ScalarField::constant(&ball, 0.0);
        assert!(p_laplacian(&ball, &f, 1.0, 0).is_err());
        assert!(solve_dirichlet(&ball, &BTreeMap::new(), &SolverConfig::new(2.0)).is_err());
        assert!(ScalarField::new(vec![f64::NAN]).is_err());
        let single = z_ball(0);
        assert_eq!(
            harmonic_residual(&single, &ScalarField::constant(&single, 0.0), 2.0),
            Err(Error::NoInterior)
        );
    }

    #[test]
    fn path_solution_is_linear() {
        let ball = z_ball(2);
        let mut boundary = BTreeMap::new();
        for i in ball.sphere(2) {
            boundary.insert(i, if coord(&ball, i) > 0 { 1.0 } else { 0.0 });
        }
        for p in [1.5, 2.0, 3.0, 4.0] {
            let (h, report) = solve_dirichlet(&ball, &boundary, &SolverConfig::new(p)).unwrap();
            assert!(report.converged, "p = {p}");
            for i in 0..ball.len() {
                let expected = (coord(&ball, i) + 2) as f64 / 4.0;
                assert_relative_eq!(h.get(i), expected, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn star_solutions() {
        let ball = build_ball(&Group::free(2).unwrap(), 1).unwrap();
        let leaves = ball.sphere(1);
        let boundary: BTreeMap<_, _> = leaves
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, if k == 0 { 1.0 } else { 0.0 }))
            .collect();
        let (h, _) = solve_dirichlet(&ball, &boundary, &SolverConfig::new(2.0)).unwrap();
        assert_relative_eq!(h.get(0), 0.25, epsilon = 1e-12);

        // Oracle: minimize 3x^4 + (1-x)^4 by ternary search.
        let phi = |x: f64| 3.0 * x.powi(4) + (1.0 - x).powi(4);
        let (mut a, mut b) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if phi(m1) < phi(m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        let oracle = 0.5 * (a + b);
        assert_relative_eq!(oracle, 1.0 / (1.0 + 3f64.cbrt()), epsilon = 1e-10);
        assert_relative_eq!(oracle, 0.409459, epsilon = 1e-6);
        let (h, _) = solve_dirichlet(&ball, &boundary, &SolverConfig::new(4.0)).unwrap();
        assert_relative_eq!(h.get(0), oracle, epsilon = 1e-9);
    }

    #[test]
    fn decomposition_examples() {
        let ball = build_ball(&Group::free(2).unwrap(), 3).unwrap();
        let config = SolverConfig::new(3.0);
        let spike = ScalarField::from_fn(&ball, |i| if i == 0 { 1.0 } else { 0.0 });
        let d = decompose(&ball, &spike, &config).unwrap();
        assert!(d.h.values().iter().all(|v| v.abs() < 1e-12));
        assert_eq!(d.u, spike);

        let (harmonic, _) = solve_dirichlet(
            &ball,
            &ball
                .sphere(3)
                .into_iter()
                .map(|i| (i, (i % 5) as f64))
                .collect(),
            &config,
        )
        .unwrap();
        let d = decompose(&ball, &harmonic, &config).unwrap();
        assert!(d.u.values().iter().all(|v| v.abs() < 1e-8));
    }

    #[test]
    fn max_sweeps_reports_nonconvergence() {
        let ball = build_ball(&Group::abelian(2).unwrap(), 4).unwrap();
        let boundary = ball
            .sphere(4)
            .into_iter()
            .map(|i| (i, (i % 3) as f64))
            .collect();
        let config = SolverConfig {
            max_sweeps: 2,
            ..SolverConfig::new(2.0)
        };
        let (_, report) = solve_dirichlet(&ball, &boundary, &config).unwrap();
        assert!(!report.converged);
        assert_eq!(report.sweeps, 2);
        assert_eq!(report.energy_trace.len(), 3);
    }
}
