//! Floyd rescalings of Cayley graphs.
//!
//! An admissible rescaling `F` is positive, nonincreasing, summable and
//! quasi-geometric (`F(n) <= L·F(n+1)`). The edge `{g, h}` gets length
//! `F(min(|g|, |h|))` and `d_F` is the resulting path metric. Inside a ball
//! only paths in the ball are available, so every distance computed here is
//! an upper bound for the distance in the whole Cayley graph, tagged with the
//! radius of the ball it came from.
//!
//! Alongside `d_F` this module computes the chain metric `θ_a`: the shortest
//! chain through arbitrary ball vertices with pair cost `e^{-a(u|v)}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cayley::{Ball, GrowthHistogram};
use crate::dirichlet::{dirichlet_energy, ScalarField};
use crate::error::{Error, Result};
use crate::gromov::GromovTable;

/// Family-level summability certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summability {
    Certified,
    Divergent,
    Unknown,
}

/// Anything that can be tested for admissibility.
pub trait FloydProfile {
    fn value(&self, n: u32) -> f64;
    fn summability(&self) -> Summability;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdmissibleFunction {
    /// `F(n) = base^n` with `0 < base < 1`.
    Geometric { base: f64 },
    /// `F(n) = e^{-a n}` with `a > 0`.
    Exponential { a: f64 },
    /// `F(n) = (n + 1)^{-beta}`.
    Power { beta: f64 },
}

impl AdmissibleFunction {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            AdmissibleFunction::Geometric { base } => base > 0.0 && base < 1.0,
            AdmissibleFunction::Exponential { a } => a > 0.0 && a.is_finite(),
            AdmissibleFunction::Power { beta } => beta > 0.0 && beta.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid Floyd function {self:?}"
            )))
        }
    }

    pub fn eval(&self, n: u32) -> f64 {
        match *self {
            AdmissibleFunction::Geometric { base } => base.powi(n as i32),
            AdmissibleFunction::Exponential { a } => (-a * n as f64).exp(),
            AdmissibleFunction::Power { beta } => (n as f64 + 1.0).powf(-beta),
        }
    }

    /// The smallest `L` with `F(n) <= L·F(n+1)` for every `n`.
    pub fn quasi_geometric_constant(&self) -> f64 {
        match *self {
            AdmissibleFunction::Geometric { base } => 1.0 / base,
            AdmissibleFunction::Exponential { a } => a.exp(),
            AdmissibleFunction::Power { beta } => 2f64.powf(beta),
        }
    }

    /// `Σ_{n >= start} F(n)` in closed form, where one exists.
    pub fn tail_sum(&self, start: u32) -> Option<f64> {
        match *self {
            AdmissibleFunction::Geometric { base } => Some(base.powi(start as i32) / (1.0 - base)),
            AdmissibleFunction::Exponential { a } => {
                Some((-a * start as f64).exp() / -(-a).exp_m1())
            }
            AdmissibleFunction::Power { .. } => None,
        }
    }
}

impl FloydProfile for AdmissibleFunction {
    fn value(&self, n: u32) -> f64 {
        self.eval(n)
    }

    fn summability(&self) -> Summability {
        match *self {
            AdmissibleFunction::Geometric { .. } | AdmissibleFunction::Exponential { .. } => {
                Summability::Certified
            }
            AdmissibleFunction::Power { beta } if beta > 1.0 => Summability::Certified,
            AdmissibleFunction::Power { .. } => Summability::Divergent,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    NotPositive { n: u32 },
    Increasing { n: u32 },
    RatioExceeded { n: u32, ratio: f64 },
    NotSummable,
    SummabilityUnknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    /// `max F(n)/F(n+1)` over the checked prefix.
    pub smallest_constant: f64,
    pub rejection: Option<Rejection>,
}

/// Checks positivity, monotonicity and `F(n) <= L·F(n+1)` on `0..=prefix`,
/// then consults the family's summability certificate.
pub fn check_admissible<F: FloydProfile + ?Sized>(
    f: &F,
    prefix: u32,
    constant: f64,
) -> Result<AdmissibilityVerdict> {
    if prefix < 2 {
        return Err(Error::InvalidParameter("prefix length must be >= 2".into()));
    }
    let mut smallest = 1.0f64;
    let mut rejection = None;
    for n in 0..prefix {
        let (a, b) = (f.value(n), f.value(n + 1));
        if !(a > 0.0 && b > 0.0) {
            rejection.get_or_insert(Rejection::NotPositive { n });
            break;
        }
        if b > a {
            rejection.get_or_insert(Rejection::Increasing { n });
        }
        let ratio = a / b;
        smallest = smallest.max(ratio);
        // Closed-form families hit `L` exactly, up to rounding of the ratio.
        if ratio > constant * (1.0 + 1e-12) {
            rejection.get_or_insert(Rejection::RatioExceeded { n, ratio });
        }
    }
    if rejection.is_none() {
        match f.summability() {
            Summability::Certified => {}
            Summability::Divergent => rejection = Some(Rejection::NotSummable),
            Summability::Unknown => rejection = Some(Rejection::SummabilityUnknown),
        }
    }
    Ok(AdmissibilityVerdict {
        admissible: rejection.is_none(),
        smallest_constant: smallest,
        rejection,
    })
}

/// `F(min(|g|, |h|))` for adjacent vertices `g`, `h`.
pub fn floyd_edge_weight(ball: &Ball, g: usize, h: usize, f: &AdmissibleFunction) -> Result<f64> {
    if g >= ball.len() || h >= ball.len() || ball.edge_label(g, h).is_none() {
        return Err(Error::NotAdjacent(g, h));
    }
    Ok(f.eval(ball.length(g).min(ball.length(h))))
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `d_F^{(R)}(source, ·)` for every vertex of the ball (Dijkstra).
pub fn floyd_distances_from(ball: &Ball, source: usize, f: &AdmissibleFunction) -> Vec<f64> {
    let weights: Vec<f64> = (0..=ball.radius()).map(|n| f.eval(n)).collect();
    let mut dist = vec![f64::INFINITY; ball.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, g)) = heap.pop() {
        if d > dist[g] {
            continue;
        }
        for &h in ball.neighbors(g).iter().flatten() {
            let w = weights[ball.length(g).min(ball.length(h)) as usize];
            let nd = d + w;
            if nd < dist[h] {
                dist[h] = nd;
                heap.push(Entry(nd, h));
            }
        }
    }
    dist
}

/// `d_F^{(R)}(x, y)`: the shortest `F`-weighted edge path inside the ball.
pub fn floyd_distance(ball: &Ball, x: usize, y: usize, f: &AdmissibleFunction) -> Result<f64> {
    if x >= ball.len() || y >= ball.len() {
        return Err(Error::OutsideBall {
            radius: ball.radius(),
        });
    }
    let d = floyd_distances_from(ball, x, f)[y];
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Internal(format!(
            "vertices {x} and {y} are disconnected in the ball"
        )))
    }
}

/// Largest ball accepted by the chain-metric routines.
pub const MAX_CHAIN_VERTICES: usize = 20_000;

fn dense_dijkstra(n: usize, source: usize, weight: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for (i, &d) in dist.iter().enumerate() {
            if !done[i] && d < best {
                best = d;
                u = i;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] {
                let nd = best + weight(u, v);
                if nd < dist[v] {
                    dist[v] = nd;
                }
            }
        }
    }
    dist
}

/// `θ_a(x, ·)` from one source: shortest chains in the complete graph on the
/// ball with pair cost `ρ_a(u, v) = e^{-a(u|v)}`.
pub fn chain_distances_from(ball: &Ball, source: usize, a: f64) -> Result<Vec<f64>> {
    if ball.len() > MAX_CHAIN_VERTICES {
        return Err(Error::ResourceCap {
            radius: ball.radius(),
            limit: MAX_CHAIN_VERTICES,
        });
    }
    let group = ball.group();
    let inverses: Vec<_> = ball
        .elements()
        .iter()
        .map(|x| group.invert_unchecked(x))
        .collect();
    let product_twice = |u: usize, v: usize| {
        let diff = group.multiply_unchecked(&inverses[u], ball.element(v));
        (ball.length(u) as u64 + ball.length(v) as u64) - group.word_length_unchecked(&diff)
    };
    Ok(dense_dijkstra(ball.len(), source, |u, v| {
        (-a * product_twice(u, v) as f64 / 2.0).exp()
    }))
}

/// `θ_a(x, y)`.
pub fn chain_distance(ball: &Ball, x: usize, y: usize, a: f64) -> Result<f64> {
    if x >= ball.len() || y >= ball.len() {
        return Err(Error::OutsideBall {
            radius: ball.radius(),
        });
    }
    Ok(chain_distances_from(ball, x, a)?[y])
}

/// All-pairs `θ_a` over a precomputed Gromov table, row-major.
pub fn chain_distance_matrix(table: &GromovTable, a: f64) -> Vec<f64> {
    let n = table.len();
    let rho: Vec<f64> = (0..n * n)
        .map(|k| (-a * table.product_twice(k / n, k % n) as f64 / 2.0).exp())
        .collect();
    let mut out = Vec::with_capacity(n * n);
    for s in 0..n {
        out.extend(dense_dijkstra(n, s, |u, v| rho[u * n + v]));
    }
    out
}

/// Caps for pairwise scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    /// Exhaustive scan when the number of unordered pairs is at most this.
    pub pair_cap: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            pair_cap: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereDiameter {
    pub radius: u32,
    /// Radius of the ball the distances were computed in.
    pub ball_radius: u32,
    pub max: f64,
    /// Minimum of `d_F` over the pairs realizing the largest word distance.
    pub min_antipodal: f64,
    pub mean: f64,
    pub pairs: u64,
    pub exhaustive: bool,
}

/// Pairwise `d_F^{(ball)}` statistics over the sphere `S_r`.
pub fn sphere_floyd_diameter(
    ball: &Ball,
    r: u32,
    f: &AdmissibleFunction,
    sampling: &Sampling,
) -> Result<SphereDiameter> {
    if r > ball.radius() {
        return Err(Error::OutsideBall {
            radius: ball.radius(),
        });
    }
    let sphere = ball.sphere(r);
    if sphere.is_empty() {
        return Err(Error::EmptySphere(r));
    }
    let m = sphere.len();
    let total_pairs = m * (m - 1) / 2;
    let exhaustive = total_pairs <= sampling.pair_cap;
    let sources: Vec<usize> = if exhaustive {
        sphere.clone()
    } else {
        let mut order = sphere.clone();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(sampling.seed));
        let k = (sampling.pair_cap / m).max(1);
        order.truncate(k);
        order.sort_unstable();
        order
    };

    let group = ball.group();
    let mut stats = SphereDiameter {
        radius: r,
        ball_radius: ball.radius(),
        max: 0.0,
        min_antipodal: 0.0,
        mean: 0.0,
        pairs: 0,
        exhaustive,
    };
    let mut sum = 0.0;
    let mut widest = 0u64;
    let mut min_antipodal = f64::INFINITY;
    let is_source = |i: usize| sources.binary_search(&i).is_ok();
    for &x in &sources {
        let dist = floyd_distances_from(ball, x, f);
        let inv = group.invert_unchecked(ball.element(x));
        for &y in &sphere {
            // Each unordered pair once: skip partners that are themselves
            // sources with a smaller index.
            if y == x || (is_source(y) && y < x) {
                continue;
            }
            let d = dist[y];
            let word =
                group.word_length_unchecked(&group.multiply_unchecked(&inv, ball.element(y)));
            stats.pairs += 1;
            sum += d;
            stats.max = stats.max.max(d);
            match word.cmp(&widest) {
                Ordering::Greater => {
                    widest = word;
                    min_antipodal = d;
                }
                Ordering::Equal => min_antipodal = min_antipodal.min(d),
                Ordering::Less => {}
            }
        }
    }
    if stats.pairs > 0 {
        stats.mean = sum / stats.pairs as f64;
        stats.min_antipodal = min_antipodal;
    }
    Ok(stats)
}

/// Floyd distance to a finite proxy `g₀^R` of a boundary point.
#[derive(Debug, Clone, PartialEq)]
pub struct FloydField {
    pub field: ScalarField,
    /// Ball index of the target `g₀^R`.
    pub target: usize,
    pub generator: usize,
    pub function: AdmissibleFunction,
    pub radius: u32,
}

/// `f_R(x) = d_F^{(R)}(x, g₀^R)` where `R` is the ball radius.
pub fn witness_field(ball: &Ball, generator: usize, f: &AdmissibleFunction) -> Result<FloydField> {
    let group = ball.group();
    group.generator(generator)?;
    if ball.radius() < 1 {
        return Err(Error::InvalidParameter(
            "witness needs a ball of radius >= 1".into(),
        ));
    }
    let word = vec![generator; ball.radius() as usize];
    let target_element = group.normal_form(&word)?;
    let target = ball.index_of(&target_element).ok_or(Error::OutsideBall {
        radius: ball.radius(),
    })?;
    let values = floyd_distances_from(ball, target, f);
    Ok(FloydField {
        field: ScalarField::new(values)?,
        target,
        generator,
        function: *f,
        radius: ball.radius(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessEnergy {
    pub energy: f64,
    /// `#S · L^p · Σ_{g ∈ ball} F(|g|)^p`.
    pub bound: f64,
    pub ratio: f64,
}

/// Energy of a field against the Lipschitz bound
/// `#S · L^p · Σ_{g ∈ ball} F(|g|)^p`.
pub fn witness_energy_report(
    ball: &Ball,
    field: &ScalarField,
    f: &AdmissibleFunction,
    p: f64,
) -> Result<WitnessEnergy> {
    if p.is_nan() || p <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent p must be > 1, got {p}"
        )));
    }
    let energy = dirichlet_energy(ball, field, p)?;
    let mass: f64 = ball.lengths().iter().map(|&l| f.eval(l).powf(p)).sum();
    let bound = ball.degree() as f64 * f.quasi_geometric_constant().powf(p) * mass;
    let ratio = if bound > 0.0 { energy / bound } else { 0.0 };
    Ok(WitnessEnergy {
        energy,
        bound,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityReport {
    pub radius: u32,
    /// `Σ_{g ∈ B_R} F(|g|)^p`.
    pub partial_sum: f64,
    /// `|S_R| F(R)^p`.
    pub last_shell_term: f64,
    /// Shell term at `R` over shell term at `R - 1`.
    pub shell_ratio: Option<f64>,
    pub verdict: Verdict,
    /// Partial sum plus the geometric tail `q·term/(1-q)` for converging
    /// verdicts.
    pub extrapolated: Option<f64>,
}

/// Number of trailing shell ratios inspected by [`summability`].
pub const SUMMABILITY_WINDOW: usize = 5;

/// Minimum radius for a non-inconclusive verdict.
pub const SUMMABILITY_MIN_RADIUS: u32 = 6;

/// Partial sums of `Σ_g F(|g|)^p` over the shells of a growth histogram.
pub fn summability(
    growth: &GrowthHistogram,
    f: &AdmissibleFunction,
    p: f64,
) -> Result<SummabilityReport> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent p must be > 0, got {p}"
        )));
    }
    let terms: Vec<f64> = growth
        .spheres
        .iter()
        .enumerate()
        .map(|(n, &count)| count as f64 * f.eval(n as u32).powf(p))
        .collect();
    let r = terms.len() - 1;
    let partial_sum: f64 = terms.iter().sum();
    let ratio = |n: usize| (n >= 1 && terms[n - 1] > 0.0).then(|| terms[n] / terms[n - 1]);
    let shell_ratio = ratio(r);

    let mut verdict = Verdict::Inconclusive;
    let mut extrapolated = None;
    if r as u32 >= SUMMABILITY_MIN_RADIUS {
        let window: Option<Vec<f64>> = (r + 1 - SUMMABILITY_WINDOW..=r).map(ratio).collect();
        if let Some(window) = window {
            let q = window.iter().copied().fold(0.0, f64::max);
            if q < 1.0 {
                verdict = Verdict::Converging;
                extrapolated = Some(partial_sum + q * terms[r] / (1.0 - q));
            } else if shell_ratio.is_some_and(|s| s >= 1.0) {
                verdict = Verdict::Diverging;
            }
        }
    }
    Ok(SummabilityReport {
        radius: r as u32,
        partial_sum,
        last_shell_term: terms[r],
        shell_ratio,
        verdict,
        extrapolated,
    })
}

/// [`summability`] at every radius `0..=growth.radius()`.
pub fn summability_trace(
    growth: &GrowthHistogram,
    f: &AdmissibleFunction,
    p: f64,
) -> Result<Vec<SummabilityReport>> {
    (1..=growth.spheres.len())
        .map(|k| {
            summability(
                &GrowthHistogram::from_spheres(growth.spheres[..k].to_vec()),
                f,
                p,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, growth_histogram, growth_series};
    use crate::groups::{Group, GroupElement};
    use approx::assert_relative_eq;

    const HALF: AdmissibleFunction = AdmissibleFunction::Geometric { base: 0.5 };

    struct Gaussian;

    impl FloydProfile for Gaussian {
        fn value(&self, n: u32) -> f64 {
            (-(n as f64).powi(2)).exp()
        }
        fn summability(&self) -> Summability {
            Summability::Certified
        }
    }

    #[test]
    fn admissibility_examples() {
        let v = check_admissible(&HALF, 20, 2.0).unwrap();
        assert!(v.admissible);
        assert_eq!(v.smallest_constant, 2.0);

        let harmonic = AdmissibleFunction::Power { beta: 1.0 };
        let v = check_admissible(&harmonic, 20, 2.0).unwrap();
        assert!(!v.admissible);
        assert_eq!(v.rejection, Some(Rejection::NotSummable));

        let v = check_admissible(&Gaussian, 10, 1e3).unwrap();
        assert!(!v.admissible);
        assert!(matches!(
            v.rejection,
            Some(Rejection::RatioExceeded { n: 3, .. })
        ));
        // The prefix ratio grows like e^{2n+1}.
        assert_relative_eq!(v.smallest_constant, (19f64).exp(), max_relative = 1e-9);

        assert!(check_admissible(&HALF, 1, 2.0).is_err());
    }

    #[test]
    fn family_constants() {
        let e = AdmissibleFunction::Exponential { a: 2f64.ln() };
        assert_relative_eq!(e.quasi_geometric_constant(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(e.tail_sum(0).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(HALF.tail_sum(3).unwrap(), 0.25, epsilon = 1e-15);
        let pw = AdmissibleFunction::Power { beta: 2.0 };
        assert!(check_admissible(&pw, 50, 4.0).unwrap().admissible);
        assert!(AdmissibleFunction::Geometric { base: 1.0 }
            .validate()
            .is_err());
    }

    #[test]
    fn edge_weights() {
        let f2 = Group::free(2).unwrap();
        let ball = build_ball(&f2, 3).unwrap();
        let a = ball.index_of(&f2.normal_form(&[0]).unwrap()).unwrap();
        assert_eq!(floyd_edge_weight(&ball, 0, a, &HALF).unwrap(), 1.0);
        let a2 = ball.index_of(&f2.normal_form(&[0, 0]).unwrap()).unwrap();
        let a3 = ball.index_of(&f2.normal_form(&[0, 0, 0]).unwrap()).unwrap();
        assert_eq!(floyd_edge_weight(&ball, a2, a3, &HALF).unwrap(), 0.25);
        assert_eq!(
            floyd_edge_weight(&ball, 0, a2, &HALF),
            Err(Error::NotAdjacent(0, a2))
        );

        let z2 = Group::abelian(2).unwrap();
        let ball = build_ball(&z2, 3).unwrap();
        let x = ball.index_of(&GroupElement::Vector(vec![2, 0])).unwrap();
        let y = ball.index_of(&GroupElement::Vector(vec![2, 1])).unwrap();
        assert_eq!(floyd_edge_weight(&ball, x, y, &HALF).unwrap(), 0.25);
    }

    #[test]
    fn line_distance() {
        let z = Group::abelian(1).unwrap();
        let ball = build_ball(&z, 4).unwrap();
        let t3 = ball.index_of(&GroupElement::Vector(vec![3])).unwrap();
        assert_eq!(floyd_distance(&ball, 0, 0, &HALF).unwrap(), 0.0);
        assert_eq!(floyd_distance(&ball, 0, t3, &HALF).unwrap(), 1.75);
    }

    #[test]
    fn z2_shell_path() {
        let z2 = Group::abelian(2).unwrap();
        let ball = build_ball(&z2, 3).unwrap();
        let x = ball.index_of(&GroupElement::Vector(vec![2, 0])).unwrap();
        let y = ball.index_of(&GroupElement::Vector(vec![0, 2])).unwrap();
        assert_eq!(floyd_distance(&ball, x, y, &HALF).unwrap(), 1.0);
    }

    #[test]
    fn chain_metric_on_the_free_group() {
        let f2 = Group::free(2).unwrap();
        let ball = build_ball(&f2, 4).unwrap();
        let a2 = ball.index_of(&f2.normal_form(&[0, 0]).unwrap()).unwrap();
        let b2 = ball.index_of(&f2.normal_form(&[2, 2]).unwrap()).unwrap();
        for a in [0.3, 2f64.ln(), 1.0] {
            assert_relative_eq!(
                chain_distance(&ball, a2, b2, a).unwrap(),
                1.0,
                epsilon = 1e-15
            );
        }
        assert_eq!(floyd_distance(&ball, a2, b2, &HALF).unwrap(), 3.0);
    }

    #[test]
    fn sphere_diameter_of_a_point() {
        let ball = build_ball(&Group::abelian(2).unwrap(), 2).unwrap();
        let d = sphere_floyd_diameter(&ball, 0, &HALF, &Sampling::default()).unwrap();
        assert_eq!(
            (d.max, d.min_antipodal, d.mean, d.pairs),
            (0.0, 0.0, 0.0, 0)
        );
        assert!(sphere_floyd_diameter(&ball, 3, &HALF, &Sampling::default()).is_err());
    }

    #[test]
    fn sampled_sphere_scan_is_deterministic() {
        let ball = build_ball(&Group::free(2).unwrap(), 4).unwrap();
        let sampling = Sampling {
            pair_cap: 500,
            seed: 3,
        };
        let a = sphere_floyd_diameter(&ball, 4, &HALF, &sampling).unwrap();
        let b = sphere_floyd_diameter(&ball, 4, &HALF, &sampling).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a, b);
        assert!(a.min_antipodal >= 1.0);
    }

    #[test]
    fn witness_examples() {
        let f2 = Group::free(2).unwrap();
        let ball = build_ball(&f2, 4).unwrap();
        let w = witness_field(&ball, 0, &HALF).unwrap();
        assert_eq!(w.field.get(w.target), 0.0);
        assert_eq!(w.field.get(0), 1.875);
        let b = ball.index_of(&f2.normal_form(&[2]).unwrap()).unwrap();
        assert_eq!(w.field.get(b), 2.875);
        let b4 = ball.index_of(&f2.normal_form(&[2; 4]).unwrap()).unwrap();
        assert_eq!(w.field.get(b4) - w.field.get(w.target), 3.75);

        let z2z3 = Group::free_product(vec![
            crate::groups::GroupSpec::Cyclic { order: 2 },
            crate::groups::GroupSpec::Cyclic { order: 3 },
        ])
        .unwrap();
        let ball = build_ball(&z2z3, 2).unwrap();
        assert!(witness_field(&ball, 7, &HALF).is_err());
    }

    #[test]
    fn witness_energy_bound() {
        let ball = build_ball(&Group::free(2).unwrap(), 4).unwrap();
        let w = witness_field(&ball, 0, &HALF).unwrap();
        let rep = witness_energy_report(&ball, &w.field, &HALF, 2.0).unwrap();
        assert!(rep.ratio <= 1.0);
        let constant = ScalarField::constant(&ball, 1.0);
        let rep = witness_energy_report(&ball, &constant, &HALF, 2.0).unwrap();
        assert_eq!(rep.energy, 0.0);
    }

    #[test]
    fn summability_examples() {
        let f2 = Group::free(2).unwrap();
        let e = AdmissibleFunction::Exponential { a: 2f64.ln() };
        let growth = GrowthHistogram::from_spheres(growth_series(&f2, 20).unwrap());
        let rep = summability(&growth, &e, 2.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Converging);
        assert_relative_eq!(rep.shell_ratio.unwrap(), 0.75, epsilon = 1e-12);
        assert!((rep.partial_sum - 5.0).abs() < 0.05);
        assert_relative_eq!(rep.extrapolated.unwrap(), 5.0, epsilon = 1e-9);

        let rep = summability(&growth, &e, 1.5).unwrap();
        assert_eq!(rep.verdict, Verdict::Diverging);
        assert_relative_eq!(
            rep.shell_ratio.unwrap(),
            3.0 * 2f64.powf(-1.5),
            epsilon = 1e-12
        );

        let small = growth_histogram(&build_ball(&f2, 5).unwrap());
        assert_eq!(
            summability(&small, &e, 2.0).unwrap().verdict,
            Verdict::Inconclusive
        );
        assert!(summability(&small, &e, 0.0).is_err());
    }
}
