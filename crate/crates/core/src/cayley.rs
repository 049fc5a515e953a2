//! Balls in Cayley graphs, word lengths, distances and growth statistics.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};

/// Vertex cap used by [`build_ball`].
pub const DEFAULT_MAX_VERTICES: usize = 2_000_000;

/// The radius-`R` ball around the identity, enumerated breadth first.
///
/// Vertices are numbered in BFS discovery order with generators tried in the
/// provider's order, so two builds of the same ball agree index for index.
/// `neighbor(g, s)` is the index of `g·s`, or `None` when `g·s` lies outside
/// the ball.
#[derive(Debug, Clone)]
pub struct Ball {
    group: Group,
    radius: u32,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    lengths: Vec<u32>,
    degree: usize,
    neighbors: Vec<Option<usize>>,
}

pub fn build_ball(group: &Group, radius: u32) -> Result<Ball> {
    build_ball_capped(group, radius, DEFAULT_MAX_VERTICES)
}

pub fn build_ball_capped(group: &Group, radius: u32, max_vertices: usize) -> Result<Ball> {
    let degree = group.generator_count();
    let mut elements = vec![group.identity()];
    let mut index = HashMap::from([(group.identity(), 0usize)]);
    let mut lengths = vec![0u32];
    let mut neighbors = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        let depth = lengths[i];
        for s in 0..degree {
            let y = group.multiply_unchecked(&elements[i], &group.generators()[s].element);
            let slot = if let Some(&j) = index.get(&y) {
                Some(j)
            } else if depth < radius {
                if elements.len() >= max_vertices {
                    return Err(Error::ResourceCap {
                        radius,
                        limit: max_vertices,
                    });
                }
                let j = elements.len();
                index.insert(y.clone(), j);
                elements.push(y);
                lengths.push(depth + 1);
                queue.push_back(j);
                Some(j)
            } else {
                None
            };
            neighbors.push(slot);
        }
    }

    Ok(Ball {
        group: group.clone(),
        radius,
        elements,
        index,
        lengths,
        degree,
        neighbors,
    })
}

impl Ball {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of generators, `#S`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `|g|` for the vertex with index `i`.
    pub fn length(&self, i: usize) -> u32 {
        self.lengths[i]
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn neighbor(&self, i: usize, s: usize) -> Option<usize> {
        self.neighbors[i * self.degree + s]
    }

    pub fn neighbors(&self, i: usize) -> &[Option<usize>] {
        &self.neighbors[i * self.degree..(i + 1) * self.degree]
    }

    /// True when every neighbour of `i` lies inside the ball.
    pub fn is_interior(&self, i: usize) -> bool {
        self.neighbors(i).iter().all(Option::is_some)
    }

    /// Vertices with `|g| = r`, in index order.
    pub fn sphere(&self, r: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lengths[i] == r).collect()
    }

    /// Generator index `s` with `g·s = h`, if `g` and `h` are adjacent.
    pub fn edge_label(&self, g: usize, h: usize) -> Option<usize> {
        self.neighbors(g).iter().position(|&n| n == Some(h))
    }

    /// The sub-ball of radius `r`. Vertex indices are preserved because BFS
    /// order lists all shorter elements first.
    pub fn truncate(&self, r: u32) -> Ball {
        if r >= self.radius {
            return self.clone();
        }
        let count = self.lengths.partition_point(|&l| l <= r);
        let elements = self.elements[..count].to_vec();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let neighbors = self.neighbors[..count * self.degree]
            .iter()
            .map(|n| n.filter(|&j| j < count))
            .collect();
        Ball {
            group: self.group.clone(),
            radius: r,
            elements,
            index,
            lengths: self.lengths[..count].to_vec(),
            degree: self.degree,
            neighbors,
        }
    }
}

/// `|x|` for an element of the ball.
pub fn word_length(ball: &Ball, x: &GroupElement) -> Result<u32> {
    ball.index_of(x)
        .map(|i| ball.length(i))
        .ok_or(Error::OutsideBall {
            radius: ball.radius(),
        })
}

/// Word distance `d(x, y) = |x⁻¹y|`.
///
/// Computed from group arithmetic, never from paths restricted to a ball.
/// Returns [`Error::DistanceCapExceeded`] when the distance is above `cap`.
pub fn distance(group: &Group, x: &GroupElement, y: &GroupElement, cap: u64) -> Result<u64> {
    let diff = group.multiply(&group.invert(x)?, y)?;
    let d = group.word_length_unchecked(&diff);
    if d > cap {
        Err(Error::DistanceCapExceeded { cap })
    } else {
        Ok(d)
    }
}

/// Word distance by bounded breadth-first search from `x` towards `y`.
pub fn bfs_distance(group: &Group, x: &GroupElement, y: &GroupElement, cap: u64) -> Result<u64> {
    group.check(x)?;
    group.check(y)?;
    if x == y {
        return Ok(0);
    }
    let mut seen = HashMap::from([(x.clone(), 0u64)]);
    let mut frontier = vec![x.clone()];
    for depth in 1..=cap {
        let mut next = Vec::new();
        for g in &frontier {
            for s in group.generators() {
                let h = group.multiply_unchecked(g, &s.element);
                if h == *y {
                    return Ok(depth);
                }
                if !seen.contains_key(&h) {
                    seen.insert(h.clone(), depth);
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Err(Error::DistanceCapExceeded { cap })
}

/// Sphere and ball sizes of a Cayley graph up to some radius.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthHistogram {
    pub spheres: Vec<u128>,
    pub balls: Vec<u128>,
    /// `|S_R| / |S_{R-1}|`, available for `R >= 2`.
    pub ratio_estimate: Option<f64>,
    /// `|S_R|^{1/R}`, available for `R >= 2`.
    pub root_estimate: Option<f64>,
}

impl GrowthHistogram {
    pub fn from_spheres(spheres: Vec<u128>) -> Self {
        let balls = spheres
            .iter()
            .scan(0u128, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        let r = spheres.len().saturating_sub(1);
        let (ratio_estimate, root_estimate) = if r >= 2 && spheres[r - 1] > 0 {
            (
                Some(spheres[r] as f64 / spheres[r - 1] as f64),
                Some((spheres[r] as f64).powf(1.0 / r as f64)),
            )
        } else {
            (None, None)
        };
        GrowthHistogram {
            spheres,
            balls,
            ratio_estimate,
            root_estimate,
        }
    }

    pub fn radius(&self) -> u32 {
        self.spheres.len().saturating_sub(1) as u32
    }
}

pub fn growth_histogram(ball: &Ball) -> GrowthHistogram {
    let mut spheres = vec![0u128; ball.radius() as usize + 1];
    for &l in ball.lengths() {
        spheres[l as usize] += 1;
    }
    GrowthHistogram::from_spheres(spheres)
}

/// Exact sphere sizes `|S_0|, ..., |S_n|` from the growth series of the
/// provider, without enumerating elements.
///
/// Uses the series of the building blocks (`Z`, `Z_n`) and the standard
/// identities for products taken with the union of the factor generating
/// sets: `f_{G×H} = f_G · f_H` and `1/f_{G*H} = 1/f_G + 1/f_H - 1`.
pub fn growth_series(group: &Group, n: u32) -> Result<Vec<u128>> {
    let series = series_of(group.spec(), n as usize + 1)?;
    series
        .into_iter()
        .map(|c| u128::try_from(c).map_err(|_| Error::Overflow("growth series")))
        .collect()
}

fn series_of(spec: &crate::groups::GroupSpec, len: usize) -> Result<Vec<i128>> {
    use crate::groups::GroupSpec;
    match spec {
        GroupSpec::Free { rank } => {
            let z = GroupSpec::Abelian { rank: 1 };
            series_of(
                &GroupSpec::FreeProduct {
                    factors: vec![z; *rank],
                },
                len,
            )
        }
        GroupSpec::Abelian { rank } => {
            let z: Vec<i128> = (0..len).map(|i| if i == 0 { 1 } else { 2 }).collect();
            let mut acc = unit(len);
            for _ in 0..*rank {
                acc = series_mul(&acc, &z)?;
            }
            Ok(acc)
        }
        GroupSpec::Cyclic { order } => {
            let order = *order as usize;
            Ok((0..len)
                .map(|i| {
                    if i == 0 {
                        1
                    } else if 2 * i < order {
                        2
                    } else if 2 * i == order {
                        1
                    } else {
                        0
                    }
                })
                .collect())
        }
        GroupSpec::DirectProduct { factors } => {
            let mut acc = unit(len);
            for f in factors {
                acc = series_mul(&acc, &series_of(f, len)?)?;
            }
            Ok(acc)
        }
        GroupSpec::FreeProduct { factors } => {
            if factors.len() == 1 {
                return series_of(&factors[0], len);
            }
            let mut sum = vec![0i128; len];
            for f in factors {
                let inv = series_inverse(&series_of(f, len)?)?;
                for (a, b) in sum.iter_mut().zip(inv) {
                    *a = a.checked_add(b).ok_or(Error::Overflow("growth series"))?;
                }
            }
            sum[0] -= factors.len() as i128 - 1;
            series_inverse(&sum)
        }
    }
}

fn unit(len: usize) -> Vec<i128> {
    let mut u = vec![0; len];
    if len > 0 {
        u[0] = 1;
    }
    u
}

fn series_mul(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let len = a.len();
    let mut out = vec![0i128; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            let term = x.checked_mul(y).ok_or(Error::Overflow("growth series"))?;
            out[i + j] = out[i + j]
                .checked_add(term)
                .ok_or(Error::Overflow("growth series"))?;
        }
    }
    Ok(out)
}

// Inverse of a power series with constant term 1.
fn series_inverse(a: &[i128]) -> Result<Vec<i128>> {
    if a.first() != Some(&1) {
        return Err(Error::Internal(
            "series inverse needs constant term 1".into(),
        ));
    }
    let len = a.len();
    let mut out = vec![0i128; len];
    out[0] = 1;
    for n in 1..len {
        let mut acc = 0i128;
        for i in 1..=n {
            let term = a[i]
                .checked_mul(out[n - i])
                .ok_or(Error::Overflow("growth series"))?;
            acc = acc
                .checked_sub(term)
                .ok_or(Error::Overflow("growth series"))?;
        }
        out[n] = acc;
    }
    Ok(out)
}
