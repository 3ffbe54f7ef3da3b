//! Empirical samplers for the two halves of the regular limit set: the
//! projective limit set sampled through translation directions, and the
//! Furstenberg limit set sampled through tuples of attractive fixed points.
//! Orbit-based estimates tie the two together, and the hull/product
//! statistics quantify how the samples fill their target spaces.

use super::{ElementSet, GroupConfig, LimitSetError, Word};
use crate::isometry::{
    fixed_points, hyp_distance, BoundaryPoint, Direction, HPoint, IsometryError, IsometryTuple,
    TupleKind,
};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionMode {
    /// Directions of tuples with every component hyperbolic; their closure
    /// is the projective limit set.
    ProjectiveLimit,
    /// Additionally admits mixed tuples with some translation; their
    /// closure is the limit cone.
    LimitCone,
}

/// Deduplicated direction sample with witness words, sorted by direction.
#[derive(Clone, Debug)]
pub struct DirectionSample {
    pub mode: DirectionMode,
    pub points: Vec<(Direction, Word)>,
}

/// Directions of qualifying tuples, deduplicated by the exact normalized
/// coordinate bits; ties on the witness word resolve shortlex.
///
/// Conjugate elements share their trace, so directions are memoized on the
/// exact trace coordinates.
pub fn sample_projective(cfg: &GroupConfig, set: &ElementSet, mode: DirectionMode) -> DirectionSample {
    let mut dedup: BTreeMap<Vec<u64>, (Direction, Word)> = BTreeMap::new();
    let mut by_trace: BTreeMap<Vec<num_rational::BigRational>, Direction> = BTreeMap::new();
    for (elt, entry) in set.iter() {
        let qualifies = match mode {
            DirectionMode::ProjectiveLimit => entry.class.kind == TupleKind::Hyperbolic,
            DirectionMode::LimitCone => {
                entry.class.kind == TupleKind::Hyperbolic
                    || (entry.class.kind == TupleKind::Mixed && entry.class.has_translation())
            }
        };
        if !qualifies {
            continue;
        }
        let trace = elt.trace();
        let dir = by_trace
            .entry(trace.coords().to_vec())
            .or_insert_with(|| {
                elt.direction(&entry.class)
                    .expect("qualifying tuple has translation")
            })
            .clone();
        let key = dir.key();
        match dedup.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert((dir, entry.word.clone()));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                if entry.word.shortlex_cmp(&o.get().1) == std::cmp::Ordering::Less {
                    o.get_mut().1 = entry.word.clone();
                }
            }
        }
    }
    let _ = cfg;
    DirectionSample {
        mode,
        points: dedup.into_values().collect(),
    }
}

/// Deduplicated Furstenberg sample: componentwise attractive fixed points
/// of every all-hyperbolic tuple, with witness words.
#[derive(Clone, Debug)]
pub struct FurstenbergSample {
    pub points: Vec<(Vec<BoundaryPoint>, Word)>,
}

pub fn sample_furstenberg(cfg: &GroupConfig, set: &ElementSet) -> FurstenbergSample {
    let mut dedup: BTreeMap<Vec<u64>, (Vec<BoundaryPoint>, Word)> = BTreeMap::new();
    for (elt, entry) in set.iter() {
        if entry.class.kind != TupleKind::Hyperbolic {
            continue;
        }
        let mut tuple = Vec::with_capacity(cfg.r);
        let mut ok = true;
        for place in 1..=cfg.r {
            match fixed_points(&elt.evaluate(place)) {
                Ok((att, _)) => tuple.push(att),
                Err(_) => {
                    // exact classification says hyperbolic; a failure here
                    // means the floating trace collapsed into the parabolic
                    // band, too degenerate to plot
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let key: Vec<u64> = tuple.iter().map(|b| b.angle().to_bits()).collect();
        match dedup.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert((tuple, entry.word.clone()));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                if entry.word.shortlex_cmp(&o.get().1) == std::cmp::Ordering::Less {
                    o.get_mut().1 = entry.word.clone();
                }
            }
        }
    }
    FurstenbergSample {
        points: dedup.into_values().collect(),
    }
}

/// Orbit-based estimates of the boundary data of a hyperbolic tuple.
#[derive(Clone, Debug)]
pub struct OrbitEstimate {
    pub furstenberg: Vec<BoundaryPoint>,
    pub direction: Direction,
}

/// Drive the basepoint with h for `n` steps. The Furstenberg estimate is
/// the boundary projection of the orbit point along the ray from the
/// basepoint; the direction estimate uses the distance increment of the
/// last step, which converges exponentially in n (the cumulative distance
/// normalization converges only like 1/n).
pub fn orbit_boundary_estimate(
    h: &IsometryTuple,
    basepoint: &[HPoint],
    n: u32,
) -> Result<OrbitEstimate, IsometryError> {
    assert!(n >= 1, "at least one iteration");
    assert_eq!(basepoint.len(), h.rank(), "one basepoint per factor");
    for g in &h.components {
        if g.trace().abs() <= 2.0 {
            return Err(IsometryError::NotHyperbolic);
        }
    }
    let mut furstenberg = Vec::with_capacity(h.rank());
    let mut increments = Vec::with_capacity(h.rank());
    for (g, &o) in h.components.iter().zip(basepoint) {
        let mut prev = o;
        let mut cur = o;
        for _ in 0..n {
            prev = cur;
            cur = g.apply_point(cur);
        }
        furstenberg.push(ray_to_boundary(o, cur));
        increments.push(hyp_distance(o, cur) - hyp_distance(o, prev));
    }
    let total: f64 = increments.iter().sum();
    Ok(OrbitEstimate {
        furstenberg,
        direction: Direction {
            coords: increments.iter().map(|l| l / total).collect(),
        },
    })
}

/// Endpoint on the boundary of the geodesic ray from `o` through `z`.
fn ray_to_boundary(o: HPoint, z: HPoint) -> BoundaryPoint {
    let dx = z.x - o.x;
    if dx.abs() <= 1e-13 * (o.x.abs() + z.x.abs() + 1.0) {
        if z.y > o.y {
            BoundaryPoint::infinity()
        } else {
            BoundaryPoint::from_real(o.x)
        }
    } else {
        // geodesics are half-circles centered on the real axis
        let c = ((z.x * z.x + z.y * z.y) - (o.x * o.x + o.y * o.y)) / (2.0 * dx);
        let radius = (o.x - c).hypot(o.y);
        BoundaryPoint::from_real(c + dx.signum() * radius)
    }
}

/// Interval statistics of a rank-2 direction sample, or the planar hull
/// verticess for rank 3.
#[derive(Clone, Debug)]
pub enum HullStats {
    Interval {
        count: usize,
        theta_min: f64,
        theta_max: f64,
        hull_length: f64,
        largest_gap: f64,
    },
    ChartHull {
        vertices: Vec<Vec<f64>>,
    },
}

pub fn hull_stats(sample: &DirectionSample, r: usize) -> Result<HullStats, LimitSetError> {
    if sample.points.is_empty() {
        return Err(LimitSetError::EmptySample);
    }
    match r {
        2 => {
            let mut thetas: Vec<f64> = sample.points.iter().map(|(d, _)| d.theta()).collect();
            thetas.sort_by(f64::total_cmp);
            let min = thetas[0];
            let max = *thetas.last().unwrap();
            let largest_gap = thetas
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0f64, f64::max);
            Ok(HullStats::Interval {
                count: thetas.len(),
                theta_min: min,
                theta_max: max,
                hull_length: max - min,
                largest_gap,
            })
        }
        3 => {
            let pts: Vec<(f64, f64)> = sample
                .points
                .iter()
                .map(|(d, _)| (d.coords[0], d.coords[1]))
                .collect();
            let hull = convex_hull_2d(&pts);
            Ok(HullStats::ChartHull {
                vertices: hull.into_iter().map(|(x, y)| vec![x, y, 1.0 - x - y]).collect(),
            })
        }
        other => Err(LimitSetError::UnsupportedRank(other)),
    }
}

/// Andrew monotone chain; returns hull vertices in counterclockwise order.
fn convex_hull_2d(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut p: Vec<(f64, f64)> = pts.to_vec();
    p.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0.0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0.0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Which product structure the Furstenberg diagnostic should test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    /// Galois-locked factors (k = r): the sample should concentrate on the
    /// graph of the boundary conjugacy; reports the worst angular gap
    /// between the two coordinates.
    Locked,
    /// Full product predicted: reports the side length of the largest
    /// sample-free axis-aligned square in the unit square (lower = denser).
    FullProduct,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProductDiagnostic {
    InsufficientData,
    LockedMaxAngleGap(f64),
    EmptyBoxScore(f64),
}

/// Grid resolution for the empty-square score; the score is exact up to
/// 2/EMPTY_BOX_GRID.
const EMPTY_BOX_GRID: usize = 512;

pub fn product_structure_check(
    sample: &FurstenbergSample,
    mode: ProductMode,
) -> Result<ProductDiagnostic, LimitSetError> {
    if sample.points.is_empty() {
        return Err(LimitSetError::EmptySample);
    }
    if sample.points[0].0.len() != 2 {
        return Err(LimitSetError::UnsupportedRank(sample.points[0].0.len()));
    }
    if sample.points.len() < 2 {
        return Ok(ProductDiagnostic::InsufficientData);
    }
    match mode {
        ProductMode::Locked => {
            let max_gap = sample
                .points
                .iter()
                .map(|(t, _)| t[0].angular_distance(&t[1]))
                .fold(0.0f64, f64::max);
            Ok(ProductDiagnostic::LockedMaxAngleGap(max_gap))
        }
        ProductMode::FullProduct => {
            let n = EMPTY_BOX_GRID;
            let mut occupied = vec![false; n * n];
            for (t, _) in &sample.points {
                let ix = ((t[0].angle() * n as f64) as usize).min(n - 1);
                let iy = ((t[1].angle() * n as f64) as usize).min(n - 1);
                occupied[iy * n + ix] = true;
            }
            // largest all-empty square via the classic DP
            let mut best = 0usize;
            let mut dp = vec![0u32; n * n];
            for y in 0..n {
                for x in 0..n {
                    let idx = y * n + x;
                    if occupied[idx] {
                        dp[idx] = 0;
                        continue;
                    }
                    dp[idx] = if x == 0 || y == 0 {
                        1
                    } else {
                        1 + dp[idx - 1].min(dp[idx - n]).min(dp[idx - n - 1])
                    };
                    best = best.max(dp[idx] as usize);
                }
            }
            Ok(ProductDiagnostic::EmptyBoxScore(best as f64 / n as f64))
        }
    }
}
