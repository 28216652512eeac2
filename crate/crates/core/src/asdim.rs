//! Scale-parametrised covers witnessing asymptotic-dimension bounds, and a
//! sampling verifier for them.
//!
//! A cover at scale `R` labels every point with a `(family, set)` pair. It
//! witnesses `asdim ≤ k` when there are `k + 1` families, sets are uniformly
//! bounded, and distinct sets of one family are more than `R` apart.
//!
//! # The line
//!
//! Intervals `[sL, (s+1)L)` with `L = 2R`, alternating between two families.
//!
//! # One-point diagrams under the bottleneck metric
//!
//! Write a point as `(u, q)` with `u` its midpoint and `q` its persistence.
//! Then `d_∞ = |Δu| + |Δq|` and `d_B = min(d_∞, max(q_a, q_b))`. With `L = 2R`:
//!
//! * the near-diagonal set `N = {q ≤ 2R} ∪ {Δ}` has `d_B`-diameter `≤ 2R`;
//! * row `j ≥ 0` holds `q ∈ [2R + jL, 2R + (j+1)L)` and is cut into bricks
//!   `u ∈ [2Li + Lj, 2Li + Lj + 2L)`, staggered by `L` per row;
//! * brick `(i, j)` has colour `(2i + j) mod 3`; same-coloured bricks are at
//!   least `L` apart in `|Δu| + |Δq|`;
//! * family 0 is `N` merged with the colour-0 bricks of row 0 (one set of
//!   persistence below `4R`), plus the colour-0 bricks of higher rows;
//!   families 1 and 2 are the bricks of colours 1 and 2.
//!
//! Every set has diameter below `6R`.

use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{Diagram, DiagramPoint, PlanePoint};
use crate::embeddings::{embed_cube_point, EmbedError};
use crate::metrics::{bottleneck, bottleneck_1pt, wasserstein, Aggregation};

/// Identifier of a set within a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SetId {
    Interval(i64),
    NearDiagonal,
    Brick { col: i64, row: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CoverLabel {
    pub family: u8,
    pub set: SetId,
}

/// Two-family interval cover of the line at scale `r`.
pub fn interval_classify(t: f64, r: f64) -> CoverLabel {
    let len = 2.0 * r;
    let s = (t / len).floor() as i64;
    CoverLabel {
        family: s.rem_euclid(2) as u8,
        set: SetId::Interval(s),
    }
}

/// Three-family brick cover of one-point diagrams at scale `r`.
pub fn brick_classify(a: &DiagramPoint, r: f64) -> CoverLabel {
    const NEAR: CoverLabel = CoverLabel {
        family: 0,
        set: SetId::NearDiagonal,
    };
    let p = match a {
        DiagramPoint::Delta => return NEAR,
        DiagramPoint::Plane(p) => p,
    };
    let len = 2.0 * r;
    let (u, q) = (p.midpoint(), p.persistence());
    if q <= 2.0 * r {
        return NEAR;
    }
    let row = ((q - 2.0 * r) / len).floor() as i64;
    let col = ((u - len * row as f64) / (2.0 * len)).floor() as i64;
    let colour = (2 * col + row).rem_euclid(3) as u8;
    if colour == 0 && row == 0 {
        return NEAR;
    }
    CoverLabel {
        family: colour,
        set: SetId::Brick { col, row },
    }
}

/// Largest `d_B`-diameter of a set produced by [`brick_classify`], in units of `R`.
pub const BRICK_BOUND_FACTOR: f64 = 6.0;
/// Largest diameter of a set produced by [`interval_classify`], in units of `R`.
pub const INTERVAL_BOUND_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CoverViolationKind {
    /// Same family, different sets, distance `<= R`.
    NotDisjoint,
    /// Same set, distance above the claimed bound.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverViolation {
    pub kind: CoverViolationKind,
    pub a: String,
    pub b: String,
    pub distance: f64,
}

/// Sampled verification statistics for a cover at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub scale: f64,
    pub samples: usize,
    pub same_set_pairs: usize,
    pub same_family_cross_set_pairs: usize,
    /// `None` when no such pair was sampled.
    pub min_same_family_cross_set_distance: Option<f64>,
    pub max_set_diameter_observed: Option<f64>,
    pub uniform_bound_claimed: f64,
    pub violation_count: usize,
    /// The first [`MAX_REPORTED_VIOLATIONS`] violations.
    pub violations: Vec<CoverViolation>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

pub const MAX_REPORTED_VIOLATIONS: usize = 64;

/// Samples `trials` point pairs and checks the cover conditions on each:
/// same-family pairs in different sets must be more than `r` apart, and
/// same-set pairs must be within `bound`.
pub fn verify_cover<P, S, C, D>(
    mut sample_pair: S,
    classify: C,
    metric: D,
    r: f64,
    bound: f64,
    trials: usize,
    seed: u64,
) -> CoverReport
where
    P: Debug,
    S: FnMut(&mut ChaCha8Rng) -> (P, P),
    C: Fn(&P) -> CoverLabel,
    D: Fn(&P, &P) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoverReport {
        scale: r,
        samples: trials,
        same_set_pairs: 0,
        same_family_cross_set_pairs: 0,
        min_same_family_cross_set_distance: None,
        max_set_diameter_observed: None,
        uniform_bound_claimed: bound,
        violation_count: 0,
        violations: Vec::new(),
    };

    for _ in 0..trials {
        let (a, b) = sample_pair(&mut rng);
        let (la, lb) = (classify(&a), classify(&b));
        if la.family != lb.family {
            continue;
        }
        let d = metric(&a, &b);
        let kind = if la.set == lb.set {
            report.same_set_pairs += 1;
            report.max_set_diameter_observed = Some(report.max_set_diameter_observed.map_or(d, |m| m.max(d)));
            (d > bound).then_some(CoverViolationKind::Unbounded)
        } else {
            report.same_family_cross_set_pairs += 1;
            report.min_same_family_cross_set_distance =
                Some(report.min_same_family_cross_set_distance.map_or(d, |m| m.min(d)));
            (d <= r).then_some(CoverViolationKind::NotDisjoint)
        };
        if let Some(kind) = kind {
            report.violation_count += 1;
            if report.violations.len() < MAX_REPORTED_VIOLATIONS {
                report.violations.push(CoverViolation {
                    kind,
                    a: format!("{a:?}"),
                    b: format!("{b:?}"),
                    distance: d,
                });
            }
        }
    }
    report
}

/// Bottleneck distance between one-point diagrams (`Δ` standing for the empty diagram).
pub fn one_point_bottleneck(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    match (a, b) {
        (DiagramPoint::Plane(p), DiagramPoint::Plane(q)) => bottleneck_1pt(p, q),
        _ => a.persistence().max(b.persistence()),
    }
}

/// Pair sampler for the line: half the pairs independent in `[-window, window]`,
/// half local (second point within `4r` of the first).
pub fn line_pair_sampler(r: f64, window: f64) -> impl FnMut(&mut ChaCha8Rng) -> (f64, f64) {
    move |rng| {
        let a = rng.random_range(-window..=window);
        let b = if rng.random_bool(0.5) {
            rng.random_range(-window..=window)
        } else {
            a + rng.random_range(-4.0 * r..=4.0 * r)
        };
        (a, b)
    }
}

/// Pair sampler for one-point diagrams with persistence and midpoint spread
/// over `window`. Mixes independent pairs, local pairs (within `4r` in each of
/// `u` and `q`), near-diagonal points and `Δ`.
pub fn diagram_pair_sampler(r: f64, window: f64) -> impl FnMut(&mut ChaCha8Rng) -> (DiagramPoint, DiagramPoint) {
    move |rng| {
        let a = sample_point(rng, r, window);
        let b = match (rng.random_range(0..2), &a) {
            (0, DiagramPoint::Plane(p)) => perturb(rng, p, r),
            _ => sample_point(rng, r, window),
        };
        (a, b)
    }
}

fn sample_point(rng: &mut ChaCha8Rng, r: f64, window: f64) -> DiagramPoint {
    let roll: f64 = rng.random();
    if roll < 0.05 {
        return DiagramPoint::Delta;
    }
    let q = if roll < 0.35 {
        rng.random_range(0.0..6.0 * r)
    } else {
        rng.random_range(0.0..window)
    };
    let q = q.max(f64::MIN_POSITIVE);
    let u = q + rng.random_range(0.0..window);
    from_midpoint(u, q).unwrap_or(DiagramPoint::Delta)
}

fn perturb(rng: &mut ChaCha8Rng, p: &PlanePoint, r: f64) -> DiagramPoint {
    loop {
        let q = p.persistence() + rng.random_range(-4.0 * r..=4.0 * r);
        let u = p.midpoint() + rng.random_range(-4.0 * r..=4.0 * r);
        if q > 0.0 && u >= q {
            if let Some(point) = from_midpoint(u, q) {
                return point;
            }
        }
    }
}

fn from_midpoint(u: f64, q: f64) -> Option<DiagramPoint> {
    DiagramPoint::plane((u - q).max(0.0), u + q).ok()
}

/// Runs [`verify_cover`] for the brick cover of one-point diagrams.
pub fn verify_brick_cover(r: f64, window: f64, trials: usize, seed: u64) -> CoverReport {
    verify_cover(
        diagram_pair_sampler(r, window),
        |p| brick_classify(p, r),
        one_point_bottleneck,
        r,
        BRICK_BOUND_FACTOR * r,
        trials,
        seed,
    )
}

/// Runs [`verify_cover`] for the interval cover of the line.
pub fn verify_interval_cover(r: f64, window: f64, trials: usize, seed: u64) -> CoverReport {
    verify_cover(
        line_pair_sampler(r, window),
        |t| interval_classify(*t, r),
        |a, b| (a - b).abs(),
        r,
        INTERVAL_BOUND_FACTOR * r,
        trials,
        seed,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub dimension: usize,
    pub scale: f64,
    pub samples: usize,
    pub aggregation: Aggregation,
    /// Largest `|d(image pair) - d(cube pair)|` observed.
    pub max_deviation: f64,
}

/// Cube-side distance matching `aggregation`: `d_∞` for `Max`, `ℓ_p` for `PSum(p)`.
pub fn cube_distance(x: &[f64], y: &[f64], aggregation: Aggregation) -> f64 {
    let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
    match aggregation {
        Aggregation::Max => diffs.fold(0.0, f64::max),
        Aggregation::PSum(p) => diffs.map(|d| d.powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// `|d(f(x), f(y)) - d(x, y)|` for the cube embedding.
pub fn cube_pair_deviation(x: &[f64], y: &[f64], r: f64, aggregation: Aggregation) -> Result<f64, EmbedError> {
    let (fx, fy) = (embed_cube_point(x, r)?, embed_cube_point(y, r)?);
    let image = diagram_distance(&fx, &fy, aggregation)?;
    Ok((image - cube_distance(x, y, aggregation)).abs())
}

fn diagram_distance(a: &Diagram, b: &Diagram, aggregation: Aggregation) -> Result<f64, EmbedError> {
    match aggregation {
        Aggregation::Max => Ok(bottleneck(a, b).0),
        Aggregation::PSum(p) => wasserstein(a, b, p)
            .map(|(d, _)| d)
            .map_err(|e| EmbedError::InvalidArgument(e.to_string())),
    }
}

/// Samples cube pairs in `[0, r]^n`, embeds them and records the largest
/// distance distortion. A zero deviation certifies that the cube of side `r`
/// sits isometrically in diagram space.
pub fn lower_bound_demo(
    n: usize,
    r: f64,
    samples: usize,
    aggregation: Aggregation,
    seed: u64,
) -> Result<LowerBoundReport, EmbedError> {
    if !(1..=3).contains(&n) {
        return Err(EmbedError::InvalidArgument(format!("cube dimension must be 1..=3, got {n}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(EmbedError::NonpositiveScale(r));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=r)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=r)).collect();
        max_deviation = max_deviation.max(cube_pair_deviation(&x, &y, r, aggregation)?);
    }
    Ok(LowerBoundReport {
        dimension: n,
        scale: r,
        samples,
        aggregation,
        max_deviation,
    })
}
