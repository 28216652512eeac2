//! Finite metric spaces and their explicit embeddings into diagram space.
//!
//! * [`embed_finite_metric`]: `x_k ↦ {(3Ri, 3Ri + 3R + d(x_k, x_i)) : i = 1..n}` for
//!   `X = {x_0, .., x_n}` and `R = diam X`, an isometry into the bottleneck metric.
//! * [`embed_cube_point`]: `[0,R]^n → D`, point `i` at `(2iR, 2(i+1)R + x_i)`;
//!   isometric for `d_∞ → d_B` and `ℓ_p → d_{W,p}`.
//! * [`coarse_disjoint_union`] and [`embed_coarse_union`]: unions whose blocks
//!   are pushed apart, realised in diagram space with the separation kept.
//! * [`zkm_space`] and [`dranishnikov_s`]: products of cyclic groups with the
//!   max word metric, and their separated disjoint union.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Diagram, PlanePoint};
use crate::metrics::bottleneck;

/// Tolerance for the triangle inequality in [`validate_metric`].
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Default cap on generated point counts.
pub const DEFAULT_MAX_POINTS: usize = 4096;

/// Environment variable overriding [`DEFAULT_MAX_POINTS`].
pub const MAX_POINTS_ENV: &str = "COARSE_PD_MAX_POINTS";

/// Point cap from `COARSE_PD_MAX_POINTS`, falling back to the default when unset
/// or unparsable.
pub fn max_points_from_env() -> usize {
    std::env::var(MAX_POINTS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_POINTS)
}

/// One failed metric axiom, with a witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NotSquare { row: usize, len: usize, expected: usize },
    NonFinite { i: usize, j: usize },
    Negative { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    NotSymmetric { i: usize, j: usize },
    /// `d(i, j) = 0` for distinct points.
    ZeroDistance { i: usize, j: usize },
    /// `d(i, j) > d(i, k) + d(k, j)`.
    TriangleViolation { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::NonFinite { i, j } => write!(f, "d({i},{j}) is not finite"),
            Violation::Negative { i, j } => write!(f, "d({i},{j}) is negative"),
            Violation::NonzeroDiagonal { i } => write!(f, "d({i},{i}) is nonzero"),
            Violation::NotSymmetric { i, j } => write!(f, "d({i},{j}) != d({j},{i})"),
            Violation::ZeroDistance { i, j } => write!(f, "d({i},{j}) = 0 for distinct points"),
            Violation::TriangleViolation { i, j, k } => {
                write!(f, "d({i},{j}) > d({i},{k}) + d({k},{j})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("not a metric: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidMetric(Vec<Violation>),
    #[error("{labels} labels for a {points}-point matrix")]
    LabelMismatch { labels: usize, points: usize },
    #[error("metric space is empty")]
    EmptySpace,
    #[error("a space with more than one point has zero diameter")]
    DegenerateDiameter,
    #[error("scale must be a positive finite real, got {0}")]
    NonpositiveScale(f64),
    #[error("coordinate {index} = {value} lies outside [0, {scale}]")]
    OutOfCube { index: usize, value: f64, scale: f64 },
    #[error("{points} points exceed the cap of {cap}")]
    TooLarge { points: u128, cap: usize },
    #[error("separation for block {block} must be positive and finite, got {value}")]
    NonpositiveSeparation { block: usize, value: f64 },
    #[error("separation rule covers {given} blocks, expected {expected}")]
    SeparationMismatch { given: usize, expected: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A labelled finite point set with a validated distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Validates `dist` and attaches `labels`.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self, EmbedError> {
        if labels.len() != dist.len() {
            return Err(EmbedError::LabelMismatch {
                labels: labels.len(),
                points: dist.len(),
            });
        }
        let violations = metric_violations(&dist);
        if !violations.is_empty() {
            return Err(EmbedError::InvalidMetric(violations));
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// For constructions that are metrics by definition; skips the `O(n³)` check.
    pub(crate) fn from_trusted(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(labels.len(), dist.len());
        FiniteMetricSpace { labels, dist }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// Checks the metric axioms and labels points `0..n`.
pub fn validate_metric(matrix: Vec<Vec<f64>>) -> Result<FiniteMetricSpace, EmbedError> {
    let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
    FiniteMetricSpace::new(labels, matrix)
}

/// Every violated axiom, in a fixed order. Triangle witnesses are reported
/// once per unordered pair `i < j`.
pub fn metric_violations(dist: &[Vec<f64>]) -> Vec<Violation> {
    let n = dist.len();
    let mut out: Vec<Violation> = dist
        .iter()
        .enumerate()
        .filter(|(_, row)| row.len() != n)
        .map(|(row, r)| Violation::NotSquare {
            row,
            len: r.len(),
            expected: n,
        })
        .collect();
    if !out.is_empty() {
        return out;
    }

    for i in 0..n {
        for j in 0..n {
            let d = dist[i][j];
            if !d.is_finite() {
                out.push(Violation::NonFinite { i, j });
            } else if d < 0.0 {
                out.push(Violation::Negative { i, j });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    for i in 0..n {
        if dist[i][i] != 0.0 {
            out.push(Violation::NonzeroDiagonal { i });
        }
        for j in i + 1..n {
            if dist[i][j] != dist[j][i] {
                out.push(Violation::NotSymmetric { i, j });
            }
            if dist[i][j] == 0.0 || dist[j][i] == 0.0 {
                out.push(Violation::ZeroDistance { i, j });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k != i && k != j && dist[i][j] > dist[i][k] + dist[k][j] + METRIC_TOLERANCE {
                    out.push(Violation::TriangleViolation { i, j, k });
                }
            }
        }
    }
    out
}

/// Isometric embedding of a finite metric space into the bottleneck diagram
/// space. Point `x_0` contributes no coordinate, so each diagram has `|X| - 1`
/// points, one at each birth `3Ri`.
pub fn embed_finite_metric(space: &FiniteMetricSpace) -> Result<Vec<Diagram>, EmbedError> {
    if space.is_empty() {
        return Err(EmbedError::EmptySpace);
    }
    if space.len() == 1 {
        return Ok(vec![Diagram::empty()]);
    }
    let scale = space.diameter();
    if scale <= 0.0 {
        return Err(EmbedError::DegenerateDiameter);
    }
    Ok(anchored_diagrams(space, 1, scale, 0.0))
}

/// `x_k ↦ {(offset + 3ρi, offset + 3ρi + 3ρ + d(x_k, x_i)) : i = first..n}`.
fn anchored_diagrams(space: &FiniteMetricSpace, first: usize, rho: f64, offset: f64) -> Vec<Diagram> {
    (0..space.len())
        .map(|k| {
            let points = (first..space.len())
                .map(|i| {
                    let birth = offset + 3.0 * rho * i as f64;
                    PlanePoint::new(birth, birth + 3.0 * rho + space.dist(k, i))
                        .expect("rho > 0 keeps embedded points above the diagonal")
                })
                .collect();
            Diagram::from_points(points)
        })
        .collect()
}

/// Image of a cube point `x ∈ [0,R]^n`: point `i` (1-based) at `(2iR, 2(i+1)R + x_i)`.
pub fn embed_cube_point(x: &[f64], scale: f64) -> Result<Diagram, EmbedError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(EmbedError::NonpositiveScale(scale));
    }
    let points = x
        .iter()
        .enumerate()
        .map(|(idx, &xi)| {
            if !(0.0..=scale).contains(&xi) {
                return Err(EmbedError::OutOfCube {
                    index: idx,
                    value: xi,
                    scale,
                });
            }
            let i = (idx + 1) as f64;
            Ok(PlanePoint::new(2.0 * i * scale, 2.0 * (i + 1.0) * scale + xi)
                .expect("cube coordinates keep points above the diagonal"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Diagram::from_points(points))
}

/// Cyclic word metric on `Z_k`: `min(|i - j|, k - |i - j|)`.
pub fn cyclic_distance(i: usize, j: usize, k: usize) -> usize {
    let diff = i.abs_diff(j) % k;
    diff.min(k - diff)
}

fn checked_power(k: usize, m: usize, cap: usize) -> Result<usize, EmbedError> {
    let points = (k as u128).checked_pow(m as u32).filter(|_| m <= u32::MAX as usize);
    match points {
        Some(p) if p <= cap as u128 => Ok(p as usize),
        Some(p) => Err(EmbedError::TooLarge { points: p, cap }),
        None => Err(EmbedError::TooLarge {
            points: u128::MAX,
            cap,
        }),
    }
}

/// `(Z_k)^m` with the max of cyclic word metrics. Points are enumerated in
/// lexicographic coordinate order and labelled `(c_1,..,c_m)`.
pub fn zkm_space(k: usize, m: usize, cap: usize) -> Result<FiniteMetricSpace, EmbedError> {
    if k == 0 || m == 0 {
        return Err(EmbedError::InvalidArgument(format!(
            "Z_k^m needs k >= 1 and m >= 1, got k = {k}, m = {m}"
        )));
    }
    let count = checked_power(k, m, cap)?;
    let coords: Vec<Vec<usize>> = (0..count)
        .map(|mut idx| {
            let mut c = vec![0; m];
            for slot in c.iter_mut().rev() {
                *slot = idx % k;
                idx /= k;
            }
            c
        })
        .collect();
    let dist = coords
        .iter()
        .map(|a| {
            coords
                .iter()
                .map(|b| {
                    a.iter()
                        .zip(b)
                        .map(|(&x, &y)| cyclic_distance(x, y, k))
                        .max()
                        .unwrap_or(0) as f64
                })
                .collect()
        })
        .collect();
    let labels = coords
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("({})", inner.join(","))
        })
        .collect();
    Ok(FiniteMetricSpace::from_trusted(labels, dist))
}

/// How cross-block distances are chosen in a coarse disjoint union.
#[derive(Debug, Clone, PartialEq)]
pub enum SeparationRule {
    /// Block radius `c_i = diam_i + s_i`, `s_i > 0`.
    PerBlock(Vec<f64>),
    /// Block radius `c_i = diam_i + n_i + m_i + 1` for a block `(Z_n)^m`; the
    /// vector gives `(n_i, m_i)` per block.
    Dranishnikov(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockParams {
    /// Indices of the block's points in the union.
    pub start: usize,
    pub len: usize,
    pub diameter: f64,
    /// Cross distance between blocks `i` and `j` is `radius_i + radius_j`.
    pub radius: f64,
    /// `(n, m)` when the block is `(Z_n)^m`.
    pub word: Option<(usize, usize)>,
}

/// A disjoint union of finite metric spaces with separated blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockedSpace {
    base: FiniteMetricSpace,
    block_of: Vec<usize>,
    blocks: Vec<BlockParams>,
}

impl BlockedSpace {
    pub fn base(&self) -> &FiniteMetricSpace {
        &self.base
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    pub fn blocks(&self) -> &[BlockParams] {
        &self.blocks
    }

    pub fn cross_distance(&self, a: usize, b: usize) -> f64 {
        self.blocks[a].radius + self.blocks[b].radius
    }

    /// Points of block `b` as a space of their own.
    pub fn block_space(&self, b: usize) -> FiniteMetricSpace {
        let BlockParams { start, len, .. } = self.blocks[b];
        let range = start..start + len;
        let dist = range.clone().map(|i| self.base.dist[i][range.clone()].to_vec()).collect();
        FiniteMetricSpace::from_trusted(self.base.labels[range].to_vec(), dist)
    }

    /// The separation the union constructions demand between two blocks:
    /// the larger of the two diameters, and `n + m + n' + m'` when both blocks
    /// are word-metric products.
    pub fn required_separation(&self, a: usize, b: usize) -> f64 {
        let (x, y) = (&self.blocks[a], &self.blocks[b]);
        let mut req = x.diameter.max(y.diameter);
        if let (Some((n, m)), Some((n2, m2))) = (x.word, y.word) {
            req = req.max((n + m + n2 + m2) as f64);
        }
        req
    }
}

/// Disjoint union with intra-block distances preserved and cross distance
/// `c_i + c_j` between blocks `i` and `j`.
pub fn coarse_disjoint_union(
    blocks: &[FiniteMetricSpace],
    rule: &SeparationRule,
) -> Result<BlockedSpace, EmbedError> {
    if blocks.is_empty() || blocks.iter().any(FiniteMetricSpace::is_empty) {
        return Err(EmbedError::EmptySpace);
    }
    let expected = blocks.len();
    let (radii, words): (Vec<f64>, Vec<Option<(usize, usize)>>) = match rule {
        SeparationRule::PerBlock(s) => {
            if s.len() != expected {
                return Err(EmbedError::SeparationMismatch { given: s.len(), expected });
            }
            let mut radii = Vec::with_capacity(expected);
            for (block, (&value, space)) in s.iter().zip(blocks).enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(EmbedError::NonpositiveSeparation { block, value });
                }
                radii.push(space.diameter() + value);
            }
            (radii, vec![None; expected])
        }
        SeparationRule::Dranishnikov(params) => {
            if params.len() != expected {
                return Err(EmbedError::SeparationMismatch {
                    given: params.len(),
                    expected,
                });
            }
            params
                .iter()
                .zip(blocks)
                .map(|(&(n, m), space)| (space.diameter() + (n + m + 1) as f64, Some((n, m))))
                .unzip()
        }
    };

    let total: usize = blocks.iter().map(FiniteMetricSpace::len).sum();
    let mut block_of = Vec::with_capacity(total);
    let mut params = Vec::with_capacity(expected);
    let mut labels = Vec::with_capacity(total);
    for (b, space) in blocks.iter().enumerate() {
        params.push(BlockParams {
            start: block_of.len(),
            len: space.len(),
            diameter: space.diameter(),
            radius: radii[b],
            word: words[b],
        });
        block_of.extend(std::iter::repeat_n(b, space.len()));
        labels.extend(space.labels.iter().map(|l| format!("b{b}:{l}")));
    }

    let dist = (0..total)
        .map(|x| {
            let (bx, ox) = (block_of[x], x - params[block_of[x]].start);
            (0..total)
                .map(|y| {
                    let (by, oy) = (block_of[y], y - params[block_of[y]].start);
                    if bx == by {
                        blocks[bx].dist[ox][oy]
                    } else {
                        radii[bx] + radii[by]
                    }
                })
                .collect()
        })
        .collect();

    Ok(BlockedSpace {
        base: FiniteMetricSpace::from_trusted(labels, dist),
        block_of,
        blocks: params,
    })
}

/// Disjoint union of `(Z_n)^m` for `1 <= n <= max_n`, `1 <= m <= max_m`
/// (ordered by `n`, then `m`) under the [`SeparationRule::Dranishnikov`] rule.
pub fn dranishnikov_s(max_n: usize, max_m: usize, cap: usize) -> Result<BlockedSpace, EmbedError> {
    if max_n == 0 || max_m == 0 {
        return Err(EmbedError::InvalidArgument(format!(
            "need max_n >= 1 and max_m >= 1, got {max_n}, {max_m}"
        )));
    }
    let mut total: u128 = 0;
    for n in 1..=max_n {
        for m in 1..=max_m {
            total += checked_power(n, m, cap)? as u128;
        }
    }
    if total > cap as u128 {
        return Err(EmbedError::TooLarge { points: total, cap });
    }

    let mut blocks = Vec::new();
    let mut params = Vec::new();
    for n in 1..=max_n {
        for m in 1..=max_m {
            blocks.push(zkm_space(n, m, cap)?);
            params.push((n, m));
        }
    }
    coarse_disjoint_union(&blocks, &SeparationRule::Dranishnikov(params))
}

/// Per-block-pair summary of an [`embed_coarse_union`] realisation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossBlockReport {
    pub block_a: usize,
    pub block_b: usize,
    /// `c_a + c_b`, the union's prescribed cross distance.
    pub prescribed: f64,
    /// Separation demanded by the source constructions (diameters, word parameters).
    pub required: f64,
    /// Smallest realised bottleneck distance between the two blocks' images.
    pub realized_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionReport {
    /// Largest `|d_B(f(x), f(y)) - d(x, y)|` over pairs inside a block.
    pub max_intra_deviation: f64,
    pub cross: Vec<CrossBlockReport>,
}

impl UnionReport {
    /// Cross-block image distances dominate the prescribed cross distances.
    pub fn cross_bounds_hold(&self) -> bool {
        self.cross.iter().all(|c| c.realized_min >= c.prescribed)
    }

    /// Cross-block image distances strictly exceed the required separations.
    pub fn separations_exceeded(&self) -> bool {
        self.cross.iter().all(|c| c.realized_min > c.required)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionEmbedding {
    pub diagrams: Vec<Diagram>,
    pub report: UnionReport,
}

/// Embeds every block of `union` isometrically and places the blocks in
/// disjoint birth bands.
///
/// With `C` the largest prescribed cross distance, block `i` is embedded at
/// scale `ρ_i = max(diam_i, C)` using all of its points as anchors, so every
/// image diagram is nonempty with points of persistence at least `1.5 ρ_i`.
/// Bands are separated by gaps of at least `C` in birth, so any matching
/// between images of different blocks costs at least `C`.
pub fn embed_coarse_union(union: &BlockedSpace) -> Result<UnionEmbedding, EmbedError> {
    let blocks = union.blocks();
    if blocks.len() == 1 {
        let diagrams = embed_finite_metric(&union.block_space(0))?;
        let report = union_report(union, &diagrams);
        return Ok(UnionEmbedding { diagrams, report });
    }

    let mut c_max: f64 = 0.0;
    for a in 0..blocks.len() {
        for b in a + 1..blocks.len() {
            c_max = c_max.max(union.cross_distance(a, b));
        }
    }

    let mut diagrams = Vec::with_capacity(union.base().len());
    let mut offset = 0.0;
    for (b, params) in blocks.iter().enumerate() {
        let rho = params.diameter.max(c_max);
        let space = union.block_space(b);
        diagrams.extend(anchored_diagrams(&space, 0, rho, offset));
        // Last birth of this band is offset + 3ρ(len - 1); the next band's first
        // birth sits at the next offset.
        offset += 3.0 * rho * (params.len - 1) as f64 + c_max;
    }

    let report = union_report(union, &diagrams);
    Ok(UnionEmbedding { diagrams, report })
}

fn union_report(union: &BlockedSpace, diagrams: &[Diagram]) -> UnionReport {
    let n = diagrams.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let distances: Vec<(usize, usize, f64)> = pairs
        .par_iter()
        .map(|&(x, y)| (x, y, bottleneck(&diagrams[x], &diagrams[y]).0))
        .collect();

    let nb = union.blocks().len();
    let mut max_intra_deviation: f64 = 0.0;
    let mut realized = vec![vec![f64::INFINITY; nb]; nb];
    for (x, y, d) in distances {
        let (bx, by) = (union.block_of(x), union.block_of(y));
        if bx == by {
            max_intra_deviation = max_intra_deviation.max((d - union.base().dist(x, y)).abs());
        } else {
            let (a, b) = (bx.min(by), bx.max(by));
            realized[a][b] = realized[a][b].min(d);
        }
    }

    let mut cross = Vec::new();
    for a in 0..nb {
        for b in a + 1..nb {
            cross.push(CrossBlockReport {
                block_a: a,
                block_b: b,
                prescribed: union.cross_distance(a, b),
                required: union.required_separation(a, b),
                realized_min: realized[a][b],
            });
        }
    }
    UnionReport {
        max_intra_deviation,
        cross,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(m: Vec<Vec<f64>>) -> FiniteMetricSpace {
        validate_metric(m).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_metric(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_ok());

        let err = validate_metric(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert_eq!(err, EmbedError::InvalidMetric(vec![Violation::NotSymmetric { i: 0, j: 1 }]));

        let err = validate_metric(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert_eq!(
            err,
            EmbedError::InvalidMetric(vec![Violation::TriangleViolation { i: 0, j: 2, k: 1 }])
        );
    }

    #[test]
    fn validate_reports_every_violation() {
        let err = validate_metric(vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 2.0, 0.0],
        ])
        .unwrap_err();
        let EmbedError::InvalidMetric(v) = err else { panic!() };
        assert!(v.contains(&Violation::NonzeroDiagonal { i: 0 }));
        assert!(v.contains(&Violation::ZeroDistance { i: 0, j: 1 }));
        assert!(v.contains(&Violation::NotSymmetric { i: 1, j: 2 }));

        let err = validate_metric(vec![vec![0.0, 1.0], vec![1.0]]).unwrap_err();
        assert_eq!(
            err,
            EmbedError::InvalidMetric(vec![Violation::NotSquare { row: 1, len: 1, expected: 2 }])
        );
        assert!(matches!(
            validate_metric(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(EmbedError::InvalidMetric(_))
        ));
        assert!(matches!(
            validate_metric(vec![vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]),
            Err(EmbedError::InvalidMetric(_))
        ));
    }

    #[test]
    fn finite_metric_embedding_two_points() {
        let x = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let f = embed_finite_metric(&x).unwrap();
        assert_eq!(f[0].pairs(), vec![(3.0, 7.0)]);
        assert_eq!(f[1].pairs(), vec![(3.0, 6.0)]);
        assert_eq!(bottleneck(&f[0], &f[1]).0, 1.0);
    }

    #[test]
    fn finite_metric_embedding_single_point() {
        let x = space(vec![vec![0.0]]);
        assert_eq!(embed_finite_metric(&x).unwrap(), vec![Diagram::empty()]);
        assert_eq!(embed_finite_metric(&space(vec![])).unwrap_err(), EmbedError::EmptySpace);
    }

    #[test]
    fn finite_metric_embedding_three_points() {
        let x = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let f = embed_finite_metric(&x).unwrap();
        assert_eq!(f[0].pairs(), vec![(6.0, 13.0), (12.0, 20.0)]);
        assert_eq!(f[1].pairs(), vec![(6.0, 12.0), (12.0, 19.5)]);
        assert_eq!(f[2].pairs(), vec![(6.0, 13.5), (12.0, 18.0)]);
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(bottleneck(&f[j], &f[k]).0, x.dist(j, k));
            }
        }
    }

    #[test]
    fn cube_point_examples() {
        assert_eq!(embed_cube_point(&[2.0], 5.0).unwrap().pairs(), vec![(10.0, 22.0)]);
        assert_eq!(
            embed_cube_point(&[0.5, 1.0], 1.0).unwrap().pairs(),
            vec![(2.0, 4.5), (4.0, 7.0)]
        );
        let a = embed_cube_point(&[0.0], 5.0).unwrap();
        let b = embed_cube_point(&[3.0], 5.0).unwrap();
        assert_eq!(bottleneck(&a, &b).0, 3.0);
    }

    #[test]
    fn cube_point_errors() {
        assert!(matches!(
            embed_cube_point(&[1.0, 5.5], 5.0),
            Err(EmbedError::OutOfCube { index: 1, .. })
        ));
        assert!(matches!(embed_cube_point(&[-0.1], 5.0), Err(EmbedError::OutOfCube { .. })));
        assert!(matches!(embed_cube_point(&[0.0], 0.0), Err(EmbedError::NonpositiveScale(_))));
    }

    #[test]
    fn zkm_examples() {
        let z4 = zkm_space(4, 1, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(z4.dist(0, 3), 1.0);

        let z42 = zkm_space(4, 2, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(z42.len(), 16);
        // (0,0) is index 0, (2,1) is index 2*4 + 1.
        assert_eq!(z42.labels()[9], "(2,1)");
        assert_eq!(z42.dist(0, 9), 2.0);
        assert_eq!(z42.diameter(), 2.0);

        assert_eq!(zkm_space(2, 3, DEFAULT_MAX_POINTS).unwrap().diameter(), 1.0);
        assert_eq!(zkm_space(1, 3, DEFAULT_MAX_POINTS).unwrap().len(), 1);
    }

    #[test]
    fn zkm_respects_cap() {
        assert_eq!(
            zkm_space(5, 3, 100).unwrap_err(),
            EmbedError::TooLarge { points: 125, cap: 100 }
        );
        assert!(matches!(
            zkm_space(1000, 1000, DEFAULT_MAX_POINTS),
            Err(EmbedError::TooLarge { .. })
        ));
        assert!(zkm_space(0, 2, 10).is_err());
    }

    #[test]
    fn zkm_is_a_metric() {
        for (k, m) in [(3, 2), (4, 2), (5, 1), (2, 3)] {
            let s = zkm_space(k, m, DEFAULT_MAX_POINTS).unwrap();
            assert!(metric_violations(s.matrix()).is_empty(), "Z_{k}^{m}");
        }
    }

    #[test]
    fn union_per_block_rule() {
        let a = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let b = space(vec![
            vec![0.0, 2.0, 1.0],
            vec![2.0, 0.0, 1.5],
            vec![1.0, 1.5, 0.0],
        ]);
        let u = coarse_disjoint_union(&[a.clone(), b], &SeparationRule::PerBlock(vec![1.0, 1.0])).unwrap();
        assert_eq!(u.cross_distance(0, 1), 5.0);
        assert_eq!(u.base().dist(0, 2), 5.0);
        assert_eq!(u.base().dist(3, 4), 1.5);
        assert!(metric_violations(u.base().matrix()).is_empty());

        let single = coarse_disjoint_union(&[a.clone()], &SeparationRule::PerBlock(vec![3.0])).unwrap();
        assert_eq!(single.base().matrix(), a.matrix());

        assert_eq!(
            coarse_disjoint_union(&[a.clone()], &SeparationRule::PerBlock(vec![0.0])).unwrap_err(),
            EmbedError::NonpositiveSeparation { block: 0, value: 0.0 }
        );
        assert!(matches!(
            coarse_disjoint_union(&[a], &SeparationRule::PerBlock(vec![1.0, 1.0])),
            Err(EmbedError::SeparationMismatch { .. })
        ));
    }

    #[test]
    fn dranishnikov_examples() {
        let s = dranishnikov_s(1, 1, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(s.blocks().len(), 1);
        assert_eq!(s.base().len(), 1);

        let s = dranishnikov_s(2, 2, DEFAULT_MAX_POINTS).unwrap();
        let words: Vec<_> = s.blocks().iter().map(|b| b.word.unwrap()).collect();
        assert_eq!(words, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        for a in 0..4 {
            for b in a + 1..4 {
                let ((n, m), (n2, m2)) = (words[a], words[b]);
                assert!(s.cross_distance(a, b) > (n + m + n2 + m2) as f64);
            }
        }

        let s = dranishnikov_s(3, 2, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(s.blocks().len(), 6);
        assert_eq!(s.base().len(), 20);
        assert!(metric_violations(s.base().matrix()).is_empty());

        assert!(matches!(dranishnikov_s(3, 2, 10), Err(EmbedError::TooLarge { points: 20, .. })));
    }

    #[test]
    fn union_embedding_two_pairs() {
        let a = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let b = space(vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        // diam 1 + s 2 and diam 2 + s 0.5: cross distance 5.5.
        let u = coarse_disjoint_union(&[a, b], &SeparationRule::PerBlock(vec![2.0, 0.5])).unwrap();
        let e = embed_coarse_union(&u).unwrap();
        assert!(e.report.max_intra_deviation <= 1e-9);
        assert_eq!(e.report.cross.len(), 1);
        assert!(e.report.cross[0].realized_min >= 5.5);
        for x in 0..2 {
            for y in 2..4 {
                assert!(bottleneck(&e.diagrams[x], &e.diagrams[y]).0 >= 5.5);
            }
        }
    }

    #[test]
    fn union_embedding_single_block_matches_plain_embedding() {
        let a = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let u = coarse_disjoint_union(std::slice::from_ref(&a), &SeparationRule::PerBlock(vec![1.0])).unwrap();
        let e = embed_coarse_union(&u).unwrap();
        assert_eq!(e.diagrams, embed_finite_metric(&a).unwrap());
        assert!(e.report.cross.is_empty());
        assert_eq!(e.report.max_intra_deviation, 0.0);
    }

    #[test]
    fn union_embedding_z2_z3() {
        let blocks = [zkm_space(2, 1, 16).unwrap(), zkm_space(3, 1, 16).unwrap()];
        let u = coarse_disjoint_union(&blocks, &SeparationRule::Dranishnikov(vec![(2, 1), (3, 1)])).unwrap();
        let e = embed_coarse_union(&u).unwrap();
        assert!(e.report.max_intra_deviation <= 1e-9);
        assert!(e.report.cross[0].realized_min > (1 + 2 + 1 + 3) as f64);
        assert!(e.report.separations_exceeded());
    }
}
