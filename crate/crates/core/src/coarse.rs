//! Empirical distance-distortion profiles of maps between finite metric spaces.
//!
//! For a map `f` the profile records every pair `(d(x, y), d(f x, f y))` and
//! two envelopes over bins of the source distance:
//!
//! * `rho1[b]`, the smallest image distance among pairs in bins `>= b`;
//! * `rho2[b]`, the largest image distance among pairs in bins `<= b`.
//!
//! Both are nondecreasing, and every recorded pair lies between them. These are
//! finite-sample diagnostics; they cannot certify a coarse embedding.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::embeddings::FiniteMetricSpace;
use crate::metrics::{DiagramMetric, MetricsError};

/// Bin count used when no bin width is given.
pub const DEFAULT_BINS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoarseError {
    #[error("profiling needs at least two points")]
    EmptySpace,
    #[error("{images} images for a {points}-point space")]
    SizeMismatch { points: usize, images: usize },
    #[error("bin width must be positive and finite, got {0}")]
    InvalidBinWidth(f64),
    #[error(transparent)]
    Metric(#[from] MetricsError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileBin {
    pub lower: f64,
    pub upper: f64,
    /// Number of recorded pairs whose source distance falls in this bin.
    pub count: usize,
    pub rho1: f64,
    pub rho2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseProfile {
    /// `(source distance, image distance)` for every unordered pair.
    pub pairs: Vec<(f64, f64)>,
    pub bin_width: f64,
    pub bins: Vec<ProfileBin>,
    /// `rho1` increases across the observed range: the finite stand-in for
    /// `rho1(t) → ∞`.
    pub lower_envelope_grows: bool,
}

impl CoarseProfile {
    pub fn bin_of(&self, t: f64) -> usize {
        bin_index(t, self.bin_width, self.bins.len())
    }

    pub fn rho1(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.rho1).collect()
    }

    pub fn rho2(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.rho2).collect()
    }
}

fn bin_index(t: f64, width: f64, bins: usize) -> usize {
    ((t / width).floor() as usize).min(bins - 1)
}

/// Upper-triangular `(i, j)` pairs of an `n`-point space.
fn unordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Profiles a map given the pairwise distances of its image, indexed like `space`.
/// `bin_width` defaults to the largest source distance over [`DEFAULT_BINS`].
pub fn profile_map(
    space: &FiniteMetricSpace,
    image_dist: &[Vec<f64>],
    bin_width: Option<f64>,
) -> Result<CoarseProfile, CoarseError> {
    let n = space.len();
    if n < 2 {
        return Err(CoarseError::EmptySpace);
    }
    if image_dist.len() != n || image_dist.iter().any(|row| row.len() != n) {
        return Err(CoarseError::SizeMismatch {
            points: n,
            images: image_dist.len(),
        });
    }

    let pairs: Vec<(f64, f64)> = unordered_pairs(n)
        .into_iter()
        .map(|(i, j)| (space.dist(i, j), image_dist[i][j]))
        .collect();
    let max_t = pairs.iter().map(|p| p.0).fold(0.0, f64::max);

    let (width, count) = match bin_width {
        Some(w) if w.is_finite() && w > 0.0 => (w, (max_t / w).floor() as usize + 1),
        Some(w) => return Err(CoarseError::InvalidBinWidth(w)),
        None => (max_t / DEFAULT_BINS as f64, DEFAULT_BINS),
    };

    let mut lo = vec![f64::INFINITY; count];
    let mut hi = vec![f64::NEG_INFINITY; count];
    let mut counts = vec![0usize; count];
    for &(t, s) in &pairs {
        let b = bin_index(t, width, count);
        lo[b] = lo[b].min(s);
        hi[b] = hi[b].max(s);
        counts[b] += 1;
    }

    // Running min from the right and running max from the left.
    let mut rho1 = lo;
    for b in (0..count.saturating_sub(1)).rev() {
        rho1[b] = rho1[b].min(rho1[b + 1]);
    }
    let mut rho2 = hi;
    rho2[0] = rho2[0].max(0.0);
    for b in 1..count {
        rho2[b] = rho2[b].max(rho2[b - 1]);
    }

    let bins = (0..count)
        .map(|b| ProfileBin {
            lower: b as f64 * width,
            upper: (b + 1) as f64 * width,
            count: counts[b],
            rho1: rho1[b],
            rho2: rho2[b],
        })
        .collect::<Vec<_>>();
    let lower_envelope_grows = rho1[count - 1] > rho1[0];

    Ok(CoarseProfile {
        pairs,
        bin_width: width,
        bins,
        lower_envelope_grows,
    })
}

/// Pairwise distances among diagrams under `metric`.
pub fn diagram_distances(diagrams: &[Diagram], metric: DiagramMetric) -> Result<Vec<Vec<f64>>, CoarseError> {
    let metric = metric.validate()?;
    let n = diagrams.len();
    let upper: Vec<((usize, usize), f64)> = unordered_pairs(n)
        .into_par_iter()
        .map(|(i, j)| metric.distance(&diagrams[i], &diagrams[j]).map(|d| ((i, j), d)))
        .collect::<Result<_, _>>()?;
    let mut out = vec![vec![0.0; n]; n];
    for ((i, j), d) in upper {
        out[i][j] = d;
        out[j][i] = d;
    }
    Ok(out)
}

/// Largest `|d_X(i, j) - d(diagram_i, diagram_j)|` over all pairs.
pub fn check_isometry(
    space: &FiniteMetricSpace,
    diagrams: &[Diagram],
    metric: DiagramMetric,
) -> Result<f64, CoarseError> {
    if diagrams.len() != space.len() {
        return Err(CoarseError::SizeMismatch {
            points: space.len(),
            images: diagrams.len(),
        });
    }
    let metric = metric.validate()?;
    let deviations = unordered_pairs(space.len())
        .into_par_iter()
        .map(|(i, j)| {
            metric
                .distance(&diagrams[i], &diagrams[j])
                .map(|d| (d - space.dist(i, j)).abs())
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(deviations.into_iter().fold(0.0, f64::max))
}
