//! Bottleneck and `p`-Wasserstein distances on persistence diagrams.
//!
//! Both distances minimise over all bijections between the `Δ`-augmented
//! tuples of an [`AugmentedPair`]:
//!
//! * bottleneck: `min_φ max_i δ(z_i, w_φ(i))`
//! * Wasserstein: `min_φ (Σ_i δ(z_i, w_φ(i))^p)^(1/p)`
//!
//! The bottleneck optimum is always one of the pairwise `δ` values, so the
//! solver searches that finite candidate set with a perfect-matching
//! feasibility test. Wasserstein uses an optimal assignment on the `δ^p`
//! matrix. Among optimal matchings the lexicographically smallest permutation
//! is reported.
//!
//! The exhaustive `*_bruteforce` functions enumerate permutations directly and
//! serve as oracles for small inputs.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::assignment::{hungarian, lex_min_perfect_matching};
use crate::diagram::{augment, delta, AugmentedPair, Diagram, PlanePoint};

/// Largest augmented width accepted by the brute-force oracles (`10!` permutations).
pub const ORACLE_MAX_WIDTH: usize = 10;

/// Absolute tolerance used by [`check_coarse_equiv_bounds`].
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("augmented width {width} exceeds the brute-force limit of {ORACLE_MAX_WIDTH}")]
    OversizeForOracle { width: usize },
    #[error("Wasserstein exponent must be a finite real >= 1, got {0}")]
    InvalidExponent(f64),
}

/// How per-pair `δ` costs are combined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Aggregation {
    Max,
    PSum(f64),
}

impl Aggregation {
    pub fn wasserstein(p: f64) -> Result<Self, MetricsError> {
        if p.is_finite() && p >= 1.0 {
            Ok(Aggregation::PSum(p))
        } else {
            Err(MetricsError::InvalidExponent(p))
        }
    }

    /// Aggregates a list of nonnegative costs. The `p`-sum is evaluated with the
    /// largest term factored out so that large exponents do not overflow, and
    /// in ascending order so the result depends only on the multiset of costs.
    pub fn aggregate<I: IntoIterator<Item = f64>>(&self, costs: I) -> f64 {
        match *self {
            Aggregation::Max => costs.into_iter().fold(0.0, f64::max),
            Aggregation::PSum(p) => {
                let costs: Vec<f64> = costs.into_iter().collect();
                let top = costs.iter().copied().fold(0.0, f64::max);
                if top == 0.0 {
                    return 0.0;
                }
                let mut terms: Vec<f64> = costs.iter().map(|c| (c / top).powf(p)).collect();
                terms.sort_by(f64::total_cmp);
                let scaled: f64 = terms.into_iter().sum();
                top * scaled.powf(1.0 / p)
            }
        }
    }
}

/// A bijection between the two sides of an augmented pair, with its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    pairing: Vec<usize>,
    cost: f64,
    aggregation: Aggregation,
}

impl Matching {
    pub fn new(pair: &AugmentedPair, pairing: Vec<usize>, aggregation: Aggregation) -> Self {
        let cost = matching_cost(pair, &pairing, aggregation);
        Matching {
            pairing,
            cost,
            aggregation,
        }
    }

    /// `pairing[i]` is the right-hand index matched to left index `i`.
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    /// True when off-diagonal points are only ever paired with off-diagonal points.
    pub fn is_perfect(&self, pair: &AugmentedPair) -> bool {
        self.pairing
            .iter()
            .enumerate()
            .all(|(i, &j)| pair.left[i].is_delta() == pair.right[j].is_delta())
    }

    /// Index pairs that involve at least one off-diagonal point.
    pub fn essential_pairs<'a>(&'a self, pair: &'a AugmentedPair) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.pairing
            .iter()
            .enumerate()
            .map(|(i, &j)| (i, j))
            .filter(move |&(i, j)| !(pair.left[i].is_delta() && pair.right[j].is_delta()))
    }
}

/// Cost of `pairing` on `pair` under `aggregation`.
pub fn matching_cost(pair: &AugmentedPair, pairing: &[usize], aggregation: Aggregation) -> f64 {
    aggregation.aggregate(
        pairing
            .iter()
            .enumerate()
            .map(|(i, &j)| delta(&pair.left[i], &pair.right[j])),
    )
}

/// Exact bottleneck distance.
pub fn bottleneck(z: &Diagram, w: &Diagram) -> (f64, Matching) {
    let m = bottleneck_augmented(&augment(z, w));
    (m.cost(), m)
}

/// Bottleneck optimum on an explicit augmented pair (both sides of equal width).
pub fn bottleneck_augmented(pair: &AugmentedPair) -> Matching {
    let n = pair.width();
    let cost = pair.cost_matrix();

    let mut candidates: Vec<f64> = cost.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let threshold_graph = |c: f64| -> Vec<Vec<usize>> {
        cost.iter()
            .map(|row| (0..n).filter(|&j| row[j] <= c).collect())
            .collect()
    };

    if n == 0 {
        return Matching::new(pair, Vec::new(), Aggregation::Max);
    }

    // Smallest candidate whose threshold graph has a perfect matching. The
    // largest candidate always does (complete graph).
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if has_perfect_matching(&threshold_graph(candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let pairing = lex_min_perfect_matching(&threshold_graph(candidates[lo]))
        .expect("threshold graph at the optimum admits a perfect matching");
    Matching::new(pair, pairing, Aggregation::Max)
}

fn has_perfect_matching(adj: &[Vec<usize>]) -> bool {
    crate::assignment::hopcroft_karp(adj, adj.len())
        .iter()
        .all(Option::is_some)
}

/// Exact `p`-Wasserstein distance, `p >= 1`.
///
/// The assignment is always solved with the lexicographically smaller diagram
/// on the left, so `wasserstein(z, w)` and `wasserstein(w, z)` agree bit for bit.
pub fn wasserstein(z: &Diagram, w: &Diagram, p: f64) -> Result<(f64, Matching), MetricsError> {
    let swap = w.pairs().partial_cmp(&z.pairs()) == Some(Ordering::Less);
    if !swap {
        let m = wasserstein_augmented(&augment(z, w), p)?;
        return Ok((m.cost(), m));
    }
    let flipped = wasserstein_augmented(&augment(w, z), p)?;
    let mut inverse = vec![0; flipped.pairing().len()];
    for (i, &j) in flipped.pairing().iter().enumerate() {
        inverse[j] = i;
    }
    let m = Matching::new(&augment(z, w), inverse, flipped.aggregation());
    Ok((m.cost(), m))
}

/// Wasserstein optimum on an explicit augmented pair.
pub fn wasserstein_augmented(pair: &AugmentedPair, p: f64) -> Result<Matching, MetricsError> {
    let aggregation = Aggregation::wasserstein(p)?;
    let n = pair.width();
    let raw = pair.cost_matrix();
    let top = raw.iter().flatten().copied().fold(0.0, f64::max);
    if n == 0 || top == 0.0 {
        return Ok(Matching::new(pair, (0..n).collect(), aggregation));
    }

    // δ^p rescaled into [0, 1].
    let cost: Vec<Vec<f64>> = raw
        .iter()
        .map(|row| row.iter().map(|c| (c / top).powf(p)).collect())
        .collect();
    let solved = hungarian(&cost);
    let optimal = Matching::new(pair, solved.row_to_col.clone(), aggregation);

    // Every optimal assignment uses only edges that are tight under the
    // optimal potentials; choose the smallest permutation among those.
    let tol = 64.0 * f64::EPSILON * n as f64;
    let tight: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| solved.reduced_cost(&cost, i, j) <= tol).collect())
        .collect();
    let lex = lex_min_perfect_matching(&tight)
        .map(|pairing| Matching::new(pair, pairing, aggregation))
        .filter(|m| m.cost() <= optimal.cost() + 1e-12 * optimal.cost().max(1.0));
    Ok(lex.unwrap_or(optimal))
}

/// Exhaustive bottleneck minimum over all `N!` permutations (`N <= 10`).
pub fn bottleneck_bruteforce(z: &Diagram, w: &Diagram) -> Result<(f64, Matching), MetricsError> {
    let pair = augment(z, w);
    let (value, pairing) = enumerate_min(&pair, |acc, c| acc.max(c), |acc| acc)?;
    Ok((value, Matching::new(&pair, pairing, Aggregation::Max)))
}

/// Exhaustive `p`-Wasserstein minimum over all `N!` permutations (`N <= 10`).
pub fn wasserstein_bruteforce(z: &Diagram, w: &Diagram, p: f64) -> Result<(f64, Matching), MetricsError> {
    let aggregation = Aggregation::wasserstein(p)?;
    let pair = augment(z, w);
    let (value, pairing) = enumerate_min(&pair, |acc, c| acc + c.powf(p), |acc| acc.powf(1.0 / p))?;
    Ok((value, Matching::new(&pair, pairing, aggregation)))
}

/// Depth-first enumeration of permutations in lexicographic order. `combine` is
/// monotone in the accumulator, so a partial value that already reaches the
/// best complete value is cut off; the first optimum found is the
/// lexicographically smallest.
fn enumerate_min(
    pair: &AugmentedPair,
    combine: impl Fn(f64, f64) -> f64 + Copy,
    finish: impl Fn(f64) -> f64,
) -> Result<(f64, Vec<usize>), MetricsError> {
    let n = pair.width();
    if n > ORACLE_MAX_WIDTH {
        return Err(MetricsError::OversizeForOracle { width: n });
    }
    let cost = pair.cost_matrix();

    struct Search<'a, F> {
        cost: &'a [Vec<f64>],
        combine: F,
        used: Vec<bool>,
        current: Vec<usize>,
        best: f64,
        best_perm: Vec<usize>,
    }

    impl<F: Fn(f64, f64) -> f64 + Copy> Search<'_, F> {
        fn visit(&mut self, acc: f64) {
            let row = self.current.len();
            if row == self.cost.len() {
                if acc < self.best {
                    self.best = acc;
                    self.best_perm = self.current.clone();
                }
                return;
            }
            for j in 0..self.cost.len() {
                if self.used[j] {
                    continue;
                }
                let next = (self.combine)(acc, self.cost[row][j]);
                if next >= self.best {
                    continue;
                }
                self.used[j] = true;
                self.current.push(j);
                self.visit(next);
                self.current.pop();
                self.used[j] = false;
            }
        }
    }

    let mut search = Search {
        cost: &cost,
        combine,
        used: vec![false; n],
        current: Vec::with_capacity(n),
        best: f64::INFINITY,
        best_perm: Vec::new(),
    };
    search.visit(0.0);
    Ok((finish(search.best), search.best_perm))
}

/// Closed-form bottleneck distance between two one-point diagrams:
/// `min(d_∞(a, b), max(pers a, pers b))`.
pub fn bottleneck_1pt(a: &PlanePoint, b: &PlanePoint) -> f64 {
    a.chebyshev(b).min(a.persistence().max(b.persistence()))
}

/// Checks `d_B <= d_{W,p} <= (2 · max(n, m))^(1/p) · d_B` within [`BOUND_TOLERANCE`].
pub fn check_coarse_equiv_bounds(z: &Diagram, w: &Diagram, p: f64) -> Result<bool, MetricsError> {
    let (wp, _) = wasserstein(z, w, p)?;
    let (db, _) = bottleneck(z, w);
    let width = (2 * z.len().max(w.len())) as f64;
    let upper = width.powf(1.0 / p) * db;
    Ok(db <= wp + BOUND_TOLERANCE && wp <= upper + BOUND_TOLERANCE)
}

/// Distance selector used by the verification and CLI layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DiagramMetric {
    Bottleneck,
    Wasserstein(f64),
}

impl DiagramMetric {
    pub fn validate(self) -> Result<Self, MetricsError> {
        if let DiagramMetric::Wasserstein(p) = self {
            Aggregation::wasserstein(p)?;
        }
        Ok(self)
    }

    pub fn distance(&self, z: &Diagram, w: &Diagram) -> Result<f64, MetricsError> {
        self.matching(z, w).map(|(d, _)| d)
    }

    pub fn matching(&self, z: &Diagram, w: &Diagram) -> Result<(f64, Matching), MetricsError> {
        match *self {
            DiagramMetric::Bottleneck => Ok(bottleneck(z, w)),
            DiagramMetric::Wasserstein(p) => wasserstein(z, w, p),
        }
    }

    pub fn bruteforce(&self, z: &Diagram, w: &Diagram) -> Result<(f64, Matching), MetricsError> {
        match *self {
            DiagramMetric::Bottleneck => bottleneck_bruteforce(z, w),
            DiagramMetric::Wasserstein(p) => wasserstein_bruteforce(z, w, p),
        }
    }
}

/// `δ` between augmented entries, exposed for reporting.
pub fn pair_cost(pair: &AugmentedPair, i: usize, j: usize) -> f64 {
    delta(&pair.left[i], &pair.right[j])
}
