//! Diagram points, the extended metric `δ`, and diagrams as canonical multisets.
//!
//! The whole diagonal is collapsed into a single point [`DiagramPoint::Delta`].
//! A point `(birth, death)` off the diagonal lives in
//! `T = { (b, d) : d > b >= 0 }`. On `T` the metric is `d_∞`, and the distance
//! from a point to `Δ` is its half-lifetime `(d - b) / 2`.
//!
//! Diagrams never store `Δ` explicitly. Distances between two diagrams are
//! computed on an [`AugmentedPair`]: both sides are padded with `Δ` up to a
//! common width `N = 2 · max(|z|, |w|)` so that every off-diagonal point can be
//! matched to the diagonal.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("invalid diagram point ({birth}, {death}): expected finite death > birth >= 0")]
    InvalidPoint { birth: f64, death: f64 },
}

/// An off-diagonal point `(birth, death)` with `death > birth >= 0`, both finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct PlanePoint {
    birth: f64,
    death: f64,
}

impl PlanePoint {
    pub fn new(birth: f64, death: f64) -> Result<Self, DiagramError> {
        // NaN fails every comparison, so it is rejected here too.
        let valid = birth.is_finite() && death.is_finite() && birth >= 0.0 && death > birth;
        if valid {
            Ok(PlanePoint { birth, death })
        } else {
            Err(DiagramError::InvalidPoint { birth, death })
        }
    }

    pub fn birth(&self) -> f64 {
        self.birth
    }

    pub fn death(&self) -> f64 {
        self.death
    }

    /// Half-lifetime; the `δ`-distance to the diagonal.
    pub fn persistence(&self) -> f64 {
        (self.death - self.birth) / 2.0
    }

    /// Midpoint coordinate `(birth + death) / 2`.
    ///
    /// In `(midpoint, persistence)` coordinates the plane metric `d_∞` becomes
    /// `|Δmidpoint| + |Δpersistence|`.
    pub fn midpoint(&self) -> f64 {
        (self.birth + self.death) / 2.0
    }

    pub fn chebyshev(&self, other: &PlanePoint) -> f64 {
        (self.birth - other.birth)
            .abs()
            .max((self.death - other.death).abs())
    }

    fn lex_cmp(&self, other: &PlanePoint) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
    }
}

impl TryFrom<(f64, f64)> for PlanePoint {
    type Error = DiagramError;

    fn try_from((birth, death): (f64, f64)) -> Result<Self, Self::Error> {
        PlanePoint::new(birth, death)
    }
}

impl From<PlanePoint> for (f64, f64) {
    fn from(p: PlanePoint) -> Self {
        (p.birth, p.death)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.birth, self.death)
    }
}

/// A point of `D¹ = T ∪ {Δ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagramPoint {
    Delta,
    Plane(PlanePoint),
}

impl DiagramPoint {
    pub fn plane(birth: f64, death: f64) -> Result<Self, DiagramError> {
        PlanePoint::new(birth, death).map(DiagramPoint::Plane)
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, DiagramPoint::Delta)
    }

    pub fn persistence(&self) -> f64 {
        persistence(self)
    }
}

impl From<PlanePoint> for DiagramPoint {
    fn from(p: PlanePoint) -> Self {
        DiagramPoint::Plane(p)
    }
}

impl fmt::Display for DiagramPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramPoint::Delta => f.write_str("Δ"),
            DiagramPoint::Plane(p) => p.fmt(f),
        }
    }
}

/// The distance `δ` on `D¹`: `d_∞` between plane points, half the lifetime to `Δ`.
///
/// Note that `δ(a, c)` can exceed `δ(a, Δ) + δ(Δ, c)` for two low points far
/// apart; the diagram distances are unaffected because augmentation always
/// leaves room to match both points to `Δ`.
pub fn delta(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    match (a, b) {
        (DiagramPoint::Delta, DiagramPoint::Delta) => 0.0,
        (DiagramPoint::Plane(p), DiagramPoint::Delta) | (DiagramPoint::Delta, DiagramPoint::Plane(p)) => {
            p.persistence()
        }
        (DiagramPoint::Plane(p), DiagramPoint::Plane(q)) => p.chebyshev(q),
    }
}

/// `δ(a, Δ)`.
pub fn persistence(a: &DiagramPoint) -> f64 {
    delta(a, &DiagramPoint::Delta)
}

/// A finite multiset of off-diagonal points, kept in lexicographic
/// `(birth, death)` order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "DiagramRepr")]
pub struct Diagram {
    points: Vec<PlanePoint>,
}

#[derive(Deserialize)]
struct DiagramRepr {
    points: Vec<PlanePoint>,
}

impl From<DiagramRepr> for Diagram {
    fn from(repr: DiagramRepr) -> Self {
        Diagram::from_points(repr.points)
    }
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram::default()
    }

    /// Builds a diagram from validated plane points in any order.
    pub fn from_points(mut points: Vec<PlanePoint>) -> Self {
        points.sort_by(PlanePoint::lex_cmp);
        Diagram { points }
    }

    /// Builds a diagram from raw `(birth, death)` pairs, validating each one.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, DiagramError>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let points = pairs
            .into_iter()
            .map(PlanePoint::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Diagram::from_points(points))
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|&p| p.into()).collect()
    }
}

/// Drops `Δ` entries and sorts the remaining points.
pub fn canonicalize(raw: &[DiagramPoint]) -> Diagram {
    let points = raw
        .iter()
        .filter_map(|p| match p {
            DiagramPoint::Plane(q) => Some(*q),
            DiagramPoint::Delta => None,
        })
        .collect();
    Diagram::from_points(points)
}

/// Two diagrams padded with `Δ` to a common width.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedPair {
    pub left: Vec<DiagramPoint>,
    pub right: Vec<DiagramPoint>,
}

impl AugmentedPair {
    pub fn width(&self) -> usize {
        self.left.len()
    }

    /// Appends `extra` further `Δ` entries to both sides.
    pub fn padded(mut self, extra: usize) -> Self {
        self.left.extend(std::iter::repeat_n(DiagramPoint::Delta, extra));
        self.right.extend(std::iter::repeat_n(DiagramPoint::Delta, extra));
        self
    }

    /// `δ(left_i, right_j)` as a dense row-major `N × N` matrix.
    pub fn cost_matrix(&self) -> Vec<Vec<f64>> {
        self.left
            .iter()
            .map(|a| self.right.iter().map(|b| delta(a, b)).collect())
            .collect()
    }
}

/// Pads both diagrams with `Δ` to width `N = 2 · max(|z|, |w|)`.
pub fn augment(z: &Diagram, w: &Diagram) -> AugmentedPair {
    let width = 2 * z.len().max(w.len());
    let pad = |d: &Diagram| {
        let mut side: Vec<DiagramPoint> = d.points.iter().copied().map(DiagramPoint::Plane).collect();
        side.resize(width, DiagramPoint::Delta);
        side
    };
    AugmentedPair {
        left: pad(z),
        right: pad(w),
    }
}
