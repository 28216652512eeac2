//! # coarse-pd
//!
//! Metrics on spaces of persistence diagrams, built on a single diagonal point
//! `Δ`, together with executable constructions from coarse geometry:
//!
//! * [`diagram`]: points of `D¹ = T ∪ {Δ}`, the metric `δ`, canonical diagrams
//!   and `Δ`-augmentation.
//! * [`metrics`]: exact bottleneck and `p`-Wasserstein distances with
//!   brute-force oracles.
//! * [`embeddings`]: finite metric spaces, their isometric embeddings into
//!   diagram space, cube embeddings, coarse disjoint unions and products of
//!   cyclic groups.
//! * [`asdim`]: covers witnessing asymptotic-dimension upper bounds, a
//!   sampling verifier, and cube-embedding lower-bound certificates.
//! * [`coarse`]: distortion profiles and isometry checks.
//! * [`io`]: JSON diagram files and CSV metric files.
//! * [`cli`]: the `coarse-pd` command-line tool.
//!
//! ```
//! use coarse_pd::diagram::Diagram;
//! use coarse_pd::metrics::{bottleneck, wasserstein};
//!
//! let z = Diagram::from_pairs([(0.0, 4.0)]).unwrap();
//! let w = Diagram::from_pairs([(3.0, 6.0)]).unwrap();
//! assert_eq!(bottleneck(&z, &w).0, 2.0);
//! assert!((wasserstein(&z, &w, 1.0).unwrap().0 - 3.0).abs() < 1e-12);
//! ```

pub mod asdim;
pub mod assignment;
pub mod cli;
pub mod coarse;
pub mod diagram;
pub mod embeddings;
pub mod io;
pub mod metrics;

pub use diagram::{Diagram, DiagramPoint, PlanePoint};
pub use embeddings::FiniteMetricSpace;
pub use metrics::{DiagramMetric, Matching};
