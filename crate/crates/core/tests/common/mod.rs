#![allow(dead_code)]

use coarse_pd::diagram::{Diagram, DiagramPoint, PlanePoint};
use coarse_pd::embeddings::{validate_metric, FiniteMetricSpace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_point(rng: &mut ChaCha8Rng) -> PlanePoint {
    // A coarse grid produces ties; a fine one exercises generic positions.
    if rng.random_bool(0.3) {
        let b = rng.random_range(0..8) as f64;
        let d = b + rng.random_range(1..6) as f64;
        PlanePoint::new(b, d).unwrap()
    } else {
        let b = rng.random_range(0.0..10.0);
        let d = b + rng.random_range(0.05..8.0);
        PlanePoint::new(b, d).unwrap()
    }
}

pub fn random_diagram(rng: &mut ChaCha8Rng, max_len: usize) -> Diagram {
    let n = rng.random_range(0..=max_len);
    Diagram::from_points((0..n).map(|_| random_point(rng)).collect())
}

/// Raw points of `d` with up to `max_delta` copies of `Δ` inserted, shuffled.
pub fn padded_shuffle(rng: &mut ChaCha8Rng, d: &Diagram, max_delta: usize) -> Vec<DiagramPoint> {
    use rand::seq::SliceRandom;
    let mut raw: Vec<DiagramPoint> = d.points().iter().copied().map(DiagramPoint::Plane).collect();
    for _ in 0..rng.random_range(0..=max_delta) {
        raw.push(DiagramPoint::Delta);
    }
    raw.shuffle(rng);
    raw
}

/// Shortest-path metric of a random connected weighted graph on `n` vertices.
pub fn random_graph_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    let mut w = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let add = |w: &mut Vec<Vec<f64>>, i: usize, j: usize, c: f64| {
        if c < w[i][j] {
            w[i][j] = c;
            w[j][i] = c;
        }
    };
    let integral = rng.random_bool(0.5);
    let weight = |rng: &mut ChaCha8Rng| {
        if integral {
            rng.random_range(1..10) as f64
        } else {
            rng.random_range(0.1..10.0)
        }
    };
    // Random spanning tree, then extra edges.
    for v in 1..n {
        let u = rng.random_range(0..v);
        let c = weight(rng);
        add(&mut w, u, v, c);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.3) {
                let c = weight(rng);
                add(&mut w, i, j, c);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i][k] + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    validate_metric(w).expect("shortest-path distances form a metric")
}
