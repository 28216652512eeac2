use coarse_pd::diagram::{augment, canonicalize, delta, Diagram, DiagramPoint, PlanePoint};
use coarse_pd::embeddings::{embed_cube_point, embed_finite_metric, validate_metric};
use coarse_pd::io::{diagram_from_json, diagram_to_json, parse_metric_csv, write_metric_csv};
use coarse_pd::metrics::{
    bottleneck, bottleneck_1pt, bottleneck_augmented, bottleneck_bruteforce, check_coarse_equiv_bounds,
    wasserstein, wasserstein_augmented, wasserstein_bruteforce,
};
use proptest::prelude::*;

fn plane_point() -> impl Strategy<Value = PlanePoint> {
    prop_oneof![
        (0u8..10, 1u8..6).prop_map(|(b, l)| PlanePoint::new(b as f64, (b + l) as f64).unwrap()),
        (0.0..20.0f64, 0.01..10.0f64).prop_map(|(b, l)| PlanePoint::new(b, b + l).unwrap()),
    ]
}

fn diagram_point() -> impl Strategy<Value = DiagramPoint> {
    prop_oneof![1 => Just(DiagramPoint::Delta), 4 => plane_point().prop_map(DiagramPoint::Plane)]
}

fn diagram(max_len: usize) -> impl Strategy<Value = Diagram> {
    prop::collection::vec(plane_point(), 0..=max_len).prop_map(Diagram::from_points)
}

fn shift(a: &DiagramPoint, s: f64) -> DiagramPoint {
    match a {
        DiagramPoint::Delta => DiagramPoint::Delta,
        DiagramPoint::Plane(p) => DiagramPoint::plane(p.birth() + s, p.death() + s).unwrap(),
    }
}

#[test]
fn delta_through_diagonal_is_not_a_shortcut() {
    // Two low points far apart in d_∞ are both close to Δ; δ keeps the d_∞
    // value, while diagram distances take the cheaper route via padding.
    let a = DiagramPoint::plane(0.0, 0.01).unwrap();
    let c = DiagramPoint::plane(0.0, 1.0).unwrap();
    assert_eq!(delta(&a, &c), 0.99);
    assert!(delta(&a, &DiagramPoint::Delta) + delta(&DiagramPoint::Delta, &c) < 0.99);
    let (z, w) = (canonicalize(&[a]), canonicalize(&[c]));
    assert_eq!(bottleneck(&z, &w).0, 0.5);
}

proptest! {
    #[test]
    fn delta_is_a_metric(a in diagram_point(), b in diagram_point(), c in diagram_point()) {
        prop_assert_eq!(delta(&a, &a), 0.0);
        prop_assert_eq!(delta(&a, &b), delta(&b, &a));
        // Routing through Δ is the one case the extension of d_∞ does not cover.
        if !b.is_delta() || a.is_delta() || c.is_delta() {
            prop_assert!(delta(&a, &c) <= delta(&a, &b) + delta(&b, &c) + 1e-12);
        }
        if a != b {
            prop_assert!(delta(&a, &b) > 0.0);
        }
    }

    #[test]
    fn delta_is_invariant_under_diagonal_shifts(a in diagram_point(), b in diagram_point(), s in 0u8..50) {
        let s = s as f64;
        let d = delta(&a, &b);
        prop_assert!((delta(&shift(&a, s), &shift(&b, s)) - d).abs() <= 1e-12 * (1.0 + s));
    }

    #[test]
    fn canonicalize_is_idempotent_and_order_free(
        raw in prop::collection::vec(diagram_point(), 0..8),
        rotation in 0usize..8,
    ) {
        let once = canonicalize(&raw);
        let again: Vec<DiagramPoint> = once.points().iter().copied().map(DiagramPoint::Plane).collect();
        prop_assert_eq!(canonicalize(&again), once.clone());
        let mut rotated = raw.clone();
        if !rotated.is_empty() {
            let k = rotation % rotated.len();
            rotated.rotate_left(k);
        }
        rotated.reverse();
        prop_assert_eq!(canonicalize(&rotated), once);
    }

    #[test]
    fn solvers_agree_with_oracles(z in diagram(5), w in diagram(5), p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0)]) {
        let (fast, fm) = bottleneck(&z, &w);
        let (slow, _) = bottleneck_bruteforce(&z, &w).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-9);
        prop_assert_eq!(fm.cost(), fast);
        let (fast, _) = wasserstein(&z, &w, p).unwrap();
        let (slow, _) = wasserstein_bruteforce(&z, &w, p).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-9);
    }

    #[test]
    fn distances_are_symmetric(z in diagram(7), w in diagram(7)) {
        prop_assert_eq!(bottleneck(&z, &w).0.to_bits(), bottleneck(&w, &z).0.to_bits());
        for p in [1.0, 2.0, 2.5] {
            prop_assert_eq!(wasserstein(&z, &w, p).unwrap().0.to_bits(), wasserstein(&w, &z, p).unwrap().0.to_bits());
        }
    }

    #[test]
    fn one_point_closed_form(a in plane_point(), b in plane_point()) {
        let d = bottleneck(&Diagram::from_points(vec![a]), &Diagram::from_points(vec![b])).0;
        prop_assert!((d - bottleneck_1pt(&a, &b)).abs() <= 1e-12);
    }

    #[test]
    fn extra_padding_changes_nothing(z in diagram(5), w in diagram(5), extra in 0usize..4) {
        let base = augment(&z, &w);
        let padded = base.clone().padded(extra);
        prop_assert_eq!(bottleneck_augmented(&padded).cost(), bottleneck_augmented(&base).cost());
        let a = wasserstein_augmented(&base, 2.0).unwrap().cost();
        let b = wasserstein_augmented(&padded, 2.0).unwrap().cost();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn sandwich_bounds(z in diagram(6), w in diagram(6), p in prop_oneof![Just(1.0), Just(2.0), Just(4.0)]) {
        prop_assert!(check_coarse_equiv_bounds(&z, &w, p).unwrap());
    }

    #[test]
    fn optimal_matchings_are_valid_permutations(z in diagram(6), w in diagram(6)) {
        let pair = augment(&z, &w);
        for m in [bottleneck(&z, &w).1, wasserstein(&z, &w, 2.0).unwrap().1] {
            let mut seen = m.pairing().to_vec();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..pair.width()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn cube_embedding_is_isometric(
        x in prop::collection::vec(0.0..1.0f64, 1..=4),
        y_seed in prop::collection::vec(0.0..1.0f64, 4),
        r in prop_oneof![Just(1.0), Just(7.5), Just(100.0)],
    ) {
        let x: Vec<f64> = x.iter().map(|v| v * r).collect();
        let y: Vec<f64> = y_seed[..x.len()].iter().map(|v| v * r).collect();
        let (fx, fy) = (embed_cube_point(&x, r).unwrap(), embed_cube_point(&y, r).unwrap());
        let linf = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!((bottleneck(&fx, &fy).0 - linf).abs() <= 1e-9);
        let l1: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        prop_assert!((wasserstein(&fx, &fy, 1.0).unwrap().0 - l1).abs() <= 1e-6);
    }

    #[test]
    fn ultrametrics_embed_isometrically(heights in prop::collection::vec(1u8..20, 1..7)) {
        // d(i, j) = max of the heights strictly between them: an ultrametric.
        let n = heights.len() + 1;
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| {
                let (a, b) = (i.min(j), i.max(j));
                heights[a..b].iter().copied().max().map_or(0.0, f64::from)
            }).collect())
            .collect();
        let x = validate_metric(m).unwrap();
        let f = embed_finite_metric(&x).unwrap();
        for j in 0..n {
            for k in 0..n {
                prop_assert!((bottleneck(&f[j], &f[k]).0 - x.dist(j, k)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn diagram_json_round_trips(z in diagram(8)) {
        prop_assert_eq!(diagram_from_json(&diagram_to_json(&z)).unwrap(), z);
    }

    #[test]
    fn metric_csv_round_trips(heights in prop::collection::vec(0.001..1e6f64, 1..6)) {
        let n = heights.len() + 1;
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { heights[i.min(j)..i.max(j)].iter().sum() }).collect())
            .collect();
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut buf = Vec::new();
        write_metric_csv(&mut buf, &labels, &m).unwrap();
        let t = parse_metric_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(t.labels, labels);
        prop_assert_eq!(t.matrix, m);
    }
}
