use diamram::chromatic::{is_proper, Decision, Solver, SolverOptions};
use diamram::constructions::{partitions, SimplexSpec};
use diamram::degeneracy::{min_extension_diameter, ExtensionProblem};
use diamram::diameter::{diameter_graph, diameter_hypergraph};
use diamram::exact::{int, ratio, Rational};
use diamram::hypergraph::Hypergraph;
use diamram::ramsey::{almost_regular_embedding, arrows, congruent_copies};
use diamram::rng::{random_orthogonal, trial_rng};
use diamram::{cartesian_product, find_congruence, PointSet, Scalar};
use proptest::prelude::*;

fn int_points(max_len: usize) -> impl Strategy<Value = PointSet> {
    (2usize..=3)
        .prop_flat_map(move |d| prop::collection::vec(prop::collection::vec(-3i64..=3, d), 3..=max_len))
        .prop_filter_map("points must be distinct", |pts| PointSet::from_integers(pts).ok())
}

fn int_rows(p: &PointSet) -> Vec<Vec<i64>> {
    p.points_f64().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

/// Signed coordinate permutation plus integer shift: an exact isometry.
fn exact_motion(p: &PointSet, perm: &[usize], signs: &[i64], shift: &[i64]) -> PointSet {
    let rows = int_rows(p)
        .into_iter()
        .map(|r| (0..r.len()).map(|k| signs[k] * r[perm[k] % r.len()] + shift[k]).collect())
        .collect();
    PointSet::from_integers(rows).unwrap()
}

fn rotate(p: &PointSet, seed: u64) -> PointSet {
    let d = p.dim();
    let q = random_orthogonal(&mut trial_rng(seed, 0), d);
    let rows = p
        .points_f64()
        .iter()
        .map(|r| (0..d).map(|i| (0..d).map(|j| q[(i, j)] * r[j]).sum::<f64>() + 0.25 * i as f64).collect())
        .collect();
    PointSet::float(rows).unwrap()
}

fn random_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (3usize..=9).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 2..=3), 1..14)
            .prop_map(move |edges| Hypergraph::new(n, edges.into_iter().map(|e| e.into_iter().collect()).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn congruence_is_symmetric_under_exact_motions(
        p in int_points(7),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        signs in prop::collection::vec(prop::sample::select(vec![-1i64, 1]), 3),
        shift in prop::collection::vec(-5i64..=5, 3),
        order_seed in any::<u64>(),
    ) {
        let d = p.dim();
        let perm: Vec<usize> = perm.into_iter().filter(|&k| k < d).collect();
        let moved = exact_motion(&p, &perm, &signs, &shift);
        // shuffle the point order as well
        let mut idx: Vec<usize> = (0..p.len()).collect();
        idx.rotate_left((order_seed % p.len() as u64) as usize);
        let q = moved.select(&idx).unwrap();
        let f = find_congruence(&p, &q).expect("moved copy must be congruent");
        let g = find_congruence(&q, &p).expect("congruence is symmetric");
        prop_assert!(f.verify(&p.sq_dist_matrix(), &q.sq_dist_matrix()));
        prop_assert!(g.verify(&q.sq_dist_matrix(), &p.sq_dist_matrix()));
    }

    #[test]
    fn congruence_survives_float_rotation(p in int_points(7), seed in any::<u64>()) {
        let q = rotate(&p, seed);
        prop_assert!(find_congruence(&p.to_float(), &q).is_some());
        prop_assert!(find_congruence(&q, &p.to_float()).is_some());
    }

    #[test]
    fn copy_counts_are_rigid_motion_invariant(p in int_points(8), seed in any::<u64>()) {
        let pattern = p.select(&[0, 1, 2]).unwrap();
        let base = congruent_copies(&p, &pattern).len();
        let moved = congruent_copies(&rotate(&p, seed), &pattern.to_float()).len();
        prop_assert!(base >= 1);
        prop_assert_eq!(base, moved);
    }

    #[test]
    fn diameter_graph_is_rigid_motion_invariant(p in int_points(9), seed in any::<u64>()) {
        let g = diameter_graph(&p).unwrap();
        let h = diameter_graph(&rotate(&p, seed)).unwrap();
        prop_assert_eq!(g, h);
    }

    #[test]
    fn product_diameter_adds_squares(p in int_points(5), q in int_points(5)) {
        let pq = cartesian_product(&p, &q).unwrap();
        let sum = match (p.diameter().value_sq, q.diameter().value_sq) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a + b,
            _ => unreachable!(),
        };
        prop_assert_eq!(pq.diameter().value_sq, Scalar::Exact(sum));
        prop_assert_eq!(pq.len(), p.len() * q.len());
    }

    #[test]
    fn hyperedges_are_cliques_and_nest(p in int_points(10)) {
        let h2 = diameter_graph(&p).unwrap();
        for r in 3..=4 {
            let hr = diameter_hypergraph(&p, r).unwrap();
            let lower = diameter_hypergraph(&p, r - 1).unwrap();
            for e in hr.edges() {
                for (i, &a) in e.iter().enumerate() {
                    for &b in &e[i + 1..] {
                        prop_assert!(h2.contains_edge(&[a, b]));
                    }
                    let mut face = e.clone();
                    face.remove(i);
                    prop_assert!(lower.contains_edge(&face));
                }
            }
        }
    }

    #[test]
    fn coloring_decision_ignores_vertex_order(h in random_hypergraph(), rot in 0usize..9, k in 1usize..=4) {
        let n = h.n_vertices();
        let perm: Vec<usize> = (0..n).map(|v| (v + rot) % n).collect();
        let g = h.relabel(&perm).unwrap();
        let s = Solver::default();
        let a = matches!(s.decide(&h, k), Decision::Colorable(_));
        let b = matches!(s.decide(&g, k), Decision::Colorable(_));
        prop_assert_eq!(a, b);
        if let Decision::Colorable(c) = s.decide(&h, k) {
            prop_assert!(is_proper(&h, &c));
        }
    }

    #[test]
    fn clique_pruning_never_changes_answers(h in random_hypergraph()) {
        let on = Solver::new(SolverOptions { clique_bound: true, node_limit: None });
        let off = Solver::new(SolverOptions { clique_bound: false, node_limit: None });
        prop_assert_eq!(on.chromatic_number(&h).unwrap().chi, off.chromatic_number(&h).unwrap().chi);
    }

    #[test]
    fn arrows_is_monotone_in_colors(p in int_points(8)) {
        let pattern = p.select(&[0, 1]).unwrap();
        let results: Vec<bool> = (1..=4).map(|r| arrows(&p, &pattern, r).unwrap().arrows).collect();
        for w in results.windows(2) {
            // true for r implies true for r - 1
            prop_assert!(!w[1] || w[0]);
        }
    }

    #[test]
    fn partition_distance_formula(n in prop::sample::select(vec![2usize, 4, 6]), i in any::<usize>(), j in any::<usize>()) {
        let parts = partitions(n).unwrap();
        let (a, b) = (&parts[i % parts.len()], &parts[j % parts.len()]);
        let t = a.intersection(b) as i64;
        let n = n as i64;
        let d: i64 = a.coordinates().iter().zip(b.coordinates()).map(|(x, y)| (x - y) * (x - y)).sum();
        prop_assert_eq!(d, 2 * n * n - 2 * (t * t + (n - t) * (n - t)));
    }

    #[test]
    fn almost_regular_embedding_is_exact(n in 3usize..=4, raw in prop::collection::vec(97i64..=100, 6)) {
        let mut k = 0;
        let mut sides = vec![vec![int(0); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                sides[i][j] = ratio(raw[k], 100);
                sides[j][i] = sides[i][j].clone();
                k += 1;
            }
        }
        let spec = SimplexSpec::from_rational_sides(&sides).unwrap();
        let w = almost_regular_embedding(&spec).unwrap();
        let rep = w.verify();
        prop_assert!(rep.ok);
        prop_assert_eq!(w.host_diam_sq(), Rational::from_integer(1.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extension_never_shrinks_the_diameter(a in 0.6f64..1.0, b in 0.6f64..1.0, seed in any::<u64>()) {
        let p = SimplexSpec::triangle(a, b, 1.0).unwrap().realize().unwrap();
        let diam = p.diameter().value;
        for anchor in 0..3 {
            let prob = ExtensionProblem::new(p.clone(), anchor, 1).unwrap();
            let res = min_extension_diameter(&prob, 3, seed).unwrap();
            prop_assert!(res.value >= diam * (1.0 - 1e-12));
            prop_assert!(res.constraint_error < 1e-8);
        }
    }
}
