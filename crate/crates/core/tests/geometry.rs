/*
Copyright 2026 The nodeloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use nodeloc::error::Error;
use nodeloc::geometry::*;
use nodeloc::linalg::{rank, Matrix};
use nodeloc::scenario::{generate_scenario, kmeans_anchor_layout, RegionSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cols(points: &[&[f64]]) -> Matrix<f64> {
    let r = points[0].len();
    Matrix::from_fn(r, points.len(), |d, j| points[j][d])
}

fn square() -> AnchorSet<f64> {
    AnchorSet::new(cols(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]), 0).unwrap()
}

#[test]
fn unit_square_system() {
    let sys = build_system(&square()).unwrap();
    assert_eq!(sys.x, Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]));
    assert_eq!(sys.rhs_offsets, vec![1.0, 1.0, 2.0]);
    assert_eq!(sys.row_anchors, vec![1, 2, 3]);
}

#[test]
fn unit_square_round_trip() {
    let a = square();
    let sys = build_system(&a).unwrap();
    let d = a.squared_distances_to(&[1.0, 1.0]);
    assert_eq!(d, vec![2.0, 1.0, 1.0, 0.0]);
    let q = exact_trilateration(&sys, &d).unwrap();
    assert!((q[0] - 1.0).abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
}

#[test]
fn target_on_central_anchor_gives_zero_rhs() {
    let a = square();
    let sys = build_system(&a).unwrap();
    let m = assemble_rhs(&sys, &a.squared_distances_to(&[0.0, 0.0])).unwrap();
    assert!(m.iter().all(|v| *v == 0.0));
}

#[test]
fn collinear_anchors_are_degenerate() {
    let a = AnchorSet::new(cols(&[&[0.0, 0.0], &[1.0, 1.0], &[-2.0, -2.0]]), 0).unwrap();
    assert!(matches!(build_system(&a), Err(Error::DegenerateConfiguration { .. })));
}

#[test]
fn negative_squared_distance_is_rejected() {
    let sys = build_system(&square()).unwrap();
    assert!(matches!(assemble_rhs(&sys, &[1.0, -1.0, 1.0, 1.0]), Err(Error::Domain(_))));
    assert!(assemble_rhs(&sys, &[1.0, 1.0, 1.0]).is_err());
}

#[test]
fn small_triangle_and_tetrahedron() {
    let tri = AnchorSet::new(cols(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), 0).unwrap();
    let q = exact_trilateration(&build_system(&tri).unwrap(), &tri.squared_distances_to(&[0.25, 0.75])).unwrap();
    assert!((q[0] - 0.25).abs() < 1e-12 && (q[1] - 0.75).abs() < 1e-12);

    let tet = AnchorSet::new(
        cols(&[&[0.0, 0.0, 0.0], &[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 5.0]]),
        0,
    )
    .unwrap();
    let target = [-4.0, 7.5, 1.25];
    let q = exact_trilateration(&build_system(&tet).unwrap(), &tet.squared_distances_to(&target)).unwrap();
    for d in 0..3 {
        assert!((q[d] - target[d]).abs() < 1e-10);
    }
    // target on a non-central anchor
    let q = exact_trilateration(&build_system(&tet).unwrap(), &tet.squared_distances_to(&[0.0, 3.0, 0.0])).unwrap();
    assert!((q[1] - 3.0).abs() < 1e-10 && q[0].abs() < 1e-10 && q[2].abs() < 1e-10);
}

#[test]
fn kmeans_layout_has_full_rank() {
    let a = kmeans_anchor_layout::<f64>(2, 9, 1000, 400.0, 0).unwrap();
    let sys = build_system(&a).unwrap();
    assert_eq!((sys.x.rows(), sys.x.cols()), (8, 2));
    assert_eq!(rank(&sys.x).unwrap(), 2);
}

#[test]
fn distance_matrix_entries() {
    let a = AnchorSet::new(cols(&[&[0.0, 0.0], &[10.0, 0.0], &[0.0, 10.0]]), 0).unwrap();
    let f = squared_distance_matrix(&a, &cols(&[&[3.0, 4.0]])).unwrap();
    assert_eq!(f[(0, 0)], 25.0);
    assert_eq!(f.cols(), 1);

    let sq = square();
    let f = squared_distance_matrix(&sq, sq.positions()).unwrap();
    for j in 0..4 {
        assert_eq!(f[(j, j)], 0.0);
    }

    let s = generate_scenario::<f64>(&RegionSpec::default(), 9, 5).unwrap();
    let t = s.targets();
    let f = squared_distance_matrix(&s.anchors, &t).unwrap();
    for i in 0..t.cols() {
        let d = s.anchors.squared_distances_to(&t.column(i));
        for j in 0..9 {
            assert!((f[(j, i)] - d[j]).abs() <= 1e-12 * d[j].max(1.0));
        }
    }
}

fn random_anchors(rng: &mut ChaCha8Rng, r: usize, m: usize) -> AnchorSet<f64> {
    let pos = Matrix::from_fn(r, m, |_, _| rng.random_range(-500.0..500.0));
    AnchorSet::new(pos, rng.random_range(0..m)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn exact_round_trip(seed in any::<u64>(), r in 2usize..4, extra in 2usize..14) {
        let m = (r + extra).min(15);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_anchors(&mut rng, r, m);
        let sys = build_system(&a).unwrap();
        prop_assert_eq!(sys.x.rows(), m - 1);
        prop_assert!(!sys.row_anchors.contains(&a.central_index()));
        let q: Vec<f64> = (0..r).map(|_| rng.random_range(-2000.0..2000.0)).collect();
        let d = a.squared_distances_to(&q);
        let rhs = assemble_rhs(&sys, &d).unwrap();
        // X (q - x_c) reproduces the right-hand side
        let local: Vec<f64> = q.iter().zip(a.central()).map(|(u, c)| u - c).collect();
        let pred = sys.x.mul_vec(&local).unwrap();
        let norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let res = pred.iter().zip(&rhs).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        prop_assert!(res <= 1e-9 * norm.max(1.0));
        let got = exact_trilateration(&sys, &d).unwrap();
        let qn = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let err = got.iter().zip(&q).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-8 * (1.0 + qn));
    }

    #[test]
    fn translation_equivariance(seed in any::<u64>(), m in 4usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_anchors(&mut rng, 2, m);
        let v = [rng.random_range(-1e3..1e3), rng.random_range(-1e3..1e3)];
        let q = [rng.random_range(-1e3..1e3), rng.random_range(-1e3..1e3)];
        let moved = Matrix::from_fn(2, m, |d, j| a.positions()[(d, j)] + v[d]);
        let b = AnchorSet::new(moved, a.central_index()).unwrap();
        let p = exact_trilateration(&build_system(&a).unwrap(), &a.squared_distances_to(&q)).unwrap();
        let qv = [q[0] + v[0], q[1] + v[1]];
        let pv = exact_trilateration(&build_system(&b).unwrap(), &b.squared_distances_to(&qv)).unwrap();
        for d in 0..2 {
            prop_assert!((pv[d] - p[d] - v[d]).abs() <= 1e-8 * (1.0 + qv[d].abs()));
        }
    }
}
