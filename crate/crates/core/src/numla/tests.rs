use super::*;
use crate::graph::Digraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn residual(m: &Matrix<f64>, ep: &EigenPairs<f64>) -> f64 {
    let mc = m.to_complex();
    let av = mc.matmul(&ep.vectors);
    let mut worst = 0.0f64;
    for k in 0..m.nrows() {
        let r: Vec<C<f64>> = av
            .col(k)
            .iter()
            .zip(ep.vectors.col(k))
            .map(|(a, v)| *a - ep.values[k] * *v)
            .collect();
        worst = worst.max(cnorm2(&r));
    }
    worst
}

fn random_matrix(n: usize, seed: u64) -> Matrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0)
}

#[test]
fn identity_eigenvalues() {
    let ep = eig_general(&Matrix::<f64>::identity(3)).unwrap();
    for l in &ep.values {
        assert!((*l - C::new(1.0, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn cycle_roots_of_unity() {
    let a: Matrix<f64> = Digraph::cycle(4).adjacency_matrix();
    let ep = eig_general(&a).unwrap();
    for root in [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)] {
        assert!(ep.values.iter().any(|l| (*l - root).norm() < 1e-10), "{root} missing");
    }
    assert!(residual(&a, &ep) < 1e-12);
}

#[test]
fn path_is_nilpotent_with_repeated_vectors() {
    let a: Matrix<f64> = Digraph::path(4).adjacency_matrix();
    let ep = eig_general(&a).unwrap();
    assert!(ep.values.iter().all(|l| l.norm() <= 1e-3));
    let d = subspace_angles(&ep.vectors).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!(d[(i, j)] < 1e-6);
        }
    }
}

#[test]
fn random_residuals_and_unit_columns() {
    for (n, seed) in [(1, 1), (2, 2), (5, 3), (17, 4), (60, 5), (120, 6)] {
        let a = random_matrix(n, seed);
        let ep = eig_general(&a).unwrap();
        assert!(residual(&a, &ep) / a.norm_fro() <= 1e-8, "n = {n}");
        for k in 0..n {
            assert!((cnorm2(ep.vectors.col(k)) - 1.0).abs() < 1e-12);
        }
        let vals = eigenvalues(&a).unwrap();
        let (_, _) = pair_eigenvalues(&ep.values, &vals);
        for l in &ep.values {
            assert!(vals.iter().any(|x| (*x - *l).norm() < 1e-8 * (1.0 + l.norm())));
        }
    }
}

#[test]
fn f32_eigenvalues() {
    let a: Matrix<f32> = Digraph::cycle(5).adjacency_matrix();
    let ep = eig_general(&a).unwrap();
    assert!(ep.values.iter().all(|l| (l.norm() - 1.0).abs() < 1e-4));
}

#[test]
fn bilateral_left_vectors() {
    let a = random_matrix(30, 9);
    let b = eig_bilateral(&a).unwrap();
    let ac = a.to_complex();
    for k in 0..30 {
        let u: Vec<C<f64>> = b.left.col(k).to_vec();
        let uta: Vec<C<f64>> = (0..30).map(|j| (0..30).map(|i| u[i] * ac[(i, j)]).sum()).collect();
        let r: Vec<C<f64>> = uta.iter().zip(&u).map(|(x, y)| *x - b.values[k] * *y).collect();
        assert!(cnorm2(&r) < 1e-10 * a.norm_fro());
    }
}

#[test]
fn left_of_path_sits_on_last_vertex() {
    let a: Matrix<f64> = Digraph::path(4).adjacency_matrix();
    let left = eig_left(&a).unwrap();
    let right = eig_general(&a).unwrap();
    assert!(left.pairing_ambiguous);
    for k in 0..4 {
        assert!(left.pairs.vectors[(3, k)].norm() > 1.0 - 1e-8);
        assert!(right.vectors[(0, k)].norm() > 1.0 - 1e-8);
    }
    let b = eig_bilateral(&a).unwrap();
    assert!(b.left[(3, 0)].norm() > 1.0 - 1e-8);
}

#[test]
fn left_equals_right_for_symmetric_and_diagonal() {
    let d = Matrix::from_diag(&[3.0, -1.0, 2.0]);
    let l = eig_left(&d).unwrap();
    let r = eig_general(&d).unwrap();
    assert!(!l.pairing_ambiguous);
    for k in 0..3 {
        assert!((l.pairs.values[k] - r.values[k]).norm() < 1e-14);
        let ip: f64 = crate::matrix::cdot(l.pairs.vectors.col(k), r.vectors.col(k)).norm();
        assert!((ip - 1.0).abs() < 1e-12);
        let hot = (0..3).filter(|&i| r.vectors[(i, k)].norm() > 0.5).count();
        assert_eq!(hot, 1);
    }
    let s = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]]);
    let l = eig_left(&s).unwrap();
    let r = eig_general(&s).unwrap();
    for k in 0..3 {
        let ip: f64 = crate::matrix::cdot(l.pairs.vectors.col(k), r.vectors.col(k)).norm();
        assert!((ip - 1.0).abs() < 1e-10);
    }
}

#[test]
fn rank_examples() {
    assert_eq!(numerical_rank(&Matrix::<f64>::identity(5).to_complex(), 1e-6), 5);
    let dup = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 1.0], vec![3.0, 3.0, 5.0]]);
    assert_eq!(numerical_rank(&dup.to_complex(), 1e-6), 2);
    assert_eq!(numerical_rank(&Matrix::from_diag(&[1.0, 1e-7]).to_complex(), 1e-6), 1);
}

#[test]
fn angle_examples() {
    let id = Matrix::<f64>::identity(3).to_complex();
    let d = subspace_angles(&id).unwrap();
    assert_eq!(d[(0, 0)], 0.0);
    assert!((d[(0, 1)] - 90.0).abs() < 1e-12);
    let r = 0.5f64.sqrt();
    let v = Matrix::from_rows(&[vec![1.0, r, 1.0], vec![0.0, r, 0.0]]).to_complex();
    let d = subspace_angles(&v).unwrap();
    assert!((d[(0, 1)] - 45.0).abs() < 1e-10);
    assert!(d[(0, 2)].abs() < 1e-10);
    let bad = Matrix::from_rows(&[vec![2.0], vec![0.0]]).to_complex();
    assert!(matches!(subspace_angles(&bad), Err(NumlaError::NotNormalized { col: 0, .. })));
}

#[test]
fn angles_ignore_column_phase() {
    let ep = eig_general(&random_matrix(8, 11)).unwrap();
    let d1 = subspace_angles(&ep.vectors).unwrap();
    let mut v = ep.vectors.clone();
    let ph = C::from_polar(1.0, 0.7);
    for z in v.col_mut(3) {
        *z *= ph;
    }
    let d2 = subspace_angles(&v).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            assert!((d1[(i, j)] - d2[(i, j)]).abs() < 1e-9);
        }
    }
}

#[test]
fn inverse_examples() {
    let id = Matrix::<f64>::identity(4).to_complex();
    let inv = invert(&id, 1e-6).unwrap();
    assert!(inv.sub(&id).norm_fro() < 1e-15);

    let n = 4;
    let f = Matrix::from_fn(n, n, |i, j| {
        C::from_polar(0.5, 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
    });
    let inv = invert(&f, 1e-6).unwrap();
    assert!(inv.sub(&f.adjoint()).norm_fro() < 1e-12);

    let sing = Matrix::from_diag(&[1.0, 1e-8]).to_complex();
    assert!(matches!(invert(&sing, 1e-6), Err(NumlaError::RankDeficient { .. })));
}

#[test]
fn condition_examples() {
    assert!((condition_number(&Matrix::<f64>::identity(3).to_complex()) - 1.0).abs() < 1e-14);
    assert!((condition_number(&Matrix::from_diag(&[4.0f64, 2.0]).to_complex()) - 2.0).abs() < 1e-14);
    let k = condition_number(&Matrix::from_diag(&[1.0f64, 1e-6]).to_complex());
    assert!((k - 1e6).abs() < 1e-4);
    assert!(condition_number(&Matrix::from_diag(&[1.0f64, 0.0]).to_complex()).is_infinite());
    let v = random_matrix(6, 2).to_complex();
    let scaled = v.map(|z| *z * C::new(-3.0, 2.0));
    assert!((condition_number(&v) - condition_number(&scaled)).abs() < 1e-9 * condition_number(&v));
}

#[test]
fn tolerances_validate() {
    assert!(Tolerances::default().validate().is_ok());
    assert!(Tolerances::new(0.0, 1.0, 1e-3).is_err());
    assert!(Tolerances::new(1e-6, 90.0, 1e-3).is_err());
}

#[test]
fn quasi_triangular_real_and_complex_blocks() {
    // Rotation-like block plus a real one.
    let a = Matrix::from_rows(&[
        vec![0.0, -2.0, 1.0],
        vec![2.0, 0.0, 0.5],
        vec![0.0, 0.0, 3.0],
    ]);
    let vals = eigenvalues(&a).unwrap();
    for want in [C::new(0.0, 2.0), C::new(0.0, -2.0), C::new(3.0, 0.0)] {
        assert!(vals.iter().any(|v| (*v - want).norm() < 1e-12));
    }
    let ep = eig_general(&a).unwrap();
    assert!(residual(&a, &ep) < 1e-12);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rank_monotone_in_eps(seed in 0u64..1000, n in 1usize..8) {
            let v = random_matrix(n, seed).to_complex();
            let mut last = usize::MAX;
            for e in [1e-12, 1e-6, 1e-2, 0.5, 2.0] {
                let r = numerical_rank(&v, e);
                prop_assert!(r <= last);
                last = r;
            }
        }

        #[test]
        fn eig_residual_small(seed in 0u64..1000, n in 1usize..25) {
            let a = random_matrix(n, seed);
            let ep = eig_general(&a).unwrap();
            prop_assert!(residual(&a, &ep) <= 1e-8 * a.norm_fro().max(1e-300));
        }
    }
}
