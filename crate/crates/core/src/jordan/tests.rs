use super::*;
use crate::numla::eig_general;
use crate::oracle::{self, adjacency_rational, rational, JordanData, RationalMatrix};
use num_rational::BigRational;
use num_traits::Zero;

fn example1() -> Digraph {
    Digraph::from_edges(
        7,
        [(0, 1), (0, 3), (0, 4), (1, 2), (1, 5), (1, 6), (2, 0), (2, 4), (2, 5), (2, 6), (3, 6), (4, 5)],
    )
    .unwrap()
}

fn unit(n: usize, k: usize) -> Vec<C<f64>> {
    let mut e = vec![C::new(0.0, 0.0); n];
    e[k] = C::new(1.0, 0.0);
    e
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(1)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn group_index_examples() {
    let id = Matrix::<f64>::identity(3).to_complex();
    assert_eq!(largest_block_group_index(&subspace_angles(&id).unwrap(), 1.0), 0);
    let v = Matrix::from_rows(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 0.0]]).to_complex();
    // columns e2, e1, e1
    assert_eq!(largest_block_group_index(&subspace_angles(&v).unwrap(), 1.0), 1);
    let p4: Matrix<f64> = Digraph::path(4).adjacency_matrix();
    let ep = eig_general(&p4).unwrap();
    let d = subspace_angles(&ep.vectors).unwrap();
    assert_eq!(select::angle_counts(&d, 1.0)[largest_block_group_index(&d, 1.0)], 4);
}

#[test]
fn path_edge_choice() {
    let g = Digraph::path(5);
    let c = choose_edge_adjacency(&unit(5, 4), &unit(5, 0), &g, &mut rng()).unwrap();
    assert_eq!((c.i, c.j, c.fallback), (4, 0, false));
    assert!((c.score - 1.0).abs() < 1e-15);
}

#[test]
fn adjacency_fallback_when_candidates_present() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = vec![C::new(0.0, 0.0); 4];
    u[0] = C::new(h, 0.0);
    u[1] = C::new(h, 0.0);
    let g = Digraph::from_edges(4, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
    let c = choose_edge_adjacency(&u, &u, &g, &mut rng()).unwrap();
    assert!(c.fallback);
    assert!(!g.has_edge(c.i, c.j) && c.i != c.j);
}

#[test]
fn laplacian_edge_choice() {
    let g = Digraph::path(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let u = vec![C::new(0.0, 0.0), C::new(1.0, 0.0)];
    let v = vec![C::new(h, 0.0), C::new(h, 0.0)];
    let c = choose_edge_laplacian(&u, &v, &g, DegreeConvention::InDegree, &mut rng()).unwrap();
    assert_eq!((c.i, c.j, c.fallback), (1, 0, false));
    assert!((c.score - h).abs() < 1e-15);
    let flat = vec![C::new(0.5, 0.0); 4];
    let c = choose_edge_laplacian(&flat, &flat, &Digraph::path(4), DegreeConvention::InDegree, &mut rng()).unwrap();
    assert!(c.fallback);
}

#[test]
fn complete_graph_is_an_error() {
    let n = 3;
    let g = Digraph::from_edges(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j)))).unwrap();
    let e = unit(3, 0);
    assert_eq!(choose_edge_adjacency(&e, &e, &g, &mut rng()), Err(JordanError::GraphComplete));
}

#[test]
fn path_becomes_cycle() {
    for n in [4, 8, 16] {
        let (h, rep) = destroy_jordan_blocks::<f64>(&Digraph::path(n), ShiftMode::Adjacency, &tol(), None, 0).unwrap();
        assert_eq!(rep.added_edges(), vec![(n - 1, 0)]);
        assert_eq!(h, Digraph::cycle(n));
        assert!(rep.sigma_min >= 1e-6);
    }
}

#[test]
fn example_one_edges() {
    let (h, rep) = destroy_jordan_blocks::<f64>(&example1(), ShiftMode::Adjacency, &tol(), None, 0).unwrap();
    assert_eq!(rep.added_edges(), vec![(5, 0), (6, 1)]);
    assert!(rep.choices.iter().all(|c| !c.fallback));
    let p = oracle::char_poly_exact(&adjacency_rational(&h)).unwrap();
    assert_eq!(p.to_string(), "x^7 - x^5 - 4x^4 - x^3 - 2x^2 - 1");
}

#[test]
fn symmetric_graph_needs_nothing() {
    let g = Digraph::from_edges(4, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)]).unwrap();
    let (h, rep) = destroy_jordan_blocks::<f64>(&g, ShiftMode::Adjacency, &tol(), None, 0).unwrap();
    assert_eq!(h, g);
    assert_eq!(rep.iterations, 0);
    assert!(rep.kappa < 1.0 + 1e-6);
}

#[test]
fn laplacian_grid_is_repaired() {
    let g = Digraph::directed_grid(3, 3);
    for conv in [DegreeConvention::InDegree, DegreeConvention::OutDegree] {
        let (h, rep) = destroy_jordan_blocks::<f64>(&g, ShiftMode::Laplacian(conv), &tol(), None, 0).unwrap();
        assert!(rep.iterations >= 1);
        let l = laplacian_rational_of(&h, conv);
        assert!(oracle::is_diagonalizable_exact(&l).unwrap());
    }
}

fn laplacian_rational_of(g: &Digraph, conv: DegreeConvention) -> RationalMatrix {
    oracle::laplacian_rational(g, conv).unwrap()
}

#[test]
fn max_iter_reports_partial_result() {
    let g = Digraph::directed_grid(3, 3);
    match destroy_jordan_blocks::<f64>(&g, ShiftMode::Adjacency, &tol(), Some(0), 0) {
        Err(JordanError::MaxIterExceeded { graph, report }) => {
            assert_eq!(*graph, g);
            assert_eq!(report.iterations, 0);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn zero_destruction() {
    let c4 = Digraph::cycle(4);
    let (h, rep) = destroy_zero_eigenvalues::<f64>(&c4, &tol(), None, 0).unwrap();
    assert_eq!(h, c4);
    assert_eq!(rep.iterations, 0);

    let (h, rep) = destroy_zero_eigenvalues::<f64>(&Digraph::path(3), &tol(), None, 0).unwrap();
    assert_eq!(rep.added_edges(), vec![(2, 0)]);
    let p = oracle::char_poly_exact(&adjacency_rational(&h)).unwrap();
    assert_eq!(p.to_string(), "x^3 - 1");

    let (h, _) = destroy_zero_eigenvalues::<f64>(&Digraph::directed_grid(3, 3), &tol(), None, 0).unwrap();
    let p = oracle::char_poly_exact(&adjacency_rational(&h)).unwrap();
    assert!(!p.coeff(0).is_zero());
}

#[test]
fn report_json_is_deterministic() {
    let g = Digraph::directed_grid(3, 3);
    let run = || destroy_jordan_blocks::<f64>(&g, ShiftMode::Adjacency, &tol(), None, 7).unwrap().1;
    let (a, b) = (run(), run());
    assert_eq!(a.canonical_json().to_string(), b.canonical_json().to_string());
    let j = a.to_json();
    for key in ["added_edges", "scores", "fallbacks", "iterations", "sigma_min", "sigma_max", "kappa", "min_angle_deg", "runtime_ms"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    assert!(a.canonical_json().get("runtime_ms").is_none());
}

#[test]
fn f32_path() {
    let (_, rep) = destroy_jordan_blocks::<f32>(&Digraph::path(6), ShiftMode::Adjacency, &tol(), None, 0).unwrap();
    assert_eq!(rep.added_edges(), vec![(5, 0)]);
}

fn q(x: i64) -> BigRational {
    rational(x)
}

fn e_q(n: usize, k: usize) -> Vec<BigRational> {
    let mut e = vec![q(0); n];
    e[k] = q(1);
    e
}

fn outer(n: usize, i: usize, j: usize) -> RationalMatrix {
    let mut b = Matrix::zeros(n, n);
    b[(i, j)] = q(1);
    b
}

#[test]
fn condition_sum_examples() {
    // Path: u = e_n, v = e_1.
    let n = 5;
    let s = rank1_condition_sum(&[e_q(n, n - 1)], &[e_q(n, 0)], &outer(n, n - 1, 0)).unwrap();
    assert_eq!(s, q(1));
    // Example 1 with its published Jordan vectors.
    let v1: Vec<BigRational> = [-1, -1, 0, 0, 1, 0, 0].iter().map(|&x| q(x)).collect();
    let v2: Vec<BigRational> = [0, -1, 0, 1, 0, 0, 0].iter().map(|&x| q(x)).collect();
    let us = [e_q(7, 5), e_q(7, 6)];
    let vs = [v1, v2];
    assert_eq!(rank1_condition_sum(&us, &vs, &outer(7, 5, 0)).unwrap(), q(-1));
    assert_eq!(rank1_condition_sum(&us, &vs, &outer(7, 0, 5)).unwrap(), q(0));
    assert!(matches!(rank1_condition_sum(&us, &vs[..1], &outer(7, 5, 0)), Err(JordanError::LengthMismatch { .. })));
}

#[test]
fn example_one_sum_matches_oracle_data() {
    let a = adjacency_rational(&example1());
    let jd = oracle::jordan_data_at(&a, &q(0)).unwrap();
    let big: usize = jd.sizes.iter().filter(|&&s| s == jd.sizes[0]).count();
    let (us, vs) = (&jd.left[..big], &jd.right[..big]);
    // Support of the condition: exactly the five entries of rows 5 and 6.
    let mut support = Vec::new();
    for i in 0..7 {
        for j in 0..7 {
            if a[(i, j)].is_zero() && !rank1_condition_sum(us, vs, &outer(7, i, j)).unwrap().is_zero() {
                support.push((i, j));
            }
        }
    }
    assert_eq!(support, vec![(5, 0), (5, 1), (5, 4), (6, 1), (6, 3)]);
}

#[test]
fn grid_theorem_conditions() {
    let g = Digraph::directed_grid(3, 3);
    let a = adjacency_rational(&g);
    let jd: JordanData<BigRational> = oracle::jordan_data_at(&a, &q(0)).unwrap();
    assert_eq!(jd.sizes, vec![5, 3, 1]);
    assert!(theorem1_condition(&jd, &outer(9, 8, 0), 1).unwrap());
    assert!(!theorem1_condition(&jd, &outer(9, 0, 8), 1).unwrap());
    assert!(matches!(theorem1_condition(&jd, &outer(9, 8, 0), 4), Err(JordanError::RhoOutOfRange { .. })));
    // Only (8, 0) among absent edges satisfies the size-5 condition.
    let hits: Vec<(usize, usize)> = (0..9)
        .flat_map(|i| (0..9).map(move |j| (i, j)))
        .filter(|&(i, j)| a[(i, j)].is_zero() && theorem1_condition(&jd, &outer(9, i, j), 1).unwrap())
        .collect();
    assert_eq!(hits, vec![(8, 0)]);

    let a2 = adjacency_rational(&g.with_edge(8, 0).unwrap());
    let jd2 = oracle::jordan_data_at(&a2, &q(0)).unwrap();
    assert_eq!(jd2.sizes, vec![3, 1]);
    let coef = |i, j| rank1_condition_sum(&jd2.left[..1], &jd2.right[..1], &outer(9, i, j)).unwrap();
    let base = coef(5, 1);
    assert!(!base.is_zero());
    assert_eq!(coef(5, 3) / base.clone(), q(-1));
    assert_eq!(coef(7, 1) / base.clone(), q(-1));
    assert_eq!(coef(7, 3) / base.clone(), q(1));
    let mut nonzero = 0;
    for i in 0..9 {
        for j in 0..9 {
            nonzero += usize::from(!coef(i, j).is_zero());
        }
    }
    assert_eq!(nonzero, 4);
}

#[test]
fn theorem_with_zero_term_is_false() {
    let jd = JordanData { sizes: vec![2], right: vec![vec![1.0, 0.0]], left: vec![vec![0.0, 1.0]] };
    let b = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]);
    assert!(!theorem1_condition(&jd, &b, 1).unwrap());
    let b = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]);
    assert!(theorem1_condition(&jd, &b, 1).unwrap());
}

