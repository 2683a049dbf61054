//! Destroying Jordan blocks by adding edges.
//!
//! Each iteration perturbs the shift by the rank-1 (adjacency) or rank-1,
//! two-entry (Laplacian) change of one added edge, chosen where the left and
//! right eigenvectors of a largest block make the first-order condition
//! `uᵀ ΔM v ≠ 0` biggest.

mod condition;
mod select;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::graph::{DegreeConvention, Digraph, GraphError};
use crate::matrix::Matrix;
use crate::numla::{
    self, eig_bilateral, singular_values, sparse_eigenpair_near, sparse_eigenpair_near_zero, subspace_angles,
    ArnoldiOptions, CsrMatrix, NumlaError, Tolerances,
};
use crate::scalar::{cabs, Real, C};

pub use condition::{rank1_condition_sum, theorem1_condition, ConditionScalar};
pub use select::{choose_edge_adjacency, choose_edge_laplacian, largest_block_group_index};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftMode {
    Adjacency,
    Laplacian(DegreeConvention),
}

impl ShiftMode {
    pub fn matrix<T: Real>(self, g: &Digraph) -> Result<Matrix<T>, GraphError> {
        match self {
            ShiftMode::Adjacency => Ok(g.adjacency_matrix()),
            ShiftMode::Laplacian(conv) => g.laplacian_matrix(conv),
        }
    }
}

/// One added edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeChoice {
    pub i: usize,
    pub j: usize,
    pub score: f64,
    /// Drawn at random because no admissible edge had a usable score.
    pub fallback: bool,
}

/// Audit trail of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct DestroyReport {
    pub choices: Vec<EdgeChoice>,
    pub iterations: usize,
    /// Extreme singular values of the final eigenvector matrix.
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub kappa: f64,
    /// Smallest pairwise eigenvector angle at exit, 90 for n < 2.
    pub min_angle_deg: f64,
    pub random_fallbacks: usize,
    pub runtime_ms: f64,
}

impl DestroyReport {
    fn new() -> Self {
        Self {
            choices: Vec::new(),
            iterations: 0,
            sigma_min: f64::NAN,
            sigma_max: f64::NAN,
            kappa: f64::NAN,
            min_angle_deg: f64::NAN,
            random_fallbacks: 0,
            runtime_ms: 0.0,
        }
    }

    fn push(&mut self, c: EdgeChoice) {
        self.iterations += 1;
        self.random_fallbacks += usize::from(c.fallback);
        self.choices.push(c);
    }

    pub fn added_edges(&self) -> Vec<(usize, usize)> {
        self.choices.iter().map(|c| (c.i, c.j)).collect()
    }

    /// Everything except the wall time, so equal inputs give equal values.
    pub fn canonical_json(&self) -> serde_json::Value {
        json!({
            "added_edges": self.choices.iter().map(|c| [c.i, c.j]).collect::<Vec<_>>(),
            "scores": self.choices.iter().map(|c| c.score).collect::<Vec<_>>(),
            "fallbacks": self.choices.iter().map(|c| c.fallback).collect::<Vec<_>>(),
            "iterations": self.iterations,
            "random_fallbacks": self.random_fallbacks,
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "kappa": self.kappa,
            "min_angle_deg": self.min_angle_deg,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.canonical_json();
        v["runtime_ms"] = json!(self.runtime_ms);
        v
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JordanError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numla(#[from] NumlaError),
    #[error("the graph is complete, no edge can be added")]
    GraphComplete,
    #[error("still not done after {} iterations", .report.iterations)]
    MaxIterExceeded { graph: Box<Digraph>, report: Box<DestroyReport> },
    #[error("{left} left but {right} right vectors")]
    LengthMismatch { left: usize, right: usize },
    #[error("vector length {found} does not match n = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rho = {rho} outside 1..={max}")]
    RhoOutOfRange { rho: usize, max: usize },
}

/// Safety net on the number of iterations when the caller gives none.
pub fn default_max_iter(n: usize) -> usize {
    (n * n).max(1)
}

fn finish<T: Real>(report: &mut DestroyReport, v: &Matrix<C<T>>, start: Instant) -> Result<(), JordanError> {
    let s = singular_values(v);
    report.sigma_max = s.first().map_or(0.0, |x| x.to_f64_lossy());
    report.sigma_min = s.last().map_or(0.0, |x| x.to_f64_lossy());
    report.kappa = report.sigma_max / report.sigma_min;
    report.min_angle_deg = min_angle(&subspace_angles(v)?);
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(())
}

fn min_angle<T: Real>(d: &Matrix<T>) -> f64 {
    let n = d.nrows();
    let mut m = 90.0f64;
    for i in 0..n {
        for j in i + 1..n {
            m = m.min(d[(i, j)].to_f64_lossy());
        }
    }
    m
}

fn add_edge(g: &Digraph, c: &EdgeChoice) -> Result<Digraph, JordanError> {
    log::debug!("adding edge ({}, {}) score {:.3e}{}", c.i, c.j, c.score, if c.fallback { " (random)" } else { "" });
    Ok(g.with_edge(c.i, c.j)?)
}

/// Adds edges until the shift's eigenvector matrix has full numerical rank
/// at `tol.eps_r`.
///
/// `max_iter` defaults to `n²`; hitting it returns the partial result in the
/// error.
pub fn destroy_jordan_blocks<T: Real>(
    g: &Digraph,
    mode: ShiftMode,
    tol: &Tolerances,
    max_iter: Option<usize>,
    seed: u64,
) -> Result<(Digraph, DestroyReport), JordanError> {
    tol.validate()?;
    let start = Instant::now();
    let max_iter = max_iter.unwrap_or_else(|| default_max_iter(g.n()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = g.clone();
    let mut report = DestroyReport::new();
    let (eps_r, eps_d) = (T::lit(tol.eps_r), T::lit(tol.eps_d));
    loop {
        let m: Matrix<T> = mode.matrix(&g)?;
        let eig = eig_bilateral(&m)?;
        if numla::numerical_rank(&eig.right, eps_r) == g.n() {
            finish(&mut report, &eig.right, start)?;
            return Ok((g, report));
        }
        if report.iterations >= max_iter {
            finish(&mut report, &eig.right, start)?;
            return Err(JordanError::MaxIterExceeded { graph: Box::new(g), report: Box::new(report) });
        }
        let angles = subspace_angles(&eig.right)?;
        let c = select::choose_for_blocks(mode, &g, &eig, &angles, eps_d, &mut rng)?;
        g = add_edge(&g, &c)?;
        report.push(c);
    }
}

/// Adds edges to the adjacency shift until no eigenvalue has modulus below
/// `tol.eps_z`. Eigenvectors for the eigenvalue closest to zero come from
/// the sparse solver.
pub fn destroy_zero_eigenvalues<T: Real>(
    g: &Digraph,
    tol: &Tolerances,
    max_iter: Option<usize>,
    seed: u64,
) -> Result<(Digraph, DestroyReport), JordanError> {
    tol.validate()?;
    let start = Instant::now();
    let max_iter = max_iter.unwrap_or_else(|| default_max_iter(g.n()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = g.clone();
    let mut report = DestroyReport::new();
    let eps_z = T::lit(tol.eps_z);
    loop {
        let m: Matrix<T> = g.adjacency_matrix();
        let vals = numla::eigenvalues(&m)?;
        let smallest = vals.iter().map(|z| cabs(*z)).fold(T::infinity(), T::min);
        if smallest >= eps_z || report.iterations >= max_iter {
            let ep = numla::eig_general(&m)?;
            finish(&mut report, &ep.vectors, start)?;
            if smallest >= eps_z {
                return Ok((g, report));
            }
            return Err(JordanError::MaxIterExceeded { graph: Box::new(g), report: Box::new(report) });
        }
        let (u, v) = zero_pair(&m)?;
        let c = select::choose_cycle_closing(&u, &v, &g, &mut rng)?;
        g = add_edge(&g, &c)?;
        report.push(c);
    }
}

/// Reports of both phases of [`diagonalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub zeros: Option<DestroyReport>,
    pub blocks: DestroyReport,
}

impl PipelineReport {
    pub fn added_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.zeros.as_ref().map(DestroyReport::added_edges).unwrap_or_default();
        e.extend(self.blocks.added_edges());
        e
    }

    pub fn total_iterations(&self) -> usize {
        self.zeros.as_ref().map_or(0, |z| z.iterations) + self.blocks.iterations
    }

    pub fn canonical_json(&self) -> serde_json::Value {
        json!({
            "added_edges": self.added_edges().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "total_iterations": self.total_iterations(),
            "destroy_zeros": self.zeros.as_ref().map(DestroyReport::canonical_json),
            "destroy_blocks": self.blocks.canonical_json(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "added_edges": self.added_edges().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "total_iterations": self.total_iterations(),
            "destroy_zeros": self.zeros.as_ref().map(DestroyReport::to_json),
            "destroy_blocks": self.blocks.to_json(),
        })
    }
}

/// Zero eigenvalues first (adjacency only, when `pre_zeros`), then Jordan
/// blocks. The block phase runs with `seed + 1`.
pub fn diagonalize<T: Real>(
    g: &Digraph,
    mode: ShiftMode,
    tol: &Tolerances,
    max_iter: Option<usize>,
    seed: u64,
    pre_zeros: bool,
) -> Result<(Digraph, PipelineReport), JordanError> {
    let (g1, zeros) = if pre_zeros && mode == ShiftMode::Adjacency {
        let (g1, r) = destroy_zero_eigenvalues::<T>(g, tol, max_iter, seed)?;
        (g1, Some(r))
    } else {
        (g.clone(), None)
    };
    let (g2, blocks) = destroy_jordan_blocks::<T>(&g1, mode, tol, max_iter, seed.wrapping_add(1))?;
    Ok((g2, PipelineReport { zeros, blocks }))
}

type Pair<T> = (Vec<C<T>>, Vec<C<T>>);

/// Left and right eigenvectors for the eigenvalue nearest zero: sparse
/// Arnoldi on `A` and then on `Aᵀ` at the eigenvalue found, dense
/// decomposition if either run fails.
fn zero_pair<T: Real>(m: &Matrix<T>) -> Result<Pair<T>, JordanError> {
    let csr = CsrMatrix::from_dense(m);
    let opts = ArnoldiOptions::default();
    let sparse = sparse_eigenpair_near_zero(&csr, opts)
        .and_then(|r| sparse_eigenpair_near(&csr.transpose(), r.lambda, opts).map(|l| (l.vector, r.vector)));
    match sparse {
        Ok(pair) => Ok(pair),
        Err(e) => {
            log::warn!("sparse solver failed ({e}), using the dense decomposition");
            let b = eig_bilateral(m)?;
            let k = (0..b.values.len())
                .min_by(|&x, &y| cabs(b.values[x]).partial_cmp(&cabs(b.values[y])).unwrap())
                .unwrap_or(0);
            Ok((b.left.col(k).to_vec(), b.right.col(k).to_vec()))
        }
    }
}

#[cfg(test)]
mod tests;
