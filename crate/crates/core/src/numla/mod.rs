//! Dense and sparse numerical linear algebra.
//!
//! The dense eigensolver never balances. Eigenvector entry magnitudes drive
//! edge selection, and a diagonal similarity would distort them.
//!
//! Error constants: eigenvector back-substitution replaces a pivot smaller
//! than `ε_mach · ‖T‖_F` by that value; column-normalization checks use
//! `√ε_mach`. Residuals from [`eig_general`] are backward stable, i.e. of
//! order `n · ε_mach · ‖M‖_F` for non-defective eigenvalues.

mod lu;
mod schur;
mod sparse;
mod svd;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{cnorm2, Matrix};
use crate::scalar::{cabs, Real, C};

pub use lu::Lu;
pub use sparse::{
    sparse_eigenpair_near, sparse_eigenpair_near_zero, ArnoldiOptions, CsrMatrix, SparseEigenpair,
};
pub use svd::{singular_values, singular_values_real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumlaError {
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("sparse eigensolver did not converge after {restarts} restarts (residual {residual:e})")]
    SparseNoConvergence { residual: f64, restarts: usize },
    #[error("matrix is rank deficient: sigma_min = {sigma_min:e} <= eps_R = {eps:e}; not yet diagonalizable")]
    RankDeficient { sigma_min: f64, eps: f64 },
    #[error("matrix is exactly singular")]
    Singular,
    #[error("column {col} has norm {norm}, expected 1")]
    NotNormalized { col: usize, norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

/// The three numerical knobs: rank, collinearity angle and zero threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Smallest singular value still counted as full rank.
    pub eps_r: f64,
    /// Angle in degrees below which two eigenvectors count as collinear.
    pub eps_d: f64,
    /// Eigenvalues with smaller magnitude count as zero.
    pub eps_z: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_r: 1e-6, eps_d: 1.0, eps_z: 1e-3 }
    }
}

impl Tolerances {
    pub fn new(eps_r: f64, eps_d: f64, eps_z: f64) -> Result<Self, NumlaError> {
        let t = Self { eps_r, eps_d, eps_z };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), NumlaError> {
        for (name, v) in [("eps_R", self.eps_r), ("eps_D", self.eps_d), ("eps_Z", self.eps_z)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(NumlaError::InvalidTolerance(format!("{name} must be positive, got {v}")));
            }
        }
        if self.eps_d >= 90.0 {
            return Err(NumlaError::InvalidTolerance(format!(
                "eps_D must be below 90 degrees, got {}",
                self.eps_d
            )));
        }
        Ok(())
    }
}

/// Eigenvalues with unit-norm eigenvectors as matrix columns.
#[derive(Debug, Clone)]
pub struct EigenPairs<T: Real> {
    pub values: Vec<C<T>>,
    pub vectors: Matrix<C<T>>,
}

/// Left eigenpairs aligned with a right decomposition.
#[derive(Debug, Clone)]
pub struct LeftEigenPairs<T: Real> {
    /// Column k satisfies `uᵀ M ≈ λ_k uᵀ`.
    pub pairs: EigenPairs<T>,
    /// Set when some eigenvalue had two candidates within 1e-10 of each
    /// other during pairing, so the order among them is arbitrary.
    pub pairing_ambiguous: bool,
}

/// Right and left eigenvectors from one Schur decomposition, so column `k`
/// of both belongs to the same computed eigenvalue.
#[derive(Debug, Clone)]
pub struct Bilateral<T: Real> {
    pub values: Vec<C<T>>,
    /// `M v_k ≈ λ_k v_k`, unit norm.
    pub right: Matrix<C<T>>,
    /// `u_kᵀ M ≈ λ_k u_kᵀ`, unit norm.
    pub left: Matrix<C<T>>,
}

struct ComplexSchur<T: Real> {
    t: Matrix<C<T>>,
    z: Matrix<C<T>>,
}

fn check_square<T>(m: &Matrix<T>) -> Result<(), NumlaError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(NumlaError::NotSquare(m.nrows(), m.ncols()))
    }
}

fn complex_schur<T: Real>(m: &Matrix<T>) -> Result<ComplexSchur<T>, NumlaError> {
    check_square(m)?;
    let mut h = m.clone();
    let mut q = schur::hessenberg(&mut h, true).unwrap_or_else(|| Matrix::identity(0));
    schur::francis_qr(&mut h, Some(&mut q))?;
    let (t, z) = schur::real_to_complex_schur(&h, &q);
    Ok(ComplexSchur { t, z })
}

/// Eigenvalues only, in the order of the real Schur form's diagonal.
pub fn eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Vec<C<T>>, NumlaError> {
    check_square(m)?;
    let mut h = m.clone();
    schur::hessenberg(&mut h, false);
    schur::francis_qr(&mut h, None)?;
    Ok(schur::quasi_triangular_eigenvalues(&h))
}

/// Full eigendecomposition of a real square matrix.
///
/// For defective matrices the columns belonging to one Jordan block come out
/// nearly parallel rather than causing a failure.
pub fn eig_general<T: Real>(m: &Matrix<T>) -> Result<EigenPairs<T>, NumlaError> {
    let cs = complex_schur(m)?;
    let x = triangular_right_vectors(&cs.t);
    let mut v = cs.z.matmul(&x);
    normalize_columns(&mut v);
    Ok(EigenPairs { values: diag(&cs.t), vectors: v })
}

/// Left and right eigenvectors sharing one eigenvalue list.
pub fn eig_bilateral<T: Real>(m: &Matrix<T>) -> Result<Bilateral<T>, NumlaError> {
    let cs = complex_schur(m)?;
    let mut right = cs.z.matmul(&triangular_right_vectors(&cs.t));
    normalize_columns(&mut right);
    // wᴴ T = λ wᴴ gives yᴴ M = λ yᴴ for y = Z w; the transpose convention
    // wants u = conj(y).
    let mut left = cs.z.matmul(&triangular_left_vectors(&cs.t)).map(|c| c.conj());
    normalize_columns(&mut left);
    Ok(Bilateral { values: diag(&cs.t), right, left })
}

/// Left eigenvectors computed as the eigenvectors of `Mᵀ`, reordered to
/// follow the eigenvalue list of [`eig_general`] by greedy nearest pairing
/// (ties to the lower index).
pub fn eig_left<T: Real>(m: &Matrix<T>) -> Result<LeftEigenPairs<T>, NumlaError> {
    let right = eigenvalues(m)?;
    let lt = eig_general(&m.transpose())?;
    let (order, ambiguous) = pair_eigenvalues(&right, &lt.values);
    if ambiguous {
        log::warn!("left/right eigenvalue pairing is ambiguous within 1e-10");
    }
    let values = order.iter().map(|&j| lt.values[j]).collect();
    let vectors = lt.vectors.select_cols(&order);
    Ok(LeftEigenPairs { pairs: EigenPairs { values, vectors }, pairing_ambiguous: ambiguous })
}

/// For each entry of `target` in order, the index of the nearest unused
/// entry of `pool`.
pub fn pair_eigenvalues<T: Real>(target: &[C<T>], pool: &[C<T>]) -> (Vec<usize>, bool) {
    let gap = T::lit(1e-10);
    let mut used = vec![false; pool.len()];
    let mut order = Vec::with_capacity(target.len());
    let mut ambiguous = false;
    for &t in target {
        let mut best: Option<(usize, T)> = None;
        let mut second: Option<T> = None;
        for (j, &p) in pool.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = cabs(p - t);
            match best {
                Some((_, bd)) if d >= bd => {
                    if second.is_none_or(|s| d < s) {
                        second = Some(d);
                    }
                }
                _ => {
                    second = best.map(|b| b.1);
                    best = Some((j, d));
                }
            }
        }
        let (j, bd) = best.expect("pool at least as long as target");
        if second.is_some_and(|s| s - bd < gap) {
            ambiguous = true;
        }
        used[j] = true;
        order.push(j);
    }
    (order, ambiguous)
}

fn diag<T: Real>(t: &Matrix<C<T>>) -> Vec<C<T>> {
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

fn pivot_floor<T: Real>(t: &Matrix<C<T>>) -> T {
    (T::epsilon() * t.norm_fro()).max(T::min_positive_value())
}

/// Eigenvectors of an upper triangular `T` by back-substitution.
fn triangular_right_vectors<T: Real>(t: &Matrix<C<T>>) -> Matrix<C<T>> {
    let n = t.nrows();
    let zero = C::new(T::zero(), T::zero());
    let smin = pivot_floor(t);
    let big = T::one() / (T::epsilon() * T::epsilon());
    let mut x = Matrix::from_elem(n, n, zero);
    for k in 0..n {
        let lambda = t[(k, k)];
        let col = x.col_mut(k);
        col[k] = C::new(T::one(), T::zero());
        for i in (0..k).rev() {
            let mut s = zero;
            for j in i + 1..=k {
                s += t[(i, j)] * col[j];
            }
            let mut d = t[(i, i)] - lambda;
            if cabs(d) < smin {
                d = C::new(smin, T::zero());
            }
            col[i] = -s / d;
            let mag = cabs(col[i]);
            if mag > big {
                for c in col[i..=k].iter_mut() {
                    *c /= mag;
                }
            }
        }
    }
    x
}

/// Vectors `w` with `wᴴ T = λ wᴴ`, by forward substitution on `Tᴴ`.
fn triangular_left_vectors<T: Real>(t: &Matrix<C<T>>) -> Matrix<C<T>> {
    let n = t.nrows();
    let zero = C::new(T::zero(), T::zero());
    let smin = pivot_floor(t);
    let big = T::one() / (T::epsilon() * T::epsilon());
    let mut w = Matrix::from_elem(n, n, zero);
    for k in 0..n {
        let lc = t[(k, k)].conj();
        let col = w.col_mut(k);
        col[k] = C::new(T::one(), T::zero());
        for i in k + 1..n {
            let mut s = zero;
            for j in k..i {
                s += t[(j, i)].conj() * col[j];
            }
            let mut d = t[(i, i)].conj() - lc;
            if cabs(d) < smin {
                d = C::new(smin, T::zero());
            }
            col[i] = -s / d;
            let mag = cabs(col[i]);
            if mag > big {
                for c in col[k..=i].iter_mut() {
                    *c /= mag;
                }
            }
        }
    }
    w
}

/// Scales each column to unit 2-norm and rotates its phase so that the
/// first entry of (near) maximal modulus is real and positive.
pub fn normalize_columns<T: Real>(v: &mut Matrix<C<T>>) {
    let slack = T::one() - T::epsilon().sqrt();
    for k in 0..v.ncols() {
        let col = v.col_mut(k);
        let nrm = cnorm2(col);
        if nrm == T::zero() || !nrm.is_finite() {
            continue;
        }
        let maxabs = col.iter().map(|z| cabs(*z)).fold(T::zero(), T::max);
        let lead = col.iter().find(|z| cabs(**z) >= maxabs * slack).copied().unwrap();
        let phase = lead.conj() / cabs(lead);
        for z in col.iter_mut() {
            *z = *z * phase / nrm;
        }
    }
}

/// Number of singular values above `eps`.
pub fn numerical_rank<T: Real>(m: &Matrix<C<T>>, eps: T) -> usize {
    singular_values(m).into_iter().filter(|s| *s > eps).count()
}

/// `σ_max / σ_min`, infinite when `σ_min = 0`.
pub fn condition_number<T: Real>(v: &Matrix<C<T>>) -> T {
    let s = singular_values(v);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
        _ => T::infinity(),
    }
}

/// Pairwise angles in degrees, `acos(|v_iᴴ v_j|)`, for unit-norm columns.
pub fn subspace_angles<T: Real>(v: &Matrix<C<T>>) -> Result<Matrix<T>, NumlaError> {
    let n = v.ncols();
    let tol = T::epsilon().sqrt();
    for k in 0..n {
        let nrm = cnorm2(v.col(k));
        if (nrm - T::one()).abs() > tol {
            return Err(NumlaError::NotNormalized { col: k, norm: nrm.to_f64_lossy() });
        }
    }
    let g = v.adjoint().matmul(v);
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c = cabs(g[(i, j)]).min(T::one());
            let a = c.acos().to_degrees();
            d[(i, j)] = a;
            d[(j, i)] = a;
        }
    }
    Ok(d)
}

/// Inverse of `v`, refused when `v` is rank deficient at `eps_r`.
pub fn invert<T: Real>(v: &Matrix<C<T>>, eps_r: T) -> Result<Matrix<C<T>>, NumlaError> {
    check_square(v)?;
    let s = singular_values(v);
    let smin = s.last().copied().unwrap_or(T::one());
    if smin <= eps_r {
        return Err(NumlaError::RankDeficient { sigma_min: smin.to_f64_lossy(), eps: eps_r.to_f64_lossy() });
    }
    Ok(Lu::new(v)?.inverse())
}

#[cfg(test)]
mod tests;
