//! Energy-preserving shift and the polynomial graph Wiener filter.
//!
//! The unit-circle frequencies `exp(−2πik/n)` are assigned to the basis
//! columns in their total-variation order, so the smoothest eigenvector gets
//! frequency 1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::gft::{FourierBasis, GftError};
use crate::matrix::{cnorm2, Matrix};
use crate::scalar::{cabs, Real, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("sigma must be finite and non-negative, got {0}")]
    InvalidSigma(f64),
    #[error("length {found} does not match n = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Gft(#[from] GftError),
}

/// `A_e = V Λ_e V⁻¹` with `Λ_e` on the unit circle.
#[derive(Debug, Clone)]
pub struct EnergyShift<T: Real> {
    pub basis: FourierBasis<T>,
    pub lambdas: Vec<C<T>>,
    pub a_e: Matrix<C<T>>,
}

pub fn energy_shift<T: Real>(fb: &FourierBasis<T>) -> EnergyShift<T> {
    let n = fb.n();
    let lambdas: Vec<C<T>> = (0..n)
        .map(|k| {
            let th = -T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n);
            C::from_polar(T::one(), th)
        })
        .collect();
    let vl = Matrix::from_fn(n, n, |i, j| fb.v[(i, j)] * lambdas[j]);
    EnergyShift { a_e: vl.matmul(&fb.f), basis: fb.clone(), lambdas }
}

impl<T: Real> EnergyShift<T> {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// `V Λ_e^k V⁻¹`.
    pub fn power(&self, k: usize) -> Matrix<C<T>> {
        let n = self.n();
        let vl = Matrix::from_fn(n, n, |i, j| self.basis.v[(i, j)] * self.lambdas[j].powu(k as u32));
        vl.matmul(&self.basis.f)
    }

    /// `Σ_k h_k A_e^k y`, evaluated in the spectral domain.
    pub fn apply_polynomial(&self, h: &[C<T>], y: &[C<T>]) -> Result<Vec<C<T>>, FilterError> {
        let mut y_hat = self.basis.transform(y)?;
        for (z, l) in y_hat.iter_mut().zip(&self.lambdas) {
            let mut acc = C::new(T::zero(), T::zero());
            for c in h.iter().rev() {
                acc = acc * *l + *c;
            }
            *z *= acc;
        }
        Ok(self.basis.inverse_transform(&y_hat)?)
    }

    /// Regressor matrix `[y, A_e y, …, A_e^{L−1} y]`.
    pub fn krylov(&self, y: &[C<T>], order: usize) -> Result<Matrix<C<T>>, FilterError> {
        let y_hat = self.basis.transform(y)?;
        let n = self.n();
        let mut b = Matrix::zeros(n, order);
        let mut cur = y_hat;
        for k in 0..order {
            b.col_mut(k).copy_from_slice(&self.basis.inverse_transform(&cur)?);
            for (z, l) in cur.iter_mut().zip(&self.lambdas) {
                *z *= *l;
            }
        }
        Ok(b)
    }
}

#[derive(Debug, Clone)]
pub struct WienerDesign<T: Real> {
    pub h: Vec<C<T>>,
    pub order: usize,
    /// `‖B h − x‖₂`.
    pub residual: T,
    /// Numerical rank of the regressor matrix.
    pub rank: usize,
    /// Set when the regressors were linearly dependent and a basic
    /// least-squares solution was returned.
    pub rank_deficient: bool,
}

/// Least-squares filter taps minimizing `‖Σ h_k A_e^k y − x‖₂`.
pub fn wiener_design<T: Real>(
    x: &[C<T>],
    y: &[C<T>],
    ae: &EnergyShift<T>,
    order: usize,
) -> Result<WienerDesign<T>, FilterError> {
    if order == 0 {
        return Err(FilterError::ZeroOrder);
    }
    let n = ae.n();
    for len in [x.len(), y.len()] {
        if len != n {
            return Err(FilterError::DimensionMismatch { expected: n, found: len });
        }
    }
    if order > n {
        log::debug!("order {order} exceeds n = {n}, regressors are dependent");
    }
    let b = ae.krylov(y, order)?;
    let (h, rank) = lstsq_pivoted(&b, x);
    let bh = b.mul_vec(&h);
    let residual = cnorm2(&bh.iter().zip(x).map(|(a, b)| *a - *b).collect::<Vec<_>>());
    Ok(WienerDesign { h, order, residual, rank, rank_deficient: rank < order })
}

pub fn wiener_apply<T: Real>(d: &WienerDesign<T>, ae: &EnergyShift<T>, y: &[C<T>]) -> Result<Vec<C<T>>, FilterError> {
    ae.apply_polynomial(&d.h, y)
}

/// Residual of the normal equations `R h = r` with `R = BᴴB`, `r = Bᴴx`,
/// relative to `‖R‖_F ‖h‖ + ‖r‖`.
pub fn normal_equations_residual<T: Real>(
    x: &[C<T>],
    y: &[C<T>],
    ae: &EnergyShift<T>,
    h: &[C<T>],
) -> Result<T, FilterError> {
    let b = ae.krylov(y, h.len())?;
    let bh = b.adjoint();
    let r_mat = bh.matmul(&b);
    let r = bh.mul_vec(x);
    let rh = r_mat.mul_vec(h);
    let num = cnorm2(&rh.iter().zip(&r).map(|(a, b)| *a - *b).collect::<Vec<_>>());
    Ok(num / (r_mat.norm_fro() * cnorm2(h) + cnorm2(&r)).max(T::min_positive_value()))
}

/// Householder QR with column pivoting; returns the basic solution and the
/// numerical rank.
fn lstsq_pivoted<T: Real>(b: &Matrix<C<T>>, x: &[C<T>]) -> (Vec<C<T>>, usize) {
    let (m, l) = b.shape();
    let zero = C::new(T::zero(), T::zero());
    let mut a = b.clone();
    let mut rhs = x.to_vec();
    let mut perm: Vec<usize> = (0..l).collect();
    let steps = m.min(l);
    let mut rank = 0;
    let mut r00 = T::zero();
    let tol = T::epsilon() * T::from_usize_lossy(m.max(l));
    for k in 0..steps {
        let norms: Vec<T> = (k..l).map(|j| cnorm2(&a.col(j)[k..])).collect();
        let (off, big) = norms.iter().enumerate().fold((0, T::zero()), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        if k == 0 {
            r00 = big;
        }
        if big <= tol * r00 || big == T::zero() {
            break;
        }
        a.swap_cols(k, k + off);
        perm.swap(k, k + off);
        let x0 = a[(k, k)];
        let phase = if cabs(x0) == T::zero() { C::new(T::one(), T::zero()) } else { x0 / cabs(x0) };
        let alpha = -phase * big;
        let mut v: Vec<C<T>> = a.col(k)[k..].to_vec();
        v[0] -= alpha;
        let vn = cnorm2(&v);
        if vn > T::zero() {
            for z in v.iter_mut() {
                *z /= vn;
            }
            let reflect = |col: &mut [C<T>]| {
                let d = v.iter().zip(col.iter()).fold(zero, |acc, (p, q)| acc + p.conj() * *q);
                for (c, p) in col.iter_mut().zip(&v) {
                    *c -= *p * d * T::lit(2.0);
                }
            };
            for j in k..l {
                reflect(&mut a.col_mut(j)[k..]);
            }
            reflect(&mut rhs[k..]);
        }
        rank = k + 1;
    }
    let mut z = vec![zero; rank];
    for i in (0..rank).rev() {
        let mut s = rhs[i];
        for j in i + 1..rank {
            s -= a[(i, j)] * z[j];
        }
        z[i] = s / a[(i, i)];
    }
    let mut h = vec![zero; l];
    for (i, zi) in z.into_iter().enumerate() {
        h[perm[i]] = zi;
    }
    (h, rank)
}

/// `s + n` with `n` i.i.d. `N(0, σ²)`, deterministic per seed.
pub fn awgn<T: Real>(s: &[T], sigma: f64, seed: u64) -> Result<Vec<T>, FilterError> {
    let normal = Normal::new(0.0, sigma).map_err(|_| FilterError::InvalidSigma(sigma))?;
    if sigma < 0.0 {
        return Err(FilterError::InvalidSigma(sigma));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(s.iter().map(|x| *x + T::lit(normal.sample(&mut rng))).collect())
}

/// `10 log₁₀(‖x‖² / ‖noise‖²)` in decibels.
pub fn snr<T: Real>(x: &[T], noise: &[T]) -> f64 {
    let e = |v: &[T]| v.iter().map(|a| a.to_f64_lossy().powi(2)).sum::<f64>();
    10.0 * (e(x) / e(noise)).log10()
}

/// `‖a − b‖₂ / ‖b‖₂`.
pub fn relative_error<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    let d: Vec<C<T>> = a.iter().zip(b).map(|(p, q)| *p - *q).collect();
    cnorm2(&d) / cnorm2(b)
}
