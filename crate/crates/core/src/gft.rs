//! Graph Fourier basis of a diagonalizable shift, total-variation ordering
//! and the approximation diagnostics for a repaired shift.

use std::fmt::Write as _;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::numla::{self, eig_general, numerical_rank, Lu, NumlaError, Tolerances};
use crate::scalar::{cabs, Real, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GftError {
    #[error("eigenvectors are rank deficient (sigma_min = {sigma_min:e} <= {eps:e}); run destroy_jordan_blocks first")]
    RankDeficient { sigma_min: f64, eps: f64 },
    #[error("|lambda_max| = {0:e} is numerically zero, total variation is undefined")]
    Nilpotent(f64),
    #[error("length {found} does not match n = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Numla(#[from] NumlaError),
}

/// Fourier basis: `M = V diag(λ) F`, columns in ascending total variation.
#[derive(Debug, Clone)]
pub struct FourierBasis<T: Real> {
    pub eigenvalues: Vec<C<T>>,
    /// Unit-norm eigenvectors.
    pub v: Matrix<C<T>>,
    /// `V⁻¹`.
    pub f: Matrix<C<T>>,
    /// Total variation of each column, scaled to unit 1-norm.
    pub tv: Vec<T>,
    pub lambda_max_abs: T,
    /// Set when `M` is numerically nilpotent and `tv` holds `‖v − M v‖₁`.
    pub tv_unnormalized: bool,
    lu: Lu<T>,
}

fn cnorm1<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| cabs(*z)).sum()
}

fn real_mul_vec<T: Real>(m: &Matrix<T>, v: &[C<T>]) -> Vec<C<T>> {
    let n = m.nrows();
    let mut out = vec![C::new(T::zero(), T::zero()); n];
    for (j, x) in v.iter().enumerate() {
        for (o, a) in out.iter_mut().zip(m.col(j)) {
            *o += *x * *a;
        }
    }
    out
}

/// `‖v − (M / s) v‖₁` for a given scale `s`.
pub fn total_variation_scaled<T: Real>(m: &Matrix<T>, v: &[C<T>], scale: T) -> T {
    real_mul_vec(m, v).iter().zip(v).map(|(mv, x)| cabs(*x - *mv / scale)).sum()
}

/// `‖v − (M / |λ_max|) v‖₁`. Fails when `|λ_max| ≤ eps_z`.
pub fn total_variation<T: Real>(m: &Matrix<T>, v: &[C<T>], eps_z: T) -> Result<T, GftError> {
    if v.len() != m.nrows() {
        return Err(GftError::DimensionMismatch { expected: m.nrows(), found: v.len() });
    }
    let lmax = spectral_radius(m)?;
    if lmax <= eps_z {
        return Err(GftError::Nilpotent(lmax.to_f64_lossy()));
    }
    Ok(total_variation_scaled(m, v, lmax))
}

pub fn spectral_radius<T: Real>(m: &Matrix<T>) -> Result<T, GftError> {
    Ok(numla::eigenvalues(m)?.iter().map(|z| cabs(*z)).fold(T::zero(), T::max))
}

/// TV of each column after scaling it to unit 1-norm. The flag is set when
/// `|λ_max| ≤ eps_z` and the unnormalized `‖v − M v‖₁` was used instead.
fn column_tvs<T: Real>(m: &Matrix<T>, v: &Matrix<C<T>>, lmax: T, eps_z: T) -> (Vec<T>, bool) {
    let nil = lmax <= eps_z;
    let scale = if nil { T::one() } else { lmax };
    let tvs = (0..v.ncols())
        .map(|k| {
            let col = v.col(k);
            let n1 = cnorm1(col);
            if n1 == T::zero() {
                return T::zero();
            }
            let unit: Vec<C<T>> = col.iter().map(|z| *z / n1).collect();
            total_variation_scaled(m, &unit, scale)
        })
        .collect();
    (tvs, nil)
}

/// Ascending TV; values within `1e-9 (1 + tv)` of their predecessor count as
/// tied and are ordered by eigenvalue argument, then by index.
fn tv_order<T: Real>(tv: &[T], values: &[C<T>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..tv.len()).collect();
    idx.sort_by(|&a, &b| tv[a].partial_cmp(&tv[b]).unwrap().then(a.cmp(&b)));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && tv[idx[end]] - tv[idx[end - 1]] <= T::lit(1e-9) * (T::one() + tv[idx[end - 1]]) {
            end += 1;
        }
        let mut run = idx[start..end].to_vec();
        run.sort_by(|&a, &b| values[a].arg().partial_cmp(&values[b].arg()).unwrap().then(a.cmp(&b)));
        out.extend(run);
        start = end;
    }
    out
}

/// Fourier basis of a shift whose eigenvectors have full numerical rank.
pub fn build_fourier<T: Real>(m: &Matrix<T>, tol: &Tolerances) -> Result<FourierBasis<T>, GftError> {
    tol.validate()?;
    let n = m.nrows();
    let ep = eig_general(m)?;
    let eps_r = T::lit(tol.eps_r);
    if numerical_rank(&ep.vectors, eps_r) < n {
        let s = numla::singular_values(&ep.vectors);
        return Err(GftError::RankDeficient {
            sigma_min: s.last().map_or(0.0, |x| x.to_f64_lossy()),
            eps: tol.eps_r,
        });
    }
    let lmax = ep.values.iter().map(|z| cabs(*z)).fold(T::zero(), T::max);
    let (tv, nil) = column_tvs(m, &ep.vectors, lmax, T::lit(tol.eps_z));
    if nil {
        log::warn!("shift is numerically nilpotent, total variation left unnormalized");
    }
    let order = tv_order(&tv, &ep.values);
    let v = ep.vectors.select_cols(&order);
    let lu = Lu::new(&v)?;
    Ok(FourierBasis {
        eigenvalues: order.iter().map(|&k| ep.values[k]).collect(),
        tv: order.iter().map(|&k| tv[k]).collect(),
        f: lu.inverse(),
        v,
        lambda_max_abs: lmax,
        tv_unnormalized: nil,
        lu,
    })
}

impl<T: Real> FourierBasis<T> {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    fn check(&self, len: usize) -> Result<(), GftError> {
        if len == self.n() {
            Ok(())
        } else {
            Err(GftError::DimensionMismatch { expected: self.n(), found: len })
        }
    }

    /// `ŝ = F s`, by solving `V ŝ = s`.
    pub fn transform(&self, s: &[C<T>]) -> Result<Vec<C<T>>, GftError> {
        self.check(s.len())?;
        Ok(self.lu.solve(s)?)
    }

    pub fn transform_real(&self, s: &[T]) -> Result<Vec<C<T>>, GftError> {
        let c: Vec<C<T>> = s.iter().map(|x| C::new(*x, T::zero())).collect();
        self.transform(&c)
    }

    /// `s = V ŝ`.
    pub fn inverse_transform(&self, s_hat: &[C<T>]) -> Result<Vec<C<T>>, GftError> {
        self.check(s_hat.len())?;
        Ok(self.v.mul_vec(s_hat))
    }

    pub fn condition_number(&self) -> T {
        numla::condition_number(&self.v)
    }
}

/// `F M V − diag(λ)` against another shift `M` of the same size, with its
/// numerical rank at `eps_r`.
pub fn diag_residual<T: Real>(
    fb: &FourierBasis<T>,
    m: &Matrix<T>,
    eps_r: T,
) -> Result<(Matrix<C<T>>, usize), GftError> {
    fb.check(m.nrows())?;
    let mv = m.to_complex().matmul(&fb.v);
    let mut r = fb.f.matmul(&mv);
    for k in 0..fb.n() {
        r[(k, k)] -= fb.eigenvalues[k];
    }
    let rank = numerical_rank(&r, eps_r);
    Ok((r, rank))
}

/// Number of entries of `M v − λ v` with modulus above `zero_tol`.
pub fn l0_residual<T: Real>(m: &Matrix<T>, v: &[C<T>], lambda: C<T>, zero_tol: T) -> usize {
    real_mul_vec(m, v).iter().zip(v).filter(|(mv, x)| cabs(**mv - lambda * **x) > zero_tol).count()
}

/// TV of each basis vector under the old and the new shift.
#[derive(Debug, Clone)]
pub struct TvComparison<T> {
    /// `(tv_old, tv_new)` per column of the basis.
    pub pairs: Vec<(T, T)>,
    /// Spearman rank correlation of the two columns of `pairs`.
    pub correlation: f64,
    /// The old shift was nilpotent, so `tv_old` is `‖v − M_old v‖₁`.
    pub old_unnormalized: bool,
}

pub fn tv_compare<T: Real>(
    m_old: &Matrix<T>,
    fb: &FourierBasis<T>,
    eps_z: T,
) -> Result<TvComparison<T>, GftError> {
    fb.check(m_old.nrows())?;
    let lmax = spectral_radius(m_old)?;
    let (old, nil) = column_tvs(m_old, &fb.v, lmax, eps_z);
    let a: Vec<f64> = old.iter().map(|x| x.to_f64_lossy()).collect();
    let b: Vec<f64> = fb.tv.iter().map(|x| x.to_f64_lossy()).collect();
    Ok(TvComparison {
        pairs: old.into_iter().zip(fb.tv.iter().copied()).collect(),
        correlation: spearman(&a, &b),
        old_unnormalized: nil,
    })
}

/// Ranks starting at 1; values within `1e-9 (1 + |x|)` of the run start
/// are tied and get the average rank.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] - x[idx[i]] <= 1e-9 * (1.0 + x[idx[i]].abs()) {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman correlation; 1 if the rankings agree but have no variance.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        return if ra == rb { 1.0 } else { 0.0 };
    }
    cov / (va * vb).sqrt()
}

/// `index,eigenvalue_re,eigenvalue_im,tv,coefficient_re,coefficient_im`.
pub fn spectrum_csv<T: Real>(fb: &FourierBasis<T>, s_hat: &[C<T>]) -> String {
    let mut out = String::from("index,eigenvalue_re,eigenvalue_im,tv,coefficient_re,coefficient_im\n");
    for k in 0..fb.n() {
        let (l, c) = (fb.eigenvalues[k], s_hat[k]);
        let _ = writeln!(out, "{k},{:?},{:?},{:?},{:?},{:?}", l.re, l.im, fb.tv[k], c.re, c.im);
    }
    out
}

/// `col,row,re,im` in column-major order.
pub fn basis_csv<T: Real>(v: &Matrix<C<T>>) -> String {
    let mut out = String::from("col,row,re,im\n");
    for j in 0..v.ncols() {
        for (i, z) in v.col(j).iter().enumerate() {
            let _ = writeln!(out, "{j},{i},{:?},{:?}", z.re, z.im);
        }
    }
    out
}

/// Counts of off-diagonal angles (each pair once) in bins of `width`
/// degrees covering `[0, 90]`; the last bin is closed.
pub fn angle_histogram<T: Real>(angles: &Matrix<T>, width: f64) -> Vec<(f64, f64, usize)> {
    let bins = (90.0 / width).ceil().max(1.0) as usize;
    let mut counts = vec![0usize; bins];
    let n = angles.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let a = angles[(i, j)].to_f64_lossy();
            counts[((a / width) as usize).min(bins - 1)] += 1;
        }
    }
    counts.into_iter().enumerate().map(|(k, c)| (k as f64 * width, ((k + 1) as f64 * width).min(90.0), c)).collect()
}

pub fn angle_histogram_csv(hist: &[(f64, f64, usize)]) -> String {
    let mut out = String::from("bin_lo_deg,bin_hi_deg,count\n");
    for (lo, hi, c) in hist {
        let _ = writeln!(out, "{lo},{hi},{c}");
    }
    out
}
