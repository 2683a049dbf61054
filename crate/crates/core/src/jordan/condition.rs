//! Destruction conditions for a perturbation `B` against given Jordan data.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::matrix::Matrix;
use crate::oracle::{exact, JordanData};
use crate::scalar::Field;

use super::JordanError;

/// Scalars the condition checkers can decide "nonzero" for: exactly for
/// rationals, against 1e-10 for floats.
pub trait ConditionScalar: Field {
    fn is_negligible(&self) -> bool;
}

impl ConditionScalar for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl ConditionScalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-10
    }
}

impl ConditionScalar for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-10
    }
}

impl ConditionScalar for Complex<f64> {
    fn is_negligible(&self) -> bool {
        self.norm() <= 1e-10
    }
}

impl ConditionScalar for Complex<f32> {
    fn is_negligible(&self) -> bool {
        self.norm() <= 1e-10
    }
}

fn bilinear<F: Field>(u: &[F], b: &Matrix<F>, v: &[F]) -> F {
    let bv = b.mul_vec(v);
    u.iter().zip(&bv).fold(F::zero(), |s, (x, y)| s + x.clone() * y.clone())
}

/// `Σ_k u_kᵀ B v_k`.
pub fn rank1_condition_sum<F: Field>(us: &[Vec<F>], vs: &[Vec<F>], b: &Matrix<F>) -> Result<F, JordanError> {
    if us.len() != vs.len() {
        return Err(JordanError::LengthMismatch { left: us.len(), right: vs.len() });
    }
    let n = b.nrows();
    for w in us.iter().chain(vs) {
        if w.len() != n || b.ncols() != n {
            return Err(JordanError::DimensionMismatch { expected: n, found: w.len() });
        }
    }
    Ok(us.iter().zip(vs).fold(F::zero(), |s, (u, v)| s + bilinear(u, b, v)))
}

/// Whether `B` is guaranteed to remove the `rho` largest blocks.
///
/// With `r_s` the number of blocks of size at least the s-th distinct size,
/// `s` is chosen by `r_{s−1} < rho ≤ r_s`, `Φ_s = (u_iᵀ B v_j)` over the first
/// `r_s` blocks, and the test is that the sum of the principal `rho × rho`
/// minors of `Φ_s` containing the leading `r_{s−1}` indices is nonzero.
pub fn theorem1_condition<F: ConditionScalar>(
    blocks: &JordanData<F>,
    b: &Matrix<F>,
    rho: usize,
) -> Result<bool, JordanError> {
    let sizes = &blocks.sizes;
    // Cumulative counts at each distinct size: r_1 < r_2 < ...
    let mut r = vec![0usize];
    for k in 1..=sizes.len() {
        if k == sizes.len() || sizes[k] != sizes[k - 1] {
            r.push(k);
        }
    }
    let s = (1..r.len()).find(|&s| r[s - 1] < rho && rho <= r[s]).ok_or(JordanError::RhoOutOfRange {
        rho,
        max: sizes.len(),
    })?;
    let (fixed, rs) = (r[s - 1], r[s]);
    // Shape check only.
    rank1_condition_sum(&blocks.left[..rs], &blocks.right[..rs], b)?;
    let phi = Matrix::from_fn(rs, rs, |i, j| bilinear(&blocks.left[i], b, &blocks.right[j]));

    // Choose rho − fixed further indices from fixed..rs.
    let free: Vec<usize> = (fixed..rs).collect();
    let mut total = F::zero();
    let mut pick = Vec::new();
    subsets(&free, rho - fixed, 0, &mut pick, &mut |extra| {
        let idx: Vec<usize> = (0..fixed).chain(extra.iter().copied()).collect();
        let sub = Matrix::from_fn(rho, rho, |i, j| phi[(idx[i], idx[j])].clone());
        total = total.clone() + exact::determinant(&sub);
    });
    Ok(!total.is_negligible())
}

fn subsets(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        subsets(pool, k, i + 1, cur, f);
        cur.pop();
    }
}
