//! Singular values of complex matrices.
//!
//! Householder bidiagonalization, then the diagonal and superdiagonal are
//! replaced by their moduli (a unitary diagonal scaling, so the singular
//! values do not change) and the real bidiagonal goes through Golub–Kahan
//! implicit-shift QR.

use crate::matrix::Matrix;
use crate::scalar::{cabs, Real, C};

/// Budget of QR sweeps per singular value.
const MAX_SWEEPS: usize = 75;

/// Singular values in descending order. Wide matrices are handled through
/// their adjoint.
pub fn singular_values<T: Real>(a: &Matrix<C<T>>) -> Vec<T> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let mut w = if m >= n { a.clone() } else { a.adjoint() };
    let (d, e) = bidiagonalize(&mut w);
    let mut s = golub_kahan_values(d, e);
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    s
}

pub fn singular_values_real<T: Real>(a: &Matrix<T>) -> Vec<T> {
    singular_values(&a.to_complex())
}

/// Hermitian reflector `H = I - 2 u uᴴ / (uᴴ u)` mapping `x` onto a multiple
/// of `e_1`. Returns `None` when `x` is already zero.
fn reflector<T: Real>(x: &[C<T>]) -> Option<(Vec<C<T>>, T)> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if norm == T::zero() {
        return None;
    }
    let a0 = cabs(x[0]);
    let phase = if a0 == T::zero() { C::new(T::one(), T::zero()) } else { x[0] / a0 };
    let mut u = x.to_vec();
    u[0] += phase * norm;
    let uu = u.iter().map(|z| z.norm_sqr()).sum::<T>();
    if uu == T::zero() {
        return None;
    }
    Some((u, uu))
}

/// Reduces `w` (m ≥ n) to upper bidiagonal form; returns `(|d|, |e|)` with
/// `e` padded to length n.
fn bidiagonalize<T: Real>(w: &mut Matrix<C<T>>) -> (Vec<T>, Vec<T>) {
    let (m, n) = w.shape();
    let two = T::lit(2.0);
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for k in 0..n {
        // Left reflector on column k, rows k..m.
        let x: Vec<C<T>> = w.col(k)[k..].to_vec();
        if let Some((u, uu)) = reflector(&x) {
            for j in k..n {
                let col = &mut w.col_mut(j)[k..];
                let mut s = C::new(T::zero(), T::zero());
                for (ui, ci) in u.iter().zip(col.iter()) {
                    s += ui.conj() * *ci;
                }
                let f = s * (two / uu);
                for (ui, ci) in u.iter().zip(col.iter_mut()) {
                    *ci -= *ui * f;
                }
            }
        }
        d[k] = cabs(w[(k, k)]);
        if k + 1 < n {
            // Right reflector on row k, columns k+1..n: H built from the
            // conjugated row so that row * H lands on e_1.
            let x: Vec<C<T>> = (k + 1..n).map(|j| w[(k, j)].conj()).collect();
            if let Some((u, uu)) = reflector(&x) {
                for i in k..m {
                    let mut s = C::new(T::zero(), T::zero());
                    for (t, j) in (k + 1..n).enumerate() {
                        s += w[(i, j)] * u[t];
                    }
                    let f = s * (two / uu);
                    for (t, j) in (k + 1..n).enumerate() {
                        let upd = f * u[t].conj();
                        w[(i, j)] -= upd;
                    }
                }
            }
            e[k] = cabs(w[(k, k + 1)]);
        }
    }
    (d, e)
}

/// Values-only Golub–Kahan SVD iteration on a real upper bidiagonal matrix
/// (diagonal `s`, superdiagonal `e`, `e[n-1] = 0`).
fn golub_kahan_values<T: Real>(mut s: Vec<T>, mut e: Vec<T>) -> Vec<T> {
    let n = s.len();
    let eps = T::epsilon();
    let tiny = T::min_positive_value();
    let mut p = n;
    let mut iter = 0usize;

    while p > 0 {
        // Find the largest k such that e[k] is negligible.
        let mut k = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny + eps * (s[ku].abs() + s[ku + 1].abs()) {
                e[ku] = T::zero();
                break;
            }
            k -= 1;
        }
        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let t = (if ksu != p { e[ksu].abs() } else { T::zero() })
                    + (if ks != k + 1 { e[ksu - 1].abs() } else { T::zero() });
                if s[ksu].abs() <= tiny + eps * t {
                    s[ksu] = T::zero();
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            // Deflate negligible s[p-1].
            1 => {
                let mut f = e[p - 2];
                e[p - 2] = T::zero();
                for j in (k..=p - 2).rev() {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    if j != k {
                        f = -sn * e[j - 1];
                        e[j - 1] = cs * e[j - 1];
                    }
                }
            }
            // Split at negligible s[k-1].
            2 => {
                let mut f = e[k - 1];
                e[k - 1] = T::zero();
                for j in k..p {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    f = -sn * e[j];
                    e[j] = cs * e[j];
                }
            }
            // One QR step.
            3 => {
                let scale = s[p - 1]
                    .abs()
                    .max(s[p - 2].abs())
                    .max(e[p - 2].abs())
                    .max(s[k].abs())
                    .max(e[k].abs());
                let sp = s[p - 1] / scale;
                let spm1 = s[p - 2] / scale;
                let epm1 = e[p - 2] / scale;
                let sk = s[k] / scale;
                let ek = e[k] / scale;
                let b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / T::lit(2.0);
                let c = (sp * epm1) * (sp * epm1);
                let mut shift = T::zero();
                if b != T::zero() || c != T::zero() {
                    shift = (b * b + c).sqrt();
                    if b < T::zero() {
                        shift = -shift;
                    }
                    shift = c / (b + shift);
                }
                let mut f = (sk + sp) * (sk - sp) + shift;
                let mut g = sk * ek;
                for j in k..p - 1 {
                    let mut t = f.hypot(g);
                    let mut cs = f / t;
                    let mut sn = g / t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs * s[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * s[j];
                    g = sn * s[j + 1];
                    s[j + 1] = cs * s[j + 1];
                    t = f.hypot(g);
                    cs = f / t;
                    sn = g / t;
                    s[j] = t;
                    f = cs * e[j] + sn * s[j + 1];
                    s[j + 1] = -sn * e[j] + cs * s[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] = cs * e[j + 1];
                }
                e[p - 2] = f;
                iter += 1;
                if iter > MAX_SWEEPS * n {
                    log::warn!("bidiagonal QR did not converge; returning current estimates");
                    return s.into_iter().map(|x| x.abs()).collect();
                }
            }
            // Convergence.
            _ => {
                if s[k] <= T::zero() {
                    s[k] = -s[k];
                }
                p -= 1;
            }
        }
    }
    s
}
