//! Unbalanced Hessenberg reduction and Francis double-shift QR.
//!
//! Both routines follow the EISPACK `orthes`/`hqr2` structure (as in JAMA),
//! minus the balancing step and minus the final back-substitution: we keep
//! the real Schur form and its orthogonal factor and compute eigenvectors
//! from the complex Schur form instead.

use crate::matrix::Matrix;
use crate::scalar::{Real, C};

use super::NumlaError;

/// Maximum QR sweeps spent on a single eigenvalue before giving up.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 120;

/// Reduces `h` to upper Hessenberg form in place and returns the orthogonal
/// `Q` with `A = Q H Qᵀ` (or `None` if `want_q` is false).
pub(crate) fn hessenberg<T: Real>(h: &mut Matrix<T>, want_q: bool) -> Option<Matrix<T>> {
    let n = h.nrows();
    let mut ort = vec![T::zero(); n];
    if n > 2 {
        for m in 1..n - 1 {
            let scale: T = (m..n).map(|i| h[(i, m - 1)].abs()).sum();
            if scale == T::zero() {
                continue;
            }
            let mut hh = T::zero();
            for i in (m..n).rev() {
                ort[i] = h[(i, m - 1)] / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > T::zero() {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = T::zero();
                for i in (m..n).rev() {
                    f += ort[i] * h[(i, j)];
                }
                f /= hh;
                for i in m..n {
                    let d = f * ort[i];
                    h[(i, j)] -= d;
                }
            }
            for i in 0..n {
                let mut f = T::zero();
                for j in (m..n).rev() {
                    f += ort[j] * h[(i, j)];
                }
                f /= hh;
                for j in m..n {
                    let d = f * ort[j];
                    h[(i, j)] -= d;
                }
            }
            ort[m] *= scale;
            h[(m, m - 1)] = scale * g;
        }
    }

    let q = if want_q && n > 0 {
        let mut q = Matrix::<T>::identity(n);
        if n > 2 {
            for m in (1..n - 1).rev() {
                if h[(m, m - 1)] == T::zero() {
                    continue;
                }
                for i in m + 1..n {
                    ort[i] = h[(i, m - 1)];
                }
                for j in m..n {
                    let mut g = T::zero();
                    for i in m..n {
                        g += ort[i] * q[(i, j)];
                    }
                    // Double division avoids possible underflow.
                    g = (g / ort[m]) / h[(m, m - 1)];
                    for i in m..n {
                        let d = g * ort[i];
                        q[(i, j)] += d;
                    }
                }
            }
        }
        Some(q)
    } else {
        None
    };

    for j in 0..n {
        for i in j + 2..n {
            h[(i, j)] = T::zero();
        }
    }
    q
}

/// Real Schur form of an upper Hessenberg matrix.
///
/// On success `h` is quasi upper triangular (1×1 and 2×2 diagonal blocks,
/// negligible subdiagonal entries set to exactly zero) and, if given, `z` has
/// been multiplied by the accumulated orthogonal transformations. With
/// `z = None` only the active window is updated, which is enough for the
/// eigenvalues but leaves the off-window part of `h` meaningless.
pub(crate) fn francis_qr<T: Real>(
    h: &mut Matrix<T>,
    mut z: Option<&mut Matrix<T>>,
) -> Result<(), NumlaError> {
    let nn = h.nrows();
    if nn == 0 {
        return Ok(());
    }
    let full = z.is_some();
    let eps = T::epsilon();
    let half = T::lit(0.5);

    let mut norm = T::zero();
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut n = nn as isize - 1;
    let mut exshift = T::zero();
    let mut iter = 0usize;
    let (mut p, mut q, mut r, mut s, mut zz);
    let (mut w, mut x, mut y);

    while n >= 0 {
        let nu = n as usize;
        // Look for a single small subdiagonal element.
        let mut l = nu;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == T::zero() {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            // One root found.
            h[(nu, nu)] += exshift;
            if nu > 0 {
                h[(nu, nu - 1)] = T::zero();
            }
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // Two roots found.
            let m1 = nu - 1;
            w = h[(nu, m1)] * h[(m1, nu)];
            p = (h[(m1, m1)] - h[(nu, nu)]) * half;
            q = p * p + w;
            zz = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(m1, m1)] += exshift;
            if m1 > 0 {
                h[(m1, m1 - 1)] = T::zero();
            }

            if q >= T::zero() {
                // Real pair: rotate to upper triangular.
                zz = if p >= T::zero() { p + zz } else { p - zz };
                x = h[(nu, m1)];
                s = x.abs() + zz.abs();
                p = x / s;
                q = zz / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                let (jlo, jhi) = if full { (m1, nn) } else { (m1, nu + 1) };
                for j in jlo..jhi {
                    zz = h[(m1, j)];
                    h[(m1, j)] = q * zz + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * zz;
                }
                let ilo = if full { 0 } else { m1 };
                for i in ilo..=nu {
                    zz = h[(i, m1)];
                    h[(i, m1)] = q * zz + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * zz;
                }
                if let Some(zm) = z.as_deref_mut() {
                    for i in 0..nn {
                        zz = zm[(i, m1)];
                        zm[(i, m1)] = q * zz + p * zm[(i, nu)];
                        zm[(i, nu)] = q * zm[(i, nu)] - p * zz;
                    }
                }
                h[(nu, m1)] = T::zero();
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet.
            x = h[(nu, nu)];
            y = h[(nu - 1, nu - 1)];
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];

            if iter > 0 && iter % 20 == 10 {
                // Wilkinson's ad hoc shift.
                exshift += x;
                for i in 0..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = T::lit(0.75) * s;
                y = x;
                w = T::lit(-0.4375) * s * s;
            }
            if iter > 0 && iter.is_multiple_of(20) {
                // MATLAB's ad hoc shift.
                s = (y - x) * half;
                s = s * s + w;
                if s > T::zero() {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) * half + s);
                    for i in 0..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = T::lit(0.964);
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(NumlaError::NoConvergence {
                    what: "Francis QR",
                    iterations: iter,
                });
            }

            // Look for two consecutive small subdiagonal elements.
            let mut m = nu - 2;
            loop {
                zz = h[(m, m)];
                r = x - zz;
                s = y - zz;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - zz - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let lhs = h[(m, m - 1)].abs() * (q.abs() + r.abs());
                let rhs =
                    eps * (p.abs() * (h[(m - 1, m - 1)].abs() + zz.abs() + h[(m + 1, m + 1)].abs()));
                if lhs < rhs {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=nu {
                h[(i, i - 2)] = T::zero();
                if i > m + 2 {
                    h[(i, i - 3)] = T::zero();
                }
            }

            // Double QR step on rows l..=n, columns m..=n.
            for k in m..nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { T::zero() };
                    x = p.abs() + q.abs() + r.abs();
                    if x == T::zero() {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < T::zero() {
                    s = -s;
                }
                if s == T::zero() {
                    continue;
                }
                if k != m {
                    h[(k, k - 1)] = -s * x;
                } else if l != m {
                    h[(k, k - 1)] = -h[(k, k - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                zz = r / s;
                q /= p;
                r /= p;

                let jhi = if full { nn } else { nu + 1 };
                for j in k..jhi {
                    p = h[(k, j)] + q * h[(k + 1, j)];
                    if notlast {
                        p += r * h[(k + 2, j)];
                        h[(k + 2, j)] -= p * zz;
                    }
                    h[(k, j)] -= p * x;
                    h[(k + 1, j)] -= p * y;
                }
                let ilo = if full { 0 } else { l };
                for i in ilo..=nu.min(k + 3) {
                    p = x * h[(i, k)] + y * h[(i, k + 1)];
                    if notlast {
                        p += zz * h[(i, k + 2)];
                        h[(i, k + 2)] -= p * r;
                    }
                    h[(i, k)] -= p;
                    h[(i, k + 1)] -= p * q;
                }
                if let Some(zm) = z.as_deref_mut() {
                    for i in 0..nn {
                        p = x * zm[(i, k)] + y * zm[(i, k + 1)];
                        if notlast {
                            p += zz * zm[(i, k + 2)];
                            zm[(i, k + 2)] -= p * r;
                        }
                        zm[(i, k)] -= p;
                        zm[(i, k + 1)] -= p * q;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Eigenvalues of a quasi-triangular matrix, read off its diagonal blocks.
pub(crate) fn quasi_triangular_eigenvalues<T: Real>(t: &Matrix<T>) -> Vec<C<T>> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != T::zero() {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half = T::lit(0.5);
            let p = (a - d) * half;
            let disc = p * p + b * c;
            let mid = (a + d) * half;
            if disc < T::zero() {
                let im = (-disc).sqrt();
                out.push(C::new(mid, im));
                out.push(C::new(mid, -im));
            } else {
                let sq = disc.sqrt();
                out.push(C::new(mid + sq, T::zero()));
                out.push(C::new(mid - sq, T::zero()));
            }
            i += 2;
        } else {
            out.push(C::new(t[(i, i)], T::zero()));
            i += 1;
        }
    }
    out
}

/// Converts a real Schur pair `(T, Z)` to complex Schur form with unitary
/// Givens rotations on each 2×2 block.
pub(crate) fn real_to_complex_schur<T: Real>(
    t: &Matrix<T>,
    z: &Matrix<T>,
) -> (Matrix<C<T>>, Matrix<C<T>>) {
    let n = t.nrows();
    let mut tc = t.to_complex();
    let mut zc = z.to_complex();
    let half = T::lit(0.5);
    for m in (1..n).rev() {
        let sub = tc[(m, m - 1)];
        if sub == C::new(T::zero(), T::zero()) {
            continue;
        }
        let (a, b, c, d) = (tc[(m - 1, m - 1)], tc[(m - 1, m)], tc[(m, m - 1)], tc[(m, m)]);
        let p = (a - d) * half;
        let disc = (p * p + b * c).sqrt();
        let mu = (a + d) * half + disc - d;
        let r = (mu.norm_sqr() + sub.norm_sqr()).sqrt();
        let cs = mu / r;
        let sn = sub / r;
        // G = [conj(cs) sn; -sn cs], applied as T <- G T G^H, Z <- Z G^H.
        for j in m - 1..n {
            let (t1, t2) = (tc[(m - 1, j)], tc[(m, j)]);
            tc[(m - 1, j)] = cs.conj() * t1 + sn * t2;
            tc[(m, j)] = -sn.conj() * t1 + cs * t2;
        }
        for i in 0..=m {
            let (t1, t2) = (tc[(i, m - 1)], tc[(i, m)]);
            tc[(i, m - 1)] = t1 * cs + t2 * sn.conj();
            tc[(i, m)] = -t1 * sn + t2 * cs.conj();
        }
        for i in 0..n {
            let (z1, z2) = (zc[(i, m - 1)], zc[(i, m)]);
            zc[(i, m - 1)] = z1 * cs + z2 * sn.conj();
            zc[(i, m)] = -z1 * sn + z2 * cs.conj();
        }
        tc[(m, m - 1)] = C::new(T::zero(), T::zero());
    }
    (tc, zc)
}
