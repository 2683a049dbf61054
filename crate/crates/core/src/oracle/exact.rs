//! Gaussian elimination over an exact field: rank, kernels, inverses and
//! an incremental echelon basis. Pivots are any nonzero entry, so these are
//! only sound for exact arithmetic.

use crate::matrix::Matrix;
use crate::scalar::Field;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let t = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = t;
            }
        }
        let inv = F::one() / m[(r, c)].clone();
        for j in c..cols {
            m[(r, j)] = m[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let d = f.clone() * m[(r, j)].clone();
                m[(i, j)] = m[(i, j)].clone() - d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of `{x : M x = 0}` read off the reduced echelon form.
pub fn nullspace<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let cols = m.ncols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Columns of `M` forming a basis of its column space.
pub fn column_space<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let pivots = rref(&mut m.clone());
    pivots.iter().map(|&c| m.col(c).to_vec()).collect()
}

/// Exact inverse, `None` if singular.
pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.nrows();
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            F::one()
        } else {
            F::zero()
        }
    });
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
}

pub fn determinant<F: Field>(m: &Matrix<F>) -> F {
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return F::zero();
        };
        if p != c {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = t;
            }
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det = det * piv.clone();
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone() / piv.clone();
            for j in c..n {
                let d = f.clone() * a[(c, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - d;
            }
        }
    }
    det
}

pub fn mat_pow<F: Field>(m: &Matrix<F>, k: usize) -> Matrix<F> {
    let mut out = Matrix::identity(m.nrows());
    for _ in 0..k {
        out = out.matmul(m);
    }
    out
}

/// Echelon basis grown one vector at a time. Each stored vector carries the
/// combination of inserted vectors it came from, so a dependency found on
/// insertion comes with its coefficients.
pub struct Echelon<F> {
    rows: Vec<(usize, Vec<F>, Vec<F>)>,
    inserted: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self { rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F], track: bool) -> (Vec<F>, Vec<F>) {
        let mut w = v.to_vec();
        let mut comb = if track { vec![F::zero(); self.inserted + 1] } else { Vec::new() };
        if track {
            comb[self.inserted] = F::one();
        }
        for (p, row, rc) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi = wi.clone() - f.clone() * ri.clone();
                }
            }
            if track {
                for (ci, ri) in comb.iter_mut().zip(rc) {
                    *ci = ci.clone() - f.clone() * ri.clone();
                }
            }
        }
        (w, comb)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v, false).0.iter().all(|x| x.is_zero())
    }

    /// Inserts `v`. Returns `Err(c)` with `Σ c_k x_k = 0` over all inserted
    /// vectors (`c` ends with 1 for `v`) if `v` was dependent.
    pub fn insert(&mut self, v: &[F]) -> Result<(), Vec<F>> {
        let (mut w, mut comb) = self.reduce(v, true);
        match w.iter().position(|x| !x.is_zero()) {
            None => Err(comb),
            Some(p) => {
                let inv = F::one() / w[p].clone();
                for x in w.iter_mut() {
                    *x = x.clone() * inv.clone();
                }
                for c in comb.iter_mut() {
                    *c = c.clone() * inv.clone();
                }
                // Keep earlier rows reduced at the new pivot so `reduce`
                // stays a single pass.
                for (_, row, rc) in self.rows.iter_mut() {
                    if row[p].is_zero() {
                        continue;
                    }
                    let f = row[p].clone();
                    for (ri, wi) in row.iter_mut().zip(&w) {
                        *ri = ri.clone() - f.clone() * wi.clone();
                    }
                    rc.resize(self.inserted + 1, F::zero());
                    for (ci, wc) in rc.iter_mut().zip(&comb) {
                        *ci = ci.clone() - f.clone() * wc.clone();
                    }
                }
                for (_, _, rc) in self.rows.iter_mut() {
                    rc.resize(self.inserted + 1, F::zero());
                }
                self.rows.push((p, w, comb));
                self.inserted += 1;
                Ok(())
            }
        }
    }
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_nullspace_inverse() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| *x == q(0)));
        assert!(inverse(&m).is_none());
        let a = qm(&[&[2, 1], &[1, 1]]);
        assert_eq!(inverse(&a).unwrap(), qm(&[&[1, -1], &[-1, 2]]));
        assert_eq!(determinant(&a), q(1));
        assert_eq!(determinant(&qm(&[&[0, 1], &[1, 0]])), q(-1));
    }

    #[test]
    fn echelon_reports_dependency() {
        let mut e = Echelon::new();
        e.insert(&[q(1), q(0), q(1)]).unwrap();
        e.insert(&[q(0), q(1), q(1)]).unwrap();
        let c = e.insert(&[q(2), q(3), q(5)]).unwrap_err();
        assert_eq!(c, vec![q(-2), q(-3), q(1)]);
        assert!(e.contains(&[q(1), q(1), q(2)]));
        assert_eq!(e.rank(), 2);
    }
}
