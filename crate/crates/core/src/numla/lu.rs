//! Complex LU with partial pivoting.

use crate::matrix::Matrix;
use crate::scalar::{cabs, Real, C};

use super::NumlaError;

/// `P A = L U`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    lu: Matrix<C<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Factors a square matrix. Fails only on an exactly zero pivot.
    pub fn new(a: &Matrix<C<T>>) -> Result<Self, NumlaError> {
        if !a.is_square() {
            return Err(NumlaError::NotSquare(a.nrows(), a.ncols()));
        }
        let n = a.nrows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, big) = (k..n)
                .map(|i| (i, cabs(lu[(i, k)])))
                .fold((k, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if big == T::zero() {
                return Err(NumlaError::Singular);
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                lu[(i, k)] /= d;
            }
            for j in k + 1..n {
                let ukj = lu[(k, j)];
                if ukj == C::new(T::zero(), T::zero()) {
                    continue;
                }
                for i in k + 1..n {
                    let l = lu[(i, k)];
                    lu[(i, j)] -= l * ukj;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C<T>]) -> Result<Vec<C<T>>, NumlaError> {
        let n = self.dim();
        if b.len() != n {
            return Err(NumlaError::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..n {
            let xj = x[j];
            for i in j + 1..n {
                x[i] -= self.lu[(i, j)] * xj;
            }
        }
        for j in (0..n).rev() {
            x[j] /= self.lu[(j, j)];
            let xj = x[j];
            for i in 0..j {
                x[i] -= self.lu[(i, j)] * xj;
            }
        }
        Ok(x)
    }

    /// Explicit inverse, column by column.
    pub fn inverse(&self) -> Matrix<C<T>> {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        let mut e = vec![C::new(T::zero(), T::zero()); n];
        for j in 0..n {
            e[j] = C::new(T::one(), T::zero());
            let col = self.solve(&e).expect("dimension checked");
            out.col_mut(j).copy_from_slice(&col);
            e[j] = C::new(T::zero(), T::zero());
        }
        out
    }
}
