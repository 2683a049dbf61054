//! Exact verification on small instances.
//!
//! Everything here works over an exact [`Field`] (in practice
//! `BigRational`): characteristic and minimal polynomials, diagonalizability,
//! Jordan structure at rational eigenvalues, Jordan chains, and the
//! combinatorial (cycle cover) characteristic polynomial.
//!
//! Size bounds: algebraic routines accept n ≤ 32, the cycle-cover expansion
//! n ≤ 12.

pub mod exact;
mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::{DegreeConvention, Digraph, GraphError};
use crate::matrix::Matrix;
use crate::scalar::Field;

pub use poly::Polynomial;

/// Exact matrix over arbitrary-precision rationals.
pub type RationalMatrix = Matrix<BigRational>;
/// Exact polynomial with rational coefficients (integers for graphs).
pub type IntPolynomial = Polynomial<BigRational>;

/// Largest matrix accepted by the algebraic routines.
pub const ALGEBRAIC_SIZE_BOUND: usize = 32;
/// Largest graph accepted by the cycle-cover expansion.
pub const COATES_SIZE_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("size {n} exceeds the bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("cycle-cover expansion needs an unweighted graph")]
    Weighted,
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(String),
    #[error("vector length {found} does not match n = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Jordan data for one eigenvalue, blocks ordered by decreasing size.
///
/// `right[k]` is the eigenvector heading block k's chain and `left[k]` the
/// row of `V⁻¹` dual to the chain's last vector, for a Jordan basis `V`. With
/// that normalization `left[k]ᵀ M = λ left[k]ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanData<F> {
    pub sizes: Vec<usize>,
    pub right: Vec<Vec<F>>,
    pub left: Vec<Vec<F>>,
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite weight")
}

pub fn adjacency_rational(g: &Digraph) -> RationalMatrix {
    let mut a = Matrix::zeros(g.n(), g.n());
    for (i, j) in g.edges() {
        a[(i, j)] = rational_from_f64(g.weight(i, j).unwrap_or(1.0));
    }
    a
}

pub fn laplacian_rational(g: &Digraph, conv: DegreeConvention) -> Result<RationalMatrix, OracleError> {
    let l: Matrix<f64> = g.laplacian_matrix(conv)?;
    Ok(l.map(|x| rational_from_f64(*x)))
}

fn check_square_bound<F>(m: &Matrix<F>, bound: usize) -> Result<usize, OracleError> {
    if !m.is_square() {
        return Err(OracleError::NotSquare(m.nrows(), m.ncols()));
    }
    if m.nrows() > bound {
        return Err(OracleError::TooLarge { n: m.nrows(), bound });
    }
    Ok(m.nrows())
}

fn from_usize<F: Field>(k: usize) -> F {
    (0..k).fold(F::zero(), |acc, _| acc + F::one())
}

/// `det(xI − M)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly_exact<F: Field>(m: &Matrix<F>) -> Result<Polynomial<F>, OracleError> {
    let n = check_square_bound(m, ALGEBRAIC_SIZE_BOUND)?;
    let mut c = vec![F::zero(); n + 1];
    c[n] = F::one();
    let mut mk: Matrix<F> = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k) / k
        let mut next = m.matmul(&mk);
        for i in 0..n {
            next[(i, i)] = next[(i, i)].clone() + c[n - k + 1].clone();
        }
        mk = next;
        let tr = m.matmul(&mk).trace();
        c[n - k] = -tr / from_usize::<F>(k);
    }
    Ok(Polynomial::new(c))
}

/// Characteristic polynomial from vertex-disjoint cycle covers:
/// `a_{n−k} = Σ_H (−1)^{c(H)}` over spanning unions `H` of simple cycles on
/// `k` vertices. Self-loops count as cycles of length one.
pub fn char_poly_coates(g: &Digraph) -> Result<IntPolynomial, OracleError> {
    let n = g.n();
    if n > COATES_SIZE_BOUND {
        return Err(OracleError::TooLarge { n, bound: COATES_SIZE_BOUND });
    }
    if g.is_weighted() {
        return Err(OracleError::Weighted);
    }
    let full = 1usize << n;
    let mut out_mask = vec![0usize; n];
    for (i, j) in g.edges() {
        out_mask[i] |= 1 << j;
    }

    // cycles[mask]: directed simple cycles whose vertex set is exactly mask,
    // counted once each by walking from the mask's smallest vertex.
    let mut cycles = vec![0i128; full];
    let mut paths = vec![0i128; full * n];
    for s in 0..n {
        if out_mask[s] >> s & 1 == 1 {
            cycles[1 << s] = 1;
        }
        paths[(1 << s) * n + s] = 1;
        // Masks containing s whose other members are all larger than s,
        // visited in increasing order so subpaths are complete.
        let higher = (full - 1) & !((1usize << (s + 1)) - 1);
        let mut sub = 0usize;
        loop {
            let mask = sub | (1 << s);
            for v in 0..n {
                let cnt = paths[mask * n + v];
                if cnt == 0 {
                    continue;
                }
                if mask != 1 << s && out_mask[v] >> s & 1 == 1 {
                    cycles[mask] += cnt;
                }
                let mut nexts = out_mask[v] & higher & !mask;
                while nexts != 0 {
                    let w = nexts.trailing_zeros() as usize;
                    nexts &= nexts - 1;
                    paths[(mask | 1 << w) * n + w] += cnt;
                }
            }
            if sub == higher {
                break;
            }
            sub = (sub.wrapping_sub(higher)) & higher;
        }
    }

    // covers[S] = Σ over cycle covers of S of (−1)^{#cycles}.
    let mut covers = vec![0i128; full];
    covers[0] = 1;
    for set in 1..full {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
        let mut acc = 0i128;
        // Enumerate T = low ∪ sub for sub ⊆ rest.
        let mut sub = rest;
        loop {
            let t = sub | low;
            if cycles[t] != 0 {
                acc -= cycles[t] * covers[set ^ t];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        covers[set] = acc;
    }

    let mut coeffs = vec![0i128; n + 1];
    for set in 0..full {
        coeffs[n - set.count_ones() as usize] += covers[set];
    }
    Ok(Polynomial::new(coeffs.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect()))
}

/// Least-degree monic annihilating polynomial, from the first linear
/// dependence among `vec(I), vec(M), vec(M²), …`.
pub fn minimal_polynomial<F: Field>(m: &Matrix<F>) -> Result<Polynomial<F>, OracleError> {
    let n = check_square_bound(m, ALGEBRAIC_SIZE_BOUND)?;
    let mut basis = exact::Echelon::new();
    let mut power: Matrix<F> = Matrix::identity(n);
    for _ in 0..=n {
        match basis.insert(power.as_slice()) {
            Ok(()) => power = power.matmul(m),
            Err(comb) => return Ok(Polynomial::new(comb)),
        }
    }
    unreachable!("Cayley–Hamilton bounds the degree by n")
}

/// Diagonalizable over ℂ iff the minimal polynomial is square-free.
pub fn is_diagonalizable_exact<F: Field>(m: &Matrix<F>) -> Result<bool, OracleError> {
    let mp = minimal_polynomial(m)?;
    Ok(mp.degree() == Some(0) || mp.is_square_free())
}

fn shifted<F: Field>(m: &Matrix<F>, lambda: &F) -> Matrix<F> {
    let mut nm = m.clone();
    for i in 0..m.nrows() {
        nm[(i, i)] = nm[(i, i)].clone() - lambda.clone();
    }
    nm
}

fn check_eigenvalue<F: Field>(m: &Matrix<F>, lambda: &F) -> Result<(), OracleError> {
    if !char_poly_exact(m)?.eval(lambda).is_zero() {
        return Err(OracleError::NotAnEigenvalue(format!("{lambda:?}")));
    }
    Ok(())
}

/// Rank sequence `r_k = rank((M − λI)^k)` for k = 0, 1, … until it
/// stabilizes.
fn rank_sequence<F: Field>(nm: &Matrix<F>) -> Vec<usize> {
    let n = nm.nrows();
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    loop {
        p = p.matmul(nm);
        let r = exact::rank(&p);
        let last = *ranks.last().unwrap();
        ranks.push(r);
        if r == last {
            return ranks;
        }
    }
}

/// Jordan block sizes for eigenvalue `lambda`, largest first.
pub fn jordan_structure_at<F: Field>(m: &Matrix<F>, lambda: &F) -> Result<Vec<usize>, OracleError> {
    check_square_bound(m, ALGEBRAIC_SIZE_BOUND)?;
    check_eigenvalue(m, lambda)?;
    let r = rank_sequence(&shifted(m, lambda));
    // #blocks of size ≥ k is r_{k−1} − r_k.
    let at_least: Vec<usize> = r.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let ge_k = at_least[k - 1];
        let ge_k1 = at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, ge_k - ge_k1));
    }
    Ok(sizes)
}

/// Jordan chains for `lambda` with dual left eigenvectors.
pub fn jordan_data_at<F: Field>(m: &Matrix<F>, lambda: &F) -> Result<JordanData<F>, OracleError> {
    let n = check_square_bound(m, ALGEBRAIC_SIZE_BOUND)?;
    check_eigenvalue(m, lambda)?;
    let nm = shifted(m, lambda);
    let index = rank_sequence(&nm).len() - 2;
    let kernels: Vec<Vec<Vec<F>>> = (0..=index).map(|k| exact::nullspace(&exact::mat_pow(&nm, k))).collect();

    // (size, top vector), found level by level from the top.
    let mut tops: Vec<(usize, Vec<F>)> = Vec::new();
    for k in (1..=index).rev() {
        let mut span = exact::Echelon::new();
        for v in &kernels[k - 1] {
            let _ = span.insert(v);
        }
        for (s, x) in &tops {
            let _ = span.insert(&exact::mat_pow(&nm, s - k).mul_vec(x));
        }
        for b in &kernels[k] {
            if span.insert(b).is_ok() {
                tops.push((k, b.clone()));
            }
        }
    }

    // Basis: each chain as [N^{s−1}x, …, N x, x], then a basis of range(N^index)
    // which spans the other generalized eigenspaces.
    let mut cols: Vec<Vec<F>> = Vec::new();
    let mut last_col = Vec::new();
    let mut right = Vec::new();
    for (s, x) in &tops {
        for p in (0..*s).rev() {
            cols.push(exact::mat_pow(&nm, p).mul_vec(x));
        }
        right.push(cols[cols.len() - s].clone());
        last_col.push(cols.len() - 1);
    }
    cols.extend(exact::column_space(&exact::mat_pow(&nm, index)));
    debug_assert_eq!(cols.len(), n);
    let basis = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let inv = exact::inverse(&basis).expect("Jordan basis is invertible");
    let left = last_col.iter().map(|&c| inv.row(c)).collect();
    Ok(JordanData { sizes: tops.iter().map(|t| t.0).collect(), right, left })
}

/// Characteristic polynomial of `M + a bᵀ`.
pub fn char_poly_after_rank1<F: Field>(
    m: &Matrix<F>,
    a: &[F],
    b: &[F],
) -> Result<Polynomial<F>, OracleError> {
    let n = check_square_bound(m, ALGEBRAIC_SIZE_BOUND)?;
    for v in [a, b] {
        if v.len() != n {
            return Err(OracleError::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let pert = Matrix::from_fn(n, n, |i, j| m[(i, j)].clone() + a[i].clone() * b[j].clone());
    char_poly_exact(&pert)
}

/// Rational roots of a polynomial with rational coefficients, ascending and
/// without multiplicity. `None` when a coefficient is too large for the
/// divisor search.
pub fn rational_roots(p: &IntPolynomial) -> Option<Vec<BigRational>> {
    if p.is_zero() {
        return None;
    }
    let lcm = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap();
    if shift > 0 {
        roots.push(BigRational::zero());
    }
    let a0 = ints[shift].abs().to_i128()?;
    let an = ints.last().unwrap().abs().to_i128()?;
    let divisors = |x: i128| -> Option<Vec<i128>> {
        if x > 1 << 40 {
            return None;
        }
        let mut d = Vec::new();
        let mut k = 1;
        while k * k <= x {
            if x % k == 0 {
                d.push(k);
                if k * k != x {
                    d.push(x / k);
                }
            }
            k += 1;
        }
        Some(d)
    };
    let q = Polynomial::new(p.coeffs()[shift..].to_vec());
    for num in divisors(a0)? {
        for den in divisors(an)? {
            for sign in [-1i128, 1] {
                let r = BigRational::new(BigInt::from(sign * num), BigInt::from(den));
                if q.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}
