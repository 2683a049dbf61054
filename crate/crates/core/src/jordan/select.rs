//! Edge scoring and the choice of which block to attack next.

use rand::Rng;

use crate::graph::{DegreeConvention, Digraph};
use crate::matrix::Matrix;
use crate::numla::Bilateral;
use crate::scalar::{cabs, Real, C};

use super::{EdgeChoice, JordanError, ShiftMode};

/// Scores within this relative distance of the maximum count as tied.
const TIE_REL: f64 = 1e-3;

/// Index of the column whose row of the angle matrix has the most entries
/// below `eps_d` (degrees). Ties go to the smallest index.
pub fn largest_block_group_index<T: Real>(angles: &Matrix<T>, eps_d: T) -> usize {
    let counts = angle_counts(angles, eps_d);
    let best = counts.iter().copied().max().unwrap_or(0);
    counts.iter().position(|&c| c == best).unwrap_or(0)
}

pub(crate) fn angle_counts<T: Real>(angles: &Matrix<T>, eps_d: T) -> Vec<usize> {
    let n = angles.nrows();
    (0..n).map(|k| (0..n).filter(|&i| i == k || angles[(k, i)] < eps_d).count()).collect()
}

/// `tr(ΔM · P)` for the shift change `ΔM` of adding edge `(i, j)`, where `P`
/// is given entrywise by `p(row, col)`.
fn edge_term<T: Real>(mode: ShiftMode, p: &impl Fn(usize, usize) -> C<T>, i: usize, j: usize) -> C<T> {
    match mode {
        ShiftMode::Adjacency => p(j, i),
        // ΔL = (e_j − e_i) e_jᵀ
        ShiftMode::Laplacian(DegreeConvention::InDegree) => p(j, j) - p(j, i),
        // ΔL = e_i (e_i − e_j)ᵀ
        ShiftMode::Laplacian(DegreeConvention::OutDegree) => p(i, i) - p(j, i),
    }
}

fn admissible(mode: ShiftMode, g: &Digraph, i: usize, j: usize) -> bool {
    !g.has_edge(i, j) && (i != j || mode == ShiftMode::Adjacency)
}

/// In adjacency mode an edge `(i, j)` that closes no cycle leaves the
/// characteristic polynomial unchanged, so it cannot meet the block
/// condition; such edges are skipped when `reach` is given.
pub(crate) type Reach = Vec<Vec<bool>>;

pub(crate) fn cycle_filter(mode: ShiftMode, g: &Digraph) -> Option<Reach> {
    (mode == ShiftMode::Adjacency).then(|| g.reachability())
}

/// Best admissible edge under `score`, or `None` if every score is
/// negligible.
fn best_edge<T: Real>(
    mode: ShiftMode,
    g: &Digraph,
    reach: Option<&Reach>,
    p: &impl Fn(usize, usize) -> C<T>,
) -> Option<EdgeChoice> {
    let n = g.n();
    let mut scores = Vec::new();
    let mut max = T::zero();
    for i in 0..n {
        for j in 0..n {
            if admissible(mode, g, i, j) && reach.is_none_or(|r| r[j][i]) {
                let s = cabs(edge_term(mode, p, i, j));
                max = max.max(s);
                scores.push((i, j, s));
            }
        }
    }
    if max <= T::epsilon().sqrt() {
        return None;
    }
    let cut = max * (T::one() - T::lit(TIE_REL));
    scores
        .into_iter()
        .find(|&(_, _, s)| s >= cut)
        .map(|(i, j, s)| EdgeChoice { i, j, score: s.to_f64_lossy(), fallback: false })
}

/// Uniformly random absent edge; self-loops only when nothing else is left
/// (and never for Laplacians).
pub(crate) fn random_edge(mode: ShiftMode, g: &Digraph, rng: &mut impl Rng) -> Result<EdgeChoice, JordanError> {
    let n = g.n();
    let mut pool: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && !g.has_edge(i, j)).collect();
    if pool.is_empty() && mode == ShiftMode::Adjacency {
        pool = (0..n).filter(|&i| !g.has_edge(i, i)).map(|i| (i, i)).collect();
    }
    if pool.is_empty() {
        return Err(JordanError::GraphComplete);
    }
    let (i, j) = pool[rng.random_range(0..pool.len())];
    Ok(EdgeChoice { i, j, score: 0.0, fallback: true })
}

fn choose<T: Real>(
    mode: ShiftMode,
    g: &Digraph,
    reach: Option<&Reach>,
    p: impl Fn(usize, usize) -> C<T>,
    rng: &mut impl Rng,
) -> Result<EdgeChoice, JordanError> {
    match best_edge(mode, g, reach, &p) {
        Some(c) => Ok(c),
        None => random_edge(mode, g, rng),
    }
}

fn check_lengths<T>(g: &Digraph, u: &[T], v: &[T]) -> Result<(), JordanError> {
    for len in [u.len(), v.len()] {
        if len != g.n() {
            return Err(JordanError::DimensionMismatch { expected: g.n(), found: len });
        }
    }
    Ok(())
}

/// Absent edge `(i, j)` maximizing `|u_i| |v_j|`.
pub fn choose_edge_adjacency<T: Real>(
    u: &[C<T>],
    v: &[C<T>],
    g: &Digraph,
    rng: &mut impl Rng,
) -> Result<EdgeChoice, JordanError> {
    check_lengths(g, u, v)?;
    choose(ShiftMode::Adjacency, g, None, |r, c| v[r] * u[c], rng)
}

/// As [`choose_edge_adjacency`], restricted to edges that close a cycle.
pub(crate) fn choose_cycle_closing<T: Real>(
    u: &[C<T>],
    v: &[C<T>],
    g: &Digraph,
    rng: &mut impl Rng,
) -> Result<EdgeChoice, JordanError> {
    check_lengths(g, u, v)?;
    let reach = g.reachability();
    choose(ShiftMode::Adjacency, g, Some(&reach), |r, c| v[r] * u[c], rng)
}

/// Absent edge `(i, j)`, `i ≠ j`, maximizing `|v_j| |u_j − u_i|` (in-degree)
/// or `|u_i| |v_i − v_j|` (out-degree).
pub fn choose_edge_laplacian<T: Real>(
    u: &[C<T>],
    v: &[C<T>],
    g: &Digraph,
    conv: DegreeConvention,
    rng: &mut impl Rng,
) -> Result<EdgeChoice, JordanError> {
    check_lengths(g, u, v)?;
    choose(ShiftMode::Laplacian(conv), g, None, |r, c| v[r] * u[c], rng)
}

/// Picks the edge for one iteration of the block destruction loop.
///
/// Columns with the largest angle count are the candidate blocks. Each
/// group of mutually parallel candidates is scored through one
/// representative column, and the lexicographically smallest of the groups'
/// best edges wins, so the result does not depend on the order in which the
/// eigensolver returns the groups. When no two columns are within `eps_d`
/// the two columns of the closest pair are the candidates.
pub(crate) fn choose_for_blocks<T: Real>(
    mode: ShiftMode,
    g: &Digraph,
    eig: &Bilateral<T>,
    angles: &Matrix<T>,
    eps_d: T,
    rng: &mut impl Rng,
) -> Result<EdgeChoice, JordanError> {
    let n = g.n();
    let counts = angle_counts(angles, eps_d);
    let cmax = counts.iter().copied().max().unwrap_or(1);

    let mut reps = Vec::new();
    if cmax == 1 {
        let mut best = (0, 0, T::infinity());
        for i in 0..n {
            for j in i + 1..n {
                if angles[(i, j)] < best.2 {
                    best = (i, j, angles[(i, j)]);
                }
            }
        }
        reps.push(best.0);
        if best.1 != best.0 {
            reps.push(best.1);
        }
    } else {
        let mut taken = vec![false; n];
        for k in 0..n {
            if counts[k] != cmax || taken[k] {
                continue;
            }
            reps.push(k);
            for i in 0..n {
                if i == k || angles[(k, i)] < eps_d {
                    taken[i] = true;
                }
            }
        }
    }

    let reach = cycle_filter(mode, g);
    let picks = reps.iter().filter_map(|&k| {
        let (u, v) = (eig.left.col(k), eig.right.col(k));
        best_edge(mode, g, reach.as_ref(), &|r: usize, c: usize| v[r] * u[c])
    });
    match picks.min_by_key(|c| (c.i, c.j)) {
        Some(c) => Ok(c),
        None => random_edge(mode, g, rng),
    }
}
