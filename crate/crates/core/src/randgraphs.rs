//! Seeded random digraph models.
//!
//! Procedures (the models are classically undirected; these are the directed
//! variants used here):
//!
//! * Erdős–Rényi: every ordered pair `i ≠ j` is an edge with probability `p`.
//! * Watts–Strogatz: ring lattice where `i` points to its `⌈k/2⌉` successors
//!   and `⌊k/2⌋` predecessors; each edge's target is then rewired with
//!   probability `beta` to a uniform vertex that keeps the graph simple.
//!   Exactly `n k` edges.
//! * Barabási–Albert: complete digraph on `seed_size` vertices; every new
//!   vertex attaches to `min(avg_deg, t)` distinct earlier vertices chosen
//!   with probability proportional to total degree + 1, each edge oriented
//!   by a fair coin.
//! * Klemm–Eguíluz: complete digraph on `seed_size` active vertices; a new
//!   vertex links to each active vertex with probability `1 − mu`, otherwise
//!   to a degree-preferential random vertex; orientation by a fair coin. The
//!   newcomer becomes active and one active vertex is deactivated with
//!   probability proportional to `1 / (degree + seed_size)`.
//!
//! Weak connectivity is enforced by drawing again from the same random
//! stream, up to `max_retries` extra attempts.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Digraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    ErdosRenyi { p: f64 },
    WattsStrogatz { k: usize, beta: f64 },
    BarabasiAlbert { seed_size: usize, avg_deg: usize },
    KlemmEguiluz { seed_size: usize, mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(flatten)]
    pub model: Model,
    pub n: usize,
    pub seed: u64,
    pub max_retries: usize,
}

impl ModelParams {
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        Self { model, n, seed, max_retries: 100 }
    }

    pub fn validate(&self) -> Result<(), RandGraphError> {
        let bad = |m: &str| Err(RandGraphError::InvalidParams(m.to_string()));
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if self.n == 0 {
            return bad("n must be positive");
        }
        match self.model {
            Model::ErdosRenyi { p } if !unit(p) => bad("p must lie in [0, 1]"),
            Model::WattsStrogatz { beta, .. } if !unit(beta) => bad("beta must lie in [0, 1]"),
            Model::WattsStrogatz { k, .. } if k >= self.n => bad("k must be below n"),
            Model::BarabasiAlbert { seed_size, avg_deg } if seed_size == 0 || seed_size >= self.n || avg_deg >= self.n => {
                bad("seed_size must lie in 1..n and avg_deg below n")
            }
            Model::KlemmEguiluz { mu, .. } if !unit(mu) => bad("mu must lie in [0, 1]"),
            Model::KlemmEguiluz { seed_size, .. } if seed_size == 0 || seed_size >= self.n => {
                bad("seed_size must lie in 1..n")
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandGraphError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no weakly connected graph after {attempts} attempts")]
    NotConnected { attempts: usize },
}

/// Weakly connected random digraph, deterministic per `params.seed`.
pub fn generate(params: &ModelParams) -> Result<Digraph, RandGraphError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for attempt in 0..=params.max_retries {
        let edges = match params.model {
            Model::ErdosRenyi { p } => erdos_renyi(params.n, p, &mut rng),
            Model::WattsStrogatz { k, beta } => watts_strogatz(params.n, k, beta, &mut rng),
            Model::BarabasiAlbert { seed_size, avg_deg } => barabasi_albert(params.n, seed_size, avg_deg, &mut rng),
            Model::KlemmEguiluz { seed_size, mu } => klemm_eguiluz(params.n, seed_size, mu, &mut rng),
        };
        let g = Digraph::from_edges(params.n, edges).expect("generators emit simple digraphs");
        if g.is_weakly_connected() {
            return Ok(g);
        }
        log::debug!("attempt {attempt} not weakly connected, drawing again");
    }
    Err(RandGraphError::NotConnected { attempts: params.max_retries + 1 })
}

type EdgeSet = BTreeSet<(usize, usize)>;

fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> EdgeSet {
    let mut e = EdgeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < p {
                e.insert((i, j));
            }
        }
    }
    e
}

fn watts_strogatz(n: usize, k: usize, beta: f64, rng: &mut impl Rng) -> EdgeSet {
    let fwd = k.div_ceil(2);
    let mut lattice = Vec::with_capacity(n * k);
    for i in 0..n {
        for d in 1..=fwd {
            lattice.push((i, (i + d) % n));
        }
        for d in 1..=k - fwd {
            lattice.push((i, (i + n - d) % n));
        }
    }
    let mut e: EdgeSet = lattice.iter().copied().collect();
    for &(i, j) in &lattice {
        if rng.random::<f64>() >= beta {
            continue;
        }
        // Out-degree of i is k < n − 1 only if some target is free.
        let free: Vec<usize> = (0..n).filter(|&t| t != i && !e.contains(&(i, t))).collect();
        if free.is_empty() {
            continue;
        }
        let t = free[rng.random_range(0..free.len())];
        e.remove(&(i, j));
        e.insert((i, t));
    }
    e
}

fn complete(m: usize) -> EdgeSet {
    (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// Index drawn with probability proportional to `weights`.
fn weighted_pick(weights: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    for (k, w) in weights.iter().enumerate() {
        if x < *w {
            return k;
        }
        x -= w;
    }
    weights.len() - 1
}

fn orient(e: &mut EdgeSet, a: usize, b: usize, rng: &mut impl Rng) {
    if rng.random::<bool>() {
        e.insert((a, b));
    } else {
        e.insert((b, a));
    }
}

fn linked(e: &EdgeSet, a: usize, b: usize) -> bool {
    e.contains(&(a, b)) || e.contains(&(b, a))
}

fn barabasi_albert(n: usize, seed_size: usize, avg_deg: usize, rng: &mut impl Rng) -> EdgeSet {
    let mut e = complete(seed_size);
    let mut deg = vec![0usize; n];
    for &(i, j) in &e {
        deg[i] += 1;
        deg[j] += 1;
    }
    for t in seed_size..n {
        let m = avg_deg.min(t);
        let mut chosen = BTreeSet::new();
        while chosen.len() < m {
            let w: Vec<f64> =
                (0..t).map(|s| if chosen.contains(&s) { 0.0 } else { deg[s] as f64 + 1.0 }).collect();
            chosen.insert(weighted_pick(&w, rng));
        }
        for s in chosen {
            orient(&mut e, t, s, rng);
            deg[t] += 1;
            deg[s] += 1;
        }
    }
    e
}

fn klemm_eguiluz(n: usize, seed_size: usize, mu: f64, rng: &mut impl Rng) -> EdgeSet {
    let mut e = complete(seed_size);
    let mut deg = vec![0usize; n];
    for &(i, j) in &e {
        deg[i] += 1;
        deg[j] += 1;
    }
    let mut active: Vec<usize> = (0..seed_size).collect();
    for t in seed_size..n {
        for &a in &active {
            let target = if rng.random::<f64>() >= mu {
                a
            } else {
                let w: Vec<f64> =
                    (0..t).map(|s| if linked(&e, t, s) { 0.0 } else { deg[s] as f64 + 1.0 }).collect();
                if w.iter().all(|x| *x == 0.0) {
                    continue;
                }
                weighted_pick(&w, rng)
            };
            if linked(&e, t, target) {
                continue;
            }
            orient(&mut e, t, target, rng);
            deg[t] += 1;
            deg[target] += 1;
        }
        let w: Vec<f64> = active.iter().map(|&a| 1.0 / (deg[a] + seed_size) as f64).collect();
        let out = weighted_pick(&w, rng);
        active[out] = t;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_er() {
        let g = generate(&ModelParams::new(Model::ErdosRenyi { p: 1.0 }, 10, 3)).unwrap();
        assert_eq!(g.edge_count(), 90);
        assert!(!g.has_self_loops());
    }

    #[test]
    fn er_edge_count_on_average() {
        let mut total = 0usize;
        for seed in 0..100 {
            total += generate(&ModelParams::new(Model::ErdosRenyi { p: 0.02 }, 500, seed)).unwrap().edge_count();
        }
        let mean = total as f64 / 100.0;
        assert!((mean - 4990.0).abs() <= 0.05 * 4990.0, "{mean}");
    }

    #[test]
    fn deterministic_per_seed() {
        for model in [
            Model::ErdosRenyi { p: 0.1 },
            Model::WattsStrogatz { k: 4, beta: 0.2 },
            Model::BarabasiAlbert { seed_size: 3, avg_deg: 2 },
            Model::KlemmEguiluz { seed_size: 3, mu: 0.3 },
        ] {
            let p = ModelParams::new(model, 40, 9);
            let a = generate(&p).unwrap();
            assert_eq!(a, generate(&p).unwrap());
            assert_ne!(a, generate(&ModelParams { seed: 10, ..p }).unwrap());
            assert!(a.is_weakly_connected());
        }
    }

    #[test]
    fn sizes_at_two_hundred() {
        let ws = generate(&ModelParams::new(Model::WattsStrogatz { k: 10, beta: 0.001 }, 200, 1)).unwrap();
        assert_eq!(ws.edge_count(), 2000);
        let ba = generate(&ModelParams::new(Model::BarabasiAlbert { seed_size: 10, avg_deg: 10 }, 200, 1)).unwrap();
        assert_eq!(ba.edge_count(), 90 + 190 * 10);
        let ke = generate(&ModelParams::new(Model::KlemmEguiluz { seed_size: 10, mu: 0.1 }, 200, 1)).unwrap();
        assert!((1800..=2000).contains(&ke.edge_count()), "{}", ke.edge_count());
    }

    #[test]
    fn ba_in_degrees_are_skewed() {
        let g = generate(&ModelParams::new(Model::BarabasiAlbert { seed_size: 3, avg_deg: 2 }, 500, 4)).unwrap();
        let mut d = g.in_degrees();
        d.sort_unstable();
        let median = d[d.len() / 2].max(1);
        assert!(*d.last().unwrap() >= 3 * median);
    }

    #[test]
    fn invalid_params_and_connectivity_failure() {
        assert!(generate(&ModelParams::new(Model::ErdosRenyi { p: 1.5 }, 5, 0)).is_err());
        assert!(generate(&ModelParams::new(Model::WattsStrogatz { k: 5, beta: 0.0 }, 5, 0)).is_err());
        let p = ModelParams { max_retries: 2, ..ModelParams::new(Model::ErdosRenyi { p: 0.0 }, 5, 0) };
        assert_eq!(generate(&p), Err(RandGraphError::NotConnected { attempts: 3 }));
    }
}
