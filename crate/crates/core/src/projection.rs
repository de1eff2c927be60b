//! Projection of a hypergraph onto its weighted multigraph.
//!
//! Each hyperedge becomes a clique on its `d` vertices; `a_ij` counts the
//! hyperedges containing both `i` and `j`. The walk that picks a uniform
//! incident hyperedge and then a uniform other vertex in it is exactly the
//! weighted-graph walk `P_ij = a_ij / d_i`. All combinatorial quantities are
//! integers; floats appear only in [`StationaryDist`] and
//! [`transition_matrix`].

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest `n` stored as a dense weight matrix by [`project`].
pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Weights {
    /// Row-major `n × n`.
    Dense(Vec<u32>),
    /// Per-vertex neighbour lists sorted by neighbour.
    Sparse(Vec<Vec<(usize, u32)>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    uniformity: usize,
    hyperedges: u64,
    weights: Weights,
    degrees: Vec<u64>,
    total_weight: u64,
}

impl Multigraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniformity `d` of the source hypergraph.
    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    /// Number of hyperedges in the source hypergraph.
    pub fn hyperedge_count(&self) -> u64 {
        self.hyperedges
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.weights, Weights::Dense(_))
    }

    /// `a_ij`.
    pub fn weight(&self, i: usize, j: usize) -> u64 {
        match &self.weights {
            Weights::Dense(w) => w[i * self.n + j] as u64,
            Weights::Sparse(rows) => rows[i]
                .binary_search_by_key(&j, |&(k, _)| k)
                .map_or(0, |pos| rows[i][pos].1 as u64),
        }
    }

    /// Nonzero entries `(j, a_ij)` of row `i`, ascending in `j`.
    pub fn neighbors(&self, i: usize) -> Vec<(usize, u64)> {
        match &self.weights {
            Weights::Dense(w) => w[i * self.n..(i + 1) * self.n]
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(j, &a)| (j, a as u64))
                .collect(),
            Weights::Sparse(rows) => rows[i].iter().map(|&(j, a)| (j, a as u64)).collect(),
        }
    }

    /// Multigraph degrees `d_i = Σ_j a_ij`.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `|Ẽ| = ½ Σ_i d_i`.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    fn require_positive_degrees(&self) -> Result<()> {
        match self.degrees.iter().position(|&d| d == 0) {
            Some(vertex) => Err(Error::ZeroDegree { vertex }),
            None => Ok(()),
        }
    }
}

pub fn project(h: &Hypergraph) -> Multigraph {
    project_with_cap(h, DEFAULT_DENSE_CAP)
}

/// Projects `h`, storing weights densely when `n <= dense_cap`.
pub fn project_with_cap(h: &Hypergraph, dense_cap: usize) -> Multigraph {
    let n = h.n();
    let d = h.d();
    let weights = if n <= dense_cap {
        let mut w = vec![0u32; n * n];
        for e in h.edges() {
            for &a in e {
                for &b in e {
                    if a != b {
                        w[a * n + b] += 1;
                    }
                }
            }
        }
        Weights::Dense(w)
    } else {
        let mut rows: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for e in h.edges() {
            for &a in e {
                for &b in e {
                    if a != b {
                        rows[a].push((b, 1));
                    }
                }
            }
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(j, _)| j);
            row.dedup_by(|next, kept| {
                if next.0 == kept.0 {
                    kept.1 += next.1;
                    true
                } else {
                    false
                }
            });
        }
        Weights::Sparse(rows)
    };

    let degrees: Vec<u64> = match &weights {
        Weights::Dense(w) => w
            .chunks_exact(n.max(1))
            .map(|r| r.iter().map(|&a| a as u64).sum())
            .collect(),
        Weights::Sparse(rows) => rows
            .iter()
            .map(|r| r.iter().map(|&(_, a)| a as u64).sum())
            .collect(),
    };
    let degree_sum: u64 = degrees.iter().sum();
    let hyperedges = h.edge_count() as u64;

    // d_i = (d-1)·#{e ∋ i} and |Ẽ| = C(d,2)·|E|.
    let incidence = h.incidence_counts();
    for (i, (&deg, &count)) in degrees.iter().zip(&incidence).enumerate() {
        assert_eq!(
            deg,
            (d as u64 - 1) * count as u64,
            "degree identity at vertex {i}"
        );
    }
    assert_eq!(degree_sum % 2, 0);
    let total_weight = degree_sum / 2;
    assert_eq!(total_weight, (d * (d - 1) / 2) as u64 * hyperedges);

    Multigraph {
        n,
        uniformity: d,
        hyperedges,
        weights,
        degrees,
        total_weight,
    }
}

/// Stationary distribution `π_i = d_i / (2|Ẽ|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryDist {
    pub pi: Vec<f64>,
}

pub fn stationary(mg: &Multigraph) -> Result<StationaryDist> {
    mg.require_positive_degrees()?;
    let two_e = (2 * mg.total_weight) as f64;
    Ok(StationaryDist {
        pi: mg.degrees.iter().map(|&d| d as f64 / two_e).collect(),
    })
}

/// `max_j |(πP)_j − π_j|`.
pub fn stationary_residual(mg: &Multigraph, dist: &StationaryDist) -> f64 {
    let mut left = vec![0.0; mg.n];
    for (i, &pi_i) in dist.pi.iter().enumerate() {
        let d_i = mg.degrees[i] as f64;
        for (j, a) in mg.neighbors(i) {
            left[j] += pi_i * a as f64 / d_i;
        }
    }
    left.iter()
        .zip(&dist.pi)
        .map(|(l, p)| libm::fabs(l - p))
        .fold(0.0, f64::max)
}

/// Row-stochastic `P_ij = a_ij / d_i`.
pub fn transition_matrix(mg: &Multigraph) -> Result<DMatrix<f64>> {
    mg.require_positive_degrees()?;
    let mut p = DMatrix::zeros(mg.n, mg.n);
    for i in 0..mg.n {
        let d_i = mg.degrees[i] as f64;
        for (j, a) in mg.neighbors(i) {
            p[(i, j)] = a as f64 / d_i;
        }
    }
    Ok(p)
}

/// Exact law of one two-stage step from `i`: for each target `j`, the pair
/// `(favourable, total)` counts over (incident hyperedge, other vertex)
/// choices, each equally likely.
pub fn two_stage_law(h: &Hypergraph, i: usize) -> Vec<(u64, u64)> {
    let mut favourable = vec![0u64; h.n()];
    let mut total = 0u64;
    for e in h.edges().filter(|e| e.contains(&i)) {
        // P(e) = 1/m and P(w | e) = 1/(d-1): every pair has mass 1/(m(d-1)).
        for &w in e.iter().filter(|&&w| w != i) {
            favourable[w] += 1;
            total += 1;
        }
    }
    favourable.into_iter().map(|f| (f, total)).collect()
}

/// True iff the two-stage law equals `a_ij / d_i` for every `i, j`
/// (cross-multiplied, integer arithmetic).
pub fn two_stage_matches_weighted(h: &Hypergraph, mg: &Multigraph) -> bool {
    (0..h.n()).all(|i| {
        two_stage_law(h, i)
            .into_iter()
            .enumerate()
            .all(|(j, (num, den))| num * mg.degrees[i] == mg.weight(i, j) * den)
    })
}

/// Detailed balance `π_i P_ij = π_j P_ji`, i.e. `a_ij = a_ji`, with a zero diagonal.
pub fn detailed_balance_exact(mg: &Multigraph) -> bool {
    (0..mg.n).all(|i| {
        mg.weight(i, i) == 0
            && mg
                .neighbors(i)
                .into_iter()
                .all(|(j, a)| mg.weight(j, i) == a)
    })
}
