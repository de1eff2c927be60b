//! d-uniform hypergraphs and the H(n, p) sampler.
//!
//! Vertices are `0..n` internally; file formats and user-facing output add
//! one. Hyperedges are stored as sorted vertex tuples in one flat buffer,
//! and the edge list itself is kept in lexicographic order, so two
//! hypergraphs with the same edge set compare equal.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{self, WalkRng};
use crate::union_find::UnionFind;

/// Default cap on the number of subsets [`enumerate_possible_edges`] will yield.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    vertices: Vec<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph from 0-based hyperedges (any vertex order within
    /// an edge, any edge order). Duplicate hyperedges are rejected.
    pub fn new<E, I>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if n == 0 {
            return Err(Error::InvalidHypergraph("n must be at least 1".into()));
        }
        if d < 2 {
            return Err(Error::InvalidHypergraph(format!("uniformity d = {d} < 2")));
        }
        let mut list: Vec<Vec<usize>> = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            if e.len() != d {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {e:?} has {} vertices, expected {d}",
                    e.len()
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {e:?} repeats a vertex"
                )));
            }
            if e[d - 1] >= n {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {e:?} has a vertex outside 0..{n}"
                )));
            }
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidHypergraph(format!(
                "duplicate hyperedge {:?}",
                w[0]
            )));
        }
        Ok(Self {
            n,
            d,
            vertices: list.concat(),
        })
    }

    /// Same as [`Hypergraph::new`] but with vertex labels `1..=n`.
    pub fn from_one_based<E, I>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut shifted = Vec::new();
        for e in edges {
            let mut out = Vec::with_capacity(d);
            for &v in e.as_ref() {
                if v == 0 {
                    return Err(Error::InvalidHypergraph(
                        "vertex label 0 in 1-based input".into(),
                    ));
                }
                out.push(v - 1);
            }
            shifted.push(out);
        }
        Self::new(n, d, shifted)
    }

    /// Trusted constructor for edges already sorted and deduplicated.
    fn from_sorted_flat(n: usize, d: usize, vertices: Vec<usize>) -> Self {
        debug_assert_eq!(vertices.len() % d, 0);
        Self { n, d, vertices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() / self.d
    }

    pub fn edge(&self, k: usize) -> &[usize] {
        &self.vertices[k * self.d..(k + 1) * self.d]
    }

    /// Hyperedges in lexicographic order, each sorted ascending.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.vertices.chunks_exact(self.d)
    }

    /// Number of hyperedges containing each vertex.
    pub fn incidence_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.n];
        for &v in &self.vertices {
            counts[v] += 1;
        }
        counts
    }

    /// For every vertex, the indices of the hyperedges containing it (ascending).
    pub fn incidence_lists(&self) -> Vec<Vec<usize>> {
        let mut lists: Vec<Vec<usize>> = self
            .incidence_counts()
            .into_iter()
            .map(Vec::with_capacity)
            .collect();
        for (k, e) in self.edges().enumerate() {
            for &v in e {
                lists[v].push(k);
            }
        }
        lists
    }
}

/// True iff all vertices lie in one component of the graph in which two
/// vertices are adjacent when they share a hyperedge.
pub fn is_connected(h: &Hypergraph) -> bool {
    if h.n <= 1 {
        return true;
    }
    let mut uf = UnionFind::new(h.n);
    for e in h.edges() {
        for &v in &e[1..] {
            uf.union(e[0], v);
        }
    }
    uf.components() == 1
}

/// `C(n, k)`, or `None` if it does not fit in a `u64`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) is divisible by i at every step.
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Lexicographic iterator over the sorted `d`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    remaining: u64,
}

impl Combinations {
    fn new(n: usize, d: usize, count: u64) -> Self {
        Self {
            n,
            current: (0..d).collect(),
            remaining: count,
        }
    }

    fn advance(&mut self) {
        let d = self.current.len();
        let mut i = d;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.n - d + i {
                self.current[i] += 1;
                for t in i + 1..d {
                    self.current[t] = self.current[t - 1] + 1;
                }
                return;
            }
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current.clone();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// All `C(n, d)` candidate hyperedges (0-based) in lexicographic order,
/// guarded by [`DEFAULT_ENUMERATION_LIMIT`].
pub fn enumerate_possible_edges(n: usize, d: usize) -> Result<Combinations> {
    enumerate_possible_edges_with_limit(n, d, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_possible_edges_with_limit(n: usize, d: usize, limit: u64) -> Result<Combinations> {
    check_shape(n, d)?;
    match binomial(n as u64, d as u64) {
        Some(count) if count <= limit => Ok(Combinations::new(n, d, count)),
        _ => Err(Error::EnumerationTooLarge { n, d, limit }),
    }
}

/// The subset at lexicographic position `rank` among the `d`-subsets of `0..n`.
pub fn unrank_combination(n: usize, d: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(d);
    let mut v = 0usize;
    for t in 0..d {
        loop {
            // Subsets whose t-th element is v, given the prefix so far.
            let count = binomial((n - 1 - v) as u64, (d - 1 - t) as u64).unwrap_or(u64::MAX);
            if rank < count {
                break;
            }
            rank -= count;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    out
}

fn check_shape(n: usize, d: usize) -> Result<()> {
    if d < 2 || d > n {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= d <= n, got n = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// Parameters of one H(n, p) draw.
#[derive(Clone, Debug, PartialEq)]
pub struct GenerationParams {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub seed: u64,
    pub condition_on_connected: bool,
    pub max_resamples: u32,
    /// Candidate edges are scanned one by one when `p` is at least this
    /// value; below it the sampler skips geometrically between present
    /// edges, so its cost scales with the number of edges drawn.
    pub dense_scan_min_p: f64,
}

impl GenerationParams {
    pub fn new(n: usize, d: usize, p: f64, seed: u64) -> Self {
        Self {
            n,
            d,
            p,
            seed,
            condition_on_connected: false,
            max_resamples: 100,
            dense_scan_min_p: 0.1,
        }
    }

    pub fn connected(mut self, max_resamples: u32) -> Self {
        self.condition_on_connected = true;
        self.max_resamples = max_resamples;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_shape(self.n, self.d)?;
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!(
                "p = {} outside [0, 1]",
                self.p
            )));
        }
        if self.max_resamples == 0 {
            return Err(Error::InvalidParameter(
                "max_resamples must be at least 1".into(),
            ));
        }
        if binomial(self.n as u64, self.d as u64).is_none() {
            return Err(Error::InvalidParameter(format!(
                "C({}, {}) does not fit in 64 bits",
                self.n, self.d
            )));
        }
        Ok(())
    }
}

/// Samples from H(n, p). With `condition_on_connected`, attempt `k` uses seed
/// `mix(seed, k)` and the first connected sample is returned.
pub fn generate(params: &GenerationParams) -> Result<Hypergraph> {
    params.validate()?;
    if !params.condition_on_connected {
        return Ok(sample(params, params.seed));
    }
    for k in 0..params.max_resamples {
        let h = sample(params, rng::mix(params.seed, k as u64));
        if is_connected(&h) {
            return Ok(h);
        }
    }
    Err(Error::ConnectivityNotAchieved {
        attempts: params.max_resamples,
    })
}

fn sample(params: &GenerationParams, seed: u64) -> Hypergraph {
    let (n, d, p) = (params.n, params.d, params.p);
    let total = binomial(n as u64, d as u64).expect("validated");
    if p <= 0.0 || total == 0 {
        return Hypergraph::from_sorted_flat(n, d, Vec::new());
    }
    let mut rng = rng::rng_from_seed(seed);
    let vertices = if p >= 1.0 || p >= params.dense_scan_min_p {
        sample_dense(n, d, p, total, &mut rng)
    } else {
        sample_sparse(n, d, p, total, &mut rng)
    };
    Hypergraph::from_sorted_flat(n, d, vertices)
}

/// One Bernoulli draw per candidate, in lexicographic order.
fn sample_dense(n: usize, d: usize, p: f64, total: u64, rng: &mut WalkRng) -> Vec<usize> {
    let mut out = Vec::new();
    let mut combos = Combinations::new(n, d, total);
    for _ in 0..total {
        if rng::bernoulli(rng, p) {
            out.extend_from_slice(&combos.current);
        }
        combos.advance();
    }
    out
}

/// Geometric gaps between successive present candidates.
fn sample_sparse(n: usize, d: usize, p: f64, total: u64, rng: &mut WalkRng) -> Vec<usize> {
    let mut out = Vec::new();
    let log_q = libm::log1p(-p);
    let mut next: u64 = 0;
    loop {
        let gap = libm::floor(libm::log(rng::next_f64_open0(rng)) / log_q);
        if !(gap < (total - next) as f64) {
            break;
        }
        next += gap as u64;
        out.extend(unrank_combination(n, d, next));
        next += 1;
        if next >= total {
            break;
        }
    }
    out
}
