//! Simulation of the hypergraph walk.
//!
//! From vertex `v` the walk picks a hyperedge containing `v` uniformly at
//! random, then a uniform vertex `w ≠ v` of that hyperedge. The equivalent
//! weighted-graph walk (`P_vw = a_vw / d_v`) is available as an alternative
//! semantics; both have the same one-step law.
//!
//! Trial `t` of an estimator draws from its own generator seeded with
//! `mix(cfg.seed, t)`, so trials can run in any order or in parallel and
//! still give identical samples. Aggregation always walks the samples in
//! trial order.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::projection::Multigraph;
use crate::rng::{self, WalkRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Uniform incident hyperedge, then uniform other vertex.
    #[default]
    TwoStage,
    /// Neighbour `w` with probability `a_vw / d_v`.
    WeightedGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartRule {
    Fixed(usize),
    /// Start drawn from the stationary distribution (first draw of each trial).
    Stationary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_steps: u64,
    pub start_rule: StartRule,
    pub semantics: Semantics,
}

impl WalkConfig {
    pub fn new(seed: u64, trials: u64) -> Self {
        Self {
            seed,
            trials,
            max_steps: 100_000_000,
            start_rule: StartRule::Fixed(0),
            semantics: Semantics::TwoStage,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter(
                "max_steps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Sample mean with its standard error. Truncated trials are excluded from
/// `mean` and `stderr`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials_used: u64,
    pub truncated: u64,
}

impl Estimate {
    /// Aggregates per-trial samples (`None` = truncated) in order.
    pub fn from_samples(samples: &[Option<u64>]) -> Result<Self> {
        let (mut count, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
        for x in samples.iter().flatten() {
            count += 1;
            let x = *x as f64;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
        }
        let trials = samples.len() as u64;
        if count == 0 {
            return Err(Error::AllTrialsTruncated { trials });
        }
        let stderr = if count > 1 {
            libm::sqrt(m2 / (count - 1) as f64 / count as f64)
        } else {
            0.0
        };
        Ok(Self {
            mean,
            stderr,
            trials_used: trials,
            truncated: trials - count,
        })
    }

    /// True when some trials were cut off; the mean is then biased low.
    pub fn biased(&self) -> bool {
        self.truncated > 0
    }
}

/// What a trial measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    /// First passage from `from` to `to`.
    Hitting { from: usize, to: usize },
    /// Round trip `a → b → a`.
    Commute { a: usize, b: usize },
    /// Time until every vertex has been visited, from `cfg.start_rule`.
    Cover,
}

/// Immutable per-instance lookup tables for stepping.
#[derive(Clone, Debug)]
pub struct Walker {
    n: usize,
    d: usize,
    edges: Vec<usize>,
    incidence: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
    cumulative: Vec<Vec<u64>>,
    degrees: Vec<u64>,
    degree_prefix: Vec<u64>,
}

impl Walker {
    /// Builds the tables. Instances with a vertex in no hyperedge are
    /// rejected: the walk is undefined there.
    pub fn new(h: &Hypergraph, mg: &Multigraph) -> Result<Self> {
        if h.n() != mg.n() {
            return Err(Error::InvalidParameter(
                "hypergraph and multigraph sizes differ".into(),
            ));
        }
        if let Some(vertex) = mg.degrees().iter().position(|&d| d == 0) {
            return Err(Error::ZeroDegree { vertex });
        }
        let mut neighbors = Vec::with_capacity(h.n());
        let mut cumulative = Vec::with_capacity(h.n());
        for i in 0..h.n() {
            let mut acc = 0;
            let (ns, cs): (Vec<usize>, Vec<u64>) = mg
                .neighbors(i)
                .into_iter()
                .map(|(j, a)| {
                    acc += a;
                    (j, acc)
                })
                .unzip();
            neighbors.push(ns);
            cumulative.push(cs);
        }
        let mut degree_prefix = Vec::with_capacity(h.n());
        let mut acc = 0;
        for &d in mg.degrees() {
            acc += d;
            degree_prefix.push(acc);
        }
        Ok(Self {
            n: h.n(),
            d: h.d(),
            edges: h.edges().flatten().copied().collect(),
            incidence: h.incidence_lists(),
            neighbors,
            cumulative,
            degrees: mg.degrees().to_vec(),
            degree_prefix,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// One step from `v`.
    #[inline]
    pub fn step<R: RngCore>(&self, v: usize, rng: &mut R, semantics: Semantics) -> usize {
        match semantics {
            Semantics::TwoStage => {
                let inc = &self.incidence[v];
                let e = inc[rng::uniform_below(rng, inc.len() as u64) as usize];
                let edge = &self.edges[e * self.d..(e + 1) * self.d];
                let r = rng::uniform_below(rng, (self.d - 1) as u64) as usize;
                // Skip v's own slot.
                if edge[r] < v {
                    edge[r]
                } else {
                    edge[r + 1]
                }
            }
            Semantics::WeightedGraph => {
                let u = rng::uniform_below(rng, self.degrees[v]);
                let cum = &self.cumulative[v];
                self.neighbors[v][cum.partition_point(|&c| c <= u)]
            }
        }
    }

    /// Vertex drawn from `π`.
    pub fn stationary_draw<R: RngCore>(&self, rng: &mut R) -> usize {
        let total = *self.degree_prefix.last().expect("n >= 1");
        let u = rng::uniform_below(rng, total);
        self.degree_prefix.partition_point(|&c| c <= u)
    }

    /// Generator for trial `t` under `seed`.
    pub fn trial_rng(seed: u64, t: u64) -> WalkRng {
        rng::rng_from_seed(rng::mix(seed, t))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
        }
        Ok(())
    }

    /// Validates `est` against this instance and `cfg`.
    pub fn check(&self, est: &Estimator, cfg: &WalkConfig) -> Result<()> {
        cfg.validate()?;
        match *est {
            Estimator::Hitting { from: a, to: b } | Estimator::Commute { a, b } => {
                self.check_vertex(a)?;
                self.check_vertex(b)?;
                if a == b {
                    return Err(Error::InvalidParameter(
                        "start and target must differ".into(),
                    ));
                }
            }
            Estimator::Cover => {
                if let StartRule::Fixed(v) = cfg.start_rule {
                    self.check_vertex(v)?;
                }
            }
        }
        Ok(())
    }

    /// Runs trial `t`; `None` if it reached `cfg.max_steps`.
    pub fn trial(&self, est: &Estimator, cfg: &WalkConfig, t: u64) -> Option<u64> {
        let mut rng = Self::trial_rng(cfg.seed, t);
        let sem = cfg.semantics;
        match *est {
            Estimator::Hitting { from, to } => {
                self.first_passage(from, to, 0, cfg.max_steps, &mut rng, sem)
            }
            Estimator::Commute { a, b } => {
                let out = self.first_passage(a, b, 0, cfg.max_steps, &mut rng, sem)?;
                self.first_passage(b, a, out, cfg.max_steps, &mut rng, sem)
            }
            Estimator::Cover => {
                let start = match cfg.start_rule {
                    StartRule::Fixed(v) => v,
                    StartRule::Stationary => self.stationary_draw(&mut rng),
                };
                self.cover(start, cfg.max_steps, &mut rng, sem)
            }
        }
    }

    fn first_passage(
        &self,
        from: usize,
        to: usize,
        elapsed: u64,
        max_steps: u64,
        rng: &mut WalkRng,
        sem: Semantics,
    ) -> Option<u64> {
        let mut v = from;
        let mut t = elapsed;
        while v != to {
            if t >= max_steps {
                return None;
            }
            v = self.step(v, rng, sem);
            t += 1;
        }
        Some(t)
    }

    fn cover(
        &self,
        start: usize,
        max_steps: u64,
        rng: &mut WalkRng,
        sem: Semantics,
    ) -> Option<u64> {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut missing = self.n - 1;
        let (mut v, mut t) = (start, 0u64);
        while missing > 0 {
            if t >= max_steps {
                return None;
            }
            v = self.step(v, rng, sem);
            t += 1;
            if !seen[v] {
                seen[v] = true;
                missing -= 1;
            }
        }
        Some(t)
    }

    /// All trials in order, serially.
    pub fn samples(&self, est: &Estimator, cfg: &WalkConfig) -> Result<Vec<Option<u64>>> {
        self.check(est, cfg)?;
        Ok((0..cfg.trials).map(|t| self.trial(est, cfg, t)).collect())
    }

    pub fn estimate(&self, est: &Estimator, cfg: &WalkConfig) -> Result<Estimate> {
        Estimate::from_samples(&self.samples(est, cfg)?)
    }
}

pub fn estimate_hitting(w: &Walker, i: usize, j: usize, cfg: &WalkConfig) -> Result<Estimate> {
    w.estimate(&Estimator::Hitting { from: i, to: j }, cfg)
}

pub fn estimate_commute(w: &Walker, i: usize, j: usize, cfg: &WalkConfig) -> Result<Estimate> {
    w.estimate(&Estimator::Commute { a: i, b: j }, cfg)
}

pub fn estimate_cover(w: &Walker, cfg: &WalkConfig) -> Result<Estimate> {
    w.estimate(&Estimator::Cover, cfg)
}

/// Counts of the next vertex over `samples` independent steps from `v`.
pub fn next_step_counts(w: &Walker, v: usize, samples: u64, seed: u64, sem: Semantics) -> Vec<u64> {
    let mut rng = rng::rng_from_seed(seed);
    let mut counts = vec![0u64; w.n];
    for _ in 0..samples {
        counts[w.step(v, &mut rng, sem)] += 1;
    }
    counts
}

/// Pearson statistic of `counts` against `probs`, over cells with positive
/// probability. Returns `(statistic, degrees_of_freedom)`; observations in
/// zero-probability cells make the statistic infinite.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> (f64, usize) {
    let total: u64 = counts.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&c, &p) in counts.iter().zip(probs) {
        if p > 0.0 {
            let expected = p * total as f64;
            stat += (c as f64 - expected) * (c as f64 - expected) / expected;
            cells += 1;
        } else if c > 0 {
            return (f64::INFINITY, cells.saturating_sub(1));
        }
    }
    (stat, cells.saturating_sub(1))
}

/// Fraction of time spent at each vertex over `steps` steps after `burn_in`.
pub fn occupation_frequencies(
    w: &Walker,
    start: usize,
    burn_in: u64,
    steps: u64,
    seed: u64,
    sem: Semantics,
) -> Vec<f64> {
    let mut rng = rng::rng_from_seed(seed);
    let mut v = start;
    for _ in 0..burn_in {
        v = w.step(v, &mut rng, sem);
    }
    let mut counts = vec![0u64; w.n];
    for _ in 0..steps {
        v = w.step(v, &mut rng, sem);
        counts[v] += 1;
    }
    counts.iter().map(|&c| c as f64 / steps as f64).collect()
}

/// `½ Σ |a_i − b_i|`.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).sum::<f64>()
}
