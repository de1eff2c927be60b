//! Check outcomes and the finite-n bands for the asymptotic claims.
//!
//! Deterministic identities and inequalities are reported as [`Check`]s.
//! The a.a.s. statements are tested per instance against a band with a
//! configurable slack `ε` standing in for the `o(1)` terms, then aggregated
//! over a seed batch into a [`Verdict`] that passes when a configured
//! fraction of instances lie inside their band.

use alloc::vec::Vec;

use crate::hypergraph::binomial;
use crate::spectral;

/// One measured value tested against `value <= limit`.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            passed: value <= limit,
        }
    }
}

/// The asymptotic claims checked over seed batches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// `H_j = n(1 + o(1))`, measured as the range of `H_j / n`.
    AvgTargetLinear,
    /// `½n(1 + o(1)) ≤ H^i ≤ n(1 + o(1))`, measured as `H^i / n`.
    AvgStartLinear,
    /// `n(1 + o(1)) ≤ κ(i,j) ≤ 2n(1 + o(1))` on sampled pairs, as `κ / n`.
    CommuteLinear,
    /// `(n/2) log n ≤ C(H) ≤ n log n`, Monte Carlo estimate over `n ln n`.
    CoverNLogN,
    /// The simulated cover time lies inside the min/max hitting-time sandwich.
    CoverSandwich,
    /// `1/(1 − λ₂)` below the bound implied by the `λ̄` estimate.
    GapInverse,
    /// `λ̄` below `1/(n−1) + 3√((1−p)/(C(n−1,d−1)p))`.
    LambdaBar,
    /// `2|Ẽ|/d_j = n(1 + o(1))` for all `j`.
    DegreeRatio,
    /// Fraction of vertices with `d_j` within `E d_j ± log n √(E d_j)`.
    DegreeConcentration,
    /// `|Ẽ|` within `E|Ẽ| ± log n √(E|Ẽ|)`.
    EdgeConcentration,
}

impl Claim {
    pub const ALL: [Claim; 10] = [
        Claim::AvgTargetLinear,
        Claim::AvgStartLinear,
        Claim::CommuteLinear,
        Claim::CoverNLogN,
        Claim::CoverSandwich,
        Claim::GapInverse,
        Claim::LambdaBar,
        Claim::DegreeRatio,
        Claim::DegreeConcentration,
        Claim::EdgeConcentration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::AvgTargetLinear => "avg_target_linear",
            Claim::AvgStartLinear => "avg_start_linear",
            Claim::CommuteLinear => "commute_linear",
            Claim::CoverNLogN => "cover_n_log_n",
            Claim::CoverSandwich => "cover_sandwich",
            Claim::GapInverse => "gap_inverse",
            Claim::LambdaBar => "lambda_bar",
            Claim::DegreeRatio => "degree_ratio",
            Claim::DegreeConcentration => "degree_concentration",
            Claim::EdgeConcentration => "edge_concentration",
        }
    }
}

/// Band configuration. `epsilon` instantiates the `o(1)` terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bands {
    pub epsilon: f64,
    /// Slack for the cover-time band (`(1−ε)(n/2)ln n ≤ C ≤ (1+ε) n ln n`).
    pub cover_epsilon: f64,
    /// Fraction of instances that must pass each statistical claim.
    pub pass_fraction: f64,
    /// Subtracted from the Chernoff probability bound for the vertex fraction.
    pub degree_fraction_slack: f64,
    /// Allowed relative growth of a band value between successive `n`.
    pub trend_slack: f64,
}

impl Default for Bands {
    fn default() -> Self {
        Self {
            epsilon: 0.15,
            cover_epsilon: 0.2,
            pass_fraction: 0.9,
            degree_fraction_slack: 0.005,
            trend_slack: 0.2,
        }
    }
}

impl Bands {
    /// Every band collapsed to its limiting value.
    pub fn with_tolerance(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self.cover_epsilon = epsilon;
        self.degree_fraction_slack = epsilon;
        self.trend_slack = epsilon;
        self
    }
}

/// What the asymptotic checks need from one analyzed instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSummary {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub seed: u64,
    pub hyperedges: u64,
    pub total_weight: u64,
    pub degrees: Vec<u64>,
    pub avg_target: Vec<f64>,
    pub avg_start: f64,
    pub gap: f64,
    pub lambda_bar: f64,
    /// `(i, j, κ(i,j))` for the sampled pairs.
    pub commute_samples: Vec<(usize, usize, f64)>,
    pub cover_bounds: (f64, f64),
    /// Monte Carlo cover-time mean, if simulated.
    pub cover_estimate: Option<f64>,
}

/// One instance measured against one claim's band.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub passed: bool,
}

impl Measurement {
    fn new(seed: u64, lo: f64, hi: f64, band_lo: f64, band_hi: f64) -> Self {
        Self {
            seed,
            lo,
            hi,
            band_lo,
            band_hi,
            passed: band_lo <= lo && hi <= band_hi,
        }
    }
}

/// Aggregate over a batch.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub claim: Claim,
    pub measurements: Vec<Measurement>,
    pub passing: usize,
    pub required_fraction: f64,
    pub passed: bool,
}

impl Verdict {
    pub fn evaluated(&self) -> bool {
        !self.measurements.is_empty()
    }

    pub fn pass_fraction(&self) -> f64 {
        if self.measurements.is_empty() {
            1.0
        } else {
            self.passing as f64 / self.measurements.len() as f64
        }
    }
}

fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
}

/// `max_j |H_j / n − 1|` for one instance.
pub fn avg_target_deviation(s: &InstanceSummary) -> f64 {
    let n = s.n as f64;
    s.avg_target
        .iter()
        .map(|h| libm::fabs(h / n - 1.0))
        .fold(0.0, f64::max)
}

/// `E d_j = (d−1)·C(n−1, d−1)·p` (multigraph degree).
pub fn expected_degree(n: usize, d: usize, p: f64) -> f64 {
    (d - 1) as f64 * binomial(n as u64 - 1, d as u64 - 1).map_or(f64::INFINITY, |c| c as f64) * p
}

/// `E|Ẽ| = C(d,2)·C(n,d)·p`.
pub fn expected_total_weight(n: usize, d: usize, p: f64) -> f64 {
    (d * (d - 1) / 2) as f64 * binomial(n as u64, d as u64).map_or(f64::INFINITY, |c| c as f64) * p
}

/// `1 − 4 exp(−(ln n)² / 4)`.
pub fn chernoff_vertex_probability(n: usize) -> f64 {
    let l = libm::log(n as f64);
    1.0 - 4.0 * libm::exp(-l * l / 4.0)
}

fn measure(claim: Claim, s: &InstanceSummary, bands: &Bands) -> Option<Measurement> {
    let n = s.n as f64;
    let ln_n = libm::log(n);
    let eps = bands.epsilon;
    let m = match claim {
        Claim::AvgTargetLinear => {
            let (lo, hi) = min_max(s.avg_target.iter().map(|h| h / n));
            Measurement::new(s.seed, lo, hi, 1.0 - eps, 1.0 + eps)
        }
        Claim::AvgStartLinear => {
            let x = s.avg_start / n;
            Measurement::new(s.seed, x, x, 0.5 * (1.0 - eps), 1.0 + eps)
        }
        Claim::CommuteLinear => {
            if s.commute_samples.is_empty() {
                return None;
            }
            let (lo, hi) = min_max(s.commute_samples.iter().map(|&(_, _, k)| k / n));
            Measurement::new(s.seed, lo, hi, 1.0 - eps, 2.0 * (1.0 + eps))
        }
        Claim::CoverNLogN => {
            let x = s.cover_estimate? / (n * ln_n);
            let ce = bands.cover_epsilon;
            Measurement::new(s.seed, x, x, 0.5 * (1.0 - ce), 1.0 + ce)
        }
        Claim::CoverSandwich => {
            let x = s.cover_estimate?;
            Measurement::new(s.seed, x, x, s.cover_bounds.0, s.cover_bounds.1)
        }
        Claim::GapInverse => {
            let x = 1.0 / s.gap;
            let bound = spectral::gap_inverse_bound(s.n, s.d, s.p)
                .ok()?
                .unwrap_or(f64::INFINITY);
            Measurement::new(s.seed, x, x, 1.0, bound)
        }
        Claim::LambdaBar => {
            let bound = spectral::lu_peng_bound(s.n, s.d, s.p).ok()?;
            Measurement::new(s.seed, s.lambda_bar, s.lambda_bar, 0.0, bound)
        }
        Claim::DegreeRatio => {
            let two_e = (2 * s.total_weight) as f64;
            let (lo, hi) = min_max(s.degrees.iter().map(|&d| two_e / (d as f64 * n)));
            Measurement::new(s.seed, lo, hi, 1.0 - eps, 1.0 + eps)
        }
        Claim::DegreeConcentration => {
            let mean = expected_degree(s.n, s.d, s.p);
            let dev = ln_n * libm::sqrt(mean);
            let inside = s
                .degrees
                .iter()
                .filter(|&&d| libm::fabs(d as f64 - mean) < dev)
                .count();
            let frac = inside as f64 / n;
            let required =
                (chernoff_vertex_probability(s.n) - bands.degree_fraction_slack).max(0.0);
            Measurement::new(s.seed, frac, frac, required, 1.0)
        }
        Claim::EdgeConcentration => {
            let mean = expected_total_weight(s.n, s.d, s.p);
            let dev = ln_n * libm::sqrt(mean);
            let x = s.total_weight as f64;
            Measurement::new(s.seed, x, x, mean - dev, mean + dev)
        }
    };
    Some(m)
}

/// Required fraction of passing instances for each claim. The Chernoff
/// edge band must hold on every seed.
pub fn required_fraction(claim: Claim, bands: &Bands) -> f64 {
    match claim {
        Claim::EdgeConcentration | Claim::DegreeConcentration => 1.0,
        _ => bands.pass_fraction,
    }
}

/// Evaluates every claim over a batch of instances (normally one grid
/// point, many seeds). Claims with no measurable instance pass vacuously
/// and report `evaluated() == false`.
pub fn asymptotic_checks(instances: &[InstanceSummary], bands: &Bands) -> Vec<Verdict> {
    Claim::ALL
        .iter()
        .map(|&claim| {
            let measurements: Vec<Measurement> = instances
                .iter()
                .filter_map(|s| measure(claim, s, bands))
                .collect();
            let passing = measurements.iter().filter(|m| m.passed).count();
            let required = required_fraction(claim, bands);
            let passed = measurements.is_empty()
                || passing as f64 >= required * measurements.len() as f64 - 1e-12;
            Verdict {
                claim,
                measurements,
                passing,
                required_fraction: required,
                passed,
            }
        })
        .collect()
}

/// Checks that `values` (ordered by increasing `n`) do not grow by more
/// than `slack` relative to the previous entry.
pub fn shrinking_trend(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}
