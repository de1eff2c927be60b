//! Experiment configuration for `verify`.

use std::path::PathBuf;

use hyperwalk_core::checks::Bands;
use hyperwalk_core::hypergraph::binomial;
use hyperwalk_core::montecarlo::Semantics;
use serde::{Deserialize, Serialize};

use crate::analysis::Oracle;
use crate::error::CliError;

/// How `p` is chosen at a grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PRule {
    /// A fixed edge probability.
    P(f64),
    /// Expected number of hyperedges at a vertex, `C(n−1,d−1)·p`, pinned to
    /// `c·(ln n)^log_power`.
    ExpectedDegree {
        c: f64,
        #[serde(default = "one")]
        log_power: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl PRule {
    pub fn resolve(&self, n: usize, d: usize) -> Result<f64, CliError> {
        let p = match *self {
            PRule::P(p) => p,
            PRule::ExpectedDegree { c, log_power } => {
                let slots = binomial(n as u64 - 1, d as u64 - 1)
                    .ok_or_else(|| CliError::Usage(format!("C({}, {}) overflows", n - 1, d - 1)))?;
                c * (n as f64).ln().powf(log_power) / slots as f64
            }
        };
        if !(p > 0.0 && p <= 1.0) {
            return Err(CliError::Usage(format!(
                "resolved p = {p} at n = {n}, d = {d} is outside (0, 1]"
            )));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub d: usize,
    pub p_rule: PRule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Count {
        count: u64,
        #[serde(default)]
        start: u64,
    },
}

impl Seeds {
    pub fn resolve(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Count { count, start } => (*start..start + count).collect(),
        }
    }
}

/// Monte Carlo settings. Zero counts switch the corresponding estimator off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MonteCarlo {
    pub trials: u64,
    /// Random pairs per instance checked for both hitting and commute times.
    pub pairs: usize,
    /// Only instances with `n` up to this size get pair checks.
    pub pairs_max_n: usize,
    pub cover_trials: u64,
    pub max_steps: u64,
    pub semantics: SemanticsName,
    /// Draws for the one-step goodness-of-fit test (0 disables it).
    pub step_samples: u64,
    /// Rejection level for that test.
    pub step_alpha: f64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self {
            trials: 1000,
            pairs: 4,
            pairs_max_n: 400,
            cover_trials: 0,
            max_steps: 100_000_000,
            semantics: SemanticsName::TwoStage,
            step_samples: 100_000,
            step_alpha: 0.001,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemanticsName {
    #[default]
    TwoStage,
    WeightedGraph,
}

impl From<SemanticsName> for Semantics {
    fn from(s: SemanticsName) -> Self {
        match s {
            SemanticsName::TwoStage => Semantics::TwoStage,
            SemanticsName::WeightedGraph => Semantics::WeightedGraph,
        }
    }
}

/// Band overrides; unset fields keep the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BandOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_fraction_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trend_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_pass_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: Vec<GridPoint>,
    pub seeds: Seeds,
    #[serde(default)]
    pub monte_carlo: MonteCarlo,
    /// Random pairs per instance whose exact commute time is tested
    /// against the linear band.
    #[serde(default = "default_commute_pairs")]
    pub commute_pairs: usize,
    /// Collapses every band to this slack (0 makes them impossible to meet).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub bands: BandOverrides,
    #[serde(default = "default_max_resamples")]
    pub max_resamples: u32,
    /// Instances up to this size are cross-checked against the oracle.
    #[serde(default = "default_oracle_max_n")]
    pub oracle_max_n: usize,
    #[serde(default = "default_oracle")]
    pub oracle: Oracle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn default_commute_pairs() -> usize {
    50
}
fn default_max_resamples() -> u32 {
    100
}
fn default_oracle_max_n() -> usize {
    200
}
fn default_oracle() -> Oracle {
    Oracle::PerTarget
}

/// What `verify` actually runs with.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub seeds: Vec<u64>,
    pub ps: Vec<f64>,
    pub bands: Bands,
    pub mc_pass_fraction: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        if self.grid.is_empty() {
            return Err(CliError::Usage("config grid is empty".into()));
        }
        let seeds = self.seeds.resolve();
        if seeds.is_empty() {
            return Err(CliError::Usage("config has no seeds".into()));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seeds.len() {
            return Err(CliError::Usage("config seeds contain duplicates".into()));
        }
        if self.max_resamples == 0 {
            return Err(CliError::Usage("max_resamples must be at least 1".into()));
        }
        let mc = &self.monte_carlo;
        if mc.pairs > 0 && mc.trials == 0 {
            return Err(CliError::Usage(
                "monte_carlo.trials must be positive when pairs are requested".into(),
            ));
        }
        if !(mc.step_alpha > 0.0 && mc.step_alpha < 1.0) {
            return Err(CliError::Usage(format!(
                "monte_carlo.step_alpha must lie in (0, 1), got {}",
                mc.step_alpha
            )));
        }
        if mc.max_steps == 0 {
            return Err(CliError::Usage(
                "monte_carlo.max_steps must be at least 1".into(),
            ));
        }
        let mut ps = Vec::with_capacity(self.grid.len());
        for g in &self.grid {
            if g.d < 2 || g.d > g.n {
                return Err(CliError::Usage(format!(
                    "grid point needs 2 <= d <= n, got n = {}, d = {}",
                    g.n, g.d
                )));
            }
            ps.push(g.p_rule.resolve(g.n, g.d)?);
        }

        let mut bands = Bands::default();
        let o = &self.bands;
        if let Some(x) = o.epsilon {
            bands.epsilon = x;
        }
        if let Some(x) = o.cover_epsilon {
            bands.cover_epsilon = x;
        }
        if let Some(x) = o.pass_fraction {
            bands.pass_fraction = x;
        }
        if let Some(x) = o.degree_fraction_slack {
            bands.degree_fraction_slack = x;
        }
        if let Some(x) = o.trend_slack {
            bands.trend_slack = x;
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0) {
                return Err(CliError::Usage(format!(
                    "tolerance must be non-negative, got {t}"
                )));
            }
            bands = bands.with_tolerance(t);
        }
        Ok(Resolved {
            seeds,
            ps,
            bands,
            mc_pass_fraction: o.mc_pass_fraction.unwrap_or(0.95),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_json(
            r#"{"grid":[{"n":50,"d":3,"p_rule":{"expected_degree":{"c":10}}}],"seeds":{"count":3}}"#,
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.seeds, vec![0, 1, 2]);
        let want = 10.0 * 50f64.ln() / 1176.0;
        assert!((r.ps[0] - want).abs() < 1e-15);
        assert_eq!(r.bands, Bands::default());
    }

    #[test]
    fn explicit_p_and_seed_list() {
        let cfg = ExperimentConfig::from_json(
            r#"{"grid":[{"n":20,"d":3,"p_rule":{"p":0.2}}],"seeds":[5,9],"tolerance":0}"#,
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.ps, vec![0.2]);
        assert_eq!(r.seeds, vec![5, 9]);
        assert_eq!(r.bands.epsilon, 0.0);
    }

    #[test]
    fn usage_errors() {
        let bad = [
            r#"{"grid":[{"n":20,"d":3,"p_rule":{"p":0.2}}],"seeds":[]}"#,
            r#"{"grid":[],"seeds":[1]}"#,
            r#"{"grid":[{"n":20,"d":1,"p_rule":{"p":0.2}}],"seeds":[1]}"#,
            r#"{"grid":[{"n":20,"d":3,"p_rule":{"p":1.5}}],"seeds":[1]}"#,
            r#"{"grid":[{"n":20,"d":3,"p_rule":{"p":0.2}}],"seeds":[1,1]}"#,
        ];
        for text in bad {
            let r = ExperimentConfig::from_json(text).and_then(|c| c.resolve());
            assert!(matches!(r, Err(CliError::Usage(_))), "{text}");
        }
        assert!(ExperimentConfig::from_json(r#"{"grid":[],"seeds":[1],"typo":3}"#).is_err());
    }
}
