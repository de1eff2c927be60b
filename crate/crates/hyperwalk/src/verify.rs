//! Seed-batch verification: runs every grid point × seed, applies the
//! deterministic checks and the finite-n bands, and assembles a report
//! whose bytes depend only on the configuration.

use std::io::{self, Write};

use hyperwalk_core::checks::{self, Bands, InstanceSummary, Verdict};
use hyperwalk_core::montecarlo::{self, Estimator, StartRule, WalkConfig, Walker};
use hyperwalk_core::{generate, rng, spectral, GenerationParams, Hypergraph, Multigraph};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analysis::{self, AnalysisOptions, AnalysisReport, Oracle};
use crate::config::{ExperimentConfig, Resolved};
use crate::error::{exit, CliError};
use crate::simulate;

const PAIR_STREAM: u64 = 0x7061_6972;
const MC_STREAM: u64 = 0x6d63_0000;
const COVER_STREAM: u64 = 0x636f_7672;
const STEP_STREAM: u64 = 0x7374_6570;

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandsRecord {
    pub epsilon: f64,
    pub cover_epsilon: f64,
    pub pass_fraction: f64,
    pub degree_fraction_slack: f64,
    pub trend_slack: f64,
    pub mc_pass_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolvedRecord {
    pub seeds: Vec<u64>,
    pub p: Vec<f64>,
    pub bands: BandsRecord,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

/// Values derived from the analysis that the bands and plots use.
#[derive(Clone, Debug, Serialize)]
pub struct Derived {
    /// `[min_j H_j / n, max_j H_j / n]`.
    pub avg_target_over_n: [f64; 2],
    /// `max_j |H_j / n − 1|`.
    pub avg_target_deviation: f64,
    pub avg_start_over_n: f64,
    pub gap_inverse: f64,
    pub gap_inverse_bound: Option<f64>,
    pub lu_peng_bound: Option<f64>,
    pub expected_degree: f64,
    /// Fraction of vertices with `d_j` inside `E d_j ± ln n √(E d_j)`.
    pub degree_fraction_in_band: f64,
    pub expected_total_weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommuteSample {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct McPair {
    pub estimator: &'static str,
    pub i: usize,
    pub j: usize,
    pub exact: f64,
    pub mean: f64,
    pub stderr: f64,
    pub truncated: u64,
    pub within_3se: bool,
}

/// Pearson test of simulated next-step counts against `a_vw / d_v`.
#[derive(Clone, Debug, Serialize)]
pub struct StepLawRecord {
    pub vertex: usize,
    pub samples: u64,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub alpha: f64,
    pub passed: bool,
}

/// Goodness of fit of the simulator's one-step law at vertex `v`.
pub fn step_law_test(
    w: &Walker,
    mg: &Multigraph,
    v: usize,
    samples: u64,
    seed: u64,
    alpha: f64,
    cfg: montecarlo::Semantics,
) -> StepLawRecord {
    let counts = montecarlo::next_step_counts(w, v, samples, seed, cfg);
    let dv = mg.degrees()[v] as f64;
    let mut probs = vec![0.0; mg.n()];
    for (j, a) in mg.neighbors(v) {
        probs[j] = a as f64 / dv;
    }
    let (statistic, dof) = montecarlo::chi_square(&counts, &probs);
    let p_value = if dof == 0 {
        if statistic == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        ChiSquared::new(dof as f64).map_or(0.0, |c| c.sf(statistic))
    };
    StepLawRecord {
        vertex: v + 1,
        samples,
        statistic,
        dof,
        p_value,
        alpha,
        passed: p_value >= alpha,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverRecord {
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub truncated: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub grid_index: usize,
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<Derived>,
    pub commute_samples: Vec<CommuteSample>,
    pub monte_carlo: Vec<McPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_law: Option<StepLawRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverRecord>,
}

impl InstanceRecord {
    pub fn deterministic_passed(&self) -> bool {
        self.analysis
            .as_ref()
            .is_none_or(|a| a.checks.values().all(|c| c.passed))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementRecord {
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub band: [f64; 2],
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimRecord {
    pub claim: &'static str,
    pub evaluated: bool,
    pub passing: usize,
    pub measured: usize,
    pub required_fraction: f64,
    pub passed: bool,
    pub measurements: Vec<MeasurementRecord>,
}

impl From<&Verdict> for ClaimRecord {
    fn from(v: &Verdict) -> Self {
        Self {
            claim: v.claim.name(),
            evaluated: v.evaluated(),
            passing: v.passing,
            measured: v.measurements.len(),
            required_fraction: v.required_fraction,
            passed: v.passed,
            measurements: v
                .measurements
                .iter()
                .map(|m| MeasurementRecord {
                    seed: m.seed,
                    lo: m.lo,
                    hi: m.hi,
                    band: [m.band_lo, m.band_hi],
                    passed: m.passed,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridVerdicts {
    pub grid_index: usize,
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub claims: Vec<ClaimRecord>,
}

/// `max_j |H_j/n − 1|`, averaged over seeds, along increasing `n` for grid
/// points sharing `d` and the p-rule.
#[derive(Clone, Debug, Serialize)]
pub struct TrendRecord {
    pub d: usize,
    pub grid_indices: Vec<usize>,
    pub n: Vec<usize>,
    pub mean_deviation: Vec<f64>,
    pub slack: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct McConsistency {
    pub pairs: usize,
    pub within_3se: usize,
    pub fraction: f64,
    pub required_fraction: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub generation_failures: usize,
    pub bad_instances: usize,
    pub deterministic_passed: bool,
    pub statistical_passed: bool,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub config: ExperimentConfig,
    pub config_sha256: String,
    pub resolved: ResolvedRecord,
    pub notes: Vec<String>,
    pub instances: Vec<InstanceRecord>,
    pub verdicts: Vec<GridVerdicts>,
    pub trends: Vec<TrendRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_consistency: Option<McConsistency>,
    /// Instances whose one-step law test rejected at its level.
    pub step_law_rejections: usize,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn claim(&self, grid_index: usize, name: &str) -> Option<&ClaimRecord> {
        self.verdicts
            .iter()
            .find(|g| g.grid_index == grid_index)?
            .claims
            .iter()
            .find(|c| c.claim == name)
    }
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `k` distinct ordered pairs `i ≠ j` (or all of them if fewer exist).
pub fn sample_pairs(n: usize, k: usize, seed: u64) -> Vec<(usize, usize)> {
    let total = n * (n - 1);
    if k >= total {
        return (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
    }
    let mut r = rng::rng_from_seed(seed);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let i = rng::uniform_below(&mut r, n as u64) as usize;
        let mut j = rng::uniform_below(&mut r, n as u64 - 1) as usize;
        if j >= i {
            j += 1;
        }
        if !out.contains(&(i, j)) {
            out.push((i, j));
        }
    }
    out
}

struct Outcome {
    record: InstanceRecord,
    summary: Option<InstanceSummary>,
}

fn failed(mut record: InstanceRecord, err: CliError) -> Outcome {
    let kind = match err {
        CliError::Generation(_) => "generation",
        _ => "bad_instance",
    };
    record.error = Some(ErrorRecord {
        kind,
        exit_code: err.exit_code(),
        message: err.to_string(),
    });
    Outcome {
        record,
        summary: None,
    }
}

fn run_instance(cfg: &ExperimentConfig, grid_index: usize, p: f64, seed: u64) -> Outcome {
    let g = &cfg.grid[grid_index];
    let record = InstanceRecord {
        grid_index,
        n: g.n,
        d: g.d,
        p,
        seed,
        error: None,
        analysis: None,
        derived: None,
        commute_samples: Vec::new(),
        monte_carlo: Vec::new(),
        step_law: None,
        cover: None,
    };
    let params = GenerationParams::new(g.n, g.d, p, seed).connected(cfg.max_resamples);
    let h = match generate(&params) {
        Ok(h) => h,
        Err(e) => return failed(record, CliError::Generation(e)),
    };
    match analyze_instance(cfg, &h, record.clone(), p, seed) {
        Ok(o) => o,
        Err(e) => failed(record, e),
    }
}

fn analyze_instance(
    cfg: &ExperimentConfig,
    h: &Hypergraph,
    mut record: InstanceRecord,
    p: f64,
    seed: u64,
) -> Result<Outcome, CliError> {
    let (n, d) = (h.n(), h.d());
    let oracle = if n <= cfg.oracle_max_n {
        cfg.oracle
    } else {
        Oracle::None
    };
    let a = analysis::analyze(
        h,
        &AnalysisOptions {
            oracle,
            ..Default::default()
        },
    )?;
    let report = a.report();

    let pairs = sample_pairs(n, cfg.commute_pairs, rng::mix(seed, PAIR_STREAM));
    record.commute_samples = pairs
        .iter()
        .map(|&(i, j)| CommuteSample {
            i: i + 1,
            j: j + 1,
            value: a.times.commute[(i, j)],
        })
        .collect();

    let mc = &cfg.monte_carlo;
    let small = n <= mc.pairs_max_n;
    let walker = if (small && (mc.pairs > 0 || mc.step_samples > 0)) || mc.cover_trials > 0 {
        Some(Walker::new(h, &a.multigraph).map_err(CliError::BadInstance)?)
    } else {
        None
    };
    if let Some(w) = walker.as_ref().filter(|_| small && mc.step_samples > 0) {
        let mut r = rng::rng_from_seed(rng::mix(seed, STEP_STREAM));
        let v = rng::uniform_below(&mut r, n as u64) as usize;
        record.step_law = Some(step_law_test(
            w,
            &a.multigraph,
            v,
            mc.step_samples,
            rng::mix(seed, STEP_STREAM + 1),
            mc.step_alpha,
            mc.semantics.into(),
        ));
    }
    if let Some(w) = walker.as_ref().filter(|_| small && mc.pairs > 0) {
        let mc_pairs = sample_pairs(n, mc.pairs, rng::mix(seed, MC_STREAM));
        for (k, &(i, j)) in mc_pairs.iter().enumerate() {
            let runs = [
                (
                    "hitting",
                    Estimator::Hitting { from: i, to: j },
                    a.times.hitting[(i, j)],
                ),
                (
                    "commute",
                    Estimator::Commute { a: i, b: j },
                    a.times.commute[(i, j)],
                ),
            ];
            for (r, (name, est, exact)) in runs.into_iter().enumerate() {
                let mut wc = WalkConfig::new(
                    rng::mix(rng::mix(seed, MC_STREAM), (2 * k + r) as u64),
                    mc.trials,
                );
                wc.max_steps = mc.max_steps;
                wc.semantics = mc.semantics.into();
                let e = simulate::estimate(w, &est, &wc).map_err(CliError::BadInstance)?;
                record.monte_carlo.push(McPair {
                    estimator: name,
                    i: i + 1,
                    j: j + 1,
                    exact,
                    mean: e.mean,
                    stderr: e.stderr,
                    truncated: e.truncated,
                    within_3se: (e.mean - exact).abs() <= 3.0 * e.stderr,
                });
            }
        }
    }
    if let Some(w) = walker.as_ref().filter(|_| mc.cover_trials > 0) {
        let mut wc = WalkConfig::new(rng::mix(seed, COVER_STREAM), mc.cover_trials);
        wc.max_steps = mc.max_steps;
        wc.semantics = mc.semantics.into();
        wc.start_rule = StartRule::Fixed(0);
        let e = simulate::estimate(w, &Estimator::Cover, &wc).map_err(CliError::BadInstance)?;
        record.cover = Some(CoverRecord {
            trials: mc.cover_trials,
            mean: e.mean,
            stderr: e.stderr,
            truncated: e.truncated,
        });
    }

    let degrees = a.multigraph.degrees().to_vec();
    let summary = InstanceSummary {
        n,
        d,
        p,
        seed,
        hyperedges: a.multigraph.hyperedge_count(),
        total_weight: a.multigraph.total_weight(),
        degrees,
        avg_target: a.times.avg_target.clone(),
        avg_start: report.h_avg_start,
        gap: a.spectrum.gap,
        lambda_bar: a.spectrum.lambda_bar,
        commute_samples: record
            .commute_samples
            .iter()
            .map(|c| (c.i - 1, c.j - 1, c.value))
            .collect(),
        cover_bounds: (a.times.cover_lower, a.times.cover_upper),
        cover_estimate: record.cover.as_ref().map(|c| c.mean),
    };

    let nf = n as f64;
    let (lo, hi) = summary
        .avg_target
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), h| {
            (l.min(h / nf), u.max(h / nf))
        });
    let expected_degree = checks::expected_degree(n, d, p);
    let dev = nf.ln() * expected_degree.sqrt();
    let inside = summary
        .degrees
        .iter()
        .filter(|&&x| (x as f64 - expected_degree).abs() < dev)
        .count();
    record.derived = Some(Derived {
        avg_target_over_n: [lo, hi],
        avg_target_deviation: checks::avg_target_deviation(&summary),
        avg_start_over_n: report.h_avg_start / nf,
        gap_inverse: 1.0 / a.spectrum.gap,
        gap_inverse_bound: spectral::gap_inverse_bound(n, d, p).ok().flatten(),
        lu_peng_bound: spectral::lu_peng_bound(n, d, p).ok(),
        expected_degree,
        degree_fraction_in_band: inside as f64 / nf,
        expected_total_weight: checks::expected_total_weight(n, d, p),
    });
    record.analysis = Some(report);
    Ok(Outcome {
        record,
        summary: Some(summary),
    })
}

fn trends(cfg: &ExperimentConfig, instances: &[InstanceRecord], bands: &Bands) -> Vec<TrendRecord> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (gi, g) in cfg.grid.iter().enumerate() {
        match groups
            .iter_mut()
            .find(|grp| cfg.grid[grp[0]].d == g.d && cfg.grid[grp[0]].p_rule == g.p_rule)
        {
            Some(grp) => grp.push(gi),
            None => groups.push(vec![gi]),
        }
    }
    groups
        .into_iter()
        .filter_map(|mut grp| {
            grp.sort_by_key(|&gi| (cfg.grid[gi].n, gi));
            let mut ns = Vec::new();
            let mut values = Vec::new();
            let mut indices = Vec::new();
            for gi in grp {
                let devs: Vec<f64> = instances
                    .iter()
                    .filter(|r| r.grid_index == gi)
                    .filter_map(|r| r.derived.as_ref().map(|x| x.avg_target_deviation))
                    .collect();
                if devs.is_empty() {
                    continue;
                }
                indices.push(gi);
                ns.push(cfg.grid[gi].n);
                values.push(devs.iter().sum::<f64>() / devs.len() as f64);
            }
            if ns.windows(2).filter(|w| w[0] < w[1]).count() == 0 {
                return None;
            }
            Some(TrendRecord {
                d: cfg.grid[indices[0]].d,
                passed: checks::shrinking_trend(&values, bands.trend_slack),
                grid_indices: indices,
                n: ns,
                mean_deviation: values,
                slack: bands.trend_slack,
            })
        })
        .collect()
}

const COVER_REGIME_NOTE: &str =
    "The cover-time bound assumes p(1-p) >> log^4 n / n, unlike the \
log^4 n / n^(d-1) condition used elsewhere; it is checked here under the grid's own p-rule.";

/// Runs the whole battery. Fails only on configuration errors; instance
/// failures are recorded in the report.
pub fn run(config: &ExperimentConfig) -> Result<Report, CliError> {
    let resolved: Resolved = config.resolve()?;
    let bands = resolved.bands;

    let jobs: Vec<(usize, u64)> = (0..config.grid.len())
        .flat_map(|g| resolved.seeds.iter().map(move |&s| (g, s)))
        .collect();
    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|&(g, s)| run_instance(config, g, resolved.ps[g], s))
        .collect();

    let verdicts: Vec<GridVerdicts> = (0..config.grid.len())
        .map(|gi| {
            let batch: Vec<InstanceSummary> = outcomes
                .iter()
                .filter(|o| o.record.grid_index == gi)
                .filter_map(|o| o.summary.clone())
                .collect();
            GridVerdicts {
                grid_index: gi,
                n: config.grid[gi].n,
                d: config.grid[gi].d,
                p: resolved.ps[gi],
                claims: checks::asymptotic_checks(&batch, &bands)
                    .iter()
                    .map(ClaimRecord::from)
                    .collect(),
            }
        })
        .collect();
    let instances: Vec<InstanceRecord> = outcomes.into_iter().map(|o| o.record).collect();
    let trends = trends(config, &instances, &bands);

    let mc_pairs: Vec<&McPair> = instances.iter().flat_map(|r| &r.monte_carlo).collect();
    let mc_consistency = (!mc_pairs.is_empty()).then(|| {
        let within = mc_pairs.iter().filter(|m| m.within_3se).count();
        let fraction = within as f64 / mc_pairs.len() as f64;
        McConsistency {
            pairs: mc_pairs.len(),
            within_3se: within,
            fraction,
            required_fraction: resolved.mc_pass_fraction,
            passed: fraction >= resolved.mc_pass_fraction,
        }
    });

    let step_law_rejections = instances
        .iter()
        .filter(|r| r.step_law.as_ref().is_some_and(|s| !s.passed))
        .count();

    let generation_failures = instances
        .iter()
        .filter(|r| {
            r.error
                .as_ref()
                .is_some_and(|e| e.exit_code == exit::GENERATION)
        })
        .count();
    let bad_instances = instances
        .iter()
        .filter(|r| {
            r.error
                .as_ref()
                .is_some_and(|e| e.exit_code == exit::BAD_INSTANCE)
        })
        .count();
    let deterministic_passed = instances.iter().all(InstanceRecord::deterministic_passed);
    let statistical_passed = verdicts.iter().all(|g| g.claims.iter().all(|c| c.passed))
        && trends.iter().all(|t| t.passed)
        && mc_consistency.as_ref().is_none_or(|m| m.passed)
        && step_law_rejections == 0;
    let exit_code = if generation_failures > 0 {
        exit::GENERATION
    } else if bad_instances > 0 {
        exit::BAD_INSTANCE
    } else if !deterministic_passed {
        exit::DETERMINISTIC
    } else if !statistical_passed {
        exit::STATISTICAL
    } else {
        exit::OK
    };

    let mut notes = Vec::new();
    if instances.iter().any(|r| r.cover.is_some()) {
        notes.push(COVER_REGIME_NOTE.to_string());
    }

    Ok(Report {
        tool: ToolInfo {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        config_sha256: config_hash(config),
        config: config.clone(),
        resolved: ResolvedRecord {
            seeds: resolved.seeds.clone(),
            p: resolved.ps.clone(),
            bands: BandsRecord {
                epsilon: bands.epsilon,
                cover_epsilon: bands.cover_epsilon,
                pass_fraction: bands.pass_fraction,
                degree_fraction_slack: bands.degree_fraction_slack,
                trend_slack: bands.trend_slack,
                mc_pass_fraction: resolved.mc_pass_fraction,
            },
        },
        notes,
        summary: Summary {
            instances: instances.len(),
            generation_failures,
            bad_instances,
            deterministic_passed,
            statistical_passed,
            exit_code,
        },
        instances,
        verdicts,
        trends,
        mc_consistency,
        step_law_rejections,
    })
}

/// Plot-ready CSVs, copied from values already in the report.
pub fn write_plot_csvs(report: &Report, dir: &std::path::Path) -> io::Result<()> {
    let ok = || {
        report
            .instances
            .iter()
            .filter_map(|r| Some((r, r.derived.as_ref()?, r.analysis.as_ref()?)))
    };

    let mut f = io::BufWriter::new(std::fs::File::create(dir.join("avg_target_vs_n.csv"))?);
    writeln!(
        f,
        "grid_index,n,d,p,seed,h_over_n_min,h_over_n_max,max_deviation"
    )?;
    for (r, x, _) in ok() {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{}",
            r.grid_index,
            r.n,
            r.d,
            r.p,
            r.seed,
            x.avg_target_over_n[0],
            x.avg_target_over_n[1],
            x.avg_target_deviation
        )?;
    }
    f.flush()?;

    let mut f = io::BufWriter::new(std::fs::File::create(dir.join("gap_vs_n.csv"))?);
    writeln!(f, "grid_index,n,d,p,seed,gap,gap_inverse,gap_inverse_bound")?;
    for (r, x, a) in ok() {
        let bound = x
            .gap_inverse_bound
            .map(|b| b.to_string())
            .unwrap_or_default();
        writeln!(
            f,
            "{},{},{},{},{},{},{},{}",
            r.grid_index, r.n, r.d, r.p, r.seed, a.gap, x.gap_inverse, bound
        )?;
    }
    f.flush()?;

    let mut f = io::BufWriter::new(std::fs::File::create(dir.join("lambda_bar_vs_bound.csv"))?);
    writeln!(f, "grid_index,n,d,p,seed,lambda_bar,lu_peng_bound")?;
    for (r, x, a) in ok() {
        let bound = x.lu_peng_bound.map(|b| b.to_string()).unwrap_or_default();
        writeln!(
            f,
            "{},{},{},{},{},{},{}",
            r.grid_index, r.n, r.d, r.p, r.seed, a.lambda_bar, bound
        )?;
    }
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_distinct_and_off_diagonal() {
        let pairs = sample_pairs(10, 30, 3);
        assert_eq!(pairs.len(), 30);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            assert_ne!(i, j);
            assert!(!pairs[..k].contains(&(i, j)));
        }
        assert_eq!(sample_pairs(3, 100, 0).len(), 6);
        assert_eq!(sample_pairs(10, 30, 3), pairs);
    }

    #[test]
    fn small_batch_passes_deterministic_checks() {
        let cfg = ExperimentConfig::from_json(
            r#"{"grid":[{"n":40,"d":3,"p_rule":{"expected_degree":{"c":10}}}],
                "seeds":[1,2],"commute_pairs":5,
                "monte_carlo":{"trials":200,"pairs":2,"cover_trials":20}}"#,
        )
        .unwrap();
        let report = run(&cfg).unwrap();
        assert!(report.summary.deterministic_passed);
        assert_eq!(report.instances.len(), 2);
        assert_eq!(report.instances[0].monte_carlo.len(), 4);
        assert!(report.instances[0].cover.is_some());
        assert!(report.instances[0].step_law.as_ref().unwrap().passed);
        assert_eq!(report.notes.len(), 1);
    }
}
