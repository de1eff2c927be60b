//! The exact pipeline: projection, spectrum, hitting times, checks.

use std::collections::BTreeMap;

use hyperwalk_core::checks::Check;
use hyperwalk_core::exact_times::{self, Tolerances, WalkTimes};
use hyperwalk_core::nalgebra::DMatrix;
use hyperwalk_core::projection::{self, StationaryDist};
use hyperwalk_core::spectral::{self, SpectralDiagnostics};
use hyperwalk_core::{is_connected, project, Error, Hypergraph, Multigraph, Spectrum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::format::SpectrumSummary;

/// Which independent route, if any, to compare the spectral hitting times with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    #[default]
    None,
    /// One LU solve of `(I − Q_j) h = 1` per target.
    PerTarget,
    /// A single inverse of `I − P + 1πᵀ`.
    Fundamental,
}

#[derive(Clone, Debug, Default)]
pub struct AnalysisOptions {
    pub tolerances: Tolerances,
    pub oracle: Oracle,
}

/// Everything computed for one instance.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub multigraph: Multigraph,
    pub dist: StationaryDist,
    pub spectrum: Spectrum,
    pub diagnostics: SpectralDiagnostics,
    pub times: WalkTimes,
    /// Max relative difference between spectral and oracle hitting times.
    pub route_difference: Option<f64>,
    pub checks: Vec<Check>,
}

impl Analysis {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    /// `(min, max)` of `κ(i,j)` over `i ≠ j`.
    pub fn commute_minmax(&self) -> (f64, f64) {
        let c = &self.times.commute;
        let n = c.nrows();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    lo = lo.min(c[(i, j)]);
                    hi = hi.max(c[(i, j)]);
                }
            }
        }
        (lo, hi)
    }

    pub fn report(&self) -> AnalysisReport {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                (
                    c.name.to_string(),
                    CheckRecord {
                        value: c.value,
                        limit: c.limit,
                        passed: c.passed,
                    },
                )
            })
            .collect();
        let (cmin, cmax) = self.commute_minmax();
        AnalysisReport {
            n: self.multigraph.n(),
            d: self.multigraph.uniformity(),
            hyperedges: self.multigraph.hyperedge_count(),
            total_weight: self.multigraph.total_weight(),
            spectrum: SpectrumSummary::from(&self.spectrum),
            h_avg_target: self.times.avg_target.clone(),
            h_avg_start: exact_times::avg_start_closed_form(&self.spectrum),
            commute_minmax: [cmin, cmax],
            cover_bounds: [self.times.cover_lower, self.times.cover_upper],
            gap: self.spectrum.gap,
            lambda_bar: self.spectrum.lambda_bar,
            route_difference: self.route_difference,
            checks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

/// The per-instance JSON fragment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub d: usize,
    pub hyperedges: u64,
    pub total_weight: u64,
    pub spectrum: SpectrumSummary,
    #[serde(rename = "H_avg_target")]
    pub h_avg_target: Vec<f64>,
    #[serde(rename = "H_avg_start")]
    pub h_avg_start: f64,
    pub commute_minmax: [f64; 2],
    pub cover_bounds: [f64; 2],
    pub gap: f64,
    pub lambda_bar: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub route_difference: Option<f64>,
    pub checks: BTreeMap<String, CheckRecord>,
}

/// Per-target oracle, one column per worker.
pub fn hitting_oracle_parallel(mg: &Multigraph) -> Result<DMatrix<f64>, Error> {
    let p = projection::transition_matrix(mg)?;
    let n = mg.n();
    let columns = (0..n)
        .into_par_iter()
        .map(|j| exact_times::hitting_oracle_column(&p, j))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(DMatrix::from_fn(n, n, |i, j| columns[j][i]))
}

/// Runs the full exact pipeline on a connected instance.
pub fn analyze(h: &Hypergraph, opts: &AnalysisOptions) -> Result<Analysis, CliError> {
    if h.n() < 2 {
        return Err(CliError::BadInstance(Error::InvalidHypergraph(
            "need at least 2 vertices".into(),
        )));
    }
    if !is_connected(h) {
        return Err(CliError::BadInstance(Error::InvalidHypergraph(
            "hypergraph is not connected".into(),
        )));
    }
    let tol = &opts.tolerances;
    let mg = project(h);
    let dist = projection::stationary(&mg).map_err(CliError::BadInstance)?;
    let b = spectral::build_b(&mg).map_err(CliError::BadInstance)?;
    let spec = spectral::decompose(&b).map_err(CliError::BadInstance)?;
    if spec.gap < tol.min_gap {
        return Err(CliError::BadInstance(Error::DegenerateGap {
            gap: spec.gap,
        }));
    }
    let diagnostics = spectral::diagnostics(&mg, &b, &spec, &dist);
    let hitting =
        exact_times::hitting_spectral_with(&spec, &mg, tol).map_err(CliError::BadInstance)?;

    let oracle = match opts.oracle {
        Oracle::None => None,
        Oracle::PerTarget => Some(hitting_oracle_parallel(&mg).map_err(CliError::BadInstance)?),
        Oracle::Fundamental => {
            Some(exact_times::hitting_fundamental(&mg, &dist).map_err(CliError::BadInstance)?)
        }
    };
    let route_difference = oracle
        .as_ref()
        .map(|o| exact_times::max_relative_difference(&hitting, o));

    let times = WalkTimes::new(hitting, &dist).map_err(CliError::BadInstance)?;
    let mut checks = diagnostics.checks(mg.n());
    checks.push(Check::at_most(
        "stationary_residual",
        projection::stationary_residual(&mg, &dist),
        tol.identity_abs,
    ));
    checks.extend(exact_times::deterministic_checks(
        &mg, &spec, &dist, &times, tol,
    ));
    if let Some(diff) = route_difference {
        checks.push(Check::at_most("hitting_routes_agree", diff, tol.route_rel));
    }

    Ok(Analysis {
        multigraph: mg,
        dist,
        spectrum: spec,
        diagnostics,
        times,
        route_difference,
        checks,
    })
}
