//! Parallel Monte Carlo drivers. Trials run on the rayon pool and are
//! collected in trial order, so results do not depend on the thread count.

use hyperwalk_core::montecarlo::{Estimate, Estimator, WalkConfig, Walker};
use hyperwalk_core::Error;
use rayon::prelude::*;

pub fn samples(w: &Walker, est: &Estimator, cfg: &WalkConfig) -> Result<Vec<Option<u64>>, Error> {
    w.check(est, cfg)?;
    Ok((0..cfg.trials)
        .into_par_iter()
        .map(|t| w.trial(est, cfg, t))
        .collect())
}

pub fn estimate(w: &Walker, est: &Estimator, cfg: &WalkConfig) -> Result<Estimate, Error> {
    Estimate::from_samples(&samples(w, est, cfg)?)
}

/// More than half of the trials hit the step cap.
pub fn truncation_dominated(e: &Estimate) -> bool {
    2 * e.truncated > e.trials_used
}
