//! Exact hitting, commute and cover-time quantities.
//!
//! Two independent routes produce the hitting-time matrix:
//!
//! * [`hitting_spectral`] evaluates
//!   `H_ij = 2|Ẽ| Σ_{k≥2} (1/(1−λ_k)) (v_kj²/d_j − v_ki v_kj/√(d_i d_j))`
//!   from the eigendecomposition of `B`;
//! * [`hitting_oracle`] solves the first-step equations `(I − Q_j) h = 1`
//!   for every target `j` by LU factorization of the transition matrix
//!   with row and column `j` removed.
//!
//! Everything else (stationary averages, commute times, the cover-time
//! sandwich and the finite-n inequalities) is derived from those.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::checks::Check;
use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::projection::{Multigraph, StationaryDist};
use crate::spectral::Spectrum;

/// Numerical tolerances for route comparisons and identity checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Max relative difference between two routes to the same quantity.
    pub route_rel: f64,
    /// Absolute error allowed on spectral/combinatorial identities.
    pub identity_abs: f64,
    /// Relative slack on the deterministic inequalities.
    pub inequality_rel: f64,
    /// Largest `|H_ii|` accepted before clamping the spectral diagonal.
    pub diagonal_abs: f64,
    /// Smallest spectral gap treated as non-degenerate.
    pub min_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            route_rel: 1e-8,
            identity_abs: 1e-10,
            inequality_rel: 1e-9,
            diagonal_abs: 1e-8,
            min_gap: 1e-12,
        }
    }
}

/// `M = Σ_{k≥2} v_k v_kᵀ / (1 − λ_k)`.
///
/// Every spectral formula below reads entries of `M`; within a degenerate
/// eigenspace these are projector entries, so the choice of basis does not
/// matter.
pub fn green_matrix(spec: &Spectrum) -> DMatrix<f64> {
    let n = spec.n();
    let mut scaled = spec.eigenvectors.columns(1, n - 1).into_owned();
    for (c, mut col) in scaled.column_iter_mut().enumerate() {
        col /= libm::sqrt(1.0 - spec.eigenvalues[c + 1]);
    }
    &scaled * scaled.transpose()
}

/// `Σ_{k≥2} v_k v_kᵀ = I − v₁v₁ᵀ`, summed explicitly.
fn complement_projector(spec: &Spectrum) -> DMatrix<f64> {
    let n = spec.n();
    let tail = spec.eigenvectors.columns(1, n - 1);
    tail * tail.transpose()
}

fn check_gap(spec: &Spectrum, tol: &Tolerances) -> Result<()> {
    if !(spec.gap >= tol.min_gap) {
        return Err(Error::DegenerateGap { gap: spec.gap });
    }
    Ok(())
}

/// Hitting-time matrix from the spectral decomposition.
///
/// The diagonal is analytically zero; it is checked against
/// `tol.diagonal_abs` (relative to `2|Ẽ|`-scaled magnitudes) and then set
/// to exactly zero.
pub fn hitting_spectral(spec: &Spectrum, mg: &Multigraph) -> Result<DMatrix<f64>> {
    hitting_spectral_with(spec, mg, &Tolerances::default())
}

pub fn hitting_spectral_with(
    spec: &Spectrum,
    mg: &Multigraph,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    check_gap(spec, tol)?;
    let n = spec.n();
    let m = green_matrix(spec);
    let two_e = (2 * mg.total_weight()) as f64;
    let deg: Vec<f64> = mg.degrees().iter().map(|&d| d as f64).collect();
    let sqrt_deg: Vec<f64> = deg.iter().map(|&d| libm::sqrt(d)).collect();
    let mut h = DMatrix::from_fn(n, n, |i, j| {
        two_e * (m[(j, j)] / deg[j] - m[(i, j)] / (sqrt_deg[i] * sqrt_deg[j]))
    });
    let scale = h.amax().max(1.0);
    for i in 0..n {
        let diag = libm::fabs(h[(i, i)]);
        if diag > tol.diagonal_abs * scale {
            return Err(Error::RouteMismatch {
                what: "spectral hitting diagonal",
                max_rel: diag / scale,
                tol: tol.diagonal_abs,
            });
        }
        h[(i, i)] = 0.0;
    }
    Ok(h)
}

/// Expected hitting times of target `j` from every start, by solving the
/// first-step system `(I − Q_j) h = 1`. Entry `j` of the result is zero.
pub fn hitting_oracle_column(p: &DMatrix<f64>, j: usize) -> Result<Vec<f64>> {
    let n = p.nrows();
    let m = n - 1;
    let idx = |r: usize| if r < j { r } else { r + 1 };
    let mut a = vec![0.0; m * m];
    for r in 0..m {
        for c in 0..m {
            let delta = if r == c { 1.0 } else { 0.0 };
            a[r * m + c] = delta - p[(idx(r), idx(c))];
        }
    }
    let lu = Lu::factor(m, a, 1e-13).ok_or(Error::SingularSystem { target: j })?;
    let h = lu.solve(&vec![1.0; m]);
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&h[..j]);
    out.push(0.0);
    out.extend_from_slice(&h[j..]);
    Ok(out)
}

/// Hitting-time matrix from one linear solve per target.
pub fn hitting_oracle(mg: &Multigraph) -> Result<DMatrix<f64>> {
    let p = crate::projection::transition_matrix(mg)?;
    let n = mg.n();
    let mut h = DMatrix::zeros(n, n);
    for j in 0..n {
        let col = hitting_oracle_column(&p, j)?;
        h.set_column(j, &nalgebra::DVector::from_vec(col));
    }
    Ok(h)
}

/// Hitting-time matrix from one factorization of `I − P + 1πᵀ`:
/// with `Z` its inverse, `H_ij = (Z_jj − Z_ij) / π_j`. Faster than
/// [`hitting_oracle`] but shares the stationary vector with the spectral
/// route; meant for large `n`.
pub fn hitting_fundamental(mg: &Multigraph, dist: &StationaryDist) -> Result<DMatrix<f64>> {
    let p = crate::projection::transition_matrix(mg)?;
    let n = mg.n();
    let mut a = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let delta = if r == c { 1.0 } else { 0.0 };
            a[r * n + c] = delta - p[(r, c)] + dist.pi[c];
        }
    }
    let lu = Lu::factor(n, a, 1e-13).ok_or(Error::SingularSystem { target: 0 })?;
    let mut z = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for c in 0..n {
        e[c] = 1.0;
        z.set_column(c, &nalgebra::DVector::from_vec(lu.solve(&e)));
        e[c] = 0.0;
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (z[(j, j)] - z[(i, j)]) / dist.pi[j]
        }
    }))
}

/// `max |a − b| / max(|a|, |b|)` over entries (zero where both vanish).
pub fn max_relative_difference(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| relative_difference(x, y))
        .fold(0.0, f64::max)
}

fn relative_difference(x: f64, y: f64) -> f64 {
    let scale = libm::fabs(x).max(libm::fabs(y));
    if scale == 0.0 {
        0.0
    } else {
        libm::fabs(x - y) / scale
    }
}

fn max_relative_difference_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| relative_difference(x, y))
        .fold(0.0, f64::max)
}

/// `H_n = Σ_{k=1}^n 1/k`.
pub fn harmonic(n: usize) -> f64 {
    // Smallest terms first.
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// The walk-time quantities derived from a hitting-time matrix.
#[derive(Clone, Debug)]
pub struct WalkTimes {
    pub hitting: DMatrix<f64>,
    /// `H_j = Σ_i π(i) H_ij`.
    pub avg_target: Vec<f64>,
    /// `H^i = Σ_j π(j) H_ij`.
    pub avg_start: Vec<f64>,
    /// `κ(i,j) = H_ij + H_ji`.
    pub commute: DMatrix<f64>,
    pub cover_lower: f64,
    pub cover_upper: f64,
}

impl WalkTimes {
    pub fn new(hitting: DMatrix<f64>, dist: &StationaryDist) -> Result<Self> {
        let avg_target = avg_target(&hitting, dist);
        let avg_start = avg_start(&hitting, dist);
        let commute = commute(&hitting);
        let (cover_lower, cover_upper) = cover_bounds(&hitting)?;
        Ok(Self {
            hitting,
            avg_target,
            avg_start,
            commute,
            cover_lower,
            cover_upper,
        })
    }
}

/// `H_j = Σ_i π(i) H_ij`.
pub fn avg_target(hitting: &DMatrix<f64>, dist: &StationaryDist) -> Vec<f64> {
    (0..hitting.ncols())
        .map(|j| {
            dist.pi
                .iter()
                .enumerate()
                .map(|(i, p)| p * hitting[(i, j)])
                .sum()
        })
        .collect()
}

/// `(1/π(j)) Σ_{k≥2} v_kj² / (1 − λ_k)`.
pub fn avg_target_closed_form(spec: &Spectrum, dist: &StationaryDist) -> Vec<f64> {
    let n = spec.n();
    (0..n)
        .map(|j| {
            let s: f64 = (1..n)
                .map(|k| spec.v(k, j) * spec.v(k, j) / (1.0 - spec.eigenvalues[k]))
                .sum();
            s / dist.pi[j]
        })
        .collect()
}

/// [`avg_target`], required to agree with the closed form.
pub fn avg_target_checked(
    hitting: &DMatrix<f64>,
    spec: &Spectrum,
    dist: &StationaryDist,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let direct = avg_target(hitting, dist);
    let closed = avg_target_closed_form(spec, dist);
    let max_rel = max_relative_difference_slices(&direct, &closed);
    if max_rel > tol.route_rel {
        return Err(Error::RouteMismatch {
            what: "average target hitting time",
            max_rel,
            tol: tol.route_rel,
        });
    }
    Ok(direct)
}

/// `H^i = Σ_j π(j) H_ij`.
pub fn avg_start(hitting: &DMatrix<f64>, dist: &StationaryDist) -> Vec<f64> {
    (0..hitting.nrows())
        .map(|i| {
            dist.pi
                .iter()
                .enumerate()
                .map(|(j, p)| p * hitting[(i, j)])
                .sum()
        })
        .collect()
}

/// `Σ_{k≥2} 1/(1 − λ_k)`, the common value of every `H^i`.
pub fn avg_start_closed_form(spec: &Spectrum) -> f64 {
    spec.eigenvalues[1..].iter().map(|l| 1.0 / (1.0 - l)).sum()
}

/// [`avg_start`], required to be constant in `i` and equal to the closed form.
pub fn avg_start_checked(
    hitting: &DMatrix<f64>,
    spec: &Spectrum,
    dist: &StationaryDist,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let direct = avg_start(hitting, dist);
    let closed = avg_start_closed_form(spec);
    let max_rel = direct
        .iter()
        .map(|&x| relative_difference(x, closed))
        .fold(0.0, f64::max);
    if max_rel > tol.route_rel {
        return Err(Error::RouteMismatch {
            what: "average starting hitting time",
            max_rel,
            tol: tol.route_rel,
        });
    }
    Ok(direct)
}

/// Bounds on `H_j` from the AM–HM inequality and the spectral gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HittingBounds {
    /// `(1 − π(j))² / π(j)`.
    pub lower: f64,
    /// `2|Ẽ|/d_j − 2`, below `lower`.
    pub weak_lower: f64,
    /// `(2|Ẽ|/d_j) (1 − π(j)) / (1 − λ₂)`.
    pub upper: f64,
}

pub fn hitting_bounds(
    j: usize,
    mg: &Multigraph,
    spec: &Spectrum,
    dist: &StationaryDist,
) -> HittingBounds {
    let pi = dist.pi[j];
    let ratio = (2 * mg.total_weight()) as f64 / mg.degrees()[j] as f64;
    HittingBounds {
        lower: (1.0 - pi) * (1.0 - pi) / pi,
        weak_lower: ratio - 2.0,
        upper: ratio * (1.0 - pi) / spec.gap,
    }
}

/// `κ = H + Hᵀ`.
pub fn commute(hitting: &DMatrix<f64>) -> DMatrix<f64> {
    hitting + hitting.transpose()
}

/// `κ(i,j) = 2|Ẽ| Σ_{k≥2} (1/(1−λ_k)) (v_ki/√d_i − v_kj/√d_j)²`.
pub fn commute_spectral(spec: &Spectrum, mg: &Multigraph) -> DMatrix<f64> {
    let m = green_matrix(spec);
    quadratic_form(&m, mg, (2 * mg.total_weight()) as f64)
}

/// `s · (M_ii/d_i + M_jj/d_j − 2 M_ij/√(d_i d_j))`, zero on the diagonal.
fn quadratic_form(m: &DMatrix<f64>, mg: &Multigraph, s: f64) -> DMatrix<f64> {
    let n = m.nrows();
    let deg: Vec<f64> = mg.degrees().iter().map(|&d| d as f64).collect();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            s * (m[(i, i)] / deg[i] + m[(j, j)] / deg[j]
                - 2.0 * m[(i, j)] / libm::sqrt(deg[i] * deg[j]))
        }
    })
}

/// [`commute`], required to agree with [`commute_spectral`].
pub fn commute_checked(
    hitting: &DMatrix<f64>,
    spec: &Spectrum,
    mg: &Multigraph,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let direct = commute(hitting);
    let max_rel = max_relative_difference(&direct, &commute_spectral(spec, mg));
    if max_rel > tol.route_rel {
        return Err(Error::RouteMismatch {
            what: "commute time",
            max_rel,
            tol: tol.route_rel,
        });
    }
    Ok(direct)
}

/// `(|Ẽ|(1/d_i + 1/d_j), (2|Ẽ|/(1−λ₂))(1/d_i + 1/d_j))`.
pub fn commute_bounds(i: usize, j: usize, mg: &Multigraph, spec: &Spectrum) -> (f64, f64) {
    let e = mg.total_weight() as f64;
    let s = 1.0 / mg.degrees()[i] as f64 + 1.0 / mg.degrees()[j] as f64;
    (e * s, 2.0 * e * s / spec.gap)
}

/// `(min_{i≠j} H_ij · H_n, max_{i≠j} H_ij · H_n)`.
pub fn cover_bounds(hitting: &DMatrix<f64>) -> Result<(f64, f64)> {
    let n = hitting.nrows();
    if n < 2 {
        return Err(Error::InvalidParameter("cover bounds need n >= 2".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                lo = lo.min(hitting[(i, j)]);
                hi = hi.max(hitting[(i, j)]);
            }
        }
    }
    let h = harmonic(n);
    Ok((lo * h, hi * h))
}

/// `max_{i≠j} |Σ_{k≥2} (v_ki/√d_i − v_kj/√d_j)² − (1/d_i + 1/d_j)|`.
pub fn commute_identity_error(spec: &Spectrum, mg: &Multigraph) -> f64 {
    let q = complement_projector(spec);
    let form = quadratic_form(&q, mg, 1.0);
    let deg = mg.degrees();
    let n = spec.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let want = 1.0 / deg[i] as f64 + 1.0 / deg[j] as f64;
                worst = worst.max(libm::fabs(form[(i, j)] - want));
            }
        }
    }
    worst
}

/// `max_{i,j} |Σ_{k≥2} (v_kj²/d_j − v_ki v_kj/√(d_i d_j)) − [i≠j]/d_j|`.
pub fn hitting_identity_error(spec: &Spectrum, mg: &Multigraph) -> f64 {
    let q = complement_projector(spec);
    let deg = mg.degrees();
    let n = spec.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (di, dj) = (deg[i] as f64, deg[j] as f64);
            let got = q[(j, j)] / dj - q[(i, j)] / libm::sqrt(di * dj);
            let want = if i == j { 0.0 } else { 1.0 / dj };
            worst = worst.max(libm::fabs(got - want));
        }
    }
    worst
}

/// Worst relative violation of `lower ≤ x ≤ upper` (negative when inside).
fn sandwich_excess(lower: f64, x: f64, upper: f64) -> f64 {
    let scale = libm::fabs(x).max(f64::MIN_POSITIVE);
    ((lower - x) / scale).max((x - upper) / scale)
}

/// The finite-n inequalities and identities that hold on every connected
/// instance. A failure here means a bug, not an unlucky sample.
pub fn deterministic_checks(
    mg: &Multigraph,
    spec: &Spectrum,
    dist: &StationaryDist,
    times: &WalkTimes,
    tol: &Tolerances,
) -> Vec<Check> {
    let n = mg.n();
    let nf = n as f64;
    let mut checks = Vec::new();
    let ineq = |name: &'static str, worst: f64| Check::at_most(name, worst, tol.inequality_rel);

    let mut am_hm = f64::NEG_INFINITY;
    let mut weak = f64::NEG_INFINITY;
    for j in 0..n {
        let b = hitting_bounds(j, mg, spec, dist);
        let hj = times.avg_target[j];
        am_hm = am_hm.max(sandwich_excess(b.lower, hj, b.upper));
        weak = weak.max(sandwich_excess(b.weak_lower, b.lower, f64::INFINITY));
    }
    checks.push(ineq("avg_target_sandwich", am_hm));
    checks.push(ineq("avg_target_weak_lower", weak));

    let mut kappa = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let (lo, hi) = commute_bounds(i, j, mg, spec);
            kappa = kappa.max(sandwich_excess(lo, times.commute[(i, j)], hi));
        }
    }
    if n >= 2 {
        checks.push(ineq("commute_sandwich", kappa));
    }

    let start_lo = (nf - 1.0) / 2.0;
    let start_hi = (nf - 1.0) / spec.gap;
    let start = times
        .avg_start
        .iter()
        .map(|&h| sandwich_excess(start_lo, h, start_hi))
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(ineq("avg_start_sandwich", start));

    checks.push(ineq(
        "cover_bounds_ordered",
        sandwich_excess(times.cover_lower, times.cover_lower, times.cover_upper),
    ));

    let symmetric = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .all(|(i, j)| times.commute[(i, j)] == times.commute[(j, i)]);
    checks.push(Check::at_most(
        "commute_symmetric",
        if symmetric { 0.0 } else { 1.0 },
        0.0,
    ));

    let off_diag_positive = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .all(|(i, j)| times.hitting[(i, j)] > 0.0);
    checks.push(Check::at_most(
        "hitting_positive",
        if off_diag_positive { 0.0 } else { 1.0 },
        0.0,
    ));

    let closed_target = avg_target_closed_form(spec, dist);
    checks.push(Check::at_most(
        "avg_target_closed_form",
        max_relative_difference_slices(&times.avg_target, &closed_target),
        tol.route_rel,
    ));
    let closed_start = avg_start_closed_form(spec);
    checks.push(Check::at_most(
        "avg_start_constant",
        times
            .avg_start
            .iter()
            .map(|&x| relative_difference(x, closed_start))
            .fold(0.0, f64::max),
        tol.route_rel,
    ));
    checks.push(Check::at_most(
        "commute_spectral_form",
        max_relative_difference(&times.commute, &commute_spectral(spec, mg)),
        tol.route_rel,
    ));
    checks.push(Check::at_most(
        "commute_identity",
        commute_identity_error(spec, mg),
        tol.identity_abs,
    ));
    checks.push(Check::at_most(
        "hitting_identity",
        hitting_identity_error(spec, mg),
        tol.identity_abs,
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate, GenerationParams, Hypergraph};
    use crate::projection::{project, stationary};
    use crate::spectral::spectrum;

    fn single_edge(d: usize) -> Multigraph {
        project(&Hypergraph::new(d, d, [(0..d).collect::<Vec<_>>()]).unwrap())
    }

    #[test]
    fn complete_hyperedge_hitting_times() {
        // First-step analysis on K_d: h = 1 + ((d-2)/(d-1)) h  =>  h = d - 1.
        for d in 3..=8 {
            let mg = single_edge(d);
            let spec = spectrum(&mg).unwrap();
            let h = hitting_spectral(&spec, &mg).unwrap();
            let oracle = hitting_oracle(&mg).unwrap();
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { 0.0 } else { d as f64 - 1.0 };
                    assert!((h[(i, j)] - want).abs() < 1e-10);
                    assert!((oracle[(i, j)] - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn triangle_quantities() {
        let mg = single_edge(3);
        let spec = spectrum(&mg).unwrap();
        let dist = stationary(&mg).unwrap();
        let tol = Tolerances::default();
        let h = hitting_spectral(&spec, &mg).unwrap();
        let target = avg_target_checked(&h, &spec, &dist, &tol).unwrap();
        let start = avg_start_checked(&h, &spec, &dist, &tol).unwrap();
        for j in 0..3 {
            assert!((target[j] - 4.0 / 3.0).abs() < 1e-12);
            assert!((start[j] - 4.0 / 3.0).abs() < 1e-12);
            let b = hitting_bounds(j, &mg, &spec, &dist);
            assert!((b.lower - 4.0 / 3.0).abs() < 1e-12);
            assert!((b.upper - 4.0 / 3.0).abs() < 1e-12);
            assert!((b.weak_lower - 1.0).abs() < 1e-12);
        }
        let kappa = commute_checked(&h, &spec, &mg, &tol).unwrap();
        assert!((kappa[(0, 1)] - 4.0).abs() < 1e-12);
        assert_eq!(kappa[(2, 2)], 0.0);
        let (lo, hi) = commute_bounds(0, 1, &mg, &spec);
        assert!((lo - 3.0).abs() < 1e-12 && (hi - 4.0).abs() < 1e-12);
        let (clo, chi) = cover_bounds(&h).unwrap();
        assert!((clo - 11.0 / 3.0).abs() < 1e-12);
        assert!((chi - 11.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn complete_hyperedge_avg_start() {
        for d in 3..=8 {
            let mg = single_edge(d);
            let spec = spectrum(&mg).unwrap();
            let want = ((d - 1) * (d - 1)) as f64 / d as f64;
            assert!((avg_start_closed_form(&spec) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn path_oracle_matches_truncated_expectation() {
        // Path 1-2-3 (d = 2). Truncated first-passage expectation by
        // propagating the distribution of the not-yet-absorbed walk.
        let h = Hypergraph::from_one_based(3, 2, [[1, 2], [2, 3]]).unwrap();
        let mg = project(&h);
        let oracle = hitting_oracle(&mg).unwrap();
        let p = crate::projection::transition_matrix(&mg).unwrap();
        for start in 0..3 {
            for target in 0..3 {
                if start == target {
                    continue;
                }
                let mut mass = vec![0.0; 3];
                mass[start] = 1.0;
                let mut expectation = 0.0;
                for t in 1..=200 {
                    let mut next = vec![0.0; 3];
                    for (a, &m) in mass.iter().enumerate() {
                        for b in 0..3 {
                            next[b] += m * p[(a, b)];
                        }
                    }
                    expectation += t as f64 * next[target];
                    next[target] = 0.0;
                    mass = next;
                }
                assert!((oracle[(start, target)] - expectation).abs() < 1e-9);
            }
        }
        assert!((oracle[(0, 2)] - 4.0).abs() < 1e-12);
        assert!((oracle[(1, 2)] - 3.0).abs() < 1e-12);
        assert!((oracle[(0, 1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_routes_agree_on_random_instance() {
        let h = generate(&GenerationParams::new(60, 3, 0.02, 4).connected(20)).unwrap();
        let mg = project(&h);
        let spec = spectrum(&mg).unwrap();
        let dist = stationary(&mg).unwrap();
        let spectral = hitting_spectral(&spec, &mg).unwrap();
        let oracle = hitting_oracle(&mg).unwrap();
        let fundamental = hitting_fundamental(&mg, &dist).unwrap();
        assert!(max_relative_difference(&spectral, &oracle) < 1e-8);
        assert!(max_relative_difference(&fundamental, &oracle) < 1e-8);
        let times = WalkTimes::new(spectral, &dist).unwrap();
        for c in deterministic_checks(&mg, &spec, &dist, &times, &Tolerances::default()) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn disconnected_input_is_singular() {
        let h = Hypergraph::from_one_based(6, 3, [[1, 2, 3], [4, 5, 6]]).unwrap();
        let mg = project(&h);
        assert!(matches!(
            hitting_oracle(&mg),
            Err(Error::SingularSystem { .. })
        ));
        let spec = spectrum(&mg).unwrap();
        assert!(matches!(
            hitting_spectral(&spec, &mg),
            Err(Error::DegenerateGap { .. })
        ));
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-15);
        assert!(cover_bounds(&DMatrix::zeros(1, 1)).is_err());
    }
}
