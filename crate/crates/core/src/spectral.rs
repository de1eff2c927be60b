//! Spectrum of the normalized adjacency `B_ij = a_ij / √(d_i d_j)`.
//!
//! `B` is similar to the transition matrix, so its eigenvalues lie in
//! `[-1, 1]` with `λ₁ = 1` on connected instances and Perron vector
//! `v₁ = (√(d_j / 2|Ẽ|))_j`. All hitting-time formulas sum over the full
//! spectrum, so the decomposition is dense and complete.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;

use crate::checks::Check;
use crate::error::{Error, Result};
use crate::hypergraph::binomial;
use crate::projection::{Multigraph, StationaryDist};

/// Builds `B`. Zero diagonal; symmetric by construction.
pub fn build_b(mg: &Multigraph) -> Result<DMatrix<f64>> {
    let n = mg.n();
    if let Some(vertex) = mg.degrees().iter().position(|&d| d == 0) {
        return Err(Error::ZeroDegree { vertex });
    }
    let sqrt_deg: Vec<f64> = mg.degrees().iter().map(|&d| libm::sqrt(d as f64)).collect();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, a) in mg.neighbors(i) {
            if j > i {
                let v = a as f64 / (sqrt_deg[i] * sqrt_deg[j]);
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
    }
    Ok(b)
}

/// Full eigendecomposition of `B`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// `λ₁ ≥ λ₂ ≥ … ≥ λ_n`.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: DMatrix<f64>,
    /// `1 − λ₂`.
    pub gap: f64,
    /// `max(1 − λ̃₁, λ̃_{n−1} − 1) = max(λ₂, −λ_n)` for the Laplacian `I − B`.
    pub lambda_bar: f64,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Entry `j` of eigenvector `k` (both 0-based).
    #[inline]
    pub fn v(&self, k: usize, j: usize) -> f64 {
        self.eigenvectors[(j, k)]
    }
}

/// Decomposes a symmetric matrix. Eigenvalues come out descending and every
/// eigenvector is signed so that its first entry of magnitude above `1e-12`
/// is positive.
pub fn decompose(b: &DMatrix<f64>) -> Result<Spectrum> {
    let n = b.nrows();
    if n < 2 || b.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "need a square matrix with n >= 2, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    let asym = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| libm::fabs(b[(i, j)] - b[(j, i)]))
        .fold(0.0, f64::max);
    if asym > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "matrix not symmetric ({asym:e})"
        )));
    }

    let eig =
        SymmetricEigen::try_new(b.clone(), f64::EPSILON, 0).ok_or(Error::EigensolverFailure {
            residual: f64::INFINITY,
        })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let sign = match col.iter().find(|x| libm::fabs(**x) > 1e-12) {
            Some(&x) if x < 0.0 => -1.0,
            _ => 1.0,
        };
        eigenvectors.set_column(dst, &(col * sign));
    }

    let residual = max_eigen_residual(b, &eigenvalues, &eigenvectors);
    if !(residual <= 1e-9 * n as f64) {
        return Err(Error::EigensolverFailure { residual });
    }

    let gap = 1.0 - eigenvalues[1];
    let lambda_bar = eigenvalues[1].max(-eigenvalues[n - 1]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        gap,
        lambda_bar,
    })
}

/// Convenience: `decompose(build_b(mg))`.
pub fn spectrum(mg: &Multigraph) -> Result<Spectrum> {
    decompose(&build_b(mg)?)
}

/// `max_k ‖B v_k − λ_k v_k‖₂`.
pub fn max_eigen_residual(b: &DMatrix<f64>, eigenvalues: &[f64], vectors: &DMatrix<f64>) -> f64 {
    let bv = b * vectors;
    (0..eigenvalues.len())
        .map(|k| (bv.column(k) - vectors.column(k) * eigenvalues[k]).norm())
        .fold(0.0, f64::max)
}

/// Measured deviations from the spectral identities of a connected instance.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDiagnostics {
    /// `|λ₁ − 1|`.
    pub top_eigenvalue_error: f64,
    /// Largest excursion of any eigenvalue outside `[-1, 1]`.
    pub range_excess: f64,
    /// `max_j |v₁_j − √(d_j / 2|Ẽ|)|`.
    pub perron_vector_error: f64,
    /// `max_i |Σ_j B_ij √d_j − √d_i|`.
    pub perron_identity_error: f64,
    /// `‖VᵀV − I‖_max`.
    pub orthonormality_error: f64,
    pub max_eigen_residual: f64,
    /// `|Σ_k λ_k|` (trace of a zero-diagonal matrix).
    pub trace_error: f64,
    /// `max_j |Σ_{k≥2} v_kj² − (1 − π_j)|`.
    pub complement_mass_error: f64,
    /// `max_j |Σ_{k≥2} (1 − λ_k) v_kj² − 1|`.
    pub laplacian_diagonal_error: f64,
}

impl SpectralDiagnostics {
    /// The diagnostics as pass/fail checks at the default tolerances.
    pub fn checks(&self, n: usize) -> Vec<Check> {
        alloc::vec![
            Check::at_most("top_eigenvalue", self.top_eigenvalue_error, 1e-10),
            Check::at_most("eigenvalue_range", self.range_excess, 1e-10),
            Check::at_most("perron_vector", self.perron_vector_error, 1e-8),
            Check::at_most("perron_identity", self.perron_identity_error, 1e-10),
            Check::at_most("orthonormality", self.orthonormality_error, 1e-8),
            Check::at_most("eigen_residual", self.max_eigen_residual, 1e-9 * n as f64),
            Check::at_most("trace_zero", self.trace_error, 1e-9),
            Check::at_most("complement_mass", self.complement_mass_error, 1e-10),
            Check::at_most("laplacian_diagonal", self.laplacian_diagonal_error, 1e-10),
        ]
    }
}

pub fn diagnostics(
    mg: &Multigraph,
    b: &DMatrix<f64>,
    spec: &Spectrum,
    dist: &StationaryDist,
) -> SpectralDiagnostics {
    let n = spec.n();
    let lam = &spec.eigenvalues;
    let two_e = (2 * mg.total_weight()) as f64;
    let sqrt_deg: Vec<f64> = mg.degrees().iter().map(|&d| libm::sqrt(d as f64)).collect();

    let perron_vector_error = (0..n)
        .map(|j| libm::fabs(spec.v(0, j) - libm::sqrt(mg.degrees()[j] as f64 / two_e)))
        .fold(0.0, f64::max);
    let perron_identity_error = (0..n)
        .map(|i| {
            let s: f64 = (0..n).map(|j| b[(i, j)] * sqrt_deg[j]).sum();
            libm::fabs(s - sqrt_deg[i])
        })
        .fold(0.0, f64::max);

    let gram = spec.eigenvectors.transpose() * &spec.eigenvectors;
    let orthonormality_error = (gram - DMatrix::<f64>::identity(n, n)).amax();

    let mut complement_mass_error = 0.0f64;
    let mut laplacian_diagonal_error = 0.0f64;
    for j in 0..n {
        let (mut mass, mut weighted) = (0.0, 0.0);
        for k in 1..n {
            let v2 = spec.v(k, j) * spec.v(k, j);
            mass += v2;
            weighted += (1.0 - lam[k]) * v2;
        }
        complement_mass_error = complement_mass_error.max(libm::fabs(mass - (1.0 - dist.pi[j])));
        laplacian_diagonal_error = laplacian_diagonal_error.max(libm::fabs(weighted - 1.0));
    }

    SpectralDiagnostics {
        top_eigenvalue_error: libm::fabs(lam[0] - 1.0),
        range_excess: lam
            .iter()
            .map(|&l| (l - 1.0).max(-1.0 - l).max(0.0))
            .fold(0.0, f64::max),
        perron_vector_error,
        perron_identity_error,
        orthonormality_error,
        max_eigen_residual: max_eigen_residual(b, lam, &spec.eigenvectors),
        trace_error: libm::fabs(lam.iter().sum::<f64>()),
        complement_mass_error,
        laplacian_diagonal_error,
    }
}

fn regime_term(n: usize, d: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < p < 1, got {p}")));
    }
    if d < 2 || n <= d {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= d < n, got n = {n}, d = {d}"
        )));
    }
    let c = binomial(n as u64 - 1, d as u64 - 1)
        .ok_or_else(|| Error::InvalidParameter("C(n-1, d-1) overflows".into()))? as f64;
    Ok(libm::sqrt((1.0 - p) / (c * p)))
}

/// `1/(n−1) + 3·√((1−p) / (C(n−1,d−1)·p))`, the check band for `λ̄` with the
/// `(3 + o(1))` factor taken as 3.
pub fn lu_peng_bound(n: usize, d: usize, p: f64) -> Result<f64> {
    Ok(1.0 / (n as f64 - 1.0) + 3.0 * regime_term(n, d, p)?)
}

/// Upper bound on `1/(1 − λ₂)` implied by [`lu_peng_bound`]:
/// `1 / (1 − 1/(n−1) − 3·√(…))`. `Ok(None)` when the denominator is not
/// positive, i.e. the bound is vacuous at this size.
pub fn gap_inverse_bound(n: usize, d: usize, p: f64) -> Result<Option<f64>> {
    let denom = 1.0 - lu_peng_bound(n, d, p)?;
    Ok((denom > 0.0).then(|| 1.0 / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate, GenerationParams, Hypergraph};
    use crate::projection::{project, stationary};

    fn single_edge(d: usize) -> Multigraph {
        project(&Hypergraph::new(d, d, [(0..d).collect::<Vec<_>>()]).unwrap())
    }

    #[test]
    fn b_entries() {
        let b = build_b(&single_edge(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 0.5 };
                assert!((b[(i, j)] - want).abs() < 1e-15);
            }
        }
        let k4 = project(&generate(&GenerationParams::new(4, 2, 1.0, 0)).unwrap());
        let b = build_b(&k4).unwrap();
        assert!((b[(0, 3)] - 1.0 / 3.0).abs() < 1e-16);
        let h = Hypergraph::from_one_based(4, 3, [[1, 2, 3], [1, 2, 4]]).unwrap();
        let b = build_b(&project(&h)).unwrap();
        assert!((b[(0, 1)] - 0.5).abs() < 1e-15);
        assert!((b[(0, 2)] - 1.0 / 8f64.sqrt()).abs() < 1e-16);
        assert_eq!(b[(2, 3)], 0.0);
    }

    #[test]
    fn complete_hyperedge_spectrum() {
        // Normalized adjacency of K_d: 1 once, -1/(d-1) with multiplicity d-1.
        for d in 2..=8 {
            let spec = spectrum(&single_edge(d)).unwrap();
            assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-12);
            for &l in &spec.eigenvalues[1..] {
                assert!((l + 1.0 / (d as f64 - 1.0)).abs() < 1e-12, "d={d}: {l}");
            }
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        for n in [3usize, 6, 11] {
            let mg = project(&generate(&GenerationParams::new(n, 2, 1.0, 0)).unwrap());
            let spec = spectrum(&mg).unwrap();
            assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-9);
            for &l in &spec.eigenvalues[1..] {
                assert!((l + 1.0 / (n as f64 - 1.0)).abs() < 1e-9);
            }
            assert!((spec.gap - n as f64 / (n as f64 - 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn identities_on_random_instance() {
        let h = generate(&GenerationParams::new(80, 3, 0.01, 17).connected(20)).unwrap();
        let mg = project(&h);
        let b = build_b(&mg).unwrap();
        let spec = decompose(&b).unwrap();
        let diag = diagnostics(&mg, &b, &spec, &stationary(&mg).unwrap());
        assert!(diag.top_eigenvalue_error < 1e-10);
        assert!(diag.range_excess < 1e-10);
        assert!(diag.perron_vector_error < 1e-8);
        assert!(diag.perron_identity_error < 1e-12);
        assert!(diag.orthonormality_error < 1e-8);
        assert!(diag.max_eigen_residual < 1e-9 * 80.0);
        assert!(diag.trace_error < 1e-9);
        assert!(diag.complement_mass_error < 1e-10);
        assert!(diag.laplacian_diagonal_error < 1e-10);
        assert!(spec.gap > 0.0 && spec.gap <= 2.0);
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(spec.v(0, 0) > 0.0);
    }

    #[test]
    fn lambda_bar_uses_second_and_last() {
        let spec = spectrum(&single_edge(4)).unwrap();
        // λ₂ = λ_n = -1/3: max(-1/3, 1/3).
        assert!((spec.lambda_bar - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(decompose(&m).is_err());
        assert!(decompose(&DMatrix::zeros(1, 1)).is_err());
        let h = Hypergraph::from_one_based(4, 3, [[1, 2, 3]]).unwrap();
        assert_eq!(
            build_b(&project(&h)).unwrap_err(),
            Error::ZeroDegree { vertex: 3 }
        );
    }

    #[test]
    fn lu_peng_values() {
        assert!((lu_peng_bound(101, 2, 0.5).unwrap() - 0.31).abs() < 1e-12);
        let want = 1.0 / 3.0 + 3.0 / 3f64.sqrt();
        assert!((lu_peng_bound(4, 3, 0.5).unwrap() - want).abs() < 1e-12);
        assert!(lu_peng_bound(10, 3, 0.0).is_err());
        assert!(lu_peng_bound(10, 3, 1.0).is_err());
        assert!(lu_peng_bound(3, 3, 0.5).is_err());
        assert_eq!(gap_inverse_bound(4, 3, 0.5).unwrap(), None);
        let g = gap_inverse_bound(101, 2, 0.5).unwrap().unwrap();
        assert!((g - 1.0 / 0.69).abs() < 1e-12);
    }
}
