use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("hypergraph not connected after {attempts} samples (p too small for conditioning at this n)")]
    ConnectivityNotAchieved { attempts: u32 },

    #[error("C({n},{d}) exceeds the enumeration limit {limit}")]
    EnumerationTooLarge { n: usize, d: usize, limit: u64 },

    #[error("vertex {vertex} has degree zero")]
    ZeroDegree { vertex: usize },

    #[error("symmetric eigensolver failed (residual {residual:e})")]
    EigensolverFailure { residual: f64 },

    #[error("spectral gap {gap:e} is degenerate")]
    DegenerateGap { gap: f64 },

    #[error("singular first-passage system for target {target} (disconnected input?)")]
    SingularSystem { target: usize },

    #[error("{what}: routes disagree, max relative difference {max_rel:e} > {tol:e}")]
    RouteMismatch {
        what: &'static str,
        max_rel: f64,
        tol: f64,
    },

    #[error("all {trials} trials hit the step cap")]
    AllTrialsTruncated { trials: u64 },
}

pub type Result<T> = core::result::Result<T, Error>;
