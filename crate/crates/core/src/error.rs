use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error(
        "Bohr frequency {omega:e} is within {tol:e} of zero; thermal rate diverges (epsilon ~ J)"
    )]
    RateSingularity { omega: f64, tol: f64 },

    #[error("transition frequency {omega} does not match a unique Bohr frequency of the chain")]
    Degeneracy { omega: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("steady state is not unique: null gap {gap:e} <= {tol:e}")]
    NonUniqueSteadyState { gap: f64, tol: f64 },

    #[error("steady state is not positive: minimum eigenvalue {min_eigenvalue:e}")]
    Positivity { min_eigenvalue: f64 },

    #[error("RK4 propagation did not converge by t = {time}: residual {residual:e}")]
    NoConvergence { time: f64, residual: f64 },

    #[error("spin-flip eigenvalue {0:e} is negative beyond round-off")]
    NumericalDegradation(f64),

    #[error("eigendecomposition failed")]
    Eigen,

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("at {context}: {source}")]
    AtPoint {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn at(self, context: impl Into<String>) -> Self {
        Error::AtPoint {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Unwraps point context to the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_rate_singularity(&self) -> bool {
        matches!(self.root(), Error::RateSingularity { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
