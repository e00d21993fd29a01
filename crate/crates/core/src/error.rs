use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{n} particles exceeds the permutation-sum limit of {max}")]
    TooManyParticles { n: usize, max: usize },

    #[error("permutation-sum exponent {exponent:.3} exceeds bound {bound}")]
    Overflow { exponent: f64, bound: f64 },

    #[error("fermionic coincidence: normalized permutation sum {value:e} underflows")]
    Coincidence { value: f64 },

    #[error("singular symplectic form: smallest eigenvalue {min_eigenvalue:e} below {threshold:e}")]
    Singular { min_eigenvalue: f64, threshold: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxSteps(usize),

    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("trajectory is not classifiable: {0}")]
    Unclassified(String),

    #[error("level set is empty at phi = {phi}")]
    NoSolution { phi: f64 },

    #[error("orbit does not close: |z(T) - z(0)| = {gap:e}")]
    OpenOrbit { gap: f64 },

    #[error("initial separation is zero")]
    ZeroSeparation,

    #[error("Fock cutoff {cutoff} too small for |z|^2 = {rho}")]
    CutoffTooSmall { cutoff: usize, rho: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(&'static str),

    #[error("tail mass {mass:e} above guard at cutoff {cutoff}")]
    TailMass { mass: f64, cutoff: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) | Error::NonFinite(_) | Error::InvalidParameter(_) => "domain",
            Error::TooManyParticles { .. } | Error::Overflow { .. } => "overflow",
            Error::Coincidence { .. } | Error::Singular { .. } => "singular",
            Error::StepUnderflow { .. } | Error::MaxSteps(_) | Error::NonFiniteState { .. } => {
                "integration"
            }
            Error::NoConvergence { .. } => "convergence",
            Error::Unclassified(_)
            | Error::NoSolution { .. }
            | Error::OpenOrbit { .. }
            | Error::ZeroSeparation => "analysis",
            Error::CutoffTooSmall { .. } | Error::DegenerateState(_) | Error::TailMass { .. } => {
                "fock"
            }
        }
    }
}
