use thiserror::Error;

/// Errors shared by all numeric kernels in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QptError {
    #[error("kappa must be positive and finite, got {0}")]
    NonPositiveKappa(f64),
    #[error("gain rate g must be nonnegative, got {0}")]
    NegativeGain(f64),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("b = {0} is not in the unbroken phase; the oscillation period is undefined")]
    PhaseError(f64),
    #[error("length hits a boundary-value singularity (min |sin(beta*l +/- eps)| = {0:e})")]
    SingularLength(f64),
    #[error("photon flux {0:e} is too small to normalize the noise figure")]
    DegenerateFlux(f64),
    #[error("discriminant Sigma^2 - 4 det V = {0:e} is negative beyond tolerance")]
    NegativeDiscriminant(f64),
    #[error("covariance condition number {0:e} exceeds 1e12")]
    IllConditioned(f64),
    #[error("complex continuation gave a non-real result: re = {re:e}, im = {im:e}")]
    InternalConsistency { re: f64, im: f64 },
    #[error("boundary rearrangement pivot magnitude {0:e} is at or below 1e-12")]
    SingularRearrangement(f64),
    #[error("covariance is not a valid Gaussian state (pivot {0:e} < -1e-12)")]
    NotGaussianValid(f64),
    #[error("invalid sweep spec: {0}")]
    SpecError(String),
}

impl QptError {
    /// Short stable token used by the sweep engine to mask failed grid points.
    pub fn mask_code(&self) -> &'static str {
        match self {
            QptError::NonPositiveKappa(_) => "NonPositiveKappa",
            QptError::NegativeGain(_) => "NegativeGain",
            QptError::NonFinite(_) => "NonFinite",
            QptError::PhaseError(_) => "PhaseError",
            QptError::SingularLength(_) => "SingularLength",
            QptError::DegenerateFlux(_) => "DegenerateFlux",
            QptError::NegativeDiscriminant(_) => "NegativeDiscriminant",
            QptError::IllConditioned(_) => "IllConditioned",
            QptError::InternalConsistency { .. } => "InternalConsistency",
            QptError::SingularRearrangement(_) => "SingularRearrangement",
            QptError::NotGaussianValid(_) => "NotGaussianValid",
            QptError::SpecError(_) => "SpecError",
        }
    }
}

pub type Result<T> = std::result::Result<T, QptError>;
