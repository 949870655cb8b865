use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("coin bias p = {0} is outside [0, 1]")]
    BiasOutOfRange(f64),

    #[error("initial coin state is not normalized: |c|^2 + |d|^2 = {0}")]
    CoinStateNotNormalized(f64),

    #[error("coin matrix is not unitary (residual {0:e})")]
    CoinNotUnitary(f64),

    #[error("this construction needs a U(p) coin, not a general unitary")]
    RequiresBiasedCoin,

    #[error("trace period must be at least 1, got {0}")]
    InvalidTracePeriod(usize),

    #[error("reshuffling index must be at least 1, got {0}")]
    InvalidReshufflingIndex(usize),

    #[error("dense window is empty")]
    EmptyWindow,

    #[error("Kraus completeness violated (residual {0:e})")]
    CompletenessViolation(f64),

    #[error("negative probability {value:e} at site {site}")]
    NegativeProbability { site: i64, value: f64 },

    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),

    #[error("density matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("kernel has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("kernel is not stochastic: min coefficient {min:e}, coefficient sum {sum}")]
    NotStochastic { min: f64, sum: f64 },

    #[error(
        "first step is incompatible with the classical kernel: measured P(+1) = {measured}, expected 1 - p = {expected}"
    )]
    IncompatibleFirstStep { measured: f64, expected: f64 },

    #[error("trajectory is empty")]
    EmptyTrajectory,
}
