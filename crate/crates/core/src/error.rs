use alloc::string::String;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A column name does not exist in the dataset or fit.
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    /// Malformed dataset: ragged columns, duplicate or empty names, non-finite values.
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    /// The model specification is inconsistent (e.g. the outcome is also a covariate).
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
    /// The design matrix is numerically rank deficient.
    #[error("design matrix is rank deficient (column `{column}` is collinear with earlier columns)")]
    RankDeficient {
        /// First column found to be (numerically) dependent.
        column: String,
    },
    /// Not enough rows to estimate the regression and keep a residual degree of freedom.
    #[error("insufficient rows: n = {n} but {p} regressors")]
    InsufficientRows {
        /// Number of observations.
        n: usize,
        /// Number of regressors including the intercept.
        p: usize,
    },
    /// The conditioning set explains the left variable perfectly.
    #[error("conditioning set explains `{0}` perfectly (R² = 1)")]
    DegenerateConditioning(String),
    /// A residual vector has zero variance.
    #[error("residual of `{0}` has zero variance")]
    ZeroVarianceResidual(String),
    /// A correlation of magnitude one in the recursive partial-correlation formula.
    #[error("recursive partial correlation denominator is zero")]
    DenominatorDegenerate,
    /// `r2 = 1` passed to Cohen's f².
    #[error("R² is saturated at 1; f² is infinite")]
    Saturated,
    /// Hypothetical confounder outside `0 <= r2 < 1` (treatment) or `[0, 1]` (outcome).
    #[error("invalid hypothetical confounder: {0}")]
    InvalidConfounder(String),
    /// Degrees of freedom too small for the requested quantity.
    #[error("degrees of freedom {df} too small (need at least {min})")]
    DegenerateDf {
        /// Degrees of freedom supplied.
        df: usize,
        /// Minimum required.
        min: usize,
    },
    /// `q` outside `(0, 1]`.
    #[error("q must lie in (0, 1], got {0}")]
    InvalidQ(f64),
    /// `alpha` outside `(0, 1)`.
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    /// The treatment has no partial association with the outcome.
    #[error("treatment has zero partial correlation with the outcome")]
    ZeroTreatmentAssociation,
    /// A correlation outside `(-1, 1)` or otherwise unusable.
    #[error("invalid correlation: {0}")]
    InvalidCorrelation(f64),
    /// A benchmark covariate has no association with the treatment or outcome.
    #[error("benchmark covariates have zero association with `{0}`")]
    ZeroBenchmarkAssociation(String),
    /// The observed covariates explain the variable perfectly.
    #[error("covariates explain `{0}` perfectly")]
    SaturatedModel(String),
    /// The benchmark partial R² equals one.
    #[error("benchmark partial R² with `{0}` is 1")]
    SaturatedBenchmark(String),
    /// Total-R² benchmarking requested with more than one covariate.
    #[error("total-R² benchmarking supports exactly one benchmark covariate, got {0}")]
    MultipleBenchmarkCovariatesUnsupported(usize),
    /// A benchmark specification is malformed.
    #[error("invalid benchmark: {0}")]
    InvalidBenchmark(String),
    /// A numeric argument outside its domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// `r2_yz_dx` has no exact expression under the assumed sign case.
    #[error("sign case `{0}` admits only a lower bound for R²(Y~Z|D,X)")]
    UnresolvableSignCase(&'static str),
    /// Rejection sampling could not realize the requested sign regime.
    #[error("sign regime `{0}` not realized within the retry budget")]
    RegimeUnreachable(&'static str),
    /// Invalid data-generating configuration.
    #[error("invalid DGP configuration: {0}")]
    InvalidConfig(String),
    /// A bisection bracket does not contain a sign change.
    #[error("bisection bracket does not contain a root")]
    BracketFailure,
    /// Contour grid specification is invalid.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// True for failures of the numerical machinery (rank deficiency,
    /// saturation, degenerate residuals) as opposed to bad user input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::InsufficientRows { .. }
                | Error::DegenerateConditioning(_)
                | Error::ZeroVarianceResidual(_)
                | Error::DenominatorDegenerate
                | Error::Saturated
                | Error::ZeroTreatmentAssociation
                | Error::ZeroBenchmarkAssociation(_)
                | Error::SaturatedModel(_)
                | Error::SaturatedBenchmark(_)
                | Error::DegenerateDf { .. }
                | Error::BracketFailure
                | Error::RegimeUnreachable(_)
        )
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
