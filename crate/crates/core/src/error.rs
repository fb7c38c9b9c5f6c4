use thiserror::Error;

/// Errors produced anywhere in the contour/bound/regression pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("contour needs at least 4 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("contour is degenerate (all points collinear)")]
    DegenerateContour,
    #[error("k = {k} outside the valid range [4, {max}]")]
    BadK { k: usize, max: usize },
    #[error("smoothing window {window} must be odd, >= 3 and smaller than K = {points}")]
    WindowTooLarge { window: usize, points: usize },
    #[error("invalid smoothing window {0}: must be odd and >= 3")]
    BadWindow(usize),
    #[error("vanishing tangent while estimating curvature at point {0}")]
    DegenerateDerivative(usize),
    #[error("contour has no absolute curvature to distribute")]
    FlatContour,
    #[error("configuration has zero norm after centering")]
    ZeroNorm,
    #[error("threshold E = {0} must lie in (0, 1)")]
    BadThreshold(f64),
    #[error("no k in [4, {max}] meets the threshold")]
    NoFeasibleK { max: usize },
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("too few rows: {rows} (need more than {needed})")]
    TooFewRows { rows: usize, needed: usize },
    #[error("feature `{0}` missing from row")]
    MissingFeature(String),
    #[error("category `{0}` leaves an unfittable training set")]
    SingletonCategory(String),
    #[error("need at least 2 categories, got {0}")]
    TooFewCategories(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoFeasibleK { .. }
                | Error::RankDeficient
                | Error::DegenerateDerivative(_)
                | Error::FlatContour
                | Error::ZeroNorm
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
