use alloc::boxed::Box;

use crate::design::Design;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("second-kind index {0} is below -1")]
    IndexBelowMinusOne(i64),

    #[error("index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid node set: {0}")]
    InvalidNodes(&'static str),

    #[error("invalid weights: {0}")]
    InvalidWeights(&'static str),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not real on the real line (max |Im coeff| = {max_imag:e})")]
    NotRealValued { max_imag: f64 },

    #[error("bracket {index} = ({lo}, {hi}) has no sign change")]
    NoSignChange { index: usize, lo: f64, hi: f64 },

    #[error("roots are not strictly increasing; brackets overlap")]
    UnorderedRoots,

    /// Gram matrix cannot be factored: the measure has fewer than `needed` support points.
    #[error("gram matrix is rank deficient: support has {support} points, degree needs {needed}")]
    InsufficientSupport { support: usize, needed: usize },

    /// Gram matrix factorization hit a pivot below the rank threshold.
    #[error("gram matrix is rank deficient: pivot {pivot:e} at column {column}")]
    RankDeficient { column: usize, pivot: f64 },

    #[error("evaluation point coincides with node {index}")]
    PointOnNode { index: usize },

    #[error("point ({re}, {im}) is not exterior to [-1, 1]")]
    NotExterior { re: f64, im: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    /// No multi-start run met the convergence criterion; the best iterate is attached.
    #[error("support optimizer did not converge; best iterate returned uncertified")]
    NotConverged(Box<Design>),
}

impl Error {
    /// Whether the failure is numerical (the inputs were valid but a
    /// computation broke down) rather than a rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroPolynomial
                | Error::NotRealValued { .. }
                | Error::NoSignChange { .. }
                | Error::UnorderedRoots
                | Error::RankDeficient { .. }
                | Error::NotConverged(_)
        )
    }
}
