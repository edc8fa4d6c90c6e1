use thiserror::Error;

use crate::segstab::SegmentVerdict;

/// Errors raised by the polynomial, certification and geometry layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero polynomial where a nonzero operand is required")]
    ZeroPolynomial,
    #[error("non-finite coefficient in input")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(f64),
    #[error("polynomial is not Hurwitz: {0}")]
    NotHurwitz(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate conic: {0}")]
    DegenerateConic(String),
    #[error("polynomial vanishes at z = -1, the pole of the bilinear map")]
    TransformPole,
    #[error("consistency alarm: {0}")]
    ConsistencyAlarm(String),
    #[error("root finder did not converge: {0}")]
    NoConvergence(String),
    #[error("denominator vanishes on the imaginary axis near omega = {0}")]
    AxisPole(f64),
    #[error("linear program infeasible: {0}")]
    LpInfeasible(String),
    #[error("degree {degree} exceeds the cap of {cap} for this method")]
    DegreeCap { degree: usize, cap: usize },
    #[error("tangency line side condition violated: {0}")]
    TangencySide(String),
    #[error("segment is not Hurwitz (witness lambda {:?})", verdict.witness_lambda)]
    SegmentUnstable { verdict: Box<SegmentVerdict> },
    #[error("search budget exhausted: {diagnostics}")]
    SearchExhausted { diagnostics: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal fault: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
