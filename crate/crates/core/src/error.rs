use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Gram matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("Gram matrix is not square (row {0} has {1} entries, expected {2})")]
    NotSquare(usize, usize, usize),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("vectors belong to different lattices")]
    LatticeMismatch,
    #[error("vector has {got} coordinates, lattice has rank {rank}")]
    WrongLength { got: usize, rank: usize },
    #[error("lattice is not even: {0}")]
    OddSquare(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not a root (square {0}, expected -2)")]
    NotARoot(i64),
    #[error("vector is not isotropic (square {0})")]
    NotIsotropic(i64),
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("isotropic vector has divisibility {0}, expected 1")]
    NotStandard(i64),
    #[error("matrix is not an integral isometry")]
    NotIsometry,
    #[error("frame does not span a positive definite plane")]
    NotPositive,
    #[error("z.v vanishes: the point lies at the boundary for this cusp")]
    DegenerateAtV,
    #[error("linear map has non-positive determinant {0}")]
    NonPositiveDet(f64),
    #[error("box is unbounded or has inverted bounds")]
    UnboundedBox,
    #[error("box leaves the positive cone (y^2 <= 0 somewhere)")]
    BoxLeavesCone,
    #[error("empty box")]
    EmptyBox,
    #[error("reference class is not in the positive cone")]
    AmpNotInPositiveCone,
    #[error("matrix is not in the orthogonal Lie algebra (residual {0:.3e})")]
    NotInLieAlgebra(f64),
    #[error("plane is degenerate or not positive")]
    DegeneratePlane,
    #[error("step too large: energy drift {0:.3e} exceeds bound")]
    StepTooLarge(f64),
    #[error("need at least {min} steps, got {got}")]
    TooFewSteps { got: usize, min: usize },
    #[error("omega^2 must be positive, got {0}")]
    NonPositiveOmega(String),
    #[error("central charge vanishes")]
    ZeroCharge,
    #[error("lifted phase is inconsistent with the matrix")]
    InconsistentLift,
    #[error("sampling too coarse: phase jump {0:.3} between consecutive samples")]
    SamplingTooCoarse(f64),
    #[error("rank must be positive")]
    NonPositiveRank,
    #[error("slope must be positive")]
    NonPositiveSlope,
    #[error("no solution within bound {0}")]
    NoSolutionInBound(String),
    #[error("lattice has no Mukai presentation")]
    NotMukai,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
