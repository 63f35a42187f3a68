use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("corner {0} has no shift operator")]
    NoShift(&'static str),
    #[error("corner {0} has no twisted derivative")]
    NoDerivative(&'static str),
    #[error("index out of range: {what} = {got}, limit {limit}")]
    IndexOutOfRange {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("twist entries collide (regular semisimple Z required): |{a} - {b}| = {sep:.3e}")]
    TwistCollision { a: String, b: String, sep: f64 },
    #[error("matrix is not square: {rows} x {cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("polynomial division not exact (remainder norm {remainder:.3e}); degenerate frame or wrong singularity data")]
    DivisionNotExact { remainder: f64 },
    #[error("repeated Bethe roots within node {node}")]
    RepeatedBetheRoots { node: usize },
    #[error("Newton stagnated on all starts; best residual {best:.3e}")]
    NewtonStagnation { best: f64 },
    #[error("pole in reconstruction: q*xi_{i} = xi_{j}")]
    ReconstructionPole { i: usize, j: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("non-monic input where a monic polynomial is required")]
    NotMonic,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
