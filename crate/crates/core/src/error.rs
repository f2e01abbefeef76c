use crate::linalg::Signature;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("metric is not Lorentzian: signature {0}, expected (2,1,0)")]
    NotLorentzian(Signature),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not a 3D unimodular non-abelian algebra: Killing signature {0}")]
    UnknownGroup(Signature),
    #[error("Killing form eigenvalue {value:e} is too close to zero to decide the group")]
    NearBoundary { value: f64 },
    #[error("singular matrix")]
    Singular,
    #[error("operator is not self-adjoint (defect {0:e}); the algebra is not unimodular")]
    NotSelfAdjoint(f64),
    #[error("degenerate near type boundary: frame residual {0:e}")]
    DegenerateFrame(f64),
    #[error("parameter domain violated for {family}: {predicate}")]
    Domain { family: String, predicate: String },
    #[error("wrong number of parameters for {family}: expected {expected}, got {got}")]
    Arity {
        family: String,
        expected: usize,
        got: usize,
    },
    #[error("no catalog family matches: {0}")]
    Classification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
