use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, MuskatError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MuskatError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("pole of the Schwarz function at z = {0}")]
    Pole(C64),
    #[error("z = {0} lies on a branch cut")]
    BranchCut(C64),
    #[error("rates violate the family constraint: {0}")]
    Admissibility(String),
    #[error("point {z} is not on the interface (distance estimate {distance:e})")]
    NotOnBoundary { z: C64, distance: f64 },
    #[error("invalid sample count {0}")]
    InvalidCount(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("elliptic modulus {0} outside [0, 1)")]
    Modulus(f64),
    #[error("amplitude reduction failed: {0}")]
    Reduction(String),
    #[error("ambiguous branch: {0}")]
    Branch(String),
    #[error("singularity is stationary; use a stationary cut variant")]
    StationaryPoint,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("coordinate {s} is not interior to the support of length {length}")]
    Endpoint { s: f64, length: f64 },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("z = {z} is not in the domain of fluid {fluid}")]
    WrongSide { z: C64, fluid: u8 },
    #[error("z = {0} lies on a singular support")]
    OnSupport(C64),
    #[error("operation not available for this family: {0}")]
    Family(String),
    #[error("degenerate shape: {0}")]
    DegenerateShape(String),
    #[error("invalid region: {0}")]
    Region(String),
    #[error("configuration error: {0}")]
    Config(String),
}
