use alloc::string::String;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Boundary data failed validation.
    #[error("invalid boundary data: {0}")]
    InvalidData(String),
    /// Total area is zero or negative.
    #[error("degenerate boundary data: total area {0} is not positive")]
    DegenerateArea(f64),
    /// A generator argument is out of range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("no horizon: {0}")]
    NoHorizon(String),
    /// Coincident roots: the collar would end in a cusp, not a minimal surface.
    #[error("degenerate horizon at r = {0}: coincident roots give a cusp")]
    DegenerateHorizon(f64),
    /// `V(r_o) <= 0`: the outer radius sits at or inside a horizon.
    #[error("outer radius {r_o} is not in a region with V > 0 (V = {potential})")]
    NonPositivePotential { r_o: f64, potential: f64 },
    /// The requested construction is not admissible for the data.
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("mass parameter m = {m} outside admissible interval (0, {m_max}]")]
    MassOutOfRange { m: f64, m_max: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}
