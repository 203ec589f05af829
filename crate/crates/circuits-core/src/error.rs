use core::fmt;

/// Errors shared across the crate. Every failure mode is a normal value;
/// nothing in the library panics on malformed geometric input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input dimensions are mutually inconsistent; the message names the
    /// offending quantity.
    DimensionMismatch(&'static str),
    /// An inequality row of B is identically zero.
    ZeroRow(usize),
    /// rank([A; B]) < n, so the polyhedron contains a line.
    NotPointed,
    /// A point expected to lie in the polyhedron does not.
    PointNotInPolyhedron,
    /// A direction expected to satisfy Au = 0 does not.
    NotInKernel,
    /// A nonzero vector was required.
    ZeroVector,
    /// Requested generator sizes cannot produce a pointed instance.
    InvalidDimensions,
    /// A model point has x = 0 but a nonzero y-difference; the linking rows
    /// cannot hold, so the point was corrupted.
    InconsistentPoint,
    /// Vertex enumeration requires the normalized (bounded) model.
    NotAPolytope,
    /// The direction handed to the circuit search is already a circuit
    /// direction itself.
    IsAlreadyCircuit,
    /// The given circuit increases an active row, so no positive step exists.
    NotStrictlyFeasible,
    /// Walk construction needs two distinct endpoints.
    IdenticalEndpoints,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            Error::ZeroRow(i) => write!(f, "inequality row {i} is identically zero"),
            Error::NotPointed => write!(f, "polyhedron is not pointed: rank([A; B]) < n"),
            Error::PointNotInPolyhedron => write!(f, "point does not lie in the polyhedron"),
            Error::NotInKernel => write!(f, "direction does not satisfy Au = 0"),
            Error::ZeroVector => write!(f, "vector must be nonzero"),
            Error::InvalidDimensions => write!(f, "invalid generator dimensions"),
            Error::InconsistentPoint => write!(f, "model point is internally inconsistent"),
            Error::NotAPolytope => write!(f, "model is not normalized to a polytope"),
            Error::IsAlreadyCircuit => write!(f, "direction is already a circuit direction"),
            Error::NotStrictlyFeasible => write!(f, "circuit is not strictly feasible here"),
            Error::IdenticalEndpoints => write!(f, "walk endpoints must be distinct"),
        }
    }
}

impl core::error::Error for Error {}
