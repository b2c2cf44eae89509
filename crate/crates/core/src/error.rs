use crate::geometry::{CurveId, Point};
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("closest-point projection of ({:e}, {:e}) onto curve {component} did not converge", .point[0], .point[1])]
    ProjectionFailure { point: Point, component: CurveId },

    #[error("unknown boundary component {0}")]
    UnknownComponent(CurveId),

    #[error("level-set gradient vanishes at ({:e}, {:e})", .point[0], .point[1])]
    DegenerateGradient { point: Point },

    #[error("point ({:e}, {:e}) is not on curve {component} (|phi| = {residual:e})", .point[0], .point[1])]
    OffCurve { point: Point, component: CurveId, residual: f64 },

    #[error("triangle {element} is degenerate (det = {det:e})")]
    SingularElement { element: usize, det: f64 },

    #[error("non-finite coefficient at a quadrature point of element {element}")]
    NonFiniteCoefficient { element: usize },

    #[error("boundary edge {edge} has no adjacent triangle")]
    MissingAdjacency { edge: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem configuration: {0}")]
    Configuration(String),

    #[error("linear system is singular to working precision (relative residual {residual:e})")]
    SingularSystem { residual: f64 },

    #[error("solver failed to reach the residual target (relative residual {residual:e})")]
    NonConvergence { residual: f64 },

    #[error("rate fit: {0}")]
    Domain(String),
}
