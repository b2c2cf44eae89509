//! Lagrange `P_k` spaces, quadrature and assembly of the standard forms.

mod assembly;
mod element;
mod quadrature;
mod space;

pub use assembly::{assemble_load, assemble_operator, volume_quadrature_degree, Form};
pub(crate) use assembly::Tables;
pub use element::{ReferenceElement, MAX_DEGREE};
pub use quadrature::{gauss_legendre, QuadratureRule, SegmentRule};
pub use space::{eval_fe, AffineMap, FeSpace};

use crate::geometry::Point;

/// A scalar field evaluable anywhere in the plane.
pub type ScalarField = dyn Fn(Point) -> f64 + Send + Sync;

/// Number of Gauss points used on each boundary edge for degree `k`.
pub fn boundary_quadrature_points(k: usize) -> usize {
    k + 2
}

#[cfg(test)]
mod tests;
