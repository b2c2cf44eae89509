//! Polynomial extension finite elements (PE-FEM) for second-order elliptic
//! problems posed on affine triangulations of smoothly curved 2D domains.
//!
//! The discrete solution lives on the polygonal domain `Ω_h`, but its
//! boundary conditions are imposed on the true curve `Γ`: the polynomial
//! of each boundary element is evaluated (extrapolated) at the closest
//! point of `Γ`.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, threading and
//! the command-line runner live in the `pefem` crate.
#![no_std]
// NaN must fail positivity checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analyze;
pub mod error;
pub mod exec;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod pefem;
pub mod poly;
pub mod problem;
pub mod sparse;





pub use error::{Error, Result};
pub use geometry::{BoundaryGeometry, CurveId, Point};
pub use mesh::Mesh;
