//! The true boundary `Γ`: level-set curves, the closest-point map
//! `η: Γ_h → Γ`, exact outward normals and the geometric gap `δ_h`.

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

pub type Point = [f64; 2];

/// Tolerance on `|φ(η(ξ))|` for a returned projection.
pub const ON_CURVE_TOL: f64 = 1e-12;
/// Newton stops once the point increment falls below this length.
pub const NEWTON_STEP_TOL: f64 = 1e-13;
pub const NEWTON_MAX_ITERS: usize = 50;

/// Identifies one boundary component (a circle, one side of a square, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveId(pub u32);

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[inline]
pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub(crate) fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// A smooth curve given by a level set `φ`, negative on the domain side.
pub trait Curve: fmt::Debug + Send + Sync {
    fn level_set(&self, x: Point) -> f64;

    fn gradient(&self, x: Point) -> Point;

    /// Second derivatives of `φ`. The default differentiates the gradient
    /// numerically, which is enough for the Newton projection.
    fn hessian(&self, x: Point) -> [[f64; 2]; 2] {
        let step = 1e-6 * (1.0 + norm(x));
        let mut hess = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += step;
            xm[j] -= step;
            let (gp, gm) = (self.gradient(xp), self.gradient(xm));
            for i in 0..2 {
                hess[i][j] = (gp[i] - gm[i]) / (2.0 * step);
            }
        }
        let off = 0.5 * (hess[0][1] + hess[1][0]);
        hess[0][1] = off;
        hess[1][0] = off;
        hess
    }

    /// Exact closest point, when the curve admits one in closed form.
    fn closed_form_projection(&self, _x: Point) -> Option<Point> {
        None
    }
}

/// Which side of a circle the domain occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Domain inside the circle (a disk).
    Inside,
    /// Domain outside the circle (a hole).
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
    pub side: Side,
}

impl Circle {
    fn sign(&self) -> f64 {
        match self.side {
            Side::Inside => 1.0,
            Side::Outside => -1.0,
        }
    }
}

impl Curve for Circle {
    fn level_set(&self, x: Point) -> f64 {
        self.sign() * (dist(x, self.center) - self.radius)
    }

    fn gradient(&self, x: Point) -> Point {
        let d = sub(x, self.center);
        let r = norm(d);
        let s = self.sign() / r;
        [s * d[0], s * d[1]]
    }

    fn hessian(&self, x: Point) -> [[f64; 2]; 2] {
        let d = sub(x, self.center);
        let r = norm(d);
        let s = self.sign() / (r * r * r);
        [
            [s * d[1] * d[1], -s * d[0] * d[1]],
            [-s * d[0] * d[1], s * d[0] * d[0]],
        ]
    }

    fn closed_form_projection(&self, x: Point) -> Option<Point> {
        let d = sub(x, self.center);
        let r = norm(d);
        if r == 0.0 {
            return None;
        }
        let s = self.radius / r;
        Some([self.center[0] + s * d[0], self.center[1] + s * d[1]])
    }
}

/// Straight line through `point` with unit `outward` normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Point,
    pub outward: Point,
}

impl Line {
    pub fn new(point: Point, outward: Point) -> Self {
        let n = norm(outward);
        Self { point, outward: [outward[0] / n, outward[1] / n] }
    }
}

impl Curve for Line {
    fn level_set(&self, x: Point) -> f64 {
        dot(sub(x, self.point), self.outward)
    }

    fn gradient(&self, _x: Point) -> Point {
        self.outward
    }

    fn hessian(&self, _x: Point) -> [[f64; 2]; 2] {
        [[0.0; 2]; 2]
    }

    fn closed_form_projection(&self, x: Point) -> Option<Point> {
        let phi = self.level_set(x);
        if phi == 0.0 {
            return Some(x);
        }
        Some([x[0] - phi * self.outward[0], x[1] - phi * self.outward[1]])
    }
}

type ScalarField = Box<dyn Fn(Point) -> f64 + Send + Sync>;
type VectorField = Box<dyn Fn(Point) -> Point + Send + Sync>;

/// A curve known only through its level set and gradient; projections go
/// through the Newton solver.
pub struct ImplicitCurve {
    phi: ScalarField,
    grad: VectorField,
}

impl ImplicitCurve {
    pub fn new(
        phi: impl Fn(Point) -> f64 + Send + Sync + 'static,
        grad: impl Fn(Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        Self { phi: Box::new(phi), grad: Box::new(grad) }
    }
}

impl fmt::Debug for ImplicitCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ImplicitCurve")
    }
}

impl Curve for ImplicitCurve {
    fn level_set(&self, x: Point) -> f64 {
        (self.phi)(x)
    }

    fn gradient(&self, x: Point) -> Point {
        (self.grad)(x)
    }
}

/// The boundary `Γ` of a domain as a set of tagged curves.
///
/// The domain is the intersection of the negative sides of all components,
/// so the global level set is the pointwise maximum.
#[derive(Debug, Default)]
pub struct BoundaryGeometry {
    components: Vec<(CurveId, Box<dyn Curve>)>,
}

impl BoundaryGeometry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_component(mut self, id: CurveId, curve: impl Curve + 'static) -> Self {
        self.components.retain(|(c, _)| *c != id);
        self.components.push((id, Box::new(curve)));
        self
    }

    /// Unit disk centered at the origin; single component `CurveId(0)`.
    pub fn unit_disk() -> Self {
        Self::new().with_component(
            CurveId(0),
            Circle { center: [0.0, 0.0], radius: 1.0, side: Side::Inside },
        )
    }

    /// The square `[-0.5, 0.5]²` with sides `CurveId(1..=4)`: bottom, right,
    /// top, left.
    pub fn square() -> Self {
        Self::new()
            .with_component(CurveId(1), Line::new([0.0, -0.5], [0.0, -1.0]))
            .with_component(CurveId(2), Line::new([0.5, 0.0], [1.0, 0.0]))
            .with_component(CurveId(3), Line::new([0.0, 0.5], [0.0, 1.0]))
            .with_component(CurveId(4), Line::new([-0.5, 0.0], [-1.0, 0.0]))
    }

    /// The square `[-0.5, 0.5]²` minus the disk of radius `1/4`.
    /// Components: `CurveId(0)` the hole, `CurveId(1..=4)` the bottom, right,
    /// top and left sides.
    pub fn square_with_hole() -> Self {
        Self::new()
            .with_component(
                SQUARE_HOLE_CIRCLE,
                Circle { center: [0.0, 0.0], radius: 0.25, side: Side::Outside },
            )
            .with_component(CurveId(1), Line::new([0.0, -0.5], [0.0, -1.0]))
            .with_component(CurveId(2), Line::new([0.5, 0.0], [1.0, 0.0]))
            .with_component(CurveId(3), Line::new([0.0, 0.5], [0.0, 1.0]))
            .with_component(CurveId(4), Line::new([-0.5, 0.0], [-1.0, 0.0]))
    }

    pub fn component_ids(&self) -> impl Iterator<Item = CurveId> + '_ {
        self.components.iter().map(|(id, _)| *id)
    }

    pub fn curve(&self, id: CurveId) -> Result<&dyn Curve> {
        self.components
            .iter()
            .find(|(c, _)| *c == id)
            .map(|(_, curve)| curve.as_ref())
            .ok_or(Error::UnknownComponent(id))
    }

    /// Global level set: negative inside the domain, zero on `Γ`.
    pub fn level_set(&self, x: Point) -> f64 {
        self.components
            .iter()
            .map(|(_, c)| c.level_set(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `η(ξ)`: closest point of component `id` to `xi`.
    pub fn closest_point(&self, xi: Point, id: CurveId) -> Result<Point> {
        let curve = self.curve(id)?;
        let eta = match curve.closed_form_projection(xi) {
            Some(eta) => eta,
            None => newton_projection(curve, xi, id)?,
        };
        if curve.level_set(eta).abs() > ON_CURVE_TOL * (1.0 + norm(eta)) {
            return Err(Error::ProjectionFailure { point: xi, component: id });
        }
        Ok(eta)
    }

    /// Outward unit normal `n` of the domain at a point of `Γ`.
    pub fn unit_normal(&self, x: Point, id: CurveId) -> Result<Point> {
        let curve = self.curve(id)?;
        let residual = curve.level_set(x);
        if residual.abs() > 1e-10 {
            return Err(Error::OffCurve { point: x, component: id, residual });
        }
        let g = curve.gradient(x);
        let len = norm(g);
        if !(len >= 1e-10) {
            return Err(Error::DegenerateGradient { point: x });
        }
        Ok([g[0] / len, g[1] / len])
    }
}

/// Curve id of the circular hole in [`BoundaryGeometry::square_with_hole`].
pub const SQUARE_HOLE_CIRCLE: CurveId = CurveId(0);

/// Damped Newton on `φ(x) = 0`, `(x − ξ) × ∇φ(x) = 0`.
fn newton_projection(curve: &dyn Curve, xi: Point, id: CurveId) -> Result<Point> {
    let fail = Error::ProjectionFailure { point: xi, component: id };

    let residual = |x: Point| -> Point {
        let g = curve.gradient(x);
        let d = sub(x, xi);
        [curve.level_set(x), d[0] * g[1] - d[1] * g[0]]
    };

    // Seed with one gradient step towards the zero level.
    let g0 = curve.gradient(xi);
    let g0n = dot(g0, g0);
    if !(g0n > 0.0) {
        return Err(Error::DegenerateGradient { point: xi });
    }
    let phi0 = curve.level_set(xi);
    let mut x = [xi[0] - phi0 * g0[0] / g0n, xi[1] - phi0 * g0[1] / g0n];

    for _ in 0..NEWTON_MAX_ITERS {
        let g = curve.gradient(x);
        let h = curve.hessian(x);
        let d = sub(x, xi);
        let f = residual(x);
        let jac = [
            [g[0], g[1]],
            [g[1] + d[0] * h[1][0] - d[1] * h[0][0], d[0] * h[1][1] - g[0] - d[1] * h[0][1]],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.abs() > f64::MIN_POSITIVE) {
            return Err(fail);
        }
        let step = [
            -(jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
            -(-jac[1][0] * f[0] + jac[0][0] * f[1]) / det,
        ];

        let merit = norm(f);
        let mut t = 1.0;
        let mut trial = [x[0] + step[0], x[1] + step[1]];
        while norm(residual(trial)) > (1.0 - 1e-4 * t) * merit && t > 1.0 / 1024.0 {
            t *= 0.5;
            trial = [x[0] + t * step[0], x[1] + t * step[1]];
        }
        if t < 1.0 {
            log::debug!("damped projection step (t = {t}) for ({}, {}) on {id}", xi[0], xi[1]);
        }
        let moved = t * norm(step);
        x = trial;
        if moved <= NEWTON_STEP_TOL {
            return Ok(x);
        }
        if !(x[0].is_finite() && x[1].is_finite()) {
            return Err(fail);
        }
    }
    Err(fail)
}

/// `δ_h`: the largest distance `|η(ξ) − ξ|` over sample points of every
/// boundary edge. `params` are positions along each edge in `[0, 1]`.
pub fn geometric_gap(mesh: &Mesh, geometry: &BoundaryGeometry, params: &[f64]) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for edge in mesh.boundary_edges() {
        let a = mesh.vertices()[edge.vertices[0]];
        let b = mesh.vertices()[edge.vertices[1]];
        for &t in params {
            let xi = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let eta = geometry.closest_point(xi, edge.curve)?;
            gap = gap.max(dist(eta, xi));
        }
    }
    Ok(gap)
}
