//! Problem data: coefficients, source, boundary data and the optional exact
//! solution, all globally defined so their extensions are the formulas.

use crate::error::{Error, Result};
use crate::fem::ScalarField;
use crate::geometry::{BoundaryGeometry, CurveId, Point};
use crate::poly::Poly2;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Flux data `g_N(x, n)` on `Γ`, given the exact outward normal `n` at `x`.
pub type FluxData = dyn Fn(Point, Point) -> f64 + Send + Sync;
pub type VectorField = dyn Fn(Point) -> Point + Send + Sync;

pub struct ExactSolution {
    pub value: Box<ScalarField>,
    pub gradient: Box<VectorField>,
}

/// `−∇·(p ∇u) + q u = f` in `Ω` with one boundary condition kind on all of
/// `Γ`.
pub struct ProblemSpec {
    pub name: String,
    pub p: Box<ScalarField>,
    pub q: Box<ScalarField>,
    pub f: Box<ScalarField>,
    pub g_dirichlet: Option<Box<ScalarField>>,
    pub g_neumann: Option<Box<FluxData>>,
    pub exact: Option<ExactSolution>,
    pub bc_kind: BcKind,
    /// Curves that get nodal Dirichlet values whatever `bc_kind` says. Only
    /// meaningful for straight components, where the nodes lie on `Γ`.
    pub nodal_dirichlet: Vec<CurveId>,
}

impl core::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProblemSpec").field("name", &self.name).field("bc_kind", &self.bc_kind).finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Builds a problem from an exact solution; the source and both kinds
    /// of boundary data are derived from it.
    pub fn from_exact(
        name: impl Into<String>,
        bc_kind: BcKind,
        p: impl Fn(Point) -> f64 + Send + Sync + Clone + 'static,
        q: impl Fn(Point) -> f64 + Send + Sync + 'static,
        f: impl Fn(Point) -> f64 + Send + Sync + 'static,
        u: impl Fn(Point) -> f64 + Send + Sync + Clone + 'static,
        grad_u: impl Fn(Point) -> Point + Send + Sync + Clone + 'static,
    ) -> Self {
        let (p_flux, g_flux) = (p.clone(), grad_u.clone());
        Self {
            name: name.into(),
            p: Box::new(p),
            q: Box::new(q),
            f: Box::new(f),
            g_dirichlet: Some(Box::new(u.clone())),
            g_neumann: Some(Box::new(move |x: Point, n: Point| {
                let g = g_flux(x);
                p_flux(x) * (g[0] * n[0] + g[1] * n[1])
            })),
            exact: Some(ExactSolution { value: Box::new(u), gradient: Box::new(grad_u) }),
            bc_kind,
            nodal_dirichlet: Vec::new(),
        }
    }

    /// `u = cos x cos y`, `p = 1`; `q = 1` for the Neumann problem and
    /// `q = 0` otherwise.
    pub fn convex_cos(bc_kind: BcKind) -> Self {
        let q = reaction(bc_kind);
        Self::from_exact(
            "convex-cos",
            bc_kind,
            |_| 1.0,
            move |_| q,
            move |x: Point| (2.0 + q) * x[0].cos() * x[1].cos(),
            |x: Point| x[0].cos() * x[1].cos(),
            |x: Point| [-x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin()],
        )
    }

    /// The harmonic `u = −(17/16) x / (x² + y²)`, `p = 1`, singular only at
    /// the origin inside the hole. The sides of the square carry nodal
    /// Dirichlet data; `bc_kind` applies to the circle.
    pub fn nonconvex_rational(bc_kind: BcKind) -> Self {
        let q = reaction(bc_kind);
        let c = -17.0 / 16.0;
        let u = move |x: Point| c * x[0] / (x[0] * x[0] + x[1] * x[1]);
        let mut spec = Self::from_exact(
            "nonconvex-rational",
            bc_kind,
            |_| 1.0,
            move |_| q,
            move |x: Point| q * u(x),
            u,
            move |x: Point| {
                let r2 = x[0] * x[0] + x[1] * x[1];
                [c * (x[1] * x[1] - x[0] * x[0]) / (r2 * r2), -2.0 * c * x[0] * x[1] / (r2 * r2)]
            },
        );
        spec.nodal_dirichlet = (1..=4).map(CurveId).collect();
        spec
    }

    /// Manufactured polynomial solution `r` with polynomial diffusion `p`.
    /// The source is `f = −∇·(p ∇r) + q r` computed symbolically.
    pub fn polynomial(bc_kind: BcKind, r: Poly2, p: Poly2) -> Self {
        let q = reaction(bc_kind);
        let (rx, ry) = (r.dx(), r.dy());
        let f = -(&p.dx() * &rx + &p.dy() * &ry + &p * &r.laplacian()) + r.scale(q);
        let (pe, fe, re) = (p.clone(), f, r.clone());
        Self::from_exact(
            format!("patch-{}", r.degree()),
            bc_kind,
            move |x| pe.eval(x),
            move |_| q,
            move |x| fe.eval(x),
            move |x| re.eval(x),
            move |x| [rx.eval(x), ry.eval(x)],
        )
    }

    /// Checks the data contract: `p > 0`, `q > 0` for Neumann, and boundary
    /// data consistent with the exact solution at the given points of `Γ`.
    pub fn check(&self, geometry: &BoundaryGeometry, samples: &[(Point, CurveId)]) -> Result<()> {
        for &(x, id) in samples {
            if !((self.p)(x) > 0.0) {
                return Err(Error::Configuration(format!("{}: p <= 0 at ({}, {})", self.name, x[0], x[1])));
            }
            if self.bc_kind == BcKind::Neumann && !((self.q)(x) > 0.0) {
                return Err(Error::Configuration(format!("{}: q <= 0 at ({}, {})", self.name, x[0], x[1])));
            }
            let Some(exact) = &self.exact else { continue };
            let u = (exact.value)(x);
            if let Some(g) = &self.g_dirichlet {
                if (g(x) - u).abs() > 1e-10 {
                    return Err(Error::Configuration(format!("{}: g_D differs from u on curve {id}", self.name)));
                }
            }
            if let Some(g) = &self.g_neumann {
                let n = geometry.unit_normal(x, id)?;
                let du = (exact.gradient)(x);
                let flux = (self.p)(x) * (du[0] * n[0] + du[1] * n[1]);
                if (g(x, n) - flux).abs() > 1e-10 {
                    return Err(Error::Configuration(format!("{}: g_N differs from p du/dn on curve {id}", self.name)));
                }
            }
        }
        Ok(())
    }
}

fn reaction(bc_kind: BcKind) -> f64 {
    match bc_kind {
        BcKind::Dirichlet => 0.0,
        BcKind::Neumann => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SQUARE_HOLE_CIRCLE;

    fn laplacian_fd(u: &ScalarField, x: Point) -> f64 {
        let h = 1e-4;
        (u([x[0] + h, x[1]]) + u([x[0] - h, x[1]]) + u([x[0], x[1] + h]) + u([x[0], x[1] - h]) - 4.0 * u(x)) / (h * h)
    }

    #[test]
    fn presets_satisfy_their_equation() {
        for bc in [BcKind::Dirichlet, BcKind::Neumann] {
            for prob in [ProblemSpec::convex_cos(bc), ProblemSpec::nonconvex_rational(bc)] {
                let exact = prob.exact.as_ref().unwrap();
                for x in [[0.3, 0.2], [-0.4, 0.35], [0.45, -0.45]] {
                    let lhs = -laplacian_fd(&*exact.value, x) + (prob.q)(x) * (exact.value)(x);
                    assert!((lhs - (prob.f)(x)).abs() < 1e-5, "{} {bc:?}: {lhs} vs {}", prob.name, (prob.f)(x));
                }
            }
        }
    }

    #[test]
    fn polynomial_source_matches_finite_differences() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let r = Poly2::random(3, &mut rng);
        let p = Poly2::constant(1.0) + Poly2::monomial(2, 0, 0.25);
        let prob = ProblemSpec::polynomial(BcKind::Neumann, r.clone(), p.clone());
        let x = [0.2, -0.3];
        let h = 1e-5;
        let flux = |y: Point, d: usize| p.eval(y) * r.gradient(y)[d];
        let div = (flux([x[0] + h, x[1]], 0) - flux([x[0] - h, x[1]], 0)) / (2.0 * h)
            + (flux([x[0], x[1] + h], 1) - flux([x[0], x[1] - h], 1)) / (2.0 * h);
        assert!((-div + r.eval(x) - (prob.f)(x)).abs() < 1e-7);
    }

    #[test]
    fn boundary_data_is_consistent() {
        let geo = BoundaryGeometry::square_with_hole();
        let mut samples: Vec<(Point, CurveId)> = Vec::new();
        for i in 0..8 {
            let t = i as f64 * core::f64::consts::PI / 4.0 + 0.1;
            samples.push(([0.25 * t.cos(), 0.25 * t.sin()], SQUARE_HOLE_CIRCLE));
            samples.push(([0.5, -0.4 + 0.1 * i as f64], CurveId(2)));
        }
        for bc in [BcKind::Dirichlet, BcKind::Neumann] {
            ProblemSpec::nonconvex_rational(bc).check(&geo, &samples).unwrap();
        }
        let mut bad = ProblemSpec::nonconvex_rational(BcKind::Neumann);
        bad.q = Box::new(|_| 0.0);
        assert!(bad.check(&geo, &samples).is_err());
    }
}
