use super::element::{ReferenceElement, LOCAL_EDGES};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::Mesh;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

/// `x = B p + b` from the reference triangle onto a physical triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    /// Row-major `B`; its columns are `v1 − v0` and `v2 − v0`.
    pub jacobian: [[f64; 2]; 2],
    pub offset: Point,
    pub det: f64,
    pub inverse: [[f64; 2]; 2],
}

impl AffineMap {
    /// Fails with [`Error::SingularElement`] when `|det| ≤ 1e-14 · diam²`
    /// or the triangle is clockwise.
    pub fn new(element: usize, vertices: [Point; 3]) -> Result<Self> {
        let [v0, v1, v2] = vertices;
        let jacobian = [[v1[0] - v0[0], v2[0] - v0[0]], [v1[1] - v0[1], v2[1] - v0[1]]];
        let det = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
        let diam2 = [(v0, v1), (v1, v2), (v2, v0)]
            .iter()
            .map(|(a, b)| (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2))
            .fold(0.0, f64::max);
        if !(det > 1e-14 * diam2) {
            return Err(Error::SingularElement { element, det });
        }
        let inverse = [
            [jacobian[1][1] / det, -jacobian[0][1] / det],
            [-jacobian[1][0] / det, jacobian[0][0] / det],
        ];
        Ok(Self { jacobian, offset: v0, det, inverse })
    }

    pub fn to_physical(&self, p: Point) -> Point {
        let b = &self.jacobian;
        [b[0][0] * p[0] + b[0][1] * p[1] + self.offset[0], b[1][0] * p[0] + b[1][1] * p[1] + self.offset[1]]
    }

    pub fn to_reference(&self, x: Point) -> Point {
        let d = [x[0] - self.offset[0], x[1] - self.offset[1]];
        let m = &self.inverse;
        [m[0][0] * d[0] + m[0][1] * d[1], m[1][0] * d[0] + m[1][1] * d[1]]
    }

    /// Physical gradient `B⁻ᵀ ĝ` of a reference gradient `ĝ`.
    pub fn push_gradient(&self, g: Point) -> Point {
        let m = &self.inverse;
        [m[0][0] * g[0] + m[1][0] * g[1], m[0][1] * g[0] + m[1][1] * g[1]]
    }
}

/// Continuous `P_k` Lagrange space on a mesh.
///
/// Global numbering: mesh vertices first, then `k − 1` dofs per edge in
/// ascending edge order (running from the lower to the higher vertex
/// index), then interior dofs triangle by triangle.
#[derive(Debug, Clone)]
pub struct FeSpace<'m> {
    mesh: &'m Mesh,
    element: ReferenceElement,
    maps: Vec<AffineMap>,
    element_dofs: Vec<usize>,
    coords: Vec<Point>,
    is_boundary: Vec<bool>,
    boundary_dofs: Vec<usize>,
    interior_dofs: Vec<usize>,
    dof_edge: Vec<Option<usize>>,
}

impl<'m> FeSpace<'m> {
    pub fn new(mesh: &'m Mesh, degree: usize) -> Result<Self> {
        let element = ReferenceElement::new(degree)?;
        let k = degree;
        let maps = (0..mesh.triangles().len())
            .map(|t| AffineMap::new(t, mesh.triangle_points(t)))
            .collect::<Result<Vec<_>>>()?;

        let nv = mesh.vertices().len();
        let edges = mesh.edges();
        let edge_base: BTreeMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, e)| ((e[0], e[1]), nv + i * (k - 1))).collect();
        let n_interior = (k - 1) * (k.max(2) - 2) / 2;
        let interior_base = nv + edges.len() * (k - 1);
        let ndofs = interior_base + n_interior * mesh.triangles().len();

        let nloc = element.len();
        let mut element_dofs = Vec::with_capacity(nloc * mesh.triangles().len());
        let mut coords = vec![[0.0; 2]; ndofs];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let start = element_dofs.len();
            element_dofs.extend_from_slice(tri);
            for [la, lb] in LOCAL_EDGES {
                let (a, b) = (tri[la], tri[lb]);
                let base = edge_base[&(a.min(b), a.max(b))];
                for m in 1..k {
                    element_dofs.push(if a < b { base + m - 1 } else { base + k - 1 - m });
                }
            }
            for i in 0..n_interior {
                element_dofs.push(interior_base + t * n_interior + i);
            }
            for (l, &d) in element_dofs[start..].iter().enumerate() {
                coords[d] = maps[t].to_physical(element.nodes()[l]);
            }
        }

        let mut is_boundary = vec![false; ndofs];
        let mut dof_edge = vec![None; ndofs];
        for (ei, e) in mesh.boundary_edges().iter().enumerate() {
            let [a, b] = e.vertices;
            for v in [a, b] {
                is_boundary[v] = true;
                dof_edge[v].get_or_insert(ei);
            }
            let base = edge_base[&(a.min(b), a.max(b))];
            for d in base..base + k - 1 {
                is_boundary[d] = true;
                dof_edge[d] = Some(ei);
            }
        }
        let boundary_dofs = (0..ndofs).filter(|&d| is_boundary[d]).collect();
        let interior_dofs = (0..ndofs).filter(|&d| !is_boundary[d]).collect();

        Ok(Self { mesh, element, maps, element_dofs, coords, is_boundary, boundary_dofs, interior_dofs, dof_edge })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn degree(&self) -> usize {
        self.element.degree()
    }

    pub fn element(&self) -> &ReferenceElement {
        &self.element
    }

    pub fn ndofs(&self) -> usize {
        self.coords.len()
    }

    pub fn map(&self, t: usize) -> &AffineMap {
        &self.maps[t]
    }

    /// Global dofs of triangle `t` in local order.
    pub fn dofs(&self, t: usize) -> &[usize] {
        let n = self.element.len();
        &self.element_dofs[t * n..(t + 1) * n]
    }

    /// Node coordinates of every dof.
    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn is_boundary(&self, dof: usize) -> bool {
        self.is_boundary[dof]
    }

    /// Dofs whose nodes lie on `Γ_h`; they span the trace space.
    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary_dofs
    }

    pub fn interior_dofs(&self) -> &[usize] {
        &self.interior_dofs
    }

    /// A boundary edge containing the node of `dof`, if any.
    pub fn boundary_edge_of(&self, dof: usize) -> Option<usize> {
        self.dof_edge[dof]
    }

    /// Coefficients of the nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.coords.iter().map(|&x| f(x)).collect()
    }

    /// Values and physical gradients of the basis of triangle `t` at the
    /// physical point `x`, which may lie outside the triangle.
    pub fn basis_at(&self, t: usize, x: Point, values: &mut [f64], grads: &mut [Point]) {
        let map = &self.maps[t];
        self.element.eval(map.to_reference(x), values, grads);
        for g in grads.iter_mut() {
            *g = map.push_gradient(*g);
        }
    }
}

/// Value and gradient at `x` of the polynomial `u_h|_K` on triangle `t`.
/// Points outside `K` give the extrapolated polynomial `E_K(u_h)`.
pub fn eval_fe(space: &FeSpace<'_>, u: &[f64], t: usize, x: Point) -> (f64, Point) {
    let n = space.element().len();
    let mut values = [0.0; 15];
    let mut grads = [[0.0; 2]; 15];
    space.basis_at(t, x, &mut values[..n], &mut grads[..n]);
    let mut value = 0.0;
    let mut grad = [0.0; 2];
    for (l, &d) in space.dofs(t).iter().enumerate() {
        value += u[d] * values[l];
        grad[0] += u[d] * grads[l][0];
        grad[1] += u[d] * grads[l][1];
    }
    (value, grad)
}
