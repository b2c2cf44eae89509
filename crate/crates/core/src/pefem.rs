//! PE-FEM systems: the standard forms on `Ω_h` with boundary rows or flux
//! corrections that evaluate the element polynomial at `η(ξ) ∈ Γ`.

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::fem::{
    assemble_load, assemble_operator, boundary_quadrature_points, FeSpace, Form, ScalarField, SegmentRule,
};
use crate::geometry::{BoundaryGeometry, Point};
use crate::mesh::BoundaryEdge;
use crate::problem::{BcKind, ProblemSpec};
use crate::sparse::{CsrMatrix, Triplets};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

pub const DEFAULT_C_THETA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PefemDirichletWeak,
    PefemDirichletStrong,
    PefemNeumann,
    Standard,
}

impl Method {
    pub const ALL: [Method; 4] =
        [Method::PefemDirichletWeak, Method::PefemDirichletStrong, Method::PefemNeumann, Method::Standard];

    pub fn tag(self) -> &'static str {
        match self {
            Method::PefemDirichletWeak => "pefem-dirichlet-weak",
            Method::PefemDirichletStrong => "pefem-dirichlet-strong",
            Method::PefemNeumann => "pefem-neumann",
            Method::Standard => "standard",
        }
    }

    pub fn bc_kind(self) -> BcKind {
        match self {
            Method::PefemNeumann => BcKind::Neumann,
            _ => BcKind::Dirichlet,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// Assembled square system `A u = F`. Rows flagged in `constraint_rows`
/// carry boundary conditions instead of the interior equation.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub constraint_rows: Vec<bool>,
    /// Scaling of weak Dirichlet rows; 1 when unused.
    pub theta: f64,
    pub method: Method,
}

/// One boundary quadrature point with its projection onto `Γ`.
struct EdgePoint {
    xi: Point,
    eta: Point,
    /// `w_q |E|`.
    weight: f64,
}

fn edge_points(
    edge: &BoundaryEdge,
    index: usize,
    space: &FeSpace<'_>,
    geometry: &BoundaryGeometry,
    rule: &SegmentRule,
) -> Result<Vec<EdgePoint>> {
    let mesh = space.mesh();
    let tri = mesh.triangles().get(edge.triangle).ok_or(Error::MissingAdjacency { edge: index })?;
    if !edge.vertices.iter().all(|v| tri.contains(v)) {
        return Err(Error::MissingAdjacency { edge: index });
    }
    let [a, b] = edge.vertices.map(|v| mesh.vertices()[v]);
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| {
            let xi = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
            let eta = geometry.closest_point(xi, edge.curve)?;
            Ok(EdgePoint { xi, eta, weight: w * len })
        })
        .collect()
}

/// Local indices of the element dofs whose nodes lie on the boundary edge.
fn edge_local_dofs(space: &FeSpace<'_>, edge: &BoundaryEdge) -> Vec<usize> {
    let tri = space.mesh().triangles()[edge.triangle];
    let k = space.degree();
    let on = |v: usize| edge.vertices.contains(&tri[v]);
    let mut out: Vec<usize> = (0..3).filter(|&v| on(v)).collect();
    for (l, [a, b]) in [[0, 1], [1, 2], [2, 0]].into_iter().enumerate() {
        if on(a) && on(b) {
            out.extend((0..k - 1).map(|m| 3 + l * (k - 1) + m));
        }
    }
    out
}

/// Runs `per_edge` over all boundary edges through the executor and
/// concatenates triplets and rhs contributions in edge order.
fn edge_loop<E: Executor>(
    space: &FeSpace<'_>,
    geometry: &BoundaryGeometry,
    exec: &E,
    per_edge: impl Fn(usize, &BoundaryEdge, &[EdgePoint], &mut Triplets, &mut Vec<(usize, f64)>) -> Result<()> + Sync,
) -> Result<(Triplets, Vec<(usize, f64)>)> {
    let n = space.ndofs();
    let edges = space.mesh().boundary_edges();
    let rule = SegmentRule::gauss(boundary_quadrature_points(space.degree()));
    let chunks = exec.map_ranges(edges.len(), |range| -> Result<(Triplets, Vec<(usize, f64)>)> {
        let mut trip = Triplets::new(n, n);
        let mut rhs = Vec::new();
        for ei in range {
            let pts = edge_points(&edges[ei], ei, space, geometry, &rule)?;
            per_edge(ei, &edges[ei], &pts, &mut trip, &mut rhs)?;
        }
        Ok((trip, rhs))
    });
    let mut trip = Triplets::new(n, n);
    let mut rhs = Vec::new();
    for c in chunks {
        let (t, r) = c?;
        trip.extend(t);
        rhs.extend(r);
    }
    Ok((trip, rhs))
}

fn stiffness_triplets(space: &FeSpace<'_>, problem: &ProblemSpec, form: Form, exec: &impl Executor) -> Result<Triplets> {
    let a = assemble_operator(space, &*problem.p, &*problem.q, form, exec)?;
    let mut t = Triplets::with_capacity(a.nrows(), a.ncols(), a.nnz());
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            t.push(i, j, v);
        }
    }
    Ok(t)
}

fn dirichlet_data(problem: &ProblemSpec) -> Result<&ScalarField> {
    problem
        .g_dirichlet
        .as_deref()
        .ok_or_else(|| Error::Configuration(format!("{}: no Dirichlet data", problem.name)))
}

/// Dofs on edges whose curve is listed in `problem.nodal_dirichlet`.
fn nodal_dofs(space: &FeSpace<'_>, problem: &ProblemSpec) -> Vec<bool> {
    let mut fixed = vec![false; space.ndofs()];
    if problem.nodal_dirichlet.is_empty() {
        return fixed;
    }
    for edge in space.mesh().boundary_edges() {
        if problem.nodal_dirichlet.contains(&edge.curve) {
            let dofs = space.dofs(edge.triangle);
            for l in edge_local_dofs(space, edge) {
                fixed[dofs[l]] = true;
            }
        }
    }
    fixed
}

/// Replaces the rows of `fixed` dofs by `u_i = g_D(ξ_i)`.
fn impose_nodal(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    fixed: &[bool],
    trip: &mut Triplets,
    rhs: &mut [f64],
) -> Result<()> {
    if !fixed.contains(&true) {
        return Ok(());
    }
    let g = dirichlet_data(problem)?;
    trip.retain_rows(|i| !fixed[i]);
    for (i, _) in fixed.iter().enumerate().filter(|(_, &f)| f) {
        trip.push(i, i, 1.0);
        rhs[i] = g(space.coords()[i]);
    }
    Ok(())
}

/// Weak (row-replacement) PE-FEM Dirichlet system. Boundary rows are
/// `θ_h Σ_E ∫_E E_K(φ_j)(η(ξ)) μ_i(ξ)` with `θ_h = c_theta / h`, and their
/// right-hand side is `θ_h Σ_E ∫_E g_D(η(ξ)) μ_i(ξ)`.
pub fn assemble_pefem_dirichlet(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    c_theta: f64,
    exec: &impl Executor,
) -> Result<LinearSystem> {
    if !(c_theta > 0.0) {
        return Err(Error::InvalidArgument(format!("c_theta = {c_theta} must be positive")));
    }
    let g = dirichlet_data(problem)?;
    let theta = c_theta / space.mesh().h();
    let mut trip = stiffness_triplets(space, problem, Form::D, exec)?;
    trip.retain_rows(|i| !space.is_boundary(i));
    let mut rhs = assemble_load(space, &*problem.f, exec)?;
    for &i in space.boundary_dofs() {
        rhs[i] = 0.0;
    }

    let nloc = space.element().len();
    let fixed = nodal_dofs(space, problem);
    let (bt, br) = edge_loop(space, geometry, exec, |_, edge, pts, trip, rhs| {
        let dofs = space.dofs(edge.triangle);
        let mut tests = edge_local_dofs(space, edge);
        tests.retain(|&l| !fixed[dofs[l]]);
        let (mut ext, mut tr) = (vec![0.0; nloc], vec![0.0; nloc]);
        let mut grads = vec![[0.0; 2]; nloc];
        for pt in pts {
            space.basis_at(edge.triangle, pt.eta, &mut ext, &mut grads);
            space.basis_at(edge.triangle, pt.xi, &mut tr, &mut grads);
            let gv = g(pt.eta);
            for &i in &tests {
                let wi = theta * pt.weight * tr[i];
                for j in 0..nloc {
                    trip.push(dofs[i], dofs[j], wi * ext[j]);
                }
                rhs.push((dofs[i], wi * gv));
            }
        }
        Ok(())
    })?;
    trip.extend(bt);
    for (i, v) in br {
        rhs[i] += v;
    }
    impose_nodal(space, problem, &fixed, &mut trip, &mut rhs)?;
    finish(space, trip, &mut rhs, theta, Method::PefemDirichletWeak)
}

/// Strong PE-FEM Dirichlet system: each boundary node `ξ_i` gets the row
/// `E_K(u_h)(η(ξ_i)) = g_D(η(ξ_i))`. At mesh vertices `η(ξ_i) = ξ_i` and the
/// row is the unit row.
pub fn assemble_pefem_dirichlet_strong(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    exec: &impl Executor,
) -> Result<LinearSystem> {
    let g = dirichlet_data(problem)?;
    let mut trip = stiffness_triplets(space, problem, Form::D, exec)?;
    trip.retain_rows(|i| !space.is_boundary(i));
    let mut rhs = assemble_load(space, &*problem.f, exec)?;
    let nv = space.mesh().vertices().len();
    let nloc = space.element().len();
    let fixed = nodal_dofs(space, problem);
    let (mut vals, mut grads) = (vec![0.0; nloc], vec![[0.0; 2]; nloc]);
    for &i in space.boundary_dofs() {
        if fixed[i] {
            continue;
        }
        let ei = space.boundary_edge_of(i).ok_or_else(|| Error::InvalidArgument(format!("boundary dof {i} lies on no boundary edge")))?;
        let edge = &space.mesh().boundary_edges()[ei];
        let xi = space.coords()[i];
        if i < nv {
            trip.push(i, i, 1.0);
            rhs[i] = g(xi);
            continue;
        }
        let eta = geometry.closest_point(xi, edge.curve)?;
        space.basis_at(edge.triangle, eta, &mut vals, &mut grads);
        for (l, &d) in space.dofs(edge.triangle).iter().enumerate() {
            trip.push(i, d, vals[l]);
        }
        rhs[i] = g(eta);
    }
    impose_nodal(space, problem, &fixed, &mut trip, &mut rhs)?;
    finish(space, trip, &mut rhs, 1.0, Method::PefemDirichletStrong)
}

/// The Neumann correction `τ_N(φ_j, φ_i) = Σ_E ∫_E [p(η) ∇E_K(φ_j)(η)·n(η)
/// − p(ξ) ∇φ_j(ξ)·n_h] φ_i(ξ)`, and the boundary load `∫_E g_N(η) φ_i(ξ)`.
fn neumann_boundary(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    exec: &impl Executor,
    with_load: bool,
) -> Result<(Triplets, Vec<(usize, f64)>)> {
    let nloc = space.element().len();
    let normals = space.mesh().edge_normals();
    let g = problem.g_neumann.as_deref();
    if with_load && g.is_none() {
        return Err(Error::Configuration(format!("{}: no Neumann data", problem.name)));
    }
    edge_loop(space, geometry, exec, |ei, edge, pts, trip, rhs| {
        if problem.nodal_dirichlet.contains(&edge.curve) {
            return Ok(());
        }
        let dofs = space.dofs(edge.triangle);
        let tests = edge_local_dofs(space, edge);
        let nh = normals[ei];
        let (mut ve, mut ge) = (vec![0.0; nloc], vec![[0.0; 2]; nloc]);
        let (mut vx, mut gx) = (vec![0.0; nloc], vec![[0.0; 2]; nloc]);
        for pt in pts {
            let n = geometry.unit_normal(pt.eta, edge.curve)?;
            space.basis_at(edge.triangle, pt.eta, &mut ve, &mut ge);
            space.basis_at(edge.triangle, pt.xi, &mut vx, &mut gx);
            let (p_eta, p_xi) = ((problem.p)(pt.eta), (problem.p)(pt.xi));
            for &i in &tests {
                let wi = pt.weight * vx[i];
                for j in 0..nloc {
                    let flux = p_eta * (ge[j][0] * n[0] + ge[j][1] * n[1]) - p_xi * (gx[j][0] * nh[0] + gx[j][1] * nh[1]);
                    trip.push(dofs[i], dofs[j], wi * flux);
                }
                if let (true, Some(g)) = (with_load, g) {
                    rhs.push((dofs[i], wi * g(pt.eta, n)));
                }
            }
        }
        Ok(())
    })
}

/// The assembled `τ_N` matrix on its own.
pub fn assemble_tau_neumann(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    exec: &impl Executor,
) -> Result<CsrMatrix> {
    Ok(neumann_boundary(space, problem, geometry, exec, false)?.0.to_csr())
}

/// PE-FEM Neumann system `(N_h + τ_N) u = ⟨f̃, φ_i⟩ + ⟨g_N∘η, φ_i⟩_{Γ_h}`.
pub fn assemble_pefem_neumann(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    exec: &impl Executor,
) -> Result<LinearSystem> {
    if problem.bc_kind != BcKind::Neumann {
        return Err(Error::Configuration(format!("{}: not a Neumann problem", problem.name)));
    }
    let mut trip = stiffness_triplets(space, problem, Form::N, exec)?;
    let mut rhs = assemble_load(space, &*problem.f, exec)?;
    let (bt, br) = neumann_boundary(space, problem, geometry, exec, true)?;
    trip.extend(bt);
    for (i, v) in br {
        rhs[i] += v;
    }
    let fixed = nodal_dofs(space, problem);
    impose_nodal(space, problem, &fixed, &mut trip, &mut rhs)?;
    let mut sys = finish(space, trip, &mut rhs, 1.0, Method::PefemNeumann)?;
    sys.constraint_rows = fixed;
    Ok(sys)
}

/// Boundary values used by the standard method at the nodes of `Γ_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StandardBoundaryData {
    /// `g_D(η(ξ_i))`: the data of the nearest point of `Γ`, the usual
    /// practice when `g_D` is only known on `Γ`.
    #[default]
    Projected,
    /// `ũ(ξ_i)`: the extended exact solution at the node itself.
    Extended,
}

/// Classical FEM on `Ω_h` with nodal boundary values on `Γ_h`; see
/// [`StandardBoundaryData`] for where the values come from.
pub fn assemble_standard_dirichlet(
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    data: StandardBoundaryData,
    exec: &impl Executor,
) -> Result<LinearSystem> {
    let mut trip = stiffness_triplets(space, problem, Form::D, exec)?;
    trip.retain_rows(|i| !space.is_boundary(i));
    let mut rhs = assemble_load(space, &*problem.f, exec)?;
    for &i in space.boundary_dofs() {
        let xi = space.coords()[i];
        trip.push(i, i, 1.0);
        rhs[i] = match data {
            StandardBoundaryData::Projected => {
                let ei = space
                    .boundary_edge_of(i)
                    .ok_or_else(|| Error::InvalidArgument(format!("boundary dof {i} lies on no boundary edge")))?;
                let curve = space.mesh().boundary_edges()[ei].curve;
                dirichlet_data(problem)?(geometry.closest_point(xi, curve)?)
            }
            StandardBoundaryData::Extended => {
                let exact = problem.exact.as_ref().ok_or_else(|| {
                    Error::Configuration(format!("{}: extended boundary values need the exact solution", problem.name))
                })?;
                (exact.value)(xi)
            }
        };
    }
    finish(space, trip, &mut rhs, 1.0, Method::Standard)
}

fn finish(
    space: &FeSpace<'_>,
    trip: Triplets,
    rhs: &mut Vec<f64>,
    theta: f64,
    method: Method,
) -> Result<LinearSystem> {
    let constraint_rows = (0..space.ndofs()).map(|i| space.is_boundary(i)).collect();
    Ok(LinearSystem { matrix: trip.to_csr(), rhs: core::mem::take(rhs), constraint_rows, theta, method })
}

/// Assembles the system for `method`.
pub fn assemble(
    method: Method,
    space: &FeSpace<'_>,
    problem: &ProblemSpec,
    geometry: &BoundaryGeometry,
    c_theta: f64,
    exec: &impl Executor,
) -> Result<LinearSystem> {
    if problem.bc_kind != method.bc_kind() {
        return Err(Error::Configuration(format!(
            "method {method} needs a {:?} problem, `{}` is {:?}",
            method.bc_kind(),
            problem.name,
            problem.bc_kind
        )));
    }
    match method {
        Method::PefemDirichletWeak => assemble_pefem_dirichlet(space, problem, geometry, c_theta, exec),
        Method::PefemDirichletStrong => assemble_pefem_dirichlet_strong(space, problem, geometry, exec),
        Method::PefemNeumann => assemble_pefem_neumann(space, problem, geometry, exec),
        Method::Standard => {
            assemble_standard_dirichlet(space, problem, geometry, StandardBoundaryData::Projected, exec)
        }
    }
}
