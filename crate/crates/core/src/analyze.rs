//! Solving, error norms, rate fits, patch tests and refinement studies.

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::fem::{volume_quadrature_degree, FeSpace, Tables};
use crate::geometry::{geometric_gap, BoundaryGeometry};
use crate::mesh::{generate_disk_mesh, generate_square_hole_mesh, Mesh};
use crate::pefem::{assemble, LinearSystem, Method, DEFAULT_C_THETA};
use crate::poly::Poly2;
use crate::problem::{ExactSolution, ProblemSpec};
use crate::sparse::CsrMatrix;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseRowMatRef, SymbolicSparseRowMatRef};
use faer::Mat;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Required relative residual `‖A x − F‖ / ‖F‖` of every solve.
pub const SOLVER_RESIDUAL_TOL: f64 = 1e-12;
/// Relative `H¹` error below which a patch test passes.
pub const PATCH_TOL: f64 = 1e-8;
const REFINEMENT_STEPS: usize = 4;

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `f − A x` with compensated products and sums, accurate to about one
/// rounding of the result even when `A x` nearly cancels `f`.
pub fn residual(a: &CsrMatrix, x: &[f64], f: &[f64]) -> Vec<f64> {
    (0..a.nrows())
        .map(|i| {
            let (cols, vals) = a.row(i);
            let (mut s, mut c) = (f[i], 0.0);
            for (&j, &v) in cols.iter().zip(vals) {
                let p = -v * x[j];
                let e = (-v).mul_add(x[j], -p);
                let t = s + p;
                let z = t - s;
                c += (s - (t - z)) + (p - z) + e;
                s = t;
            }
            s + c
        })
        .collect()
}

pub fn relative_residual(a: &CsrMatrix, x: &[f64], f: &[f64]) -> f64 {
    let r = residual(a, x, f);
    let nf = norm2(f);
    if nf == 0.0 {
        norm2(&r)
    } else {
        norm2(&r) / nf
    }
}

/// Sparse LU with partial pivoting followed by iterative refinement until
/// the relative residual meets [`SOLVER_RESIDUAL_TOL`].
pub fn solve_csr(a: &CsrMatrix, f: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || f.len() != n {
        return Err(Error::InvalidArgument(format!("system is {}x{} with rhs of length {}", n, a.ncols(), f.len())));
    }
    if norm2(f) == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let symbolic = SymbolicSparseRowMatRef::new_checked(n, n, a.row_ptr(), None, a.col_idx());
    let lu = SparseRowMatRef::new(symbolic, a.values())
        .sp_lu()
        .map_err(|_| Error::SingularSystem { residual: f64::INFINITY })?;

    let apply = |rhs: &[f64]| -> Vec<f64> {
        let mut m = Mat::from_fn(n, 1, |i, _| rhs[i]);
        lu.solve_in_place(m.as_mut());
        (0..n).map(|i| m[(i, 0)]).collect()
    };

    let mut x = apply(f);
    let mut res = f64::INFINITY;
    for _ in 0..=REFINEMENT_STEPS {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem { residual: f64::INFINITY });
        }
        let r = residual(a, &x, f);
        res = norm2(&r) / norm2(f);
        if res <= SOLVER_RESIDUAL_TOL {
            return Ok(x);
        }
        let dx = apply(&r);
        x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
    }
    log::warn!("iterative refinement stalled at relative residual {res:e}");
    if res > 1e-6 {
        Err(Error::SingularSystem { residual: res })
    } else {
        Err(Error::NonConvergence { residual: res })
    }
}

pub fn solve(system: &LinearSystem) -> Result<Vec<f64>> {
    solve_csr(&system.matrix, &system.rhs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    /// Full `H¹` norm, including the `L²` part.
    pub h1: f64,
}

/// `‖ũ − u_h‖` in `L²(Ω_h)` and `H¹(Ω_h)`, element by element with the
/// volume quadrature.
pub fn error_norms(space: &FeSpace<'_>, u: &[f64], exact: &ExactSolution, exec: &impl Executor) -> Result<ErrorNorms> {
    let tables = Tables::new(space, volume_quadrature_degree(space.degree()));
    let ntri = space.mesh().triangles().len();
    let parts = exec.map_ranges(ntri, |range| -> Result<(f64, f64)> {
        let (mut l2, mut semi) = (0.0, 0.0);
        for t in range {
            let map = space.map(t);
            let dofs = space.dofs(t);
            for (qi, (&xq, &w)) in tables.rule.points.iter().zip(&tables.rule.weights).enumerate() {
                let x = map.to_physical(xq);
                let (mut v, mut gr) = (0.0, [0.0; 2]);
                for (l, &d) in dofs.iter().enumerate() {
                    v += u[d] * tables.values[qi][l];
                    gr[0] += u[d] * tables.grads[qi][l][0];
                    gr[1] += u[d] * tables.grads[qi][l][1];
                }
                let g = map.push_gradient(gr);
                let (ue, ge) = ((exact.value)(x), (exact.gradient)(x));
                if !ue.is_finite() || !ge[0].is_finite() || !ge[1].is_finite() {
                    return Err(Error::NonFiniteCoefficient { element: t });
                }
                let wd = w * map.det;
                l2 += wd * (ue - v).powi(2);
                semi += wd * ((ge[0] - g[0]).powi(2) + (ge[1] - g[1]).powi(2));
            }
        }
        Ok((l2, semi))
    });
    let (mut l2, mut semi) = (0.0, 0.0);
    for p in parts {
        let (a, b) = p?;
        l2 += a;
        semi += b;
    }
    Ok(ErrorNorms { l2: l2.sqrt(), h1: (l2 + semi).sqrt() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    /// Least-squares slope of `log e` against `log h`.
    pub slope: f64,
    /// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for consecutive points.
    pub pairwise: Vec<f64>,
}

pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 2 {
        return Err(Error::Domain(format!("need at least 2 points, got {}", points.len())));
    }
    if let Some(&(h, e)) = points.iter().find(|(h, e)| !(*h > 0.0 && *e > 0.0 && h.is_finite() && e.is_finite())) {
        return Err(Error::Domain(format!("non-positive or non-finite point (h = {h}, error = {e})")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(h, e)| (h.ln(), e.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all h values are equal".into()));
    }
    let mut pairwise = Vec::with_capacity(logs.len() - 1);
    for w in logs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Domain("repeated h value".into()));
        }
        pairwise.push((w[0].1 - w[1].1) / (w[0].0 - w[1].0));
    }
    Ok(RateFit { slope: sxy / sxx, pairwise })
}

/// The two experiment domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Unit disk; level `l` has `8 · 2^l` boundary vertices.
    Disk,
    /// `[−1/2, 1/2]²` minus the disk of radius 1/4; level `l` is `l` uniform
    /// refinements of the base mesh.
    SquareHole,
}

impl Domain {
    pub fn tag(self) -> &'static str {
        match self {
            Domain::Disk => "disk",
            Domain::SquareHole => "square_hole",
        }
    }

    pub fn geometry(self) -> BoundaryGeometry {
        match self {
            Domain::Disk => BoundaryGeometry::unit_disk(),
            Domain::SquareHole => BoundaryGeometry::square_with_hole(),
        }
    }

    pub fn mesh(self, level: usize) -> Result<Mesh> {
        match self {
            Domain::Disk => generate_disk_mesh(8 << level),
            Domain::SquareHole => generate_square_hole_mesh(level),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(Domain::Disk),
            "square_hole" | "square-hole" => Ok(Domain::SquareHole),
            _ => Err(Error::InvalidArgument(format!("unknown domain `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `u = cos x cos y`.
    ConvexCos,
    /// `u = −(17/16) x / (x² + y²)`.
    NonconvexRational,
    /// Random polynomial of the element degree with variable diffusion.
    Patch,
}

impl Preset {
    pub fn tag(self) -> &'static str {
        match self {
            Preset::ConvexCos => "convex-cos",
            Preset::NonconvexRational => "nonconvex-rational",
            Preset::Patch => "patch-k",
        }
    }

    pub fn problem(self, method: Method, degree: usize, seed: u64) -> ProblemSpec {
        let bc = method.bc_kind();
        match self {
            Preset::ConvexCos => ProblemSpec::convex_cos(bc),
            Preset::NonconvexRational => ProblemSpec::nonconvex_rational(bc),
            Preset::Patch => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                ProblemSpec::polynomial(bc, Poly2::random(degree, &mut rng), patch_diffusion())
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex-cos" => Ok(Preset::ConvexCos),
            "nonconvex-rational" => Ok(Preset::NonconvexRational),
            "patch" | "patch-k" => Ok(Preset::Patch),
            _ => Err(Error::InvalidArgument(format!("unknown preset `{s}`"))),
        }
    }
}

/// `p = 1 + x²/4 + y²/8`, the diffusion used by patch tests.
pub fn patch_diffusion() -> Poly2 {
    Poly2::constant(1.0) + Poly2::monomial(2, 0, 0.25) + Poly2::monomial(0, 2, 0.125)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchOutcome {
    pub h1_error: f64,
    /// `‖r‖_{H¹(Ω_h)}` of the manufactured solution.
    pub scale: f64,
    pub passed: bool,
}

impl PatchOutcome {
    pub fn relative(&self) -> f64 {
        self.h1_error / self.scale
    }
}

/// Solves with a random degree-`k` manufactured solution and checks that
/// it is reproduced to [`PATCH_TOL`] relative in `H¹`.
pub fn patch_test(
    mesh: &Mesh,
    geometry: &BoundaryGeometry,
    method: Method,
    degree: usize,
    seed: u64,
    exec: &impl Executor,
) -> Result<PatchOutcome> {
    let problem = Preset::Patch.problem(method, degree, seed);
    let space = FeSpace::new(mesh, degree)?;
    let system = assemble(method, &space, &problem, geometry, DEFAULT_C_THETA, exec)?;
    let u = solve(&system)?;
    let exact = problem.exact.as_ref().expect("polynomial problems carry their solution");
    let err = error_norms(&space, &u, exact, exec)?;
    let scale = error_norms(&space, &vec![0.0; space.ndofs()], exact, exec)?.h1;
    Ok(PatchOutcome { h1_error: err.h1, scale, passed: err.h1 <= PATCH_TOL * scale })
}

/// One refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyPlan {
    pub domain: Domain,
    pub method: Method,
    pub preset: Preset,
    pub degree: usize,
    /// Mesh levels, coarse to fine.
    pub levels: Vec<usize>,
    pub c_theta: f64,
    pub seed: u64,
}

impl StudyPlan {
    pub fn new(domain: Domain, method: Method, preset: Preset, degree: usize, levels: Vec<usize>) -> Self {
        Self { domain, method, preset, degree, levels, c_theta: DEFAULT_C_THETA, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=crate::fem::MAX_DEGREE).contains(&self.degree) {
            return Err(Error::Configuration(format!("degree {} not in 1..=4", self.degree)));
        }
        if self.levels.len() < 2 {
            return Err(Error::Configuration("a study needs at least 2 levels".into()));
        }
        if self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Configuration("levels must increase".into()));
        }
        if !(self.c_theta > 0.0) {
            return Err(Error::Configuration(format!("c_theta = {} must be positive", self.c_theta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub h: f64,
    pub delta_h: f64,
    pub dofs: usize,
    pub l2_error: f64,
    pub h1_error: f64,
    /// Relative `H¹` size of the exact solution, for patch tests.
    pub scale: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub plan: StudyPlan,
    pub levels: Vec<LevelResult>,
}

/// Finest-levels window used by the rate gates.
pub const GATE_WINDOW: usize = 3;

impl ConvergenceReport {
    fn points(&self, h1: bool) -> Vec<(f64, f64)> {
        self.levels.iter().map(|l| (l.h, if h1 { l.h1_error } else { l.l2_error })).collect()
    }

    /// Fits over every level.
    pub fn fits(&self) -> Result<(RateFit, RateFit)> {
        Ok((fit_rate(&self.points(false))?, fit_rate(&self.points(true))?))
    }

    /// Least-squares slopes over the finest [`GATE_WINDOW`] levels.
    pub fn tail_slopes(&self) -> Result<(f64, f64)> {
        let skip = self.levels.len().saturating_sub(GATE_WINDOW);
        let l2 = fit_rate(&self.points(false)[skip..])?.slope;
        let h1 = fit_rate(&self.points(true)[skip..])?.slope;
        Ok((l2, h1))
    }

    /// Checks the acceptance gate for this plan and returns a one-line
    /// verdict.
    pub fn gate(&self) -> GateOutcome {
        let k = self.plan.degree as f64;
        if self.plan.preset == Preset::Patch {
            let worst = self.levels.iter().map(|l| l.h1_error / l.scale).fold(0.0, f64::max);
            return GateOutcome {
                passed: worst <= PATCH_TOL,
                detail: format!("max relative H1 error {worst:.3e} (limit {PATCH_TOL:e})"),
            };
        }
        let (l2, h1) = match self.tail_slopes() {
            Ok(s) => s,
            Err(e) => return GateOutcome { passed: false, detail: format!("{e}") },
        };
        let (passed, rule) = match (self.plan.method, self.plan.degree) {
            (Method::Standard, 1) => ((1.7..=2.4).contains(&l2), String::from("L2 in [1.7, 2.4]")),
            (Method::Standard, _) => {
                ((1.8..=2.5).contains(&l2) && (1.3..=1.9).contains(&h1), String::from("L2 in [1.8, 2.5], H1 in [1.3, 1.9]"))
            }
            _ => (l2 >= k + 0.75 && h1 >= k - 0.25, format!("L2 >= {:.2}, H1 >= {:.2}", k + 0.75, k - 0.25)),
        };
        GateOutcome { passed, detail: format!("slopes L2 {l2:.4}, H1 {h1:.4}; require {rule}") }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateOutcome {
    pub passed: bool,
    pub detail: String,
}

/// Runs one level: mesh, assemble, solve, measure.
pub fn run_level(plan: &StudyPlan, level: usize, exec: &impl Executor) -> Result<LevelResult> {
    let mesh = plan.domain.mesh(level)?;
    let geometry = plan.domain.geometry();
    let problem = plan.preset.problem(plan.method, plan.degree, plan.seed);
    let exact = problem.exact.as_ref().ok_or_else(|| Error::Configuration("preset has no exact solution".into()))?;
    let space = FeSpace::new(&mesh, plan.degree)?;
    let system = assemble(plan.method, &space, &problem, &geometry, plan.c_theta, exec)?;
    let u = solve(&system)?;
    let residual = relative_residual(&system.matrix, &u, &system.rhs);
    let err = error_norms(&space, &u, exact, exec)?;
    let scale = if plan.preset == Preset::Patch { error_norms(&space, &vec![0.0; space.ndofs()], exact, exec)?.h1 } else { 1.0 };
    let rule = crate::fem::SegmentRule::gauss(crate::fem::boundary_quadrature_points(plan.degree));
    let delta_h = geometric_gap(&mesh, &geometry, &rule.points)?;
    log::info!(
        "{} {} k={} level {level}: h={:.4e} dofs={} L2={:.4e} H1={:.4e}",
        plan.domain,
        plan.method,
        plan.degree,
        mesh.h(),
        space.ndofs(),
        err.l2,
        err.h1
    );
    Ok(LevelResult {
        level,
        h: mesh.h(),
        delta_h,
        dofs: space.ndofs(),
        l2_error: err.l2,
        h1_error: err.h1,
        scale,
        residual,
    })
}

/// Error naming the level at which a study failed.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyError {
    pub level: usize,
    pub source: Error,
}

impl fmt::Display for StudyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {}", self.level, self.source)
    }
}

impl core::error::Error for StudyError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// Runs every level of `plan` in order.
pub fn run_study(plan: &StudyPlan, exec: &impl Executor) -> core::result::Result<ConvergenceReport, StudyError> {
    plan.validate().map_err(|source| StudyError { level: plan.levels.first().copied().unwrap_or(0), source })?;
    let mut levels = Vec::with_capacity(plan.levels.len());
    for &level in &plan.levels {
        levels.push(run_level(plan, level, exec).map_err(|source| StudyError { level, source })?);
    }
    Ok(ConvergenceReport { plan: plan.clone(), levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::geometry::{CurveId, Point};
    use alloc::boxed::Box;
    use rand::Rng;

    #[test]
    fn solver_examples() {
        let f = [1.5, -2.0, 0.25];
        assert_eq!(solve_csr(&CsrMatrix::identity(3), &f).unwrap(), f.to_vec());

        let a = CsrMatrix::from_dense(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = solve_csr(&a, &[3.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn solver_random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 50;
        let m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| m[k][i] * m[k][j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let a = CsrMatrix::from_dense(&a);
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = solve_csr(&a, &f).unwrap();
        assert!(relative_residual(&a, &x, &f) <= SOLVER_RESIDUAL_TOL);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(solve_csr(&a, &[1.0, 1.0]), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn fit_rate_examples() {
        let pts: Vec<(f64, f64)> = [0.5f64, 0.25, 0.125].iter().map(|&h| (h, h.powi(3))).collect();
        assert!((fit_rate(&pts).unwrap().slope - 3.0).abs() < 1e-12);
        let pair = fit_rate(&[(0.5, 1e-2), (0.25, 1.25e-3)]).unwrap();
        assert!((pair.pairwise[0] - 3.0).abs() < 1e-12);
        assert!(fit_rate(&[(0.5, 1.0)]).is_err());
        assert!(fit_rate(&[(0.5, 1.0), (0.25, 0.0)]).is_err());
        assert!(fit_rate(&[(-0.5, 1.0), (0.25, 1.0)]).is_err());
    }

    #[test]
    fn fit_rate_is_scale_invariant() {
        let pts = [(0.4, 3e-3), (0.2, 5e-4), (0.1, 6e-5), (0.05, 8e-6)];
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(h, e)| (h, 17.0 * e)).collect();
        let (a, b) = (fit_rate(&pts).unwrap().slope, fit_rate(&scaled).unwrap().slope);
        assert!((a - b).abs() < 1e-12);
    }

    fn reference_mesh() -> Mesh {
        Mesh::from_triangles(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]], |_, _| CurveId(0))
    }

    fn exact(value: fn(Point) -> f64, gradient: fn(Point) -> Point) -> ExactSolution {
        ExactSolution { value: Box::new(value), gradient: Box::new(gradient) }
    }

    #[test]
    fn error_norm_examples() {
        let mesh = reference_mesh();
        let space = FeSpace::new(&mesh, 1).unwrap();
        let zero = vec![0.0; space.ndofs()];
        let e = error_norms(&space, &zero, &exact(|x| x[0], |_| [1.0, 0.0]), &Serial).unwrap();
        assert!((e.l2 - (1.0f64 / 12.0).sqrt()).abs() < 1e-14);
        assert!((e.h1 - (1.0f64 / 12.0 + 0.5).sqrt()).abs() < 1e-14);

        let disk = generate_disk_mesh(16).unwrap();
        let space = FeSpace::new(&disk, 2).unwrap();
        let e = error_norms(&space, &vec![0.0; space.ndofs()], &exact(|_| 1.0, |_| [0.0, 0.0]), &Serial).unwrap();
        assert!((e.l2 - disk.area().sqrt()).abs() < 1e-13);

        let ex = exact(|x| x[0] * x[1] - x[1] * x[1], |x| [x[1], x[0] - 2.0 * x[1]]);
        let u = space.interpolate(|x| (ex.value)(x));
        let e = error_norms(&space, &u, &ex, &Serial).unwrap();
        assert!(e.l2 <= 1e-10 && e.h1 <= 1e-10 && e.h1 >= e.l2);
    }

    #[test]
    fn reference_quadratic_column_rate() {
        // reference errors and mesh sizes of a quadratic Dirichlet disk study,
        // whose least-squares rate is 3.2283
        let h = [0.583095, 0.315543, 0.165152, 0.080322, 0.045221];
        let e = [6.83996e-4, 8.71107e-5, 1.07759e-5, 1.28123e-6, 1.59731e-7];
        let pts: Vec<(f64, f64)> = h.iter().copied().zip(e.iter().copied()).collect();
        let slope = fit_rate(&pts).unwrap().slope;
        assert!((slope - 3.2283).abs() <= 0.05, "{slope}");
    }

    #[test]
    fn plan_validation() {
        let mut plan = StudyPlan::new(Domain::Disk, Method::PefemNeumann, Preset::ConvexCos, 2, vec![0]);
        assert!(plan.validate().is_err());
        plan.levels = vec![0, 1];
        assert!(plan.validate().is_ok());
        plan.degree = 5;
        assert!(plan.validate().is_err());
    }

    #[test]
    fn tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        for d in [Domain::Disk, Domain::SquareHole] {
            assert_eq!(d.tag().parse::<Domain>().unwrap(), d);
        }
        for p in [Preset::ConvexCos, Preset::NonconvexRational, Preset::Patch] {
            assert_eq!(p.tag().parse::<Preset>().unwrap(), p);
        }
    }
}
