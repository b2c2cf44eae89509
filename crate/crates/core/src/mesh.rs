//! Affine triangulations `Ω_h` with tagged boundary edges, the two built-in
//! experiment families, uniform refinement and validation.

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, sub, BoundaryGeometry, CurveId, Point, SQUARE_HOLE_CIRCLE};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

/// Smallest interior angle accepted by [`validate`], in degrees.
pub const MIN_ANGLE_DEG: f64 = 20.0;
/// Boundary vertices must satisfy `|φ(v)| ≤ TYPE_A_TOL`.
pub const TYPE_A_TOL: f64 = 1e-10;

/// A boundary edge `E_i`, oriented counterclockwise with respect to its
/// adjacent triangle `K_{j_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub triangle: usize,
    pub curve: CurveId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    h: f64,
    edge_normals: Vec<Point>,
}

impl Mesh {
    /// Builds a mesh from raw arrays. No validation happens here; see
    /// [`validate`]. Indices must be in range.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, boundary_edges: Vec<BoundaryEdge>) -> Self {
        let h = triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| vertices[i]);
                dist(a, b).max(dist(b, c)).max(dist(c, a))
            })
            .fold(0.0, f64::max);
        let edge_normals = boundary_edges
            .iter()
            .map(|e| {
                let a = vertices[e.vertices[0]];
                let b = vertices[e.vertices[1]];
                let t = sub(b, a);
                let len = norm(t);
                let mut n = [t[1] / len, -t[0] / len];
                let tri = triangles[e.triangle];
                let centroid = [
                    (vertices[tri[0]][0] + vertices[tri[1]][0] + vertices[tri[2]][0]) / 3.0,
                    (vertices[tri[0]][1] + vertices[tri[1]][1] + vertices[tri[2]][1]) / 3.0,
                ];
                let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                if n[0] * (mid[0] - centroid[0]) + n[1] * (mid[1] - centroid[1]) < 0.0 {
                    n = [-n[0], -n[1]];
                }
                n
            })
            .collect();
        Self { vertices, triangles, boundary_edges, h, edge_normals }
    }

    /// Builds a mesh whose boundary edges are the edges used by exactly one
    /// triangle, tagged by `classify(a, b)`. Triangles are reoriented
    /// counterclockwise.
    pub fn from_triangles(
        vertices: Vec<Point>,
        mut triangles: Vec<[usize; 3]>,
        classify: impl Fn(Point, Point) -> CurveId,
    ) -> Self {
        for t in &mut triangles {
            if signed_area(t.map(|i| vertices[i])) < 0.0 {
                t.swap(1, 2);
            }
        }
        let uses = edge_uses(&triangles);
        let mut boundary_edges = Vec::new();
        for (ti, t) in triangles.iter().enumerate() {
            for l in 0..3 {
                let (a, b) = (t[l], t[(l + 1) % 3]);
                if uses[&edge_key(a, b)].len() == 1 {
                    boundary_edges.push(BoundaryEdge {
                        vertices: [a, b],
                        triangle: ti,
                        curve: classify(vertices[a], vertices[b]),
                    });
                }
            }
        }
        Self::new(vertices, triangles, boundary_edges)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    /// Largest triangle diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Piecewise-constant outward normals `n_h`, one per boundary edge.
    pub fn edge_normals(&self) -> &[Point] {
        &self.edge_normals
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|i| self.vertices[i])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| signed_area(self.triangle_points(t))).sum()
    }

    pub fn min_angle_deg(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| min_angle(self.triangle_points(t)))
            .fold(f64::INFINITY, f64::min)
            .to_degrees()
    }

    /// Unique undirected edges `(lo, hi)` in ascending order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        edge_uses(&self.triangles).into_keys().map(|(a, b)| [a, b]).collect()
    }

    /// Uniform refinement: every triangle splits into four through its edge
    /// midpoints. Midpoints of boundary edges are moved onto their curve
    /// when `geometry` is given, which keeps Type-A meshes Type A.
    pub fn refine(&self, geometry: Option<&BoundaryGeometry>) -> Result<Mesh> {
        let mut vertices = self.vertices.clone();
        let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
            *midpoint.entry(edge_key(a, b)).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                vertices.len() - 1
            })
        };

        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for t in &self.triangles {
            let [a, b, c] = *t;
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }

        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for (ei, e) in self.boundary_edges.iter().enumerate() {
            let [u, v] = e.vertices;
            let m = mid(u, v, &mut vertices);
            if let Some(geo) = geometry {
                vertices[m] = geo.closest_point(vertices[m], e.curve)?;
            }
            let tri = self.triangles[e.triangle];
            let local = |x: usize| tri.iter().position(|&y| y == x).ok_or(Error::MissingAdjacency { edge: ei });
            let (lu, lv) = (local(u)?, local(v)?);
            boundary_edges.push(BoundaryEdge { vertices: [u, m], triangle: 4 * e.triangle + lu, curve: e.curve });
            boundary_edges.push(BoundaryEdge { vertices: [m, v], triangle: 4 * e.triangle + lv, curve: e.curve });
        }
        Ok(Mesh::new(vertices, triangles, boundary_edges))
    }
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn edge_uses(triangles: &[[usize; 3]]) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut uses: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for l in 0..3 {
            uses.entry(edge_key(t[l], t[(l + 1) % 3])).or_default().push(ti);
        }
    }
    uses
}

pub fn signed_area(p: [Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

/// Smallest interior angle in radians.
pub fn min_angle(p: [Point; 3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..3 {
        let u = sub(p[(i + 1) % 3], p[i]);
        let v = sub(p[(i + 2) % 3], p[i]);
        let cross = (u[0] * v[1] - u[1] * v[0]).abs();
        let dotp = u[0] * v[0] + u[1] * v[1];
        best = best.min(cross.atan2(dotp));
    }
    best
}

/// Radial ring spacing of the disk generator, in boundary chord lengths.
const DISK_RING_SPACING: f64 = 0.45;

/// Unit disk meshed by concentric rings. The outer ring carries
/// `n_boundary` vertices on the unit circle. Inner rings are
/// `DISK_RING_SPACING` chords apart and carry as many vertices as the next
/// ring out would need for the boundary chord, so no edge between rings
/// spans more than one angular step. Rings with equal counts are staggered.
pub fn generate_disk_mesh(n_boundary: usize) -> Result<Mesh> {
    if n_boundary < 8 {
        return Err(Error::InvalidArgument(alloc::format!("n_boundary = {n_boundary} < 8")));
    }
    let chord = 2.0 * (PI / n_boundary as f64).sin();
    let rings = (1.0 / (DISK_RING_SPACING * chord)).ceil() as usize;
    let dr = 1.0 / rings as f64;

    let counts: Vec<usize> = (1..=rings)
        .map(|j| ((n_boundary as f64 * (j as f64 * dr + dr)).ceil() as usize).min(n_boundary))
        .collect();
    let mut offsets = vec![0.0; rings];
    for j in (0..rings - 1).rev() {
        if counts[j] == counts[j + 1] {
            offsets[j] = (offsets[j + 1] + 0.5) % 1.0;
        }
    }

    let mut vertices = vec![[0.0, 0.0]];
    let mut ring_info = Vec::with_capacity(rings);
    for j in 0..rings {
        let r = (j + 1) as f64 * dr;
        let first = vertices.len();
        for i in 0..counts[j] {
            let (s, c) = (2.0 * PI * (i as f64 + offsets[j]) / counts[j] as f64).sin_cos();
            vertices.push(if j + 1 == rings { [c, s] } else { [r * c, r * s] });
        }
        ring_info.push(Ring { first, count: counts[j], offset: offsets[j] });
    }

    let mut triangles = Vec::new();
    let inner = &ring_info[0];
    for i in 0..inner.count {
        triangles.push([0, inner.first + i, inner.first + (i + 1) % inner.count]);
    }
    for w in ring_info.windows(2) {
        zip_rings(&w[0], &w[1], &mut triangles);
    }
    Ok(Mesh::from_triangles(vertices, triangles, |_, _| CurveId(0)))
}

struct Ring {
    first: usize,
    count: usize,
    /// Angular offset in units of the ring's own step.
    offset: f64,
}

impl Ring {
    fn angle(&self, i: usize) -> f64 {
        2.0 * PI * (i as f64 + self.offset) / self.count as f64
    }
}

/// Triangulates the annulus between two rings by merging their vertices in
/// angular order, starting from the outer vertex nearest the first inner one.
fn zip_rings(inner: &Ring, outer: &Ring, triangles: &mut Vec<[usize; 3]>) {
    let a0 = inner.angle(0);
    let nearest = ((a0 / (2.0 * PI)) * outer.count as f64 - outer.offset).round() as i64;
    let start = nearest.rem_euclid(outer.count as i64) as usize;
    let mut b0 = outer.angle(start);
    if b0 - a0 > PI {
        b0 -= 2.0 * PI;
    }
    let alpha = |i: usize| a0 + 2.0 * PI * i as f64 / inner.count as f64;
    let beta = |j: usize| b0 + 2.0 * PI * j as f64 / outer.count as f64;
    let a = |i: usize| inner.first + i % inner.count;
    let b = |j: usize| outer.first + (start + j) % outer.count;

    let (mut i, mut j) = (0, 0);
    while i < inner.count || j < outer.count {
        let advance_inner = j == outer.count || (i < inner.count && alpha(i + 1) <= beta(j + 1));
        if advance_inner {
            triangles.push([a(i), a(i + 1), b(j)]);
            i += 1;
        } else {
            triangles.push([a(i), b(j + 1), b(j)]);
            j += 1;
        }
    }
}

/// Angular divisions of the coarsest square-with-hole mesh.
const HOLE_RAYS: usize = 16;
/// Graded layers between the hole and the square at level 0.
const HOLE_LAYERS: usize = 2;

/// `[-0.5, 0.5]²` minus the disk of radius `1/4`, refined `n_refine` times.
///
/// The coarsest mesh joins the hole and the square along rays with
/// geometrically graded layers; each level subdivides every triangle into
/// four and moves new hole-boundary vertices onto the circle.
pub fn generate_square_hole_mesh(n_refine: usize) -> Result<Mesh> {
    let geometry = BoundaryGeometry::square_with_hole();
    let mut mesh = square_hole_base();
    for _ in 0..n_refine {
        mesh = mesh.refine(Some(&geometry))?;
    }
    Ok(mesh)
}

fn square_hole_base() -> Mesh {
    let radius = 0.25;
    let q: f64 = 2f64.powf(1.0 / HOLE_LAYERS as f64);
    let grade = |l: usize| (q.powi(l as i32) - 1.0) / (q.powi(HOLE_LAYERS as i32) - 1.0);

    let mut vertices = Vec::with_capacity(HOLE_RAYS * (HOLE_LAYERS + 1));
    for l in 0..=HOLE_LAYERS {
        for i in 0..HOLE_RAYS {
            let theta = 2.0 * PI * i as f64 / HOLE_RAYS as f64;
            let (s, c) = theta.sin_cos();
            let inner = [radius * c, radius * s];
            let scale = 0.5 / c.abs().max(s.abs());
            let mut outer = [scale * c, scale * s];
            // Snap to the square exactly.
            for x in &mut outer {
                if (x.abs() - 0.5).abs() < 1e-12 {
                    *x = 0.5f64.copysign(*x);
                }
            }
            let t = grade(l);
            vertices.push(if l == 0 {
                inner
            } else if l == HOLE_LAYERS {
                outer
            } else {
                [inner[0] + t * (outer[0] - inner[0]), inner[1] + t * (outer[1] - inner[1])]
            });
        }
    }

    let idx = |l: usize, i: usize| l * HOLE_RAYS + i % HOLE_RAYS;
    let mut triangles = Vec::new();
    for l in 0..HOLE_LAYERS {
        for i in 0..HOLE_RAYS {
            let (a, b, c, d) = (idx(l, i), idx(l, i + 1), idx(l + 1, i + 1), idx(l + 1, i));
            if dist(vertices[a], vertices[c]) <= dist(vertices[b], vertices[d]) {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    Mesh::from_triangles(vertices, triangles, classify_square_hole)
}

/// `[-0.5, 0.5]²` split into `n × n` squares of two triangles each; sides
/// tagged as in [`BoundaryGeometry::square`].
pub fn generate_square_mesh(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("square mesh needs n >= 1".into()));
    }
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([-0.5 + i as f64 / n as f64, -0.5 + j as f64 / n as f64]);
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Ok(Mesh::from_triangles(vertices, triangles, classify_square_hole))
}

fn classify_square_hole(a: Point, b: Point) -> CurveId {
    let on = |p: Point, axis: usize, value: f64| (p[axis] - value).abs() < 1e-12;
    if on(a, 1, -0.5) && on(b, 1, -0.5) {
        CurveId(1)
    } else if on(a, 0, 0.5) && on(b, 0, 0.5) {
        CurveId(2)
    } else if on(a, 1, 0.5) && on(b, 1, 0.5) {
        CurveId(3)
    } else if on(a, 0, -0.5) && on(b, 0, -0.5) {
        CurveId(4)
    } else {
        SQUARE_HOLE_CIRCLE
    }
}

/// One failed mesh invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    IndexOutOfRange { triangle: usize },
    NonPositiveArea { triangle: usize, area: f64 },
    /// An edge shared by more than two triangles.
    OverSharedEdge { edge: [usize; 2], count: usize },
    /// An edge used by one triangle but missing from the boundary list.
    UntaggedBoundaryEdge { edge: [usize; 2] },
    /// A listed boundary edge that is interior, or not an edge of its
    /// recorded triangle.
    BadBoundaryEdge { index: usize },
    /// A boundary vertex without exactly one incoming and one outgoing edge.
    OpenBoundary { vertex: usize },
    NotOnCurve { vertex: usize, curve: CurveId, residual: f64 },
    SmallAngle { triangle: usize, degrees: f64 },
    NormalOrientation { index: usize },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every mesh invariant. The Type-A check runs only when a
/// geometry is supplied.
pub fn validate(mesh: &Mesh, geometry: Option<&BoundaryGeometry>) -> ValidationReport {
    let mut violations = Vec::new();
    let nv = mesh.vertices.len();

    let mut in_range = true;
    for (ti, t) in mesh.triangles.iter().enumerate() {
        if t.iter().any(|&i| i >= nv) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            violations.push(Violation::IndexOutOfRange { triangle: ti });
            in_range = false;
        }
    }
    if !in_range {
        return ValidationReport { violations };
    }

    for ti in 0..mesh.triangles.len() {
        let p = mesh.triangle_points(ti);
        let area = signed_area(p);
        if !(area > 0.0) {
            violations.push(Violation::NonPositiveArea { triangle: ti, area });
            continue;
        }
        let degrees = min_angle(p).to_degrees();
        if degrees < MIN_ANGLE_DEG {
            violations.push(Violation::SmallAngle { triangle: ti, degrees });
        }
    }

    let uses = edge_uses(&mesh.triangles);
    for (&(a, b), tris) in &uses {
        if tris.len() > 2 {
            violations.push(Violation::OverSharedEdge { edge: [a, b], count: tris.len() });
        }
    }

    let mut listed = BTreeMap::new();
    for (i, e) in mesh.boundary_edges.iter().enumerate() {
        let [a, b] = e.vertices;
        let key = edge_key(a, b);
        let contains = mesh.triangles.get(e.triangle).is_some_and(|t| t.contains(&a) && t.contains(&b));
        let single = uses.get(&key).is_some_and(|t| t.len() == 1);
        if !contains || !single || listed.insert(key, i).is_some() {
            violations.push(Violation::BadBoundaryEdge { index: i });
        }
    }
    for (&(a, b), tris) in &uses {
        if tris.len() == 1 && !listed.contains_key(&(a, b)) {
            violations.push(Violation::UntaggedBoundaryEdge { edge: [a, b] });
        }
    }

    let mut degree: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for e in &mesh.boundary_edges {
        degree.entry(e.vertices[0]).or_default().0 += 1;
        degree.entry(e.vertices[1]).or_default().1 += 1;
    }
    for (&v, &(out, inc)) in &degree {
        if out != 1 || inc != 1 {
            violations.push(Violation::OpenBoundary { vertex: v });
        }
    }

    for (i, e) in mesh.boundary_edges.iter().enumerate() {
        let [a, b] = e.vertices.map(|v| mesh.vertices[v]);
        let n = mesh.edge_normals[i];
        let tri = mesh.triangles[e.triangle];
        let c = [
            (mesh.vertices[tri[0]][0] + mesh.vertices[tri[1]][0] + mesh.vertices[tri[2]][0]) / 3.0,
            (mesh.vertices[tri[0]][1] + mesh.vertices[tri[1]][1] + mesh.vertices[tri[2]][1]) / 3.0,
        ];
        let offset = [0.5 * (a[0] + b[0]) - c[0], 0.5 * (a[1] + b[1]) - c[1]];
        let t = sub(b, a);
        let tangential = (n[0] * t[0] + n[1] * t[1]).abs() / norm(t);
        if !(n[0] * offset[0] + n[1] * offset[1] > 0.0) || (norm(n) - 1.0).abs() > 1e-14 || tangential > 1e-12 {
            violations.push(Violation::NormalOrientation { index: i });
        }
    }

    if let Some(geo) = geometry {
        for e in &mesh.boundary_edges {
            for &v in &e.vertices {
                let residual = match geo.curve(e.curve) {
                    Ok(c) => c.level_set(mesh.vertices[v]),
                    Err(_) => f64::INFINITY,
                };
                if !(residual.abs() <= TYPE_A_TOL) {
                    violations.push(Violation::NotOnCurve { vertex: v, curve: e.curve, residual });
                }
            }
        }
    }

    ValidationReport { violations }
}
