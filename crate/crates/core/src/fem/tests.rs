use super::*;
use crate::exec::Serial;
use crate::geometry::{BoundaryGeometry, CurveId};
use crate::mesh::{generate_disk_mesh, generate_square_hole_mesh, Mesh};
use crate::poly::Poly2;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference_mesh() -> Mesh {
    Mesh::from_triangles(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]], |_, _| CurveId(0))
}

fn one(_: crate::geometry::Point) -> f64 {
    1.0
}

fn zero(_: crate::geometry::Point) -> f64 {
    0.0
}

#[test]
fn affine_map_examples() {
    let m = AffineMap::new(0, [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
    assert_eq!(m.jacobian, [[1.0, 0.0], [0.0, 1.0]]);
    assert_eq!(m.offset, [0.0, 0.0]);

    let v = [[0.3, -0.2], [1.4, 0.1], [0.5, 0.9]];
    let m = AffineMap::new(3, v).unwrap();
    let c = m.to_physical([1.0 / 3.0, 1.0 / 3.0]);
    let bary = [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0];
    assert!((c[0] - bary[0]).abs() < 1e-15 && (c[1] - bary[1]).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let p = [rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0)];
        let back = m.to_reference(m.to_physical(p));
        assert!((back[0] - p[0]).abs() < 1e-12 && (back[1] - p[1]).abs() < 1e-12);
    }

    let err = AffineMap::new(7, [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap_err();
    assert!(matches!(err, crate::Error::SingularElement { element: 7, .. }));
}

#[test]
fn dimension_formula() {
    let mesh = generate_disk_mesh(16).unwrap();
    for k in 1..=4 {
        let space = FeSpace::new(&mesh, k).unwrap();
        let expect =
            mesh.vertices().len() + (k - 1) * mesh.edges().len() + (k - 1) * (k.max(2) - 2) / 2 * mesh.triangles().len();
        assert_eq!(space.ndofs(), expect);
        assert_eq!(space.boundary_dofs().len(), k * mesh.boundary_edges().len());
        assert_eq!(space.boundary_dofs().len() + space.interior_dofs().len(), space.ndofs());
    }
}

#[test]
fn shared_edge_dofs_coincide() {
    let mesh = generate_square_hole_mesh(0).unwrap();
    let space = FeSpace::new(&mesh, 4).unwrap();
    let coords = space.coords();
    for t in 0..mesh.triangles().len() {
        let map = space.map(t);
        for (l, &d) in space.dofs(t).iter().enumerate() {
            let x = map.to_physical(space.element().nodes()[l]);
            assert!((x[0] - coords[d][0]).abs() < 1e-14 && (x[1] - coords[d][1]).abs() < 1e-14);
        }
    }
}

#[test]
fn p1_reference_stiffness() {
    let mesh = reference_mesh();
    let space = FeSpace::new(&mesh, 1).unwrap();
    let a = assemble_operator(&space, &one, &zero, Form::D, &Serial).unwrap().to_dense();
    let expect = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((a[i][j] - expect[i][j]).abs() < 1e-12);
        }
    }
}

#[test]
fn p1_reference_load_of_x() {
    let mesh = reference_mesh();
    let space = FeSpace::new(&mesh, 1).unwrap();
    let f = |x: crate::geometry::Point| x[0];
    let b = assemble_load(&space, &f, &Serial).unwrap();
    let expect = [1.0 / 24.0, 1.0 / 12.0, 1.0 / 24.0];
    for i in 0..3 {
        assert!((b[i] - expect[i]).abs() < 1e-15);
    }
    assert!((b.iter().sum::<f64>() - 1.0 / 6.0).abs() < 1e-15);
}

#[test]
fn stiffness_annihilates_constants_and_is_symmetric() {
    let mesh = generate_disk_mesh(12).unwrap();
    let p = |x: crate::geometry::Point| 1.0 + x[0] * x[0];
    for k in 1..=4 {
        let space = FeSpace::new(&mesh, k).unwrap();
        let a = assemble_operator(&space, &p, &zero, Form::D, &Serial).unwrap();
        let r = a.mul_vec(&vec![1.0; space.ndofs()]);
        assert!(r.iter().all(|v| v.abs() < 1e-11), "k={k}");
        assert!(a.relative_asymmetry(&vec![true; space.ndofs()]) < 1e-12);
    }
}

#[test]
fn mass_rows_sum_to_area() {
    let mesh = generate_square_hole_mesh(1).unwrap();
    let area = mesh.area();
    for k in 1..=4 {
        let space = FeSpace::new(&mesh, k).unwrap();
        let m = assemble_operator(&space, &zero, &one, Form::N, &Serial).unwrap();
        let rows = m.mul_vec(&vec![1.0; space.ndofs()]);
        let load = assemble_load(&space, &one, &Serial).unwrap();
        for (r, l) in rows.iter().zip(&load) {
            assert!((r - l).abs() < 1e-14);
        }
        assert!((rows.iter().sum::<f64>() - area).abs() < 1e-13);
        assert!(assemble_load(&space, &zero, &Serial).unwrap().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn non_finite_coefficient_is_reported() {
    let mesh = reference_mesh();
    let space = FeSpace::new(&mesh, 2).unwrap();
    let bad = |_: crate::geometry::Point| f64::NAN;
    let err = assemble_operator(&space, &bad, &zero, Form::D, &Serial).unwrap_err();
    assert_eq!(err, crate::Error::NonFiniteCoefficient { element: 0 });
    assert!(assemble_load(&space, &bad, &Serial).is_err());
}

#[test]
fn eval_fe_reproduces_quadratic_anywhere() {
    let mesh = generate_disk_mesh(8).unwrap();
    let space = FeSpace::new(&mesh, 2).unwrap();
    let u = space.interpolate(|x| x[0] * x[0] + x[1]);
    for t in [0, 5, mesh.triangles().len() - 1] {
        for x in [[0.1, 0.2], [1.7, -0.4], [-3.0, 2.5]] {
            let (v, g) = eval_fe(&space, &u, t, x);
            assert!((v - (x[0] * x[0] + x[1])).abs() < 1e-10);
            assert!((g[0] - 2.0 * x[0]).abs() < 1e-10 && (g[1] - 1.0).abs() < 1e-10);
        }
    }
    let c = vec![2.5; space.ndofs()];
    let (v, g) = eval_fe(&space, &c, 3, [4.0, -4.0]);
    assert!((v - 2.5).abs() < 1e-12 && g[0].abs() < 1e-11 && g[1].abs() < 1e-11);
}

#[test]
fn extrapolated_quartic_matches_monomial_form() {
    let mesh = generate_disk_mesh(16).unwrap();
    let geo = BoundaryGeometry::unit_disk();
    let space = FeSpace::new(&mesh, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let r = Poly2::random(4, &mut rng);
    let u = space.interpolate(|x| r.eval(x));
    let seg = SegmentRule::gauss(boundary_quadrature_points(4));
    for e in mesh.boundary_edges() {
        let [a, b] = e.vertices.map(|v| mesh.vertices()[v]);
        for &s in &seg.points {
            let xi = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
            let eta = geo.closest_point(xi, e.curve).unwrap();
            let (v, g) = eval_fe(&space, &u, e.triangle, eta);
            let gx = r.gradient(eta);
            assert!((v - r.eval(eta)).abs() < 1e-9);
            assert!((g[0] - gx[0]).abs() < 1e-8 && (g[1] - gx[1]).abs() < 1e-8);
        }
    }
}

#[test]
fn assembled_stiffness_matches_exact_integrand() {
    let mesh = generate_disk_mesh(12).unwrap();
    let p = |x: crate::geometry::Point| 2.0 + x[1];
    for k in 1..=4 {
        let space = FeSpace::new(&mesh, k).unwrap();
        let r = Poly2::random(k, &mut ChaCha8Rng::seed_from_u64(k as u64));
        let a = assemble_operator(&space, &p, &zero, Form::D, &Serial).unwrap();
        let au = a.mul_vec(&space.interpolate(|x| r.eval(x)));

        let rule = QuadratureRule::triangle(volume_quadrature_degree(k));
        let n = space.element().len();
        let mut direct = vec![0.0; space.ndofs()];
        let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 2]; n]);
        for t in 0..mesh.triangles().len() {
            let map = space.map(t);
            for (&xq, &w) in rule.points.iter().zip(&rule.weights) {
                let x = map.to_physical(xq);
                space.basis_at(t, x, &mut v, &mut g);
                let gr = r.gradient(x);
                for (l, &d) in space.dofs(t).iter().enumerate() {
                    direct[d] += w * map.det * p(x) * (gr[0] * g[l][0] + gr[1] * g[l][1]);
                }
            }
        }
        for (x, y) in au.iter().zip(&direct) {
            assert!((x - y).abs() < 1e-10, "k={k}");
        }
    }
}

fn seminorm_ratio(mesh: &Mesh, k: usize, rng: &mut ChaCha8Rng) -> f64 {
    let space = FeSpace::new(mesh, k).unwrap();
    let d = assemble_operator(&space, &one, &zero, Form::D, &Serial).unwrap();
    let m = assemble_operator(&space, &zero, &one, Form::N, &Serial).unwrap();
    let quad = |a: &crate::sparse::CsrMatrix, v: &[f64]| a.mul_vec(v).iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    (0..20)
        .map(|_| {
            let v: Vec<f64> = (0..space.ndofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
            (quad(&d, &v) / quad(&m, &v)).sqrt() * mesh.h()
        })
        .fold(0.0, f64::max)
}

#[test]
fn inverse_inequality_constant_survives_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [1, 2] {
        let coarse = generate_disk_mesh(16).unwrap();
        let fine = generate_disk_mesh(32).unwrap();
        let c = seminorm_ratio(&coarse, k, &mut rng);
        let c_fine = seminorm_ratio(&fine, k, &mut rng);
        assert!(c_fine <= 1.1 * c, "k={k}: {c_fine} > 1.1 * {c}");
    }
}
