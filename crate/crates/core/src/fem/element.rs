//! Equispaced `P_k` Lagrange elements on the reference triangle.

use crate::error::{Error, Result};
use crate::geometry::Point;
use alloc::format;
use alloc::vec::Vec;

pub const MAX_DEGREE: usize = 4;

/// `P_k` Lagrange basis on `{x, y ≥ 0, x + y ≤ 1}` with equispaced nodes.
///
/// Local order: the three vertices `(0,0), (1,0), (0,1)`, then `k − 1` nodes
/// on each edge `v0→v1`, `v1→v2`, `v2→v0` (walking from the first vertex),
/// then interior nodes. Each node carries a barycentric multi-index
/// `α` with `|α| = k`, and its basis function is
/// `Π_m R_{α_m}(λ_m)` with `R_a(λ) = Π_{s<a} (kλ − s)/(s + 1)`.
///
/// The basis is a closed-form polynomial, so evaluating it outside the
/// triangle extrapolates the element polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceElement {
    degree: usize,
    nodes: Vec<Point>,
    indices: Vec<[usize; 3]>,
}

pub(crate) const LOCAL_EDGES: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];

impl ReferenceElement {
    pub fn new(degree: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::InvalidArgument(format!("degree {degree} not in 1..={MAX_DEGREE}")));
        }
        let k = degree;
        let mut indices = Vec::with_capacity((k + 1) * (k + 2) / 2);
        for v in 0..3 {
            let mut a = [0; 3];
            a[v] = k;
            indices.push(a);
        }
        for [va, vb] in LOCAL_EDGES {
            for m in 1..k {
                let mut a = [0; 3];
                a[va] = k - m;
                a[vb] = m;
                indices.push(a);
            }
        }
        for i in 1..k {
            for j in 1..k - i {
                indices.push([k - i - j, i, j]);
            }
        }
        let nodes = indices.iter().map(|a| [a[1] as f64 / k as f64, a[2] as f64 / k as f64]).collect();
        Ok(Self { degree, nodes, indices })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// Fills `values[i]` and `grads[i]` (reference gradient) for every
    /// basis function at `p`, which may lie anywhere in the plane.
    pub fn eval(&self, p: Point, values: &mut [f64], grads: &mut [Point]) {
        let k = self.degree;
        let lambda = [1.0 - p[0] - p[1], p[0], p[1]];
        const DLAMBDA: [Point; 3] = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];

        // r[m][a] = R_a(λ_m), dr[m][a] = R_a'(λ_m)
        let mut r = [[0.0; MAX_DEGREE + 1]; 3];
        let mut dr = [[0.0; MAX_DEGREE + 1]; 3];
        for m in 0..3 {
            r[m][0] = 1.0;
            for s in 0..k {
                let f = (k as f64 * lambda[m] - s as f64) / (s as f64 + 1.0);
                let df = k as f64 / (s as f64 + 1.0);
                dr[m][s + 1] = dr[m][s] * f + r[m][s] * df;
                r[m][s + 1] = r[m][s] * f;
            }
        }

        for (i, a) in self.indices.iter().enumerate() {
            let (r0, r1, r2) = (r[0][a[0]], r[1][a[1]], r[2][a[2]]);
            values[i] = r0 * r1 * r2;
            let d = [dr[0][a[0]] * r1 * r2, r0 * dr[1][a[1]] * r2, r0 * r1 * dr[2][a[2]]];
            grads[i] = [
                d[0] * DLAMBDA[0][0] + d[1] * DLAMBDA[1][0] + d[2] * DLAMBDA[2][0],
                d[0] * DLAMBDA[0][1] + d[1] * DLAMBDA[1][1] + d[2] * DLAMBDA[2][1],
            ];
        }
    }

    pub fn values(&self, p: Point) -> Vec<f64> {
        let mut v = alloc::vec![0.0; self.len()];
        let mut g = alloc::vec![[0.0; 2]; self.len()];
        self.eval(p, &mut v, &mut g);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn node_counts_and_range() {
        for k in 1..=4 {
            let e = ReferenceElement::new(k).unwrap();
            assert_eq!(e.len(), (k + 1) * (k + 2) / 2);
        }
        assert!(ReferenceElement::new(0).is_err());
        assert!(ReferenceElement::new(5).is_err());
    }

    #[test]
    fn kronecker_property() {
        for k in 1..=4 {
            let e = ReferenceElement::new(k).unwrap();
            for (j, &p) in e.nodes().iter().enumerate() {
                for (i, v) in e.values(p).into_iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-12, "k={k} i={i} j={j}: {v}");
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_inside_and_outside() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=4 {
            let e = ReferenceElement::new(k).unwrap();
            let mut v = vec![0.0; e.len()];
            let mut g = vec![[0.0; 2]; e.len()];
            for _ in 0..50 {
                let p = [rng.random_range(-1.5..2.5), rng.random_range(-1.5..2.5)];
                e.eval(p, &mut v, &mut g);
                let s: f64 = v.iter().sum();
                let gx: f64 = g.iter().map(|g| g[0]).sum();
                let gy: f64 = g.iter().map(|g| g[1]).sum();
                assert!((s - 1.0).abs() < 1e-12, "k={k} p={p:?} sum={s}");
                assert!(gx.abs() < 1e-10 && gy.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let step = 1e-7;
        for k in 1..=4 {
            let e = ReferenceElement::new(k).unwrap();
            let mut v = vec![0.0; e.len()];
            let mut g = vec![[0.0; 2]; e.len()];
            for _ in 0..10 {
                let p = [rng.random_range(-0.5..1.5), rng.random_range(-0.5..1.5)];
                e.eval(p, &mut v, &mut g);
                let (vxp, vxm) = (e.values([p[0] + step, p[1]]), e.values([p[0] - step, p[1]]));
                let (vyp, vym) = (e.values([p[0], p[1] + step]), e.values([p[0], p[1] - step]));
                for i in 0..e.len() {
                    let fd = [(vxp[i] - vxm[i]) / (2.0 * step), (vyp[i] - vym[i]) / (2.0 * step)];
                    let scale = g[i][0].abs().max(g[i][1].abs()).max(1.0);
                    for d in 0..2 {
                        assert!((fd[d] - g[i][d]).abs() <= 1e-6 * scale, "k={k} i={i} d={d}: {} vs {}", fd[d], g[i][d]);
                    }
                }
            }
        }
    }

    #[test]
    fn edge_nodes_lie_on_their_edges() {
        let e = ReferenceElement::new(4).unwrap();
        let verts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        for (l, [a, b]) in LOCAL_EDGES.iter().enumerate() {
            for m in 1..4 {
                let p = e.nodes()[3 + 3 * l + m - 1];
                let t = m as f64 / 4.0;
                let q = [verts[*a][0] + t * (verts[*b][0] - verts[*a][0]), verts[*a][1] + t * (verts[*b][1] - verts[*a][1])];
                assert!((p[0] - q[0]).abs() < 1e-15 && (p[1] - q[1]).abs() < 1e-15);
            }
        }
    }
}
