use super::quadrature::QuadratureRule;
use super::space::FeSpace;
use super::ScalarField;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::geometry::Point;
use crate::sparse::{CsrMatrix, Triplets};
use alloc::vec;
use alloc::vec::Vec;

/// Which standard bilinear form to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `D_h(u, v) = ∫ p̃ ∇u·∇v`.
    D,
    /// `N_h(u, v) = ∫ p̃ ∇u·∇v + q̃ u v`.
    N,
}

/// Reference basis values and gradients tabulated at a triangle rule.
pub(crate) struct Tables {
    pub rule: QuadratureRule,
    pub values: Vec<Vec<f64>>,
    pub grads: Vec<Vec<Point>>,
}

impl Tables {
    pub fn new(space: &FeSpace<'_>, degree: usize) -> Self {
        let rule = QuadratureRule::triangle(degree);
        let n = space.element().len();
        let mut values = Vec::with_capacity(rule.len());
        let mut grads = Vec::with_capacity(rule.len());
        for &p in &rule.points {
            let mut v = vec![0.0; n];
            let mut g = vec![[0.0; 2]; n];
            space.element().eval(p, &mut v, &mut g);
            values.push(v);
            grads.push(g);
        }
        Self { rule, values, grads }
    }
}

/// Triangle quadrature degree used for every volume integral.
pub fn volume_quadrature_degree(k: usize) -> usize {
    2 * k + 2
}

pub fn assemble_operator(
    space: &FeSpace<'_>,
    p: &ScalarField,
    q: &ScalarField,
    form: Form,
    exec: &impl Executor,
) -> Result<CsrMatrix> {
    let n = space.ndofs();
    let tables = Tables::new(space, volume_quadrature_degree(space.degree()));
    let nloc = space.element().len();
    let ntri = space.mesh().triangles().len();

    let chunks = exec.map_ranges(ntri, |range| -> Result<Triplets> {
        let mut trip = Triplets::with_capacity(n, n, range.len() * nloc * nloc);
        let mut local = vec![0.0; nloc * nloc];
        let mut grads = vec![[0.0; 2]; nloc];
        for t in range {
            let map = space.map(t);
            local.iter_mut().for_each(|x| *x = 0.0);
            for (qi, (&xq, &w)) in tables.rule.points.iter().zip(&tables.rule.weights).enumerate() {
                let x = map.to_physical(xq);
                let wd = w * map.det;
                let pv = p(x);
                let qv = if form == Form::N { q(x) } else { 0.0 };
                if !pv.is_finite() || !qv.is_finite() {
                    return Err(Error::NonFiniteCoefficient { element: t });
                }
                for (g, &gr) in grads.iter_mut().zip(&tables.grads[qi]) {
                    *g = map.push_gradient(gr);
                }
                let phi = &tables.values[qi];
                for i in 0..nloc {
                    for j in 0..nloc {
                        let mut a = pv * (grads[j][0] * grads[i][0] + grads[j][1] * grads[i][1]);
                        if form == Form::N {
                            a += qv * phi[j] * phi[i];
                        }
                        local[i * nloc + j] += wd * a;
                    }
                }
            }
            let dofs = space.dofs(t);
            for i in 0..nloc {
                for j in 0..nloc {
                    trip.push(dofs[i], dofs[j], local[i * nloc + j]);
                }
            }
        }
        Ok(trip)
    });

    let mut all = Triplets::with_capacity(n, n, ntri * nloc * nloc);
    for c in chunks {
        all.extend(c?);
    }
    Ok(all.to_csr())
}

/// `F_i = ∫_{Ω_h} f̃ φ_i`.
pub fn assemble_load(space: &FeSpace<'_>, f: &ScalarField, exec: &impl Executor) -> Result<Vec<f64>> {
    let tables = Tables::new(space, volume_quadrature_degree(space.degree()));
    let nloc = space.element().len();
    let ntri = space.mesh().triangles().len();

    let chunks = exec.map_ranges(ntri, |range| -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::with_capacity(range.len() * nloc);
        let mut local = vec![0.0; nloc];
        for t in range {
            let map = space.map(t);
            local.iter_mut().for_each(|x| *x = 0.0);
            for (qi, (&xq, &w)) in tables.rule.points.iter().zip(&tables.rule.weights).enumerate() {
                let fv = f(map.to_physical(xq));
                if !fv.is_finite() {
                    return Err(Error::NonFiniteCoefficient { element: t });
                }
                for (l, &phi) in tables.values[qi].iter().enumerate() {
                    local[l] += w * map.det * fv * phi;
                }
            }
            out.extend(space.dofs(t).iter().copied().zip(local.iter().copied()));
        }
        Ok(out)
    });

    let mut load = vec![0.0; space.ndofs()];
    for c in chunks {
        for (d, v) in c? {
            load[d] += v;
        }
    }
    Ok(load)
}
