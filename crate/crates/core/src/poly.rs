//! Bivariate polynomials in monomial form, used for manufactured solutions
//! and as an independent oracle for the Lagrange basis.

use crate::geometry::Point;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};
use rand::Rng;

/// `Σ c_ij x^i y^j` over `i + j ≤ degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    degree: usize,
    /// `coeffs[i * (degree + 1) + j]`; entries with `i + j > degree` stay zero.
    coeffs: Vec<f64>,
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![0.0; (degree + 1) * (degree + 1)] }
    }

    pub fn constant(c: f64) -> Self {
        Self { degree: 0, coeffs: vec![c] }
    }

    pub fn monomial(i: usize, j: usize, c: f64) -> Self {
        let mut p = Self::zero(i + j);
        p.set(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1.0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1.0)
    }

    /// Polynomial of total degree `degree` with coefficients drawn
    /// uniformly from `[−1, 1]`.
    pub fn random(degree: usize, rng: &mut impl Rng) -> Self {
        let mut p = Self::zero(degree);
        for i in 0..=degree {
            for j in 0..=degree - i {
                p.set(i, j, rng.random_range(-1.0..=1.0));
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coeffs[i * (self.degree + 1) + j]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= self.degree);
        self.coeffs[i * (self.degree + 1) + j] = c;
    }

    /// Horner in `y` inside Horner in `x`.
    pub fn eval(&self, p: Point) -> f64 {
        let d = self.degree;
        let mut acc = 0.0;
        for i in (0..=d).rev() {
            let mut inner = 0.0;
            for j in (0..=d - i).rev() {
                inner = inner * p[1] + self.coeff(i, j);
            }
            acc = acc * p[0] + inner;
        }
        acc
    }

    pub fn dx(&self) -> Self {
        let d = self.degree.max(1) - 1;
        let mut out = Self::zero(d);
        for i in 1..=self.degree {
            for j in 0..=self.degree - i {
                out.set(i - 1, j, i as f64 * self.coeff(i, j));
            }
        }
        out
    }

    pub fn dy(&self) -> Self {
        let d = self.degree.max(1) - 1;
        let mut out = Self::zero(d);
        for i in 0..self.degree {
            for j in 1..=self.degree - i {
                out.set(i, j - 1, j as f64 * self.coeff(i, j));
            }
        }
        out
    }

    pub fn gradient(&self, p: Point) -> Point {
        [self.dx().eval(p), self.dy().eval(p)]
    }

    pub fn laplacian(&self) -> Self {
        self.dx().dx() + self.dy().dy()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    /// Largest absolute coefficient.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.degree.max(rhs.degree));
        for i in 0..=out.degree {
            for j in 0..=out.degree - i {
                out.set(i, j, self.coeff(i, j) + rhs.coeff(i, j));
            }
        }
        out
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1.0)
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        self + (-rhs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.degree + rhs.degree);
        for i in 0..=self.degree {
            for j in 0..=self.degree - i {
                let a = self.coeff(i, j);
                if a == 0.0 {
                    continue;
                }
                for k in 0..=rhs.degree {
                    for l in 0..=rhs.degree - k {
                        let c = out.coeff(i + k, j + l) + a * rhs.coeff(k, l);
                        out.set(i + k, j + l, c);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivatives() {
        // 3 + 2x − y + x²y
        let mut p = Poly2::zero(3);
        p.set(0, 0, 3.0);
        p.set(1, 0, 2.0);
        p.set(0, 1, -1.0);
        p.set(2, 1, 1.0);
        let at = [1.5, -2.0];
        assert_eq!(p.eval(at), 3.0 + 3.0 + 2.0 - 4.5);
        assert_eq!(p.gradient(at), [2.0 + 2.0 * 1.5 * -2.0, -1.0 + 1.5 * 1.5]);
        assert_eq!(p.laplacian().eval(at), 2.0 * -2.0);
    }

    #[test]
    fn product_matches_pointwise() {
        let a = Poly2::x() + Poly2::monomial(0, 2, 0.5);
        let b = Poly2::constant(1.0) - Poly2::y();
        let c = &a * &b;
        for p in [[0.3, 0.7], [-1.0, 2.0], [4.0, -0.5]] {
            assert!((c.eval(p) - a.eval(p) * b.eval(p)).abs() < 1e-14);
        }
        assert_eq!(c.degree(), 3);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let c = Poly2::constant(5.0);
        assert_eq!(c.dx().eval([1.0, 1.0]), 0.0);
        assert_eq!(c.laplacian().eval([2.0, 3.0]), 0.0);
    }
}
