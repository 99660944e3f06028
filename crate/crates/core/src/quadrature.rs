//! Gauss-Jacobi quadrature for `int_{-1}^{1} f(x) (1 - x)^a (1 + x)^b dx`,
//! built from the Jacobi matrix of the orthonormal recurrence.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jacobi::{self, JacobiParams};
use crate::linalg;

/// Nodes and weights of an `order`-point Gauss-Jacobi rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub exponent_a: f64,
    pub exponent_b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomials up to this degree are integrated exactly.
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn params(&self) -> JacobiParams {
        JacobiParams::new(self.exponent_a, self.exponent_b)
            .expect("rule exponents were validated at construction")
    }

    /// Whether this rule carries the weight `(1 - x)^a (1 + x)^b`.
    pub fn matches(&self, a: f64, b: f64) -> bool {
        self.exponent_a == a && self.exponent_b == b
    }
}

/// Golub-Welsch construction of an `order`-point rule.
pub fn build_quadrature(exponent_a: f64, exponent_b: f64, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "quadrature order must be at least 1",
        ));
    }
    let params = JacobiParams::new(exponent_a, exponent_b).map_err(|_| Error::NonIntegrable {
        a: exponent_a,
        b: exponent_b,
    })?;
    let rec = jacobi::recurrence_coeffs(&params, order);
    let diag = &rec.b_seq[..order];
    let off = &rec.a_seq[1..order];
    let (vals, first) = linalg::tridiagonal_eigen_first_row(diag, off)?;
    let mass = jacobi::log_norm_sq(&params, 0);
    let mass = crate::math::exp(mass);

    let mut pairs: Vec<(f64, f64)> = vals
        .into_iter()
        .zip(first)
        .map(|(x, z)| (x, mass * z * z))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        exponent_a,
        exponent_b,
        nodes,
        weights,
        exactness_degree: 2 * order - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn single_node() {
        let r = build_quadrature(0.0, 0.0, 1).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
        assert_eq!(r.exactness_degree, 1);
    }

    #[test]
    fn rejects_non_integrable() {
        assert_eq!(
            build_quadrature(-1.0, 0.0, 4),
            Err(Error::NonIntegrable { a: -1.0, b: 0.0 })
        );
        assert!(build_quadrature(0.0, 0.0, 0).is_err());
    }

    #[test]
    fn legendre_even_moment() {
        let r = build_quadrature(0.0, 0.0, 20).unwrap();
        let v = r.integrate(|x| math::powi(x, 38));
        assert!(((v - 2.0 / 39.0) / (2.0 / 39.0)).abs() < 1e-12);
    }

    #[test]
    fn beta_function_mass() {
        // 2^3 B(3/2, 5/2) = 8 Gamma(3/2) Gamma(5/2) / Gamma(4)
        let r = build_quadrature(0.5, 1.5, 40).unwrap();
        let expect =
            8.0 * math::exp(math::ln_gamma(1.5) + math::ln_gamma(2.5) - math::ln_gamma(4.0));
        let mass: f64 = r.weights.iter().sum();
        assert!(((mass - expect) / expect).abs() < 1e-13);
    }

    #[test]
    fn nodes_are_sorted_and_interior() {
        let r = build_quadrature(1.5, -0.5, 300).unwrap();
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes[0] > -1.0 && r.nodes[299] < 1.0);
        assert!(r.weights.iter().all(|&w| w > 0.0));
    }
}
