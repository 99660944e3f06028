//! Orthonormal Jacobi polynomials `p_n^{(alpha, beta)}` on `[-1, 1]` with
//! respect to `w(x) = (1 - x)^alpha (1 + x)^beta`.
//!
//! Values come from the forward three-term recurrence started at
//! `p_0 = 1 / rho_0`; derivatives use `p_n' = sqrt(n (n + rho)) p_{n-1}` of
//! the family shifted by one in both parameters.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// A classical Jacobi family. `rho` is `alpha + beta + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
    rho: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self {
            alpha,
            beta,
            rho: alpha + beta + 1.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The family `(alpha + da, beta + db)`.
    pub fn shifted(&self, da: f64, db: f64) -> Result<Self> {
        Self::new(self.alpha + da, self.beta + db)
    }

    /// `w^{(alpha, beta)}(x)`.
    pub fn weight(&self, x: f64) -> f64 {
        math::pow(1.0 - x, self.alpha) * math::pow(1.0 + x, self.beta)
    }
}

/// `ln rho_k^2` where `rho_k = ||P_k||` is the norm of the standard Jacobi
/// polynomial.
pub fn log_norm_sq(params: &JacobiParams, k: usize) -> f64 {
    let (a, b, r) = (params.alpha, params.beta, params.rho);
    let k = k as f64;
    if k == 0.0 {
        // rho * Gamma(rho) = Gamma(rho + 1) keeps rho = 0 finite.
        return r * math::ln(2.0) + math::ln_gamma(a + 1.0) + math::ln_gamma(b + 1.0)
            - math::ln_gamma(r + 1.0);
    }
    r * math::ln(2.0) + math::ln_gamma(k + a + 1.0) + math::ln_gamma(k + b + 1.0)
        - math::ln(2.0 * k + r)
        - math::ln_gamma(k + 1.0)
        - math::ln_gamma(k + r)
}

/// The normalisation constant `rho_k` with `p_k = P_k / rho_k`.
pub fn norm_constant(params: &JacobiParams, k: usize) -> f64 {
    math::exp(0.5 * log_norm_sq(params, k))
}

/// Off-diagonal recurrence coefficient `a_n`; `a_0 = 0`.
pub fn recurrence_a(params: &JacobiParams, n: usize) -> f64 {
    let (a, b, r) = (params.alpha, params.beta, params.rho);
    match n {
        0 => 0.0,
        1 => 2.0 / (r + 1.0) * math::sqrt((1.0 + a) * (1.0 + b) / (r + 2.0)),
        _ => {
            let n = n as f64;
            2.0 / (2.0 * n + r - 1.0)
                * math::sqrt(
                    n * (n + a) * (n + b) * (n + r - 1.0) / ((2.0 * n + r) * (2.0 * n + r - 2.0)),
                )
        }
    }
}

/// Diagonal recurrence coefficient `b_n`.
pub fn recurrence_b(params: &JacobiParams, n: usize) -> f64 {
    let (a, b, r) = (params.alpha, params.beta, params.rho);
    if n == 0 {
        // (b^2 - a^2) / ((r + 1)(r - 1)) with the removable a + b = r - 1
        return (b - a) / (r + 1.0);
    }
    let n = n as f64;
    (b * b - a * a) / ((2.0 * n + r + 1.0) * (2.0 * n + r - 1.0))
}

/// Recurrence coefficients `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    /// `a_seq[n] = a_n` for `0 <= n <= n_max + 1`, with `a_0 = 0`.
    pub a_seq: Vec<f64>,
    /// `b_seq[n] = b_n` for `0 <= n <= n_max`.
    pub b_seq: Vec<f64>,
}

pub fn recurrence_coeffs(params: &JacobiParams, n_max: usize) -> RecurrenceCoeffs {
    RecurrenceCoeffs {
        a_seq: (0..=n_max + 1).map(|n| recurrence_a(params, n)).collect(),
        b_seq: (0..=n_max).map(|n| recurrence_b(params, n)).collect(),
    }
}

/// Fills `out[n] = p_n(x)` for `n < out.len()`.
pub fn eval_jacobi_all(params: &JacobiParams, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0 / norm_constant(params, 0);
    if out.len() == 1 {
        return;
    }
    let mut a_n = recurrence_a(params, 1);
    out[1] = (x - recurrence_b(params, 0)) * out[0] / a_n;
    for n in 1..out.len() - 1 {
        let a_next = recurrence_a(params, n + 1);
        out[n + 1] = ((x - recurrence_b(params, n)) * out[n] - a_n * out[n - 1]) / a_next;
        a_n = a_next;
    }
}

/// Orthonormal `p_n(x)`.
pub fn eval_jacobi(params: &JacobiParams, n: usize, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    eval_jacobi_all(params, x, &mut buf);
    buf[n]
}

/// `sqrt(n (n + rho))`, the derivative factor.
pub fn derivative_factor(params: &JacobiParams, n: usize) -> f64 {
    let n = n as f64;
    math::sqrt(n * (n + params.rho))
}

/// `d^order/dx^order p_n(x)` from repeated use of the shifted-family identity.
pub fn eval_jacobi_derivative_k(params: &JacobiParams, n: usize, order: usize, x: f64) -> f64 {
    if order > n {
        return 0.0;
    }
    let mut factor = 1.0;
    let mut p = *params;
    for j in 0..order {
        factor *= derivative_factor(&p, n - j);
        p = JacobiParams {
            alpha: p.alpha + 1.0,
            beta: p.beta + 1.0,
            rho: p.rho + 2.0,
        };
    }
    factor * eval_jacobi(&p, n - order, x)
}

/// `p_n'(x)`; zero for `n = 0`.
pub fn eval_jacobi_derivative(params: &JacobiParams, n: usize, x: f64) -> f64 {
    eval_jacobi_derivative_k(params, n, 1, x)
}

/// `(p_n w)'(x)` through the lowered family:
/// `-sqrt((n + 1)(n + rho - 1)) p_{n+1}^{a-1,b-1} w^{a-1,b-1}`. Needs `a, b > 0`.
pub fn eval_weighted_derivative(params: &JacobiParams, n: usize, x: f64) -> Result<f64> {
    if !(params.alpha > 0.0 && params.beta > 0.0) {
        return Err(Error::InvalidArgument(
            "the lowered family needs alpha, beta > 0",
        ));
    }
    let low = params.shifted(-1.0, -1.0)?;
    let k = (n + 1) as f64;
    let c = math::sqrt(k * (n as f64 + params.rho - 1.0));
    Ok(-c * eval_jacobi(&low, n + 1, x) * low.weight(x))
}
