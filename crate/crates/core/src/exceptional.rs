//! Exceptional Jacobi polynomials from one Darboux step.
//!
//! The classical operator `T y = p y'' + q y'` with `p = 1 - x^2`,
//! `q = beta - alpha - (alpha + beta + 2) x` factors as `T = B A + lt` with
//! `A y = b (y' - w y)`. Given polynomials `b` and `bw = b w`, the images
//! `P_n = A p_n = b p_n' - bw p_n` are orthogonal for
//! `W = p w^{alpha,beta} / b^2`, with norms `sigma_n = sqrt(n (n + rho) + lt)`.
//!
//! We require `b = (1 - x) bt` with `bt > 0` on `[-1, 1]`, so
//! `W = (1 - x)^{alpha-1} (1 + x)^{beta+1} / bt^2`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jacobi::{self, JacobiParams};
use crate::math;
use crate::poly::{Poly, Rational};
use crate::semigroup::{BandedGenerator, Basis, KernelTable, SymbolSpec};

/// The data that determines one exceptional family.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalSystem {
    base: JacobiParams,
    b: Poly,
    bw: Poly,
    b_tilde: Poly,
    q_sym: Poly,
    lambda_tilde: f64,
    riccati_defect: f64,
}

fn p_poly() -> Poly {
    Poly::new(vec![1.0, 0.0, -1.0])
}

fn q_op(base: &JacobiParams) -> Poly {
    let (a, b) = (base.alpha(), base.beta());
    Poly::new(vec![b - a, -(a + b + 2.0)])
}

/// Validates `b`, solves the Riccati identity for `lt` and builds the system.
pub fn make_system(base: JacobiParams, b: Poly, bw: Poly) -> Result<ExceptionalSystem> {
    if base.alpha() <= 0.0 {
        return Err(Error::AlphaTooSmall {
            alpha: base.alpha(),
        });
    }
    let b1 = b.eval(1.0);
    let db1 = b.derivative().eval(1.0);
    let scale = b.max_abs_coeff();
    if math::abs(b1) > 1e-12 * scale || math::abs(db1) <= 1e-12 * scale {
        return Err(Error::EndpointCondition { b1, db1 });
    }
    let (b_tilde, rem) = b.div_rem(&Poly::new(vec![1.0, -1.0]));
    debug_assert!(rem.max_abs_coeff() <= 1e-10 * scale);
    // b > 0 on (-1, 1) iff bt > 0 on [-1, 1) away from the endpoint 1,
    // and bt(1) = -b'(1) must be positive too
    let (neg_max, at) = b_tilde.scale(-1.0).max_on_interval();
    if neg_max >= 0.0 {
        return Err(Error::BNotPositive { x: at });
    }

    // p (w' + w^2) + q w = [p((bw)' b - bw b') + p bw^2 + q bw b] / b^2
    let p = p_poly();
    let q = q_op(&base);
    let num = &(&(&p * &(&(&bw.derivative() * &b) - &(&bw * &b.derivative())))
        + &(&p * &(&bw * &bw)))
        + &(&q * &(&bw * &b));
    let b2 = &b * &b;
    let (lt, defect) = constant_ratio(&num, &b2);
    if defect > 1e-9 {
        return Err(Error::NonConstantRiccati { residual: defect });
    }

    let q_sym = b.integral(0.0);
    Ok(ExceptionalSystem {
        base,
        b,
        bw,
        b_tilde,
        q_sym,
        lambda_tilde: lt,
        riccati_defect: defect,
    })
}

/// Least-squares `c` with `num = c den` on coefficients, and the relative
/// defect of the fit.
fn constant_ratio(num: &Poly, den: &Poly) -> (f64, f64) {
    let n = num.coeffs().len().max(den.coeffs().len());
    let get = |p: &Poly, k: usize| p.coeffs().get(k).copied().unwrap_or(0.0);
    let (mut nd, mut dd) = (0.0, 0.0);
    for k in 0..n {
        nd += get(num, k) * get(den, k);
        dd += get(den, k) * get(den, k);
    }
    let c = nd / dd;
    let scale = num.max_abs_coeff().max(math::abs(c) * den.max_abs_coeff());
    let defect = (0..n)
        .map(|k| math::abs(get(num, k) - c * get(den, k)))
        .fold(0.0, f64::max)
        / scale.max(f64::MIN_POSITIVE);
    (c, defect)
}

/// Coefficients of the partner operator `T^ y = p y'' + q^ y' + r^ y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerOperator {
    pub q_hat: Rational,
    pub r_hat: Rational,
}

impl ExceptionalSystem {
    /// Base `(3/2, 1/2)`, `b = (1 - x) P_1^{(-3/2, 1/2)} = x^2/2 - 3x/2 + 1`
    /// and `bw = 1 - x/4`, which gives `lt = 5/4`.
    pub fn worked_example() -> Self {
        make_system(
            JacobiParams::new(1.5, 0.5).expect("valid"),
            Poly::new(vec![1.0, -1.5, 0.5]),
            Poly::new(vec![1.0, -0.25]),
        )
        .expect("the worked example is a valid system")
    }

    /// The one-step system seeded by `(1 - x)^{-alpha} P_1^{(-alpha, beta)}`:
    /// with `c` the zero of the seed factor, `b = (1 - x)(c - x) / c` and
    /// `bw = (alpha (c - x) - (1 - x)) / c`. Reduces to `worked_example` at
    /// `(3/2, 1/2)`. Needs `c > 1`.
    pub fn first_seed(base: JacobiParams) -> Result<Self> {
        let (a, b) = (base.alpha(), base.beta());
        let denom = b - a + 2.0;
        if denom == 0.0 {
            return Err(Error::InvalidArgument("seed factor has no zero"));
        }
        let c = 1.0 - 2.0 * (1.0 - a) / denom;
        if !(c > 1.0) {
            return Err(Error::InvalidArgument(
                "seed zero must lie beyond x = 1",
            ));
        }
        make_system(
            base,
            Poly::new(vec![1.0, -(1.0 + c) / c, 1.0 / c]),
            Poly::new(vec![(a * c - 1.0) / c, (1.0 - a) / c]),
        )
    }

    pub fn base(&self) -> JacobiParams {
        self.base
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn bw(&self) -> &Poly {
        &self.bw
    }

    pub fn b_tilde(&self) -> &Poly {
        &self.b_tilde
    }

    /// `Q` with `Q' = b` and `Q(0) = 0`.
    pub fn q_poly(&self) -> &Poly {
        &self.q_sym
    }

    pub fn lambda_tilde(&self) -> f64 {
        self.lambda_tilde
    }

    /// Relative coefficient defect of the Riccati identity.
    pub fn riccati_defect(&self) -> f64 {
        self.riccati_defect
    }

    /// `sigma_n = sqrt(n (n + rho) + lt)`.
    pub fn sigma(&self, n: usize) -> f64 {
        let k = n as f64;
        math::sqrt(k * (k + self.base.rho()) + self.lambda_tilde)
    }

    /// Degree of `P_n`.
    pub fn degree(&self, n: usize) -> usize {
        (n + self.b.degree() - 1).max(n + self.bw.degree())
    }

    /// Jacobi exponents of `W`.
    pub fn weight_exponents(&self) -> (f64, f64) {
        (self.base.alpha() - 1.0, self.base.beta() + 1.0)
    }

    /// `W(x) = (1 - x)^{alpha-1} (1 + x)^{beta+1} / bt(x)^2`.
    pub fn weight(&self, x: f64) -> f64 {
        let (a, b) = self.weight_exponents();
        let bt = self.b_tilde.eval(x);
        math::pow(1.0 - x, a) * math::pow(1.0 + x, b) / (bt * bt)
    }

    /// `W = p w^{alpha,beta} / b^2` evaluated as written.
    pub fn weight_from_definition(&self, x: f64) -> f64 {
        let bx = self.b.eval(x);
        (1.0 - x * x) * self.base.weight(x) / (bx * bx)
    }

    /// `P_n(x) = b p_n' - bw p_n`, before normalisation.
    pub fn eval_unnormalised(&self, n: usize, x: f64) -> f64 {
        self.b.eval(x) * jacobi::eval_jacobi_derivative(&self.base, n, x)
            - self.bw.eval(x) * jacobi::eval_jacobi(&self.base, n, x)
    }

    /// `P_n(x) / sigma_n`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.eval_unnormalised(n, x) / self.sigma(n)
    }

    /// Fills `out[n]` with the normalised values for `n < out.len()`.
    pub fn eval_all(&self, x: f64, out: &mut [f64]) {
        let count = out.len();
        if count == 0 {
            return;
        }
        let mut p = vec![0.0; count];
        jacobi::eval_jacobi_all(&self.base, x, &mut p);
        let shifted = self
            .base
            .shifted(1.0, 1.0)
            .expect("shift keeps parameters valid");
        let mut dq = vec![0.0; count.saturating_sub(1)];
        jacobi::eval_jacobi_all(&shifted, x, &mut dq);
        let (bx, bwx) = (self.b.eval(x), self.bw.eval(x));
        for n in 0..count {
            let deriv = if n == 0 {
                0.0
            } else {
                jacobi::derivative_factor(&self.base, n) * dq[n - 1]
            };
            out[n] = (bx * deriv - bwx * p[n]) / self.sigma(n);
        }
    }

    /// `(P~_n, P~_n', P~_n'')` at `x`.
    pub fn eval_with_derivatives(&self, n: usize, x: f64) -> [f64; 3] {
        let d = |k| jacobi::eval_jacobi_derivative_k(&self.base, n, k, x);
        let (p0, p1, p2, p3) = (d(0), d(1), d(2), d(3));
        let b = [
            self.b.eval(x),
            self.b.derivative().eval(x),
            self.b.derivative().derivative().eval(x),
        ];
        let bw = [
            self.bw.eval(x),
            self.bw.derivative().eval(x),
            self.bw.derivative().derivative().eval(x),
        ];
        let f0 = b[0] * p1 - bw[0] * p0;
        let f1 = b[1] * p1 + b[0] * p2 - bw[1] * p0 - bw[0] * p1;
        let f2 =
            b[2] * p1 + 2.0 * b[1] * p2 + b[0] * p3 - bw[2] * p0 - 2.0 * bw[1] * p1 - bw[0] * p2;
        let s = self.sigma(n);
        [f0 / s, f1 / s, f2 / s]
    }

    /// `max |p (w' + w^2) + q w - lt|` at the given points, with `w = bw / b`.
    pub fn riccati_residual(&self, points: &[f64]) -> f64 {
        let w = Rational::new(self.bw.clone(), self.b.clone());
        let dw = w.derivative();
        let q = q_op(&self.base);
        points
            .iter()
            .map(|&x| {
                let wx = w.eval(x);
                math::abs(
                    (1.0 - x * x) * (dw.eval(x) + wx * wx) + q.eval(x) * wx - self.lambda_tilde,
                )
            })
            .fold(0.0, f64::max)
    }

    /// `q^ = q + p' - 2 (b'/b) p` and `r^ = lt + (bw h - h' b + 2 h b') / b^2`
    /// with `h = p b' - q b - p bw`, from `T^ = A B + lt`.
    pub fn partner_operator_coeffs(&self) -> PartnerOperator {
        let p = p_poly();
        let q = q_op(&self.base);
        let db = self.b.derivative();
        let q_hat_num = &(&(&q + &p.derivative()) * &self.b) - &(&db * &p).scale(2.0);
        let h = &(&(&p * &db) - &(&q * &self.b)) - &(&p * &self.bw);
        let b2 = &self.b * &self.b;
        let r_num = &(&(&(&self.bw * &h) - &(&h.derivative() * &self.b)) + &(&h * &db).scale(2.0))
            + &b2.scale(self.lambda_tilde);
        PartnerOperator {
            q_hat: Rational::new(q_hat_num, self.b.clone()),
            r_hat: Rational::new(r_num, b2),
        }
    }

    /// Defects of the factorisation identities: `w^ = -w - q/p + b'/b` makes
    /// the `y` coefficient of `B A` equal to `-lt`, and `b^ b = p`.
    pub fn darboux_defects(&self) -> (f64, f64) {
        let p = p_poly();
        let q = q_op(&self.base);
        let b_hat = Rational::new(p.clone(), self.b.clone());
        let w = Rational::new(self.bw.clone(), self.b.clone());
        let w_hat = w
            .scale(-1.0)
            .sub(&Rational::new(q, p.clone()))
            .add(&Rational::new(self.b.derivative(), self.b.clone()));
        let inner = Rational::from_poly(self.bw.derivative().scale(-1.0))
            .add(&w_hat.mul(&Rational::from_poly(self.bw.clone())));
        let y_coeff = b_hat.mul(&inner);
        let target = Rational::from_poly(Poly::constant(-self.lambda_tilde));
        let product = b_hat.mul(&Rational::from_poly(self.b.clone()));
        (
            y_coeff.identity_defect(&target),
            product.identity_defect(&Rational::from_poly(p)),
        )
    }

    /// `|T^ P~_n - mu P~_n|` at `x` for a given eigenvalue `mu`.
    pub fn eigen_residual(&self, op: &PartnerOperator, n: usize, x: f64, mu: f64) -> f64 {
        let [f0, f1, f2] = self.eval_with_derivatives(n, x);
        let lhs = (1.0 - x * x) * f2 + op.q_hat.eval(x) * f1 + op.r_hat.eval(x) * f0;
        math::abs(lhs - mu * f0)
    }

    /// Least-squares eigenvalue of `T^` for `P~_n` over the points.
    pub fn fitted_eigenvalue(&self, op: &PartnerOperator, n: usize, points: &[f64]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for &x in points {
            let [f0, f1, f2] = self.eval_with_derivatives(n, x);
            let lhs = (1.0 - x * x) * f2 + op.q_hat.eval(x) * f1 + op.r_hat.eval(x) * f0;
            num += lhs * f0;
            den += f0 * f0;
        }
        num / den
    }
}

/// `P~_n(x)`.
pub fn eval_exceptional(sys: &ExceptionalSystem, n: usize, x: f64) -> f64 {
    sys.eval(n, x)
}

/// Coefficients of the partner operator.
pub fn partner_operator_coeffs(sys: &ExceptionalSystem) -> PartnerOperator {
    sys.partner_operator_coeffs()
}

/// `u_{n,k} = int Q P~_n P~_{n+k} W` for `k = -L..=L`, `L = deg Q`.
pub fn q_recurrence_coeffs(sys: &ExceptionalSystem, n: usize) -> Result<Vec<f64>> {
    let basis = Basis::Exceptional(sys.clone());
    let symbol = SymbolSpec::new(sys.q_poly().clone());
    let gen: BandedGenerator = crate::semigroup::build_generator(&basis, &symbol, n)?;
    Ok(gen.rows[n].clone())
}

/// `max |Q P~_n - sum_k u_{n,k} P~_{n+k}|` at the points.
pub fn q_reconstruction_residual(
    sys: &ExceptionalSystem,
    n: usize,
    u: &[f64],
    points: &[f64],
) -> f64 {
    let l = (u.len() / 2) as i64;
    points
        .iter()
        .map(|&x| {
            let lhs = sys.q_poly().eval(x) * sys.eval(n, x);
            let rhs: f64 = (-l..=l)
                .filter(|&k| n as i64 + k >= 0)
                .map(|k| u[(k + l) as usize] * sys.eval((n as i64 + k) as usize, x))
                .sum();
            math::abs(lhs - rhs)
        })
        .fold(0.0, f64::max)
}

/// `K_t(n, m) = int e^{-(Q(1) - Q) t} P~_n P~_m W` by the two smooth-weight
/// integrals.
pub fn exceptional_kernel(
    sys: &ExceptionalSystem,
    t: f64,
    n_max: usize,
    order: Option<usize>,
) -> Result<KernelTable> {
    let basis = Basis::Exceptional(sys.clone());
    let symbol = basis.natural_symbol();
    crate::semigroup::build_kernel(&basis, &symbol, t, n_max, order)
}

/// The same kernel by Gauss-Jacobi quadrature against `W` itself.
pub fn exceptional_kernel_direct(
    sys: &ExceptionalSystem,
    t: f64,
    n_max: usize,
    order: usize,
) -> Result<KernelTable> {
    let basis = Basis::Exceptional(sys.clone());
    let symbol = basis.natural_symbol();
    basis.sample_direct(&symbol, n_max, order)?.kernel(t)
}
