//! Dense polynomials with `f64` coefficients and quotients of them.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::math;

/// Polynomial stored by ascending powers: `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative with the given constant term.
    pub fn integral(&self, constant: f64) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(constant);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::new(out)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |m, &c| f64::max(m, math::abs(c)))
    }

    /// Euclidean quotient and remainder.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree();
        let lead = divisor.coeffs[d];
        assert!(lead != 0.0, "division by the zero polynomial");
        if self.degree() < d {
            return (Poly::constant(0.0), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - d + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d] / lead;
            quot[k] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
        rem.truncate(d.max(1));
        (Poly::new(quot), Poly::new(rem))
    }

    /// Coefficients `c_j` with `p(cos th) = sum_j c_j cos(j th)`.
    pub fn chebyshev_coeffs(&self) -> Vec<f64> {
        // Horner in the Chebyshev basis, using x T_0 = T_1 and
        // x T_k = (T_{k+1} + T_{k-1}) / 2.
        let mut c: Vec<f64> = vec![0.0];
        for &a in self.coeffs.iter().rev() {
            let mut next = vec![0.0; c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                if k == 0 {
                    next[1] += ck;
                } else {
                    next[k + 1] += 0.5 * ck;
                    next[k - 1] += 0.5 * ck;
                }
            }
            next[0] += a;
            c = next;
        }
        while c.len() > 1 && c[c.len() - 1] == 0.0 {
            c.pop();
        }
        c
    }

    /// Maximum over `[-1, 1]` and a point where it is attained.
    pub fn max_on_interval(&self) -> (f64, f64) {
        let grid = 4096;
        let mut best = (self.eval(-1.0), -1.0);
        for i in 0..=grid {
            let x = -1.0 + 2.0 * i as f64 / grid as f64;
            let v = self.eval(x);
            if v > best.0 {
                best = (v, x);
            }
        }
        // Interior maximum: refine on the derivative by bisection.
        let (_, x0) = best;
        if x0 > -1.0 && x0 < 1.0 {
            let d = self.derivative();
            let h = 2.0 / grid as f64;
            let (mut lo, mut hi) = (f64::max(x0 - h, -1.0), f64::min(x0 + h, 1.0));
            if d.eval(lo) > 0.0 && d.eval(hi) < 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if d.eval(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let x = 0.5 * (lo + hi);
                let v = self.eval(x);
                if v > best.0 {
                    best = (v, x);
                }
            }
        }
        best
    }
}

impl From<&[f64]> for Poly {
    fn from(c: &[f64]) -> Self {
        Poly::new(c.to_vec())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + rhs.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Quotient `num / den` of two polynomials, kept unreduced.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::new(p, Poly::constant(1.0))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den)
    }

    pub fn add(&self, rhs: &Rational) -> Self {
        if self.den == rhs.den {
            return Self::new(&self.num + &rhs.num, self.den.clone());
        }
        Self::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &Rational) -> Self {
        self.add(&rhs.scale(-1.0))
    }

    pub fn mul(&self, rhs: &Rational) -> Self {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.num.scale(factor), self.den.clone())
    }

    /// Relative size of `self - rhs` after cross-multiplying; zero for an
    /// exact identity of rational functions.
    pub fn identity_defect(&self, rhs: &Rational) -> f64 {
        let lhs = &self.num * &rhs.den;
        let rhs = &rhs.num * &self.den;
        let diff = &lhs - &rhs;
        let scale = lhs
            .max_abs_coeff()
            .max(rhs.max_abs_coeff())
            .max(f64::MIN_POSITIVE);
        diff.max_abs_coeff() / scale
    }
}
