//! Dunkl-Jacobi functions on `[-pi, pi]` with weight
//! `A(t) = (1 - cos t)^alpha (1 + cos t)^beta |sin t|`.
//!
//! The functions are written as
//! `psi_k = (p_k(cos t) + i q_{k-1}(cos t) sin t) / sqrt 2` for `k >= 0`
//! and `psi_{-k} = conj(psi_k)`, where `q` are the orthonormal Jacobi
//! polynomials with parameters `(alpha + 1, beta + 1)`. In this form
//! `||psi_0|| = 1` but `||psi_k|| = sqrt 2` for `k != 0`, so the orthonormal
//! system is `c_k psi_k` with `c_0 = 1` and `c_k = 1/sqrt 2`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::jacobi::{self, JacobiParams};
use crate::linalg::Matrix;
use crate::math;
use crate::semigroup::{build_kernel, BandedGenerator, Basis, KernelTable, SymbolSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DunklSystem {
    params: JacobiParams,
    shifted: JacobiParams,
}

impl DunklSystem {
    pub fn new(params: JacobiParams) -> Result<Self> {
        Ok(Self {
            params,
            shifted: params.shifted(1.0, 1.0)?,
        })
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    /// `lambda_k = sqrt(|k| (|k| + rho))`.
    pub fn lambda(&self, k: i64) -> f64 {
        jacobi::derivative_factor(&self.params, k.unsigned_abs() as usize)
    }

    /// `a_k` of `(alpha, beta)`, zero for `k <= 0`.
    fn a(&self, k: i64) -> f64 {
        if k <= 0 {
            0.0
        } else {
            jacobi::recurrence_a(&self.params, k as usize)
        }
    }

    /// `A_k = a_k` of `(alpha + 1, beta + 1)`.
    fn a_shift(&self, k: i64) -> f64 {
        if k <= 0 {
            0.0
        } else {
            jacobi::recurrence_a(&self.shifted, k as usize)
        }
    }

    fn b(&self, k: i64) -> f64 {
        if k < 0 {
            0.0
        } else {
            jacobi::recurrence_b(&self.params, k as usize)
        }
    }

    fn b_shift(&self, k: i64) -> f64 {
        if k < 0 {
            0.0
        } else {
            jacobi::recurrence_b(&self.shifted, k as usize)
        }
    }

    /// `(c_k, c_k^*, d_k, d_k^*)` = `((a_k + A_{k-1})/2, (a_k - A_{k-1})/2,
    /// (b_k + B_{k-1})/2, (b_k - B_{k-1})/2)`.
    pub fn block_coeffs(&self, k: usize) -> BlockBandCoeffs {
        let k = k as i64;
        BlockBandCoeffs {
            c: 0.5 * (self.a(k) + self.a_shift(k - 1)),
            c_star: 0.5 * (self.a(k) - self.a_shift(k - 1)),
            d: 0.5 * (self.b(k) + self.b_shift(k - 1)),
            d_star: 0.5 * (self.b(k) - self.b_shift(k - 1)),
        }
    }

    /// Coefficients of `cos t psi_n` over `psi_j` in the six-term formula
    /// (`psi_0` and `psi_{-0}` merged).
    fn six_term(&self, n: i64) -> BTreeMap<i64, f64> {
        let k = n.abs();
        let sg = if n < 0 { -1.0 } else { 1.0 };
        let terms = [
            (k - 1, 0.5 * (self.a(k) + sg * self.a_shift(k - 1))),
            (-(k - 1), 0.5 * (self.a(k) - sg * self.a_shift(k - 1))),
            (k, 0.5 * (self.b(k) + sg * self.b_shift(k - 1))),
            (-k, 0.5 * (self.b(k) - sg * self.b_shift(k - 1))),
            (k + 1, 0.5 * (self.a(k + 1) + sg * self.a_shift(k))),
            (-(k + 1), 0.5 * (self.a(k + 1) - sg * self.a_shift(k))),
        ];
        let mut out = BTreeMap::new();
        for (j, c) in terms {
            if c != 0.0 {
                *out.entry(j).or_insert(0.0) += c;
            }
        }
        out
    }
}

/// One row block of the matrix of `M_cos`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockBandCoeffs {
    pub c: f64,
    pub c_star: f64,
    pub d: f64,
    pub d_star: f64,
}

/// Ratio of the orthonormal function to the displayed `psi_k`.
pub fn norm_factor(k: i64) -> f64 {
    if k == 0 {
        1.0
    } else {
        1.0 / math::SQRT_2
    }
}

/// `(Re, Im)` of `psi_k(t)` in the displayed form.
pub fn eval_psi(sys: &DunklSystem, k: i64, t: f64) -> (f64, f64) {
    let n = k.unsigned_abs() as usize;
    let x = math::cos(t);
    let re = jacobi::eval_jacobi(&sys.params, n, x);
    let im = if n == 0 {
        0.0
    } else {
        k.signum() as f64 * jacobi::eval_jacobi(&sys.shifted, n - 1, x) * math::sin(t)
    };
    (re / math::SQRT_2, im / math::SQRT_2)
}

/// `(Re, Im)` of the orthonormal function with index `k`.
pub fn eval_psi_orthonormal(sys: &DunklSystem, k: i64, t: f64) -> (f64, f64) {
    let (re, im) = eval_psi(sys, k, t);
    let c = norm_factor(k);
    (c * re, c * im)
}

/// `|cos t psi_k - sum_j C_{k,j} psi_j|` for the six-term formula.
pub fn six_term_residual(sys: &DunklSystem, k: i64, t: f64) -> f64 {
    let (re, im) = eval_psi(sys, k, t);
    let c = math::cos(t);
    let (mut rr, mut ri) = (c * re, c * im);
    for (j, coeff) in sys.six_term(k) {
        let (a, b) = eval_psi(sys, j, t);
        rr -= coeff * a;
        ri -= coeff * b;
    }
    math::sqrt(rr * rr + ri * ri)
}

/// Matrix of `M_cos` in the orthonormal basis, ordered `0, 1, -1, 2, -2, ...`.
pub fn build_mcos(sys: &DunklSystem, n_max: usize) -> Result<BandedGenerator> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("build_mcos needs n_max >= 2"));
    }
    let index = IndexSet::Integers(n_max);
    let l = 3usize;
    let wide = IndexSet::Integers(n_max + 2);
    let rows = (0..index.size())
        .map(|a| {
            let n = index.index_at(a);
            let coeffs = sys.six_term(n);
            (-(l as i64)..=l as i64)
                .map(|k| {
                    let b = a as i64 + k;
                    if b < 0 {
                        return 0.0;
                    }
                    let m = wide.index_at(b as usize);
                    let c = coeffs.get(&m).copied().unwrap_or(0.0);
                    c * norm_factor(n) / norm_factor(m)
                })
                .collect()
        })
        .collect();
    Ok(BandedGenerator {
        index,
        bandwidth: l,
        s_max: 1.0,
        rows,
    })
}

/// `K^D_t` from two classical kernels:
/// `c_n c_m [K^J_{a,b}(|n|, |m|) + sgn n sgn m K^J_{a+1,b+1}(|n| - 1, |m| - 1)]`.
pub fn dunkl_kernel_from_jacobi(
    jac: &KernelTable,
    jac_shifted: &KernelTable,
) -> Result<KernelTable> {
    let n_max = jac.index.n_max();
    if jac_shifted.index.n_max() + 1 < n_max || jac.t != jac_shifted.t {
        return Err(Error::Incompatible(
            "shifted table must reach n_max - 1 at the same t",
        ));
    }
    let index = IndexSet::Integers(n_max);
    let size = index.size();
    let mut entries = Matrix::zeros(size, size);
    for a in 0..size {
        let n = index.index_at(a);
        for b in 0..size {
            let m = index.index_at(b);
            let (un, um) = (n.unsigned_abs() as usize, m.unsigned_abs() as usize);
            let mut v = jac.entries[(un, um)];
            if n != 0 && m != 0 {
                v += (n.signum() * m.signum()) as f64 * jac_shifted.entries[(un - 1, um - 1)];
            }
            entries[(a, b)] = norm_factor(n) * norm_factor(m) * v;
        }
    }
    Ok(KernelTable {
        t: jac.t,
        index,
        entries,
    })
}

/// `K^D_t` over `|n|, |m| <= n_max` by the two-kernel decomposition.
pub fn dunkl_kernel(
    sys: &DunklSystem,
    t: f64,
    n_max: usize,
    order: Option<usize>,
) -> Result<KernelTable> {
    let s = SymbolSpec::identity();
    let jac = build_kernel(&Basis::ClassicalJacobi(sys.params), &s, t, n_max, order)?;
    let shifted = build_kernel(
        &Basis::ClassicalJacobi(sys.shifted),
        &s,
        t,
        n_max.saturating_sub(1),
        order,
    )?;
    dunkl_kernel_from_jacobi(&jac, &shifted)
}

/// `K^D_t` by quadrature of the complex functions at `+-acos x_j`.
pub fn dunkl_kernel_direct(
    sys: &DunklSystem,
    t: f64,
    n_max: usize,
    order: usize,
) -> Result<KernelTable> {
    let basis = Basis::Dunkl(*sys);
    basis
        .sample_direct(&SymbolSpec::identity(), n_max, order)?
        .kernel(t)
}

/// Imaginary part of `int e^{-(1 - cos)t} psi_n conj(psi_m) A` for the
/// orthonormal functions, by the same quadrature; it vanishes by symmetry.
pub fn dunkl_kernel_imaginary(
    sys: &DunklSystem,
    t: f64,
    n: i64,
    m: i64,
    order: usize,
) -> Result<f64> {
    let rule = crate::quadrature::build_quadrature(sys.params.alpha(), sys.params.beta(), order)?;
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let th = sign * math::acos(x);
            let (ar, ai) = eval_psi_orthonormal(sys, n, th);
            let (br, bi) = eval_psi_orthonormal(sys, m, th);
            // Im(psi_n conj psi_m)
            total += w * math::exp(-(1.0 - x) * t) * (ai * br - ar * bi);
        }
    }
    Ok(total)
}

/// Squared norm of the displayed `psi_k` under `A dt`, by quadrature.
pub fn display_norm_sq(sys: &DunklSystem, k: i64, order: usize) -> Result<f64> {
    let rule = crate::quadrature::build_quadrature(sys.params.alpha(), sys.params.beta(), order)?;
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (r, i) = eval_psi(sys, k, sign * math::acos(x));
            total += w * (r * r + i * i);
        }
    }
    Ok(total)
}

struct Pieces {
    // P = p_k(cos t), G = q_{k-1}(cos t) sin t and derivatives in t
    p: [f64; 3],
    g: [f64; 3],
    log_a: f64,
    dlog_a: f64,
}

fn pieces(sys: &DunklSystem, k: i64, t: f64) -> Result<Pieces> {
    let (s, c) = (math::sin(t), math::cos(t));
    if math::abs(s) < 1e-12 || math::abs(t) >= math::PI {
        return Err(Error::SingularPoint { t });
    }
    let n = k.unsigned_abs() as usize;
    let d = |params: &JacobiParams, m: usize, j: usize| {
        jacobi::eval_jacobi_derivative_k(params, m, j, c)
    };
    let p = [
        d(&sys.params, n, 0),
        -s * d(&sys.params, n, 1),
        -c * d(&sys.params, n, 1) + s * s * d(&sys.params, n, 2),
    ];
    let g = if n == 0 {
        [0.0; 3]
    } else {
        let q = [
            d(&sys.shifted, n - 1, 0),
            d(&sys.shifted, n - 1, 1),
            d(&sys.shifted, n - 1, 2),
        ];
        [
            q[0] * s,
            -s * s * q[1] + c * q[0],
            -3.0 * s * c * q[1] + s * s * s * q[2] - s * q[0],
        ]
    };
    let (a, b) = (sys.params.alpha(), sys.params.beta());
    let (sh, ch) = (math::sin(0.5 * t), math::cos(0.5 * t));
    // sin/(1 - cos) = cot(t/2), sin/(1 + cos) = tan(t/2)
    let log_a = a * ch / sh - b * sh / ch + c / s;
    let dlog_a = -a / (2.0 * sh * sh) - b / (2.0 * ch * ch) - 1.0 / (s * s);
    Ok(Pieces {
        p,
        g,
        log_a,
        dlog_a,
    })
}

/// `|Lambda[psi_k] - i sgn(k) lambda_k psi_k|` with
/// `Lambda f = f' + (A'/A) f_o`.
pub fn lambda_eigen_residual(sys: &DunklSystem, k: i64, t: f64) -> Result<f64> {
    let pc = pieces(sys, k, t)?;
    let sg = k.signum() as f64;
    let lam = sys.lambda(k);
    // psi = (P + i sg G) / sqrt 2, odd part i sg G / sqrt 2
    let re = pc.p[1] + lam * sg * sg * pc.g[0];
    let im = sg * (pc.g[1] + pc.log_a * pc.g[0]) - sg * lam * pc.p[0];
    Ok(math::sqrt(re * re + im * im) / math::SQRT_2)
}

/// `|L psi_k - Lambda^2 psi_k + (A'/A)' (psi_k)_o|` with
/// `L f = f'' + (A'/A) f'` and `Lambda^2 psi_k = -lambda_k^2 psi_k`.
pub fn dj_residual(sys: &DunklSystem, k: i64, t: f64) -> Result<f64> {
    let pc = pieces(sys, k, t)?;
    let l2 = sys.lambda(k) * sys.lambda(k);
    let re = pc.p[2] + pc.log_a * pc.p[1] + l2 * pc.p[0];
    let im = pc.g[2] + pc.log_a * pc.g[1] + l2 * pc.g[0] + pc.dlog_a * pc.g[0];
    Ok(math::sqrt(re * re + im * im) / math::SQRT_2)
}

/// Storage positions of the table entries with `|n|, |m| <= reach`.
pub fn positions_within(index: IndexSet, reach: usize) -> Vec<usize> {
    (0..index.size())
        .filter(|&p| index.index_at(p).unsigned_abs() as usize <= reach)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre() -> DunklSystem {
        DunklSystem::new(JacobiParams::new(0.0, 0.0).unwrap()).unwrap()
    }

    #[test]
    fn psi_zero_is_constant() {
        let sys = legendre();
        let (r0, i0) = eval_psi(&sys, 0, 0.3);
        let (r1, i1) = eval_psi(&sys, 0, -2.0);
        assert_eq!(i0, 0.0);
        assert_eq!(i1, 0.0);
        assert!((r0 - r1).abs() < 1e-15);
        assert!((r0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn conjugate_pair() {
        let sys = DunklSystem::new(JacobiParams::new(0.5, -0.25).unwrap()).unwrap();
        let (a, b) = eval_psi(&sys, 4, 1.1);
        let (c, d) = eval_psi(&sys, -4, 1.1);
        assert_eq!(a, c);
        assert_eq!(b, -d);
    }

    #[test]
    fn symmetric_parameters_have_no_diagonal() {
        let sys = DunklSystem::new(JacobiParams::new(0.7, 0.7).unwrap()).unwrap();
        for k in 0..20 {
            let c = sys.block_coeffs(k);
            assert!(c.d.abs() < 1e-16 && c.d_star.abs() < 1e-16);
        }
    }

    #[test]
    fn display_norms() {
        let sys = legendre();
        assert!((display_norm_sq(&sys, 0, 40).unwrap() - 1.0).abs() < 1e-13);
        assert!((display_norm_sq(&sys, 3, 40).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn singular_points_are_rejected() {
        let sys = legendre();
        assert!(matches!(
            lambda_eigen_residual(&sys, 2, 0.0),
            Err(Error::SingularPoint { .. })
        ));
        assert!(lambda_eigen_residual(&sys, 0, 0.4).unwrap() < 1e-15);
    }
}
