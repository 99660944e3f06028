//! Bases, quadrature-order policy, and the sampled representation from
//! which kernels, their action on sequences and generator entries are
//! assembled.
//!
//! Every kernel is written as `K = sum_p F_p R_p D_p(t) R_p^T F_p` where
//! `R_p` holds basis values times square-root quadrature weights at the
//! nodes of part `p`, `F_p` maps storage positions to rows of `R_p` (with a
//! scalar factor), and `D_p(t)` is diagonal. Complex bases contribute their
//! real and imaginary parts as two parts.

use alloc::vec;
use alloc::vec::Vec;

use crate::dunkl::{self, DunklSystem};
use crate::error::{Error, Result};
use crate::exceptional::ExceptionalSystem;
use crate::fourier;
use crate::index::IndexSet;
use crate::jacobi::{self, JacobiParams};
use crate::linalg::Matrix;
use crate::math;
use crate::poly::Poly;
use crate::quadrature::{build_quadrature, QuadratureRule};

use super::SymbolSpec;

/// Which orthonormal system a basis belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    ClassicalJacobi,
    ExceptionalJacobi,
    DunklJacobi,
    FourierOracle,
}

impl BasisKind {
    pub fn name(&self) -> &'static str {
        match self {
            BasisKind::ClassicalJacobi => "jacobi",
            BasisKind::ExceptionalJacobi => "exceptional",
            BasisKind::DunklJacobi => "dunkl",
            BasisKind::FourierOracle => "fourier_oracle",
        }
    }
}

/// An orthonormal system together with what is needed to evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// `p_n^{(alpha, beta)}` on `[-1, 1]`, indexed by `N`.
    ClassicalJacobi(JacobiParams),
    /// Normalised exceptional polynomials, indexed by `N`.
    Exceptional(ExceptionalSystem),
    /// Orthonormal Dunkl-Jacobi functions on `[-pi, pi]`, indexed by `Z`.
    Dunkl(DunklSystem),
    /// `e^{i n th} / sqrt(2 pi)`, indexed by `Z`.
    FourierOracle,
}

impl Basis {
    pub fn kind(&self) -> BasisKind {
        match self {
            Basis::ClassicalJacobi(_) => BasisKind::ClassicalJacobi,
            Basis::Exceptional(_) => BasisKind::ExceptionalJacobi,
            Basis::Dunkl(_) => BasisKind::DunklJacobi,
            Basis::FourierOracle => BasisKind::FourierOracle,
        }
    }

    pub fn index_set(&self, n_max: usize) -> IndexSet {
        match self {
            Basis::ClassicalJacobi(_) | Basis::Exceptional(_) => IndexSet::Naturals(n_max),
            Basis::Dunkl(_) | Basis::FourierOracle => IndexSet::Integers(n_max),
        }
    }

    /// The symbol attached to the basis in the theory: `x` for Jacobi,
    /// `Q` for exceptional, `cos th` for the circle.
    pub fn natural_symbol(&self) -> SymbolSpec {
        match self {
            Basis::Exceptional(sys) => SymbolSpec::new(sys.q_poly().clone()),
            _ => SymbolSpec::identity(),
        }
    }

    /// Exceptional kernels are only assembled for `s' = b`, where the
    /// singular weight drops out of every integral.
    pub fn check_symbol(&self, symbol: &SymbolSpec) -> Result<()> {
        if let Basis::Exceptional(sys) = self {
            let diff = &symbol.s.derivative() - sys.b();
            if diff.max_abs_coeff() > 1e-12 * sys.b().max_abs_coeff() {
                return Err(Error::Incompatible(
                    "exceptional kernels need a symbol with s' = b",
                ));
            }
        }
        Ok(())
    }

    /// Bandwidth of `M_s` in storage order.
    pub fn bandwidth(&self, symbol: &SymbolSpec) -> usize {
        let d = symbol.degree();
        match self {
            Basis::ClassicalJacobi(_) | Basis::Exceptional(_) => d,
            Basis::Dunkl(_) | Basis::FourierOracle => 2 * d + 1,
        }
    }

    /// Sampled representation used for kernels and generators.
    pub fn sample(&self, symbol: &SymbolSpec, n_max: usize, order: usize) -> Result<KernelBuilder> {
        self.check_symbol(symbol)?;
        let index = self.index_set(n_max);
        let parts = match self {
            Basis::ClassicalJacobi(params) => {
                let rule = build_quadrature(params.alpha(), params.beta(), order)?;
                vec![jacobi_part(
                    params,
                    &rule,
                    symbol,
                    n_max + 1,
                    identity_map(n_max + 1),
                )]
            }
            Basis::Exceptional(sys) => exceptional_parts(sys, symbol, n_max, order)?,
            Basis::Dunkl(sys) => dunkl_parts(sys, symbol, n_max, order)?,
            Basis::FourierOracle => fourier_parts(symbol, n_max, order),
        };
        KernelBuilder::new(
            self.kind(),
            index,
            parts,
            symbol,
            order,
            self.direct_quadrature(false),
        )
    }

    /// Sampled representation that integrates the defining integral
    /// directly: the singular exceptional weight with Gauss-Jacobi exponents
    /// `(alpha - 1, beta + 1)`, or the complex Dunkl functions at `+-th`.
    /// Used as a test oracle.
    pub fn sample_direct(
        &self,
        symbol: &SymbolSpec,
        n_max: usize,
        order: usize,
    ) -> Result<KernelBuilder> {
        self.check_symbol(symbol)?;
        let index = self.index_set(n_max);
        let parts = match self {
            Basis::Exceptional(sys) => exceptional_direct_parts(sys, symbol, n_max, order)?,
            Basis::Dunkl(sys) => dunkl_direct_parts(sys, symbol, n_max, order)?,
            _ => return self.sample(symbol, n_max, order),
        };
        KernelBuilder::new(
            self.kind(),
            index,
            parts,
            symbol,
            order,
            self.direct_quadrature(true),
        )
    }

    fn direct_quadrature(&self, direct: bool) -> Policy {
        match self {
            Basis::FourierOracle => Policy::Trapezoid,
            Basis::Exceptional(_) if direct => Policy::GaussExtra,
            _ => Policy::Gauss,
        }
    }

    /// The order `required_order` picks for this basis, rounded up to a
    /// multiple of 64 so nearby times share one sampled representation.
    pub fn bucket_order(&self, symbol: &SymbolSpec, n_max: usize, t: f64) -> usize {
        required_order(self, symbol, n_max, t).div_ceil(64) * 64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Policy {
    Gauss,
    GaussExtra,
    Trapezoid,
}

impl Policy {
    fn order(self, n_max: usize, width: usize) -> usize {
        match self {
            Policy::Gauss => n_max + 32 + width,
            Policy::GaussExtra => n_max + 64 + width,
            Policy::Trapezoid => 2 * n_max + 64 + 2 * width,
        }
    }

    /// Inverse of `order`: the spectral width an order leaves room for.
    fn width(self, n_max: usize, order: usize) -> f64 {
        let used = match self {
            Policy::Gauss => n_max + 32,
            Policy::GaussExtra => n_max + 64,
            Policy::Trapezoid => 2 * n_max + 64,
        };
        let spare = order.saturating_sub(used) as f64;
        if self == Policy::Trapezoid {
            spare / 2.0
        } else {
            spare
        }
    }
}

/// Spectral width `4.5 sqrt(t v)` of `e^{t s}`: its Chebyshev coefficients
/// decay like a Gaussian in the degree with standard deviation `sqrt(t v)`,
/// and Gauss rules integrate twice their order.
fn spectral_width(symbol: &SymbolSpec, t: f64) -> usize {
    math::ceil(4.5 * math::sqrt(t * symbol.variation())) as usize
}

/// Quadrature order (or trapezoid node count) for kernels of extent `n_max`
/// at time `t`.
pub fn required_order(basis: &Basis, symbol: &SymbolSpec, n_max: usize, t: f64) -> usize {
    basis
        .direct_quadrature(false)
        .order(n_max, spectral_width(symbol, t))
}

/// One summand of the sampled representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Part {
    /// `s` at the nodes.
    pub symbol: Vec<f64>,
    /// Compact rows times square-root weights, `rows x nodes`.
    pub rows: Matrix,
    /// Storage position to (compact row, factor).
    pub map: Vec<Option<(usize, f64)>>,
    /// Multiplier of the exponential.
    pub c0: Vec<f64>,
    /// Multiplier of `t e^{...}` in kernels and of `1` in generators.
    pub c1: Option<Vec<f64>>,
}

impl Part {
    fn nodes(&self) -> usize {
        self.symbol.len()
    }

    /// The diagonal `D_p(t)` relative to `s_M`.
    fn kernel_weights(&self, t: f64, s_max: f64) -> Vec<f64> {
        (0..self.nodes())
            .map(|j| {
                let e = math::exp(t * (self.symbol[j] - s_max));
                let c1 = self.c1.as_ref().map_or(0.0, |c| c[j]);
                e * (self.c0[j] + t * c1)
            })
            .collect()
    }

    /// The diagonal for `M_s`.
    fn generator_weights(&self) -> Vec<f64> {
        (0..self.nodes())
            .map(|j| self.symbol[j] * self.c0[j] + self.c1.as_ref().map_or(0.0, |c| c[j]))
            .collect()
    }
}

fn identity_map(size: usize) -> Vec<Option<(usize, f64)>> {
    (0..size).map(|i| Some((i, 1.0))).collect()
}

fn rows_from<F: FnMut(f64, &mut [f64])>(
    rule: &QuadratureRule,
    count: usize,
    mut eval: F,
) -> Matrix {
    let nodes = rule.order();
    let mut rows = Matrix::zeros(count, nodes);
    let mut buf = vec![0.0; count];
    for (j, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        eval(x, &mut buf);
        let sw = math::sqrt(w);
        for (k, v) in buf.iter().enumerate() {
            rows[(k, j)] = v * sw;
        }
    }
    rows
}

fn jacobi_rows(params: &JacobiParams, rule: &QuadratureRule, count: usize) -> Matrix {
    rows_from(rule, count, |x, out| {
        jacobi::eval_jacobi_all(params, x, out)
    })
}

fn jacobi_part(
    params: &JacobiParams,
    rule: &QuadratureRule,
    symbol: &SymbolSpec,
    count: usize,
    map: Vec<Option<(usize, f64)>>,
) -> Part {
    Part {
        symbol: rule.nodes.iter().map(|&x| symbol.s.eval(x)).collect(),
        rows: jacobi_rows(params, rule, count),
        map,
        c0: vec![1.0; rule.order()],
        c1: None,
    }
}

/// `int g P_n P_m W = (1 / s_n s_m) [l_n l_m int g q_{n-1} q_{m-1} w^{a+1,b+1}
/// + int p_n p_m (lt g + (g'/b) p bw) w^{a,b}]`, with `l_n = sqrt(n (n + rho))`.
fn exceptional_parts(
    sys: &ExceptionalSystem,
    symbol: &SymbolSpec,
    n_max: usize,
    order: usize,
) -> Result<Vec<Part>> {
    let base = sys.base();
    let shifted = base.shifted(1.0, 1.0)?;
    let rule1 = build_quadrature(shifted.alpha(), shifted.beta(), order)?;
    let map1 = (0..=n_max)
        .map(|n| (n > 0).then(|| (n - 1, jacobi::derivative_factor(&base, n) / sys.sigma(n))))
        .collect();
    let k1 = jacobi_part(&shifted, &rule1, symbol, n_max.max(1), map1);

    let rule0 = build_quadrature(base.alpha(), base.beta(), order)?;
    let map0 = (0..=n_max).map(|n| Some((n, 1.0 / sys.sigma(n)))).collect();
    let mut k2 = jacobi_part(&base, &rule0, symbol, n_max + 1, map0);
    let p = Poly::new(vec![1.0, 0.0, -1.0]);
    let pbw = &p * sys.bw();
    k2.c0 = vec![sys.lambda_tilde(); rule0.order()];
    k2.c1 = Some(rule0.nodes.iter().map(|&x| pbw.eval(x)).collect());
    Ok(vec![k1, k2])
}

fn exceptional_direct_parts(
    sys: &ExceptionalSystem,
    symbol: &SymbolSpec,
    n_max: usize,
    order: usize,
) -> Result<Vec<Part>> {
    let (a, b) = sys.weight_exponents();
    let rule = build_quadrature(a, b, order)?;
    let rows = rows_from(&rule, n_max + 1, |x, out| {
        sys.eval_all(x, out);
        let scale = 1.0 / sys.b_tilde().eval(x);
        out.iter_mut().for_each(|v| *v *= scale);
    });
    Ok(vec![Part {
        symbol: rule.nodes.iter().map(|&x| symbol.s.eval(x)).collect(),
        rows,
        map: identity_map(n_max + 1),
        c0: vec![1.0; rule.order()],
        c1: None,
    }])
}

/// `K^D(n, m) = c_n c_m [K^J_{a,b}(|n|, |m|) + sgn n sgn m K^J_{a+1,b+1}(|n|-1, |m|-1)]`
/// with `c_0 = 1`, `c_k = 1/sqrt 2`.
fn dunkl_parts(
    sys: &DunklSystem,
    symbol: &SymbolSpec,
    n_max: usize,
    order: usize,
) -> Result<Vec<Part>> {
    let index = IndexSet::Integers(n_max);
    let base = sys.params();
    let shifted = base.shifted(1.0, 1.0)?;
    let rule0 = build_quadrature(base.alpha(), base.beta(), order)?;
    let rule1 = build_quadrature(shifted.alpha(), shifted.beta(), order)?;
    let map0 = index
        .indices()
        .map(|k| Some((k.unsigned_abs() as usize, dunkl::norm_factor(k))))
        .collect();
    let map1 = index
        .indices()
        .map(|k| {
            (k != 0).then(|| {
                (
                    k.unsigned_abs() as usize - 1,
                    k.signum() as f64 * dunkl::norm_factor(k),
                )
            })
        })
        .collect();
    Ok(vec![
        jacobi_part(&base, &rule0, symbol, n_max + 1, map0),
        jacobi_part(&shifted, &rule1, symbol, n_max.max(1), map1),
    ])
}

fn dunkl_direct_parts(
    sys: &DunklSystem,
    symbol: &SymbolSpec,
    n_max: usize,
    order: usize,
) -> Result<Vec<Part>> {
    // int_{-pi}^{pi} F A dth = int_{-1}^{1} [F(acos x) + F(-acos x)] w^{a,b} dx
    let index = IndexSet::Integers(n_max);
    let base = sys.params();
    let rule = build_quadrature(base.alpha(), base.beta(), order)?;
    let size = index.size();
    let nodes = 2 * rule.order();
    let mut re = Matrix::zeros(size, nodes);
    let mut im = Matrix::zeros(size, nodes);
    let mut sym = Vec::with_capacity(nodes);
    for sign in [1.0, -1.0] {
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let j = sym.len();
            let th = sign * math::acos(x);
            let sw = math::sqrt(w);
            for (pos, k) in index.indices().enumerate() {
                let (r, i) = dunkl::eval_psi_orthonormal(sys, k, th);
                re[(pos, j)] = r * sw;
                im[(pos, j)] = i * sw;
            }
            sym.push(symbol.s.eval(x));
        }
    }
    let part = |rows| Part {
        symbol: sym.clone(),
        rows,
        map: identity_map(size),
        c0: vec![1.0; nodes],
        c1: None,
    };
    Ok(vec![part(re), part(im)])
}

fn fourier_parts(symbol: &SymbolSpec, n_max: usize, count: usize) -> Vec<Part> {
    let index = IndexSet::Integers(n_max);
    let nodes = fourier::trapezoid_nodes(count);
    let size = index.size();
    // e^{i n th} / sqrt(2 pi) with weight 2 pi / count
    let scale = 1.0 / math::sqrt(count as f64);
    let mut re = Matrix::zeros(size, count);
    let mut im = Matrix::zeros(size, count);
    for (j, &th) in nodes.iter().enumerate() {
        for (pos, k) in index.indices().enumerate() {
            let a = k as f64 * th;
            re[(pos, j)] = math::cos(a) * scale;
            im[(pos, j)] = math::sin(a) * scale;
        }
    }
    let sym: Vec<f64> = nodes
        .iter()
        .map(|&th| symbol.s.eval(math::cos(th)))
        .collect();
    let part = |rows| Part {
        symbol: sym.clone(),
        rows,
        map: identity_map(size),
        c0: vec![1.0; count],
        c1: None,
    };
    vec![part(re), part(im)]
}

/// A basis sampled at one quadrature order: assembles kernel tables, applies
/// `W_t` to sequences and computes entries of `M_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBuilder {
    pub kind: BasisKind,
    pub index: IndexSet,
    pub parts: Vec<Part>,
    pub s_max: f64,
    pub order: usize,
    /// Largest `t` the order resolves under the order policy.
    pub t_limit: f64,
}

/// `R_p^T F_p f` for every part, reusable across `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    coeffs: Vec<Vec<f64>>,
}

impl KernelBuilder {
    fn new(
        kind: BasisKind,
        index: IndexSet,
        parts: Vec<Part>,
        symbol: &SymbolSpec,
        order: usize,
        policy: Policy,
    ) -> Result<Self> {
        let v = symbol.variation();
        let width = policy.width(index.n_max(), order);
        let t_limit = if v == 0.0 {
            f64::INFINITY
        } else {
            let r = width / 4.5;
            r * r / v
        };
        Ok(Self {
            kind,
            index,
            parts,
            s_max: symbol.s_max,
            order,
            t_limit,
        })
    }

    pub fn size(&self) -> usize {
        self.index.size()
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument("t must be non-negative"));
        }
        if t > self.t_limit * (1.0 + 1e-12) {
            return Err(Error::QuadratureTooLow {
                order: self.order,
                required: self.order + 1,
            });
        }
        Ok(())
    }

    fn assemble(&self, weights: &[Vec<f64>]) -> Matrix {
        let size = self.size();
        let mut out = Matrix::zeros(size, size);
        for (part, w) in self.parts.iter().zip(weights) {
            let r = part.rows.rows();
            let nodes = part.nodes();
            let mut compact = Matrix::zeros(r, r);
            let mut scaled = vec![0.0; nodes];
            for i in 0..r {
                let ri = part.rows.row(i);
                for j in 0..nodes {
                    scaled[j] = ri[j] * w[j];
                }
                for k in i..r {
                    let v: f64 = scaled
                        .iter()
                        .zip(part.rows.row(k))
                        .map(|(a, b)| a * b)
                        .sum();
                    compact[(i, k)] = v;
                    compact[(k, i)] = v;
                }
            }
            for a in 0..size {
                let Some((ra, fa)) = part.map[a] else {
                    continue;
                };
                for b in 0..size {
                    let Some((rb, fb)) = part.map[b] else {
                        continue;
                    };
                    out[(a, b)] += fa * fb * compact[(ra, rb)];
                }
            }
        }
        out
    }

    /// `K_t` over the whole window.
    pub fn kernel(&self, t: f64) -> Result<super::KernelTable> {
        self.check_t(t)?;
        let weights: Vec<Vec<f64>> = self
            .parts
            .iter()
            .map(|p| p.kernel_weights(t, self.s_max))
            .collect();
        let mut entries = self.assemble(&weights);
        symmetrize(&mut entries);
        Ok(super::KernelTable {
            t,
            index: self.index,
            entries,
        })
    }

    /// Matrix of `M_s` over the window.
    pub fn multiplication_matrix(&self) -> Matrix {
        let weights: Vec<Vec<f64>> = self.parts.iter().map(|p| p.generator_weights()).collect();
        self.assemble(&weights)
    }

    /// Single entry `<s phi_a, phi_b>` by storage positions.
    pub fn multiplication_entry(&self, a: usize, b: usize) -> f64 {
        let mut total = 0.0;
        for part in &self.parts {
            let (Some((ra, fa)), Some((rb, fb))) = (part.map[a], part.map[b]) else {
                continue;
            };
            let w = part.generator_weights();
            let v: f64 = part
                .rows
                .row(ra)
                .iter()
                .zip(part.rows.row(rb))
                .zip(&w)
                .map(|((x, y), z)| x * y * z)
                .sum();
            total += fa * fb * v;
        }
        total
    }

    pub fn project(&self, f: &[f64]) -> Projection {
        assert_eq!(f.len(), self.size());
        let coeffs = self
            .parts
            .iter()
            .map(|part| {
                let mut h = vec![0.0; part.nodes()];
                for (pos, &v) in f.iter().enumerate() {
                    if v == 0.0 {
                        continue;
                    }
                    if let Some((r, fac)) = part.map[pos] {
                        for (hj, &x) in h.iter_mut().zip(part.rows.row(r)) {
                            *hj += fac * v * x;
                        }
                    }
                }
                h
            })
            .collect();
        Projection { coeffs }
    }

    /// `W_t f` in storage order from a stored projection of `f`.
    pub fn evaluate(&self, proj: &Projection, t: f64) -> Result<Vec<f64>> {
        self.check_t(t)?;
        let mut out = vec![0.0; self.size()];
        for (part, h) in self.parts.iter().zip(&proj.coeffs) {
            let w = part.kernel_weights(t, self.s_max);
            let g: Vec<f64> = h.iter().zip(&w).map(|(a, b)| a * b).collect();
            let compact: Vec<f64> = (0..part.rows.rows())
                .map(|r| part.rows.row(r).iter().zip(&g).map(|(a, b)| a * b).sum())
                .collect();
            for (pos, o) in out.iter_mut().enumerate() {
                if let Some((r, fac)) = part.map[pos] {
                    *o += fac * compact[r];
                }
            }
        }
        Ok(out)
    }

    /// `W_t f` at the single storage position `pos`.
    pub fn evaluate_at(&self, proj: &Projection, t: f64, pos: usize) -> Result<f64> {
        self.check_t(t)?;
        let mut total = 0.0;
        for (part, h) in self.parts.iter().zip(&proj.coeffs) {
            let Some((r, fac)) = part.map[pos] else {
                continue;
            };
            let row = part.rows.row(r);
            let mut acc = 0.0;
            for j in 0..part.nodes() {
                let e = math::exp(t * (part.symbol[j] - self.s_max));
                let c1 = part.c1.as_ref().map_or(0.0, |c| c[j]);
                acc += row[j] * h[j] * e * (part.c0[j] + t * c1);
            }
            total += fac * acc;
        }
        Ok(total)
    }

    /// `W_t f` in storage order.
    pub fn apply(&self, f: &[f64], t: f64) -> Result<Vec<f64>> {
        self.evaluate(&self.project(f), t)
    }
}

pub(crate) fn symmetrize(m: &mut Matrix) {
    let n = m.rows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}
