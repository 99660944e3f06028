use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::linalg::{self, Matrix};
use crate::math;

use super::basis::Basis;
use super::{SequenceData, SymbolSpec};

/// Rows `u_{n, -L..=L}` of `M_s` in storage order plus `s_M`; stands for the
/// generator `G = M_s - s_M I`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedGenerator {
    pub index: IndexSet,
    pub bandwidth: usize,
    pub s_max: f64,
    /// `rows[a][L + k] = <s phi_a, phi_{a+k}>` by storage position. Entries
    /// that reach past the window are filled from a wider sample, so every
    /// row carries its full band.
    pub rows: Vec<Vec<f64>>,
}

impl BandedGenerator {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `u_{a, k}`; zero outside the band or below position 0.
    pub fn u(&self, a: usize, k: i64) -> f64 {
        let l = self.bandwidth as i64;
        if k.abs() > l || (a as i64 + k) < 0 {
            return 0.0;
        }
        self.rows[a][(l + k) as usize]
    }

    /// Entry of `G` at offset `k` of row `a`.
    pub fn g(&self, a: usize, k: i64) -> f64 {
        self.u(a, k) - if k == 0 { self.s_max } else { 0.0 }
    }

    /// `max |u_{a, k} - u_{a+k, -k}|` over rows whose partner is stored.
    pub fn symmetry_residual(&self) -> f64 {
        let l = self.bandwidth as i64;
        let mut worst: f64 = 0.0;
        for a in 0..self.size() {
            for k in -l..=l {
                let b = a as i64 + k;
                if b < 0 || b as usize >= self.size() {
                    continue;
                }
                worst = worst.max(math::abs(self.u(a, k) - self.u(b as usize, -k)));
            }
        }
        worst
    }

    /// `G` truncated to the window.
    pub fn dense(&self) -> Matrix {
        let n = self.size();
        let l = self.bandwidth as i64;
        let mut m = Matrix::zeros(n, n);
        for a in 0..n {
            for k in -l..=l {
                let b = a as i64 + k;
                if b >= 0 && (b as usize) < n {
                    m[(a, b as usize)] = self.g(a, k);
                }
            }
        }
        m
    }

    /// `(G v)(a)` for a vector in storage order, entries past the window
    /// taken as zero.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let l = self.bandwidth as i64;
        (0..self.size())
            .map(|a| {
                (-l..=l)
                    .filter_map(|k| {
                        let b = a as i64 + k;
                        (b >= 0 && (b as usize) < v.len()).then(|| self.g(a, k) * v[b as usize])
                    })
                    .sum()
            })
            .collect()
    }
}

/// Entries `u_{n,k} = int s phi_n phi_{n+k} dmu` for all stored rows.
pub fn build_generator(
    basis: &Basis,
    symbol: &SymbolSpec,
    n_max: usize,
) -> Result<BandedGenerator> {
    let index = basis.index_set(n_max);
    let l = basis.bandwidth(symbol);
    let wide = match index {
        IndexSet::Naturals(_) => n_max + l,
        IndexSet::Integers(_) => n_max + l.div_ceil(2) + 1,
    };
    let order = basis.bucket_order(symbol, wide, 0.0) + symbol.degree();
    let sample = basis.sample(symbol, wide, order)?;
    // both windows share their storage order, so table position `a` is
    // also position `a` of the wider sample
    let wide_size = sample.size();
    let mut rows = Vec::with_capacity(index.size());
    for a in 0..index.size() {
        let mut row = vec![0.0; 2 * l + 1];
        for (slot, k) in (-(l as i64)..=l as i64).enumerate() {
            let b = a as i64 + k;
            if b < 0 || b as usize >= wide_size {
                continue;
            }
            row[slot] = sample.multiplication_entry(a, b as usize);
        }
        rows.push(row);
    }
    let gen = BandedGenerator {
        index,
        bandwidth: l,
        s_max: symbol.s_max,
        rows,
    };
    let residual = gen.symmetry_residual();
    if residual > 1e-9 {
        return Err(Error::SymmetryViolation { residual });
    }
    Ok(gen)
}

/// Symmetric limit row of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    /// Offsets `-L..=L`.
    pub coeffs: Vec<f64>,
    /// Storage position of the row used.
    pub row: usize,
    /// Largest change against the row at half the position.
    pub cauchy_defect: f64,
}

/// The symmetric part of the last stored row of `G`, checked against the
/// row at half its position (same parity, so interleaved orders compare
/// like with like).
pub fn limit_stencil(gen: &BandedGenerator, tolerance: f64) -> Result<Stencil> {
    let l = gen.bandwidth as i64;
    let last = gen.size() - 1;
    let mut half = last / 2;
    if half % 2 != last % 2 {
        half -= 1;
    }
    let sym = |a: usize| -> Vec<f64> {
        (-l..=l)
            .map(|k| 0.5 * (gen.g(a, k) + gen.g(a, -k)))
            .collect()
    };
    let coeffs = sym(last);
    let earlier = sym(half);
    let cauchy_defect = coeffs
        .iter()
        .zip(&earlier)
        .fold(0.0, |m, (a, b)| f64::max(m, math::abs(a - b)));
    if cauchy_defect > tolerance {
        return Err(Error::NonConvergentRows {
            defect: cauchy_defect,
        });
    }
    Ok(Stencil {
        coeffs,
        row: last,
        cauchy_defect,
    })
}

/// How `evolve_ivp` advances the initial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolveMethod {
    /// `W_t f` from the kernel table.
    Kernel,
    /// `exp(t G) f` on the truncated band by scaling and squaring.
    BandExpm,
}

/// Everything needed to solve `du/dt = G u`, `u(0) = f` both ways.
#[derive(Debug, Clone)]
pub struct Evolution {
    basis: Basis,
    symbol: SymbolSpec,
    n_max: usize,
    generator: BandedGenerator,
}

impl Evolution {
    pub fn new(basis: &Basis, symbol: &SymbolSpec, n_max: usize) -> Result<Self> {
        Ok(Self {
            basis: basis.clone(),
            symbol: symbol.clone(),
            n_max,
            generator: build_generator(basis, symbol, n_max)?,
        })
    }

    pub fn generator(&self) -> &BandedGenerator {
        &self.generator
    }

    pub fn index(&self) -> IndexSet {
        self.generator.index
    }

    /// `u(., t)` in storage order.
    pub fn solve(&self, f: &[f64], t: f64, method: EvolveMethod) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument("t must be non-negative"));
        }
        match method {
            EvolveMethod::Kernel => {
                let order = self.basis.bucket_order(&self.symbol, self.n_max, t);
                self.basis
                    .sample(&self.symbol, self.n_max, order)?
                    .apply(f, t)
            }
            EvolveMethod::BandExpm => {
                let mut g = self.generator.dense();
                g.scale(t);
                Ok(linalg::expm(&g).matvec(f))
            }
        }
    }

    /// Both solutions and their largest disagreement on the inner half.
    pub fn compare(&self, f: &[f64], t: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let a = self.solve(f, t, EvolveMethod::Kernel)?;
        let b = self.solve(f, t, EvolveMethod::BandExpm)?;
        let index = self.index();
        let d = (0..index.size())
            .filter(|&p| index.in_inner_half(index.index_at(p)))
            .fold(0.0, |m, p| f64::max(m, math::abs(a[p] - b[p])));
        Ok((a, b, d))
    }
}

/// Solves the initial value problem with the chosen method; `f` must lie in
/// the inner half of the window for `BandExpm` to be meaningful.
pub fn evolve_ivp(
    evolution: &Evolution,
    f: &SequenceData,
    t: f64,
    method: EvolveMethod,
) -> Result<SequenceData> {
    let index = evolution.index();
    let dense = f.to_dense(index)?;
    Ok(SequenceData::from_dense(
        index,
        evolution.solve(&dense, t, method)?,
    ))
}

/// `max |(u(t+h) - u(t-h)) / 2h - G u(t)|` on the inner half, with `u`
/// from the kernel method.
pub fn ivp_residual(evolution: &Evolution, f: &[f64], t: f64, h: f64) -> Result<f64> {
    if t < h {
        return Err(Error::InvalidArgument(
            "need t >= h for a central difference",
        ));
    }
    let plus = evolution.solve(f, t + h, EvolveMethod::Kernel)?;
    let minus = evolution.solve(f, t - h, EvolveMethod::Kernel)?;
    let mid = evolution.solve(f, t, EvolveMethod::Kernel)?;
    let gu = evolution.generator().apply(&mid);
    let index = evolution.index();
    Ok((0..index.size())
        .filter(|&p| index.in_inner_half(index.index_at(p)))
        .map(|p| math::abs((plus[p] - minus[p]) / (2.0 * h) - gu[p]))
        .fold(0.0, f64::max))
}
