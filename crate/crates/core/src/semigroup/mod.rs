//! Discrete diffusion semigroups `W_t f(n) = sum_m f(m) K_t(n, m)` with
//! `K_t(n, m) = int e^{-(s_M - s) t} phi_n phi_m dmu` over a supplied
//! orthonormal basis.
//!
//! The generator convention is `G = M_s - s_M I`, so `W_t = e^{t G}` and `G`
//! is negative semidefinite.

mod basis;
mod generator;
mod kernel;

pub use basis::{required_order, Basis, BasisKind, KernelBuilder, Part};
pub use generator::{
    build_generator, evolve_ivp, ivp_residual, limit_stencil, BandedGenerator, Evolution,
    EvolveMethod, Stencil,
};
pub use kernel::{apply_semigroup, build_kernel, compose_check, maximal_operator, KernelFamily};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::linalg::Matrix;
use crate::math;
use crate::poly::Poly;

/// The symbol `s` as a polynomial on `[-1, 1]` (in `x`, or in `cos th` for
/// the bases on `[-pi, pi]`) together with its maximum `s_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    pub s: Poly,
    pub s_max: f64,
}

impl SymbolSpec {
    /// Computes `s_M` as the maximum over `[-1, 1]`.
    pub fn new(s: Poly) -> Self {
        let (s_max, _) = s.max_on_interval();
        Self { s, s_max }
    }

    /// `s(x) = x`, or `cos th` on the circle.
    pub fn identity() -> Self {
        Self::new(Poly::x())
    }

    /// Uses a given maximum after checking it on a fine grid.
    pub fn with_max(s: Poly, s_max: f64) -> Result<Self> {
        let grid = 10_000;
        let mut attained = f64::NEG_INFINITY;
        for i in 0..=grid {
            let x = -1.0 + 2.0 * i as f64 / grid as f64;
            attained = attained.max(s.eval(x));
        }
        let (exact, _) = s.max_on_interval();
        attained = attained.max(exact);
        if attained > s_max + 1e-12 || s_max - attained > 1e-12 {
            return Err(Error::InvalidArgument(
                "s_max is not the maximum of s on [-1, 1]",
            ));
        }
        Ok(Self { s, s_max })
    }

    pub fn degree(&self) -> usize {
        self.s.degree()
    }

    /// `sum_j j^2 |c_j|` over the Chebyshev coefficients: bounds the
    /// curvature of `s(cos th)` and sets the spectral width of `e^{t s}`.
    pub fn variation(&self) -> f64 {
        self.s
            .chebyshev_coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| (j * j) as f64 * math::abs(*c))
            .sum()
    }
}

/// A finitely supported real sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceData {
    pub indices: Vec<i64>,
    pub values: Vec<f64>,
}

impl SequenceData {
    pub fn new(indices: Vec<i64>, values: Vec<f64>) -> Self {
        assert_eq!(indices.len(), values.len());
        Self { indices, values }
    }

    pub fn delta(index: i64) -> Self {
        Self::new(vec![index], vec![1.0])
    }

    /// Values listed in storage order of `index`.
    pub fn from_dense(index: IndexSet, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), index.size());
        Self::new(index.indices().collect(), values)
    }

    pub fn norm2(&self) -> f64 {
        math::norm2(&self.values)
    }

    pub fn get(&self, index: i64) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .filter(|(i, _)| **i == index)
            .map(|(_, v)| *v)
            .sum()
    }

    /// Scatters into storage order of `index`.
    pub fn to_dense(&self, index: IndexSet) -> Result<Vec<f64>> {
        let mut out = vec![0.0; index.size()];
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            let pos = index
                .position(i)
                .ok_or(Error::SupportOutOfRange { index: i })?;
            out[pos] += v;
        }
        Ok(out)
    }
}

/// `K_t(n, m)` for all stored indices of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub t: f64,
    pub index: IndexSet,
    /// Entries in storage order of `index`.
    pub entries: Matrix,
}

impl KernelTable {
    pub fn size(&self) -> usize {
        self.index.size()
    }

    /// `K_t(n, m)` by index; `None` outside the window.
    pub fn get(&self, n: i64, m: i64) -> Option<f64> {
        Some(self.entries[(self.index.position(n)?, self.index.position(m)?)])
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .as_slice()
            .iter()
            .fold(0.0, |a, &v| f64::max(a, math::abs(v)))
    }

    /// Largest row l2-norm.
    pub fn max_row_norm(&self) -> f64 {
        (0..self.size())
            .map(|i| math::norm2(self.entries.row(i)))
            .fold(0.0, f64::max)
    }

    /// `max |K(n, m) - delta_nm|`.
    pub fn identity_defect(&self) -> f64 {
        self.entries.max_abs_diff(&Matrix::identity(self.size()))
    }
}

/// Sample points in `t` for maximal operators and kernel families.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    /// Sorted, starting with `0` when the endpoint is included.
    pub points: Vec<f64>,
}

impl TimeGrid {
    /// `count` geometric points from `t_min` to `t_max`, preceded by `t = 0`.
    pub fn geometric(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min) || count < 2 {
            return Err(Error::InvalidArgument(
                "geometric grid needs 0 < t_min < t_max, count >= 2",
            ));
        }
        let ratio = math::ln(t_max / t_min) / (count - 1) as f64;
        let mut points = vec![0.0];
        points.extend((0..count).map(|j| {
            if j == count - 1 {
                t_max
            } else {
                t_min * math::exp(ratio * j as f64)
            }
        }));
        Ok(Self { points })
    }

    /// `count` equispaced points on `[t_min, t_max]`, plus `t = 0` if absent.
    pub fn linear(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t_min >= 0.0 && t_max > t_min) || count < 2 {
            return Err(Error::InvalidArgument(
                "linear grid needs 0 <= t_min < t_max, count >= 2",
            ));
        }
        let mut points = Vec::with_capacity(count + 1);
        if t_min > 0.0 {
            points.push(0.0);
        }
        let h = (t_max - t_min) / (count - 1) as f64;
        points.extend((0..count).map(|j| {
            if j == count - 1 {
                t_max
            } else {
                t_min + h * j as f64
            }
        }));
        Ok(Self { points })
    }

    /// The default grid: `1e-4..1e4`, 257 geometric points, plus `0`.
    pub fn default_geometric() -> Self {
        Self::geometric(1e-4, 1e4, 257).expect("valid default grid")
    }

    /// Inserts the geometric (or arithmetic, next to `0`) midpoint of every
    /// gap, doubling the resolution.
    pub fn refined(&self) -> Self {
        let mut points = Vec::with_capacity(2 * self.points.len());
        for w in self.points.windows(2) {
            points.push(w[0]);
            let mid = if w[0] > 0.0 {
                math::sqrt(w[0] * w[1])
            } else {
                0.5 * (w[0] + w[1])
            };
            points.push(mid);
        }
        if let Some(&last) = self.points.last() {
            points.push(last);
        }
        Self { points }
    }

    pub fn max(&self) -> f64 {
        self.points.last().copied().unwrap_or(0.0)
    }
}
