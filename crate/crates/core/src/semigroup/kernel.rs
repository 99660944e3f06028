use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

use super::basis::{Basis, KernelBuilder};
use super::{KernelTable, SequenceData, SymbolSpec, TimeGrid};

/// `K_t` at extent `n_max`, with the quadrature order chosen by the order
/// policy unless `order` is given.
pub fn build_kernel(
    basis: &Basis,
    symbol: &SymbolSpec,
    t: f64,
    n_max: usize,
    order: Option<usize>,
) -> Result<KernelTable> {
    let order = order.unwrap_or_else(|| basis.bucket_order(symbol, n_max, t));
    basis.sample(symbol, n_max, order)?.kernel(t)
}

/// `W_t f = sum_m f(m) K_t(., m)`.
pub fn apply_semigroup(kernel: &KernelTable, f: &SequenceData) -> Result<SequenceData> {
    let dense = f.to_dense(kernel.index)?;
    Ok(SequenceData::from_dense(
        kernel.index,
        kernel.entries.matvec(&dense),
    ))
}

/// `max |sum_j K1(n, j) K2(m, j) - K12(n, m)|` over `|n|, |m| <= inner`.
pub fn compose_check(
    k1: &KernelTable,
    k2: &KernelTable,
    k12: &KernelTable,
    inner: usize,
) -> Result<f64> {
    if k1.index != k2.index || k1.index != k12.index {
        return Err(Error::Incompatible("tables must share one index window"));
    }
    if inner > k1.index.n_max() {
        return Err(Error::InvalidArgument("inner range exceeds the table"));
    }
    let idx = k1.index;
    let size = idx.size();
    let mut worst: f64 = 0.0;
    for a in (0..size).filter(|&a| idx.index_at(a).unsigned_abs() as usize <= inner) {
        for b in (0..size).filter(|&b| idx.index_at(b).unsigned_abs() as usize <= inner) {
            let s: f64 = k1
                .entries
                .row(a)
                .iter()
                .zip(k2.entries.row(b))
                .map(|(x, y)| x * y)
                .sum();
            worst = worst.max(math::abs(s - k12.entries[(a, b)]));
        }
    }
    Ok(worst)
}

/// Sampled representations for every order bucket a time grid touches.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    basis: Basis,
    symbol: SymbolSpec,
    n_max: usize,
    builders: BTreeMap<usize, KernelBuilder>,
}

impl KernelFamily {
    pub fn new(basis: &Basis, symbol: &SymbolSpec, n_max: usize, times: &[f64]) -> Result<Self> {
        let mut family = Self {
            basis: basis.clone(),
            symbol: symbol.clone(),
            n_max,
            builders: BTreeMap::new(),
        };
        for &t in times {
            family.ensure(t)?;
        }
        Ok(family)
    }

    fn ensure(&mut self, t: f64) -> Result<()> {
        let order = self.basis.bucket_order(&self.symbol, self.n_max, t);
        if !self.builders.contains_key(&order) {
            let b = self.basis.sample(&self.symbol, self.n_max, order)?;
            self.builders.insert(order, b);
        }
        Ok(())
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn symbol(&self) -> &SymbolSpec {
        &self.symbol
    }

    pub fn index(&self) -> crate::IndexSet {
        self.basis.index_set(self.n_max)
    }

    /// The builder for the bucket of `t`.
    pub fn builder(&self, t: f64) -> Result<&KernelBuilder> {
        let order = self.basis.bucket_order(&self.symbol, self.n_max, t);
        self.builders.get(&order).ok_or(Error::QuadratureTooLow {
            order: self.builders.keys().last().copied().unwrap_or(0),
            required: order,
        })
    }

    pub fn builders(&self) -> impl Iterator<Item = &KernelBuilder> {
        self.builders.values()
    }

    pub fn kernel(&self, t: f64) -> Result<KernelTable> {
        self.builder(t)?.kernel(t)
    }

    /// `W_t f` in storage order for every `t`.
    pub fn apply_all(&self, f: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
        let projections: BTreeMap<usize, _> = self
            .builders
            .iter()
            .map(|(&o, b)| (o, b.project(f)))
            .collect();
        times
            .iter()
            .map(|&t| {
                let order = self.basis.bucket_order(&self.symbol, self.n_max, t);
                let b = self.builders.get(&order).ok_or(Error::QuadratureTooLow {
                    order: 0,
                    required: order,
                })?;
                b.evaluate(&projections[&order], t)
            })
            .collect()
    }
}

/// `W_* f(n) = sup_t |W_t f(n)|`. The sup is taken over the grid (which
/// should include `0`) and then sharpened by a golden-section search around
/// every maximum that falls strictly inside the grid.
pub fn maximal_operator(
    family: &KernelFamily,
    f: &SequenceData,
    grid: &TimeGrid,
) -> Result<SequenceData> {
    let times = &grid.points;
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid"));
    }
    let index = family.index();
    let dense = f.to_dense(index)?;
    let mut best: Vec<f64> = dense.iter().map(|v| math::abs(*v)).collect();
    let mut arg: Vec<Option<usize>> = vec![None; best.len()];
    for (j, u) in family.apply_all(&dense, times)?.into_iter().enumerate() {
        for (p, v) in u.into_iter().enumerate() {
            if math::abs(v) > best[p] {
                best[p] = math::abs(v);
                arg[p] = Some(j);
            }
        }
    }
    let mut projections = BTreeMap::new();
    for (p, j) in arg.iter().enumerate() {
        let Some(j) = *j else { continue };
        if j == 0 || j + 1 >= times.len() {
            continue;
        }
        let (lo, hi) = (times[j - 1], times[j + 1]);
        let builder = family.builder(hi)?;
        if !projections.contains_key(&builder.order) {
            projections.insert(builder.order, builder.project(&dense));
        }
        let proj = &projections[&builder.order];
        let value = |t: f64| builder.evaluate_at(proj, t, p).map(math::abs);
        best[p] = best[p].max(golden_max(value, lo, hi)?);
    }
    Ok(SequenceData::from_dense(index, best))
}

/// Maximum of a unimodal `g` on `[lo, hi]`, searched in `ln t` when `lo > 0`.
fn golden_max<G: Fn(f64) -> Result<f64>>(g: G, lo: f64, hi: f64) -> Result<f64> {
    let log = lo > 0.0;
    let (to, from): (fn(f64) -> f64, fn(f64) -> f64) = if log {
        (math::ln, math::exp)
    } else {
        (|x| x, |x| x)
    };
    let ratio = 0.5 * (math::sqrt(5.0) - 1.0);
    let (mut a, mut b) = (to(lo), to(hi));
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(from(c))?, g(from(d))?);
    for _ in 0..48 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(from(c))?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(from(d))?;
        }
    }
    Ok(gc.max(gd))
}
