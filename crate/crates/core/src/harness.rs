//! Weighted sequence norms, discrete Muckenhoupt constants, empirical
//! Calderon-Zygmund kernel constants and maximal-operator probes.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::linalg::Matrix;
use crate::math;
use crate::semigroup::{maximal_operator, KernelFamily, KernelTable, SequenceData, TimeGrid};

/// How a weight was generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightTag {
    Unit,
    /// `(1 + |n|)^gamma`.
    Power(f64),
    Custom,
}

/// A strictly positive weight on the contiguous window `start..start+len`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSeq {
    pub start: i64,
    pub values: Vec<f64>,
    pub tag: WeightTag,
}

impl WeightSeq {
    pub fn new(start: i64, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "weights must be positive and finite",
            ));
        }
        Ok(Self {
            start,
            values,
            tag: WeightTag::Custom,
        })
    }

    pub fn unit(lo: i64, hi: i64) -> Self {
        Self {
            start: lo,
            values: vec![1.0; (hi - lo + 1) as usize],
            tag: WeightTag::Unit,
        }
    }

    /// `(1 + |n|)^gamma` on `lo..=hi`.
    pub fn power(gamma: f64, lo: i64, hi: i64) -> Self {
        Self {
            start: lo,
            values: (lo..=hi)
                .map(|n| math::pow(1.0 + n.unsigned_abs() as f64, gamma))
                .collect(),
            tag: WeightTag::Power(gamma),
        }
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<f64> {
        if n < self.start || n > self.end() {
            None
        } else {
            Some(self.values[(n - self.start) as usize])
        }
    }

    fn at(&self, n: i64) -> Result<f64> {
        self.get(n).ok_or(Error::SupportOutOfRange { index: n })
    }
}

/// The `A_p` constant of `w` restricted to `window = (lo, hi)`:
/// `sup_{I} |I|^{-p} (sum_I w) (sum_I w^{-1/(p-1)})^{p-1}` for `p > 1`, and
/// `sup_I (|I|^{-1} sum_I w) max_I w^{-1}` for `p = 1`.
///
/// Sums are taken over normalised weights and combined in logs, so large
/// exponents do not overflow.
pub fn ap_constant(w: &WeightSeq, p: f64, window: (i64, i64)) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument("p must be at least 1"));
    }
    let (lo, hi) = window;
    if hi < lo {
        return Err(Error::EmptyRange);
    }
    let vals: Vec<f64> = (lo..=hi).map(|n| w.at(n)).collect::<Result<_>>()?;
    let logs: Vec<f64> = vals.iter().map(|v| math::ln(*v)).collect();
    let lmax = math::max_of(&logs);
    let scaled: Vec<f64> = logs.iter().map(|l| math::exp(l - lmax)).collect();
    let len = vals.len();
    let mut prefix = vec![0.0; len + 1];
    for i in 0..len {
        prefix[i + 1] = prefix[i] + scaled[i];
    }
    let mut best = f64::NEG_INFINITY;
    if p == 1.0 {
        for a in 0..len {
            let mut min_log = f64::INFINITY;
            for b in a..len {
                min_log = min_log.min(logs[b]);
                let avg = (prefix[b + 1] - prefix[a]) / (b - a + 1) as f64;
                // ln(avg * e^{lmax}) - min_log
                best = best.max(math::ln(avg) + lmax - min_log);
            }
        }
    } else {
        let e = -1.0 / (p - 1.0);
        let dual_logs: Vec<f64> = logs.iter().map(|l| e * l).collect();
        let dmax = math::max_of(&dual_logs);
        let mut dual = vec![0.0; len + 1];
        for i in 0..len {
            dual[i + 1] = dual[i] + math::exp(dual_logs[i] - dmax);
        }
        for a in 0..len {
            for b in a..len {
                let n = (b - a + 1) as f64;
                let s1 = prefix[b + 1] - prefix[a];
                let s2 = dual[b + 1] - dual[a];
                let v = -p * math::ln(n) + math::ln(s1) + lmax + (p - 1.0) * (math::ln(s2) + dmax);
                best = best.max(v);
            }
        }
    }
    Ok(math::exp(best))
}

/// Outcome of a window-doubling study of `ap_constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApGrowth {
    pub windows: Vec<i64>,
    pub constants: Vec<f64>,
    /// Ratio of the last two constants.
    pub last_ratio: f64,
    pub in_class: bool,
}

/// `A_p` constants of `(1 + |n|)^gamma` on `0..=base 2^j`, `j < doublings`;
/// classified as in `A_p` when the last doubling changes the constant by at
/// most `threshold` (relative).
pub fn ap_growth(
    gamma: f64,
    p: f64,
    base: i64,
    doublings: usize,
    threshold: f64,
) -> Result<ApGrowth> {
    if doublings < 2 || base < 1 {
        return Err(Error::InvalidArgument("need at least two windows"));
    }
    let largest = base << (doublings - 1);
    let w = WeightSeq::power(gamma, 0, largest);
    let windows: Vec<i64> = (0..doublings).map(|j| base << j).collect();
    let constants = windows
        .iter()
        .map(|&n| ap_constant(&w, p, (0, n)))
        .collect::<Result<Vec<_>>>()?;
    let k = constants.len();
    let last_ratio = constants[k - 1] / constants[k - 2];
    Ok(ApGrowth {
        windows,
        constants,
        last_ratio,
        in_class: last_ratio - 1.0 <= threshold,
    })
}

/// `(sum |f|^p w)^{1/p}`.
pub fn weighted_norm(f: &SequenceData, w: &WeightSeq, p: f64) -> Result<f64> {
    let mut total = 0.0;
    for (&i, &v) in f.indices.iter().zip(&f.values) {
        total += math::pow(math::abs(v), p) * w.at(i)?;
    }
    Ok(math::pow(total, 1.0 / p))
}

/// `sup_{s > 0} s w({|f| > s})`, attained as `s` increases to a value of `|f|`.
pub fn weak_norm(f: &SequenceData, w: &WeightSeq) -> Result<f64> {
    let mut pairs: Vec<(f64, f64)> = f
        .indices
        .iter()
        .zip(&f.values)
        .map(|(&i, &v)| Ok((math::abs(v), w.at(i)?)))
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: f64 = 0.0;
    let mut mass = 0.0;
    let mut i = 0;
    while i < pairs.len() {
        let level = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == level {
            mass += pairs[i].1;
            i += 1;
        }
        best = best.max(level * mass);
    }
    Ok(best)
}

/// Index ranges used by `standard_kernel_check`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRanges {
    /// Both `n` and `m` run over `lo..=hi`.
    pub lo: i64,
    pub hi: i64,
}

/// Empirical constants of the local standard-kernel conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEstimateReport {
    /// `sup |n - m| |K_t(n, m)|` over `n != m`.
    pub c1: f64,
    pub c1_at: (f64, i64, i64),
    /// `sup |n - m|^2 |K_t(n+1, m) - K_t(n, m)|` over the local range
    /// `(2/3) m <= n <= (3/2) m`, `n != m, m +- 1`.
    pub c2: f64,
    pub c2_at: (f64, i64, i64),
    /// `sup_t max_n |K_t(n, n)|`.
    pub diag_max: f64,
    pub ranges: KernelRanges,
    pub t_count: usize,
    pub t_min: f64,
    pub t_max: f64,
}

/// Accumulates the kernel constants over tables at many `t`.
#[derive(Debug, Clone)]
pub struct KernelEstimator {
    report: KernelEstimateReport,
}

impl KernelEstimator {
    pub fn new(ranges: KernelRanges) -> Self {
        Self {
            report: KernelEstimateReport {
                c1: 0.0,
                c1_at: (0.0, 0, 0),
                c2: 0.0,
                c2_at: (0.0, 0, 0),
                diag_max: 0.0,
                ranges,
                t_count: 0,
                t_min: f64::INFINITY,
                t_max: f64::NEG_INFINITY,
            },
        }
    }

    pub fn observe(&mut self, table: &KernelTable) -> Result<()> {
        let r = &mut self.report;
        let (lo, hi) = (r.ranges.lo, r.ranges.hi);
        let get = |n: i64, m: i64| {
            table
                .get(n, m)
                .ok_or(Error::SupportOutOfRange { index: n.max(m) })
        };
        for n in lo..=hi {
            r.diag_max = r.diag_max.max(math::abs(get(n, n)?));
            for m in lo..=hi {
                if n == m {
                    continue;
                }
                let k = get(n, m)?;
                let d = (n - m).unsigned_abs() as f64;
                let v = d * math::abs(k);
                if v > r.c1 {
                    r.c1 = v;
                    r.c1_at = (table.t, n, m);
                }
                let local = 3 * n >= 2 * m && 2 * n <= 3 * m && (n - m).abs() > 1 && n < hi;
                if local {
                    let diff = get(n + 1, m)? - k;
                    let v = d * d * math::abs(diff);
                    if v > r.c2 {
                        r.c2 = v;
                        r.c2_at = (table.t, n, m);
                    }
                }
            }
        }
        r.t_count += 1;
        r.t_min = r.t_min.min(table.t);
        r.t_max = r.t_max.max(table.t);
        Ok(())
    }

    pub fn finish(self) -> Result<KernelEstimateReport> {
        if self.report.t_count == 0 || self.report.ranges.hi - self.report.ranges.lo < 2 {
            return Err(Error::EmptyRange);
        }
        Ok(self.report)
    }
}

/// One-shot form of `KernelEstimator`.
pub fn standard_kernel_check<'a, I>(tables: I, ranges: KernelRanges) -> Result<KernelEstimateReport>
where
    I: IntoIterator<Item = &'a KernelTable>,
{
    let mut est = KernelEstimator::new(ranges);
    for t in tables {
        est.observe(t)?;
    }
    est.finish()
}

/// A least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    /// Root-mean-square residual in log space.
    pub rms: f64,
}

/// Entries below this size are roundoff and are left out of slope fits.
pub const NOISE_FLOOR: f64 = 1e-13;

fn fit_line(xs: &[f64], ys: &[f64]) -> Option<SlopeFit> {
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = math::sqrt(
        xs.iter()
            .zip(ys)
            .map(|(x, y)| {
                let r = y - intercept - slope * x;
                r * r
            })
            .sum::<f64>()
            / n as f64,
    );
    Some(SlopeFit {
        slope,
        intercept,
        points: n,
        rms,
    })
}

/// `sup_t |K_t(n, m)|` and `sup_t |K_t(n+1, m) - K_t(n, m)|` over the
/// tables seen so far. The standard-kernel bounds hold uniformly in `t`, so
/// decay rates are read off these envelopes rather than single tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub index: IndexSet,
    pub kernel: Matrix,
    /// Row `p` holds the forward difference from position of `n` to `n + 1`.
    pub difference: Matrix,
    pub t_count: usize,
}

impl Envelope {
    pub fn new(index: IndexSet) -> Self {
        let size = index.size();
        Self {
            index,
            kernel: Matrix::zeros(size, size),
            difference: Matrix::zeros(size, size),
            t_count: 0,
        }
    }

    pub fn observe(&mut self, table: &KernelTable) -> Result<()> {
        if table.index != self.index {
            return Err(Error::Incompatible(
                "table window differs from the envelope",
            ));
        }
        let idx = self.index;
        let size = idx.size();
        for a in 0..size {
            let n = idx.index_at(a);
            let next = idx.position(n + 1).filter(|_| n >= 0);
            for b in 0..size {
                let k = table.entries[(a, b)];
                let e = &mut self.kernel[(a, b)];
                *e = e.max(math::abs(k));
                if let Some(c) = next {
                    let d = &mut self.difference[(a, b)];
                    *d = d.max(math::abs(table.entries[(c, b)] - k));
                }
            }
        }
        self.t_count += 1;
        Ok(())
    }

    fn fit(&self, m: &Matrix, n: i64, skip: i64) -> Result<Option<SlopeFit>> {
        let a = self
            .index
            .position(n)
            .ok_or(Error::SupportOutOfRange { index: n })?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for j in n / 2..=2 * n {
            if (j - n).abs() <= skip {
                continue;
            }
            let b = self
                .index
                .position(j)
                .ok_or(Error::SupportOutOfRange { index: j })?;
            let v = m[(a, b)];
            if v > NOISE_FLOOR {
                xs.push(math::ln((n - j).unsigned_abs() as f64));
                ys.push(math::ln(v));
            }
        }
        Ok(fit_line(&xs, &ys))
    }

    /// Slope of `ln sup_t |K_t(n, m)|` against `ln |n - m|` for
    /// `m` in `n/2..=2n`, `m != n`; entries under `NOISE_FLOOR` are skipped.
    pub fn kernel_slope(&self, n: i64) -> Result<Option<SlopeFit>> {
        self.fit(&self.kernel, n, 0)
    }

    /// The same for `sup_t |K_t(n+1, m) - K_t(n, m)|`, `m != n, n +- 1`.
    pub fn difference_slope(&self, n: i64) -> Result<Option<SlopeFit>> {
        if n < 0 || self.index.position(n + 1).is_none() {
            return Err(Error::SupportOutOfRange { index: n + 1 });
        }
        self.fit(&self.difference, n, 1)
    }
}

/// Summary of `||W_* f|| / ||f||` over a family of sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeStats {
    pub max: f64,
    pub mean: f64,
    pub min: f64,
    pub count: usize,
}

impl ProbeStats {
    pub fn from_ratios(ratios: &[f64]) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::EmptyRange);
        }
        Ok(Self {
            max: math::max_of(ratios),
            min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
            mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
            count: ratios.len(),
        })
    }
}

/// `||W_* f||_{p,w} / ||f||_{p,w}`, or for `p = 1` the weak-type ratio
/// `||W_* f||_{1,inf,w} / ||f||_{1,w}`.
pub fn maximal_ratio(
    family: &KernelFamily,
    grid: &TimeGrid,
    w: &WeightSeq,
    p: f64,
    f: &SequenceData,
) -> Result<f64> {
    let wf = maximal_operator(family, f, grid)?;
    let denom = weighted_norm(f, w, p)?;
    let num = if p == 1.0 {
        weak_norm(&wf, w)?
    } else {
        weighted_norm(&wf, w, p)?
    };
    Ok(num / denom)
}

/// Sequential probe over a family; the CLI runs the same ratios in parallel.
pub fn maximal_inequality_probe(
    family: &KernelFamily,
    grid: &TimeGrid,
    w: &WeightSeq,
    p: f64,
    fs: &[SequenceData],
) -> Result<ProbeStats> {
    let ratios = fs
        .iter()
        .map(|f| maximal_ratio(family, grid, w, p, f))
        .collect::<Result<Vec<_>>>()?;
    ProbeStats::from_ratios(&ratios)
}

/// `count` random sequences supported on `lo..=hi`, seeded. Values are
/// uniform in `[0, 1)` when `positive`, else in `[-1, 1)`.
pub fn random_family(
    seed: u64,
    count: usize,
    lo: i64,
    hi: i64,
    positive: bool,
) -> Vec<SequenceData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let indices: Vec<i64> = (lo..=hi).collect();
            let values = indices
                .iter()
                .map(|_| {
                    let u: f64 = rng.gen();
                    if positive {
                        u
                    } else {
                        2.0 * u - 1.0
                    }
                })
                .collect();
            SequenceData::new(indices, values)
        })
        .collect()
}

/// `count` random sequences with random support size in `1..=max_len`
/// placed inside `lo..=hi`, values in `[-1, 1)`.
pub fn random_sparse_family(
    seed: u64,
    count: usize,
    lo: i64,
    hi: i64,
    max_len: usize,
) -> Vec<SequenceData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.min((hi - lo + 1) as usize));
            let start = rng.gen_range(lo..=hi + 1 - len as i64);
            let indices: Vec<i64> = (start..start + len as i64).collect();
            let values = indices.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            SequenceData::new(indices, values)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weight_is_exactly_one() {
        let w = WeightSeq::unit(0, 50);
        for p in [1.0, 1.5, 2.0, 4.0] {
            let c = ap_constant(&w, p, (0, 50)).unwrap();
            assert!((c - 1.0).abs() < 1e-12, "p={p} c={c}");
        }
    }

    #[test]
    fn delta_norms() {
        let f = SequenceData::delta(0);
        let w = WeightSeq::unit(-3, 3);
        assert_eq!(weighted_norm(&f, &w, 2.0).unwrap(), 1.0);
        assert_eq!(weighted_norm(&f, &w, 1.0).unwrap(), 1.0);
        assert_eq!(weak_norm(&f, &w).unwrap(), 1.0);
    }

    #[test]
    fn weak_norm_by_hand() {
        // levels 3, 2, 2, 1 with unit weights: max(3*1, 2*3, 1*4) = 6
        let f = SequenceData::new(vec![0, 1, 2, 3], vec![3.0, -2.0, 2.0, 1.0]);
        let w = WeightSeq::unit(0, 3);
        assert_eq!(weak_norm(&f, &w).unwrap(), 6.0);
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightSeq::new(0, vec![1.0, 0.0]).is_err());
        let w = WeightSeq::power(0.5, -2, 2);
        assert_eq!(w.get(-2), Some(math::sqrt(3.0)));
        assert_eq!(w.get(3), None);
    }

    #[test]
    fn slope_of_a_power_law() {
        let xs: Vec<f64> = (1..20).map(|k| math::ln(k as f64)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.3 - 2.0 * x).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12 && fit.rms < 1e-12);
    }

    #[test]
    fn seeded_families_repeat() {
        let a = random_family(7, 3, 0, 5, true);
        let b = random_family(7, 3, 0, 5, true);
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|f| f.values.iter().all(|&v| (0.0..1.0).contains(&v))));
    }
}
