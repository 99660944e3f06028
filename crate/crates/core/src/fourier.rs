//! Trigonometric test system `e^{i n th} / sqrt(2 pi)` on `[-pi, pi]` and the
//! modified Bessel functions that give its heat kernel in closed form.

use alloc::vec::Vec;

use crate::math;

/// `e^{-t} I_k(t)` from the power series `sum_j (t/2)^{2j+k} / (j! (j+k)!)`.
///
/// Terms are positive, so the sum is accumulated in the log domain without
/// cancellation; this stays finite for large `t` where `e^{-t}` alone
/// underflows.
pub fn scaled_bessel_i(k: u32, t: f64) -> f64 {
    assert!(t >= 0.0);
    if t == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let k = k as f64;
    let log_half = math::ln(0.5 * t);
    let mut log_term = k * log_half - math::ln_gamma(k + 1.0) - t;
    let mut logs = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut j = 0.0;
    loop {
        logs.push(log_term);
        best = best.max(log_term);
        // past the peak and negligible
        if j > 0.5 * t && log_term < best - 40.0 {
            break;
        }
        log_term += 2.0 * log_half - math::ln((j + 1.0) * (j + k + 1.0));
        j += 1.0;
    }
    let sum: f64 = logs.iter().map(|&l| math::exp(l - best)).sum();
    math::exp(best + math::ln(sum))
}

/// Closed-form kernel `e^{-t} I_{|n-m|}(t)` of the symbol `cos th`.
pub fn bessel_kernel(n: i64, m: i64, t: f64) -> f64 {
    scaled_bessel_i((n - m).unsigned_abs() as u32, t)
}

/// Uniform nodes `th_j = -pi + 2 pi (j + 1/2) / count`; the trapezoid rule
/// with equal weights `2 pi / count` is exact for `e^{i k th}` with
/// `|k| < count`.
pub fn trapezoid_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| -math::PI + 2.0 * math::PI * (j as f64 + 0.5) / count as f64)
        .collect()
}
