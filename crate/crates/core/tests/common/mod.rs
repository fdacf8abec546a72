//! Reference computations shared by the oracle and acceptance targets.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp1};
use rustfft::FftPlanner;

/// `Σ_n H(u_n) e^{j2π u_n τ} du` on a uniform grid for every `τ = k / (N du)`,
/// computed with one inverse FFT. Returns `(τ_k, value)` for `|k| <= k_max`.
pub fn fft_transform<H: Fn(f64) -> f64>(
    h: H,
    lo: f64,
    hi: f64,
    log2_n: u32,
    pad: f64,
    k_max: usize,
) -> Vec<(f64, Complex64)> {
    let n = 1usize << log2_n;
    let du = (hi - lo) * pad / n as f64;
    let mut buf: Vec<Complex64> = (0..n).map(|i| Complex64::new(h(lo + i as f64 * du), 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let span = n as f64 * du;
    let mut out = Vec::new();
    for k in -(k_max as i64)..=k_max as i64 {
        let tau = k as f64 / span;
        let idx = k.rem_euclid(n as i64) as usize;
        let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * lo * tau);
        out.push((tau, buf[idx] * phase * du));
    }
    out
}

/// Sample mean and its standard error of `log(1 + gain X)`, `X ~ Exp(1)`.
pub fn monte_carlo_fading(gain: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let x: f64 = Exp1.sample(&mut rng);
        let v = (gain * x).ln_1p();
        s += v;
        s2 += v * v;
    }
    let mean = s / samples as f64;
    let sd = ((s2 / samples as f64 - mean * mean) / samples as f64).sqrt();
    (mean, sd)
}

/// Minimum of the penalty over `α = i / n`, `0 < i < n`.
pub fn dense_alpha_scan(r: f64, dt: f64, eps: f64, lvl: f64, n: usize) -> f64 {
    (1..n)
        .map(|i| underspread_core::bound::penalty_terms(r, dt, eps, lvl, i as f64 / n as f64).total())
        .fold(f64::INFINITY, f64::min)
}

/// Central differences of the ambiguity function in both arguments.
pub fn central_gradient(p: &underspread_core::PulseSpec, nu: f64, tau: f64, h: f64) -> (Complex64, Complex64) {
    let a = |x: f64, y: f64| underspread_core::ambiguity(p, x, y).unwrap();
    (
        (a(nu + h, tau) - a(nu - h, tau)) / (2.0 * h),
        (a(nu, tau + h) - a(nu, tau - h)) / (2.0 * h),
    )
}

/// Penalty settings covering low and high SNR and both sides of `δ̃ ≈ ε`.
pub const PENALTY_CASES: [(f64, f64, f64, f64); 4] = [
    (1e3, 2e-3, 1e-5, 3e-5),
    (10.0, 0.05, 1e-3, 1e-3),
    (1e6, 1e-3, 1e-7, 1e-7),
    (0.02, 1e-2, 1e-4, 2e-4),
];

/// Fading gains spanning the series and continued-fraction regimes.
pub const FADING_GAINS: [f64; 4] = [1e-3, 0.3, 4.0, 250.0];
