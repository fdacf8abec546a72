//! Adaptive Gauss–Legendre quadrature on explicit panels.
//!
//! Every integrand in this crate is piecewise smooth with known kinks
//! (the flat/taper joins and band edges of the pulse spectrum and their
//! shifted copies). Callers split the range at those points; inside each
//! piece the integrand is analytic and a fixed-order rule converges
//! geometrically, with bisection only needed for oscillatory factors.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for a full integral.
pub const DEFAULT_TOL: f64 = 1e-13;

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 48;

/// Values that can be accumulated by the integrator.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// An integral value with its accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// via Newton iteration on P_n from the Chebyshev initial guesses.
fn legendre_rule(n: usize) -> Rule {
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Rule estimate of the integral together with the integral of `|f|`.
fn fixed<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = T::zero();
    let mut mass = 0.0;
    for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
        let y = f(mid + half * x);
        acc = acc + y * (w * half);
        mass += y.magnitude() * w * half;
    }
    (acc, mass)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by bisecting
/// panels until each panel's two-half estimate agrees with its single-panel
/// estimate.
pub fn integrate<T: QuadValue, F: Fn(f64) -> T>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate<T>> {
    integrate_ref(&f, a, b, tol)
}

fn integrate_ref<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, tol: f64) -> Result<Estimate<T>> {
    if b <= a {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
        });
    }
    let width = b - a;
    let mut total = T::zero();
    let mut error = 0.0;
    let mut failed = 0.0_f64;
    let mut mass = 0.0;
    let mut stack = vec![(a, b, fixed(f, a, b).0, 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, mass_l) = fixed(f, lo, mid);
        let (right, mass_r) = fixed(f, mid, hi);
        let refined = left + right;
        let panel_mass = mass_l + mass_r;
        let diff = (refined - whole).magnitude();
        let local_tol = tol * (hi - lo) / width;
        // rounding in the rule is of order eps times the integral of |f|
        let floor = 64.0 * f64::EPSILON * panel_mass;
        if diff <= local_tol.max(floor) {
            mass += panel_mass;
            total = total + refined;
            error += diff;
        } else if depth >= MAX_DEPTH || mid <= lo || mid >= hi {
            mass += panel_mass;
            total = total + refined;
            error += diff;
            failed = failed.max(diff);
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    if failed > 0.0 && error > tol.max(64.0 * f64::EPSILON * mass) {
        return Err(Error::Quadrature {
            achieved: error,
            requested: tol,
        });
    }
    Ok(Estimate { value: total, error })
}

/// Integrates over `[a, b]` splitting at every breakpoint that falls
/// strictly inside the range. Breakpoints need not be sorted or unique.
pub fn integrate_pieces<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<Estimate<T>> {
    if b <= a {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
        });
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (b - a));
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);
    let width = b - a;
    let mut value = T::zero();
    let mut error = 0.0;
    for w in edges.windows(2) {
        let piece = integrate_ref(&f, w[0], w[1], tol * (w[1] - w[0]) / width)?;
        value = value + piece.value;
        error += piece.error;
    }
    Ok(Estimate { value, error })
}
