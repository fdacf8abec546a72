//! Ambiguity function of the prototype pulse, its extremes over the
//! spread rectangle, and the first-order coefficients `c_m`, `c_M`.
//!
//! Everything is computed on the spectral side. With the convention
//! `A(ν, τ) = ∫ g(t) g*(t - τ) e^{-j2πνt} dt` and a real even spectrum,
//!
//! ```text
//! A(ν, τ) = ∫ G(u + ν) G(u) e^{j2πuτ} du
//! ```
//!
//! which is a finite-interval integral of a piecewise smooth function.
//!
//! Lattice sums over time shifts `τ - kT` are resummed exactly with the
//! Poisson formula: for `h(s) = ∫ H(u) e^{j2πus} du` with `H` supported on
//! an interval of width `w`,
//!
//! ```text
//! Σ_k |h(τ - kT)|² = (1/T) Σ_{|m| < wT} R(m/T) e^{j2πmτ/T},  R(φ) = ∫ H(u) H(u - φ) du
//! ```
//!
//! so only a handful of non-oscillatory integrals are needed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{PulseSpec, WHLattice};
use crate::quad::{self, DEFAULT_TOL};
use crate::search;

/// Coarse grid size per axis for the extremal searches.
pub const SEARCH_GRID: usize = 65;
/// Argument tolerance of the refinement, in units of the rectangle side.
pub const SEARCH_TOL: f64 = 1e-12;

/// Doppler-delay rectangle `[-ν₀, ν₀] × [-τ₀, τ₀]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadRect {
    pub max_doppler: f64,
    pub max_delay: f64,
}

impl SpreadRect {
    pub fn new(max_doppler: f64, max_delay: f64) -> Result<Self> {
        if !(max_doppler >= 0.0 && max_doppler.is_finite()) {
            return Err(Error::domain("max_doppler", max_doppler, "nonnegative and finite"));
        }
        if !(max_delay >= 0.0 && max_delay.is_finite()) {
            return Err(Error::domain("max_delay", max_delay, "nonnegative and finite"));
        }
        Ok(SpreadRect { max_doppler, max_delay })
    }

    /// Square rectangle of area `spread`: `ν₀ = τ₀ = sqrt(spread) / 2`.
    pub fn square(spread: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&spread) {
            return Err(Error::domain("spread", spread, "0 <= spread < 1"));
        }
        let side = 0.5 * spread.sqrt();
        Self::new(side, side)
    }

    /// `Δ = 4 τ₀ ν₀`.
    pub fn spread(&self) -> f64 {
        4.0 * self.max_delay * self.max_doppler
    }

    pub fn is_degenerate(&self) -> bool {
        self.max_doppler == 0.0 || self.max_delay == 0.0
    }

    pub fn dilate(&self, beta: f64) -> Self {
        SpreadRect {
            max_doppler: self.max_doppler * beta,
            max_delay: self.max_delay / beta,
        }
    }
}

/// A point in the Doppler-delay plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DopplerDelay {
    pub doppler: f64,
    pub delay: f64,
}

/// How the doubly infinite lattice sum was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeTruncation {
    /// Largest `|n|` whose Doppler shift overlaps the pulse spectrum; the
    /// n-sum is exact over this range.
    pub doppler_radius: usize,
    /// Largest alias index `m` in the resummed delay sum (0 when the
    /// Taylor route was used and no lattice sum was formed).
    pub delay_aliases: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityExtremes {
    /// `min |A|²` over the rectangle.
    pub m_g: f64,
    /// `max Σ_{(k,n)≠(0,0)} |A(ν - nF, τ - kT)|²` over the rectangle.
    #[serde(rename = "M_g")]
    pub big_m_g: f64,
    pub argmin: DopplerDelay,
    pub argmax: DopplerDelay,
    pub lattice_truncation: LatticeTruncation,
}

impl AmbiguityExtremes {
    pub fn validate(&self) -> Result<()> {
        if !(self.m_g >= 0.0 && self.m_g <= 1.0 + 1e-12) {
            return Err(Error::Extremes(format!("m_g = {} not in [0, 1]", self.m_g)));
        }
        if !(self.big_m_g >= 0.0 && self.big_m_g.is_finite()) {
            return Err(Error::Extremes(format!("M_g = {} is negative", self.big_m_g)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorCoeffs {
    /// Curvature of `1 - m_g` in `Δ`.
    #[serde(rename = "c_m")]
    pub c_min: f64,
    /// Slope of `M_g` in `Δ`.
    #[serde(rename = "c_M")]
    pub c_max: f64,
    pub time_dispersion_sq: f64,
    pub freq_dispersion_sq: f64,
}

/// `∫ kernel(u) e^{j2πuτ} du` over `supp G(u) ∩ supp G(u + ν)`.
fn overlap_transform<K: Fn(f64) -> f64>(p: &PulseSpec, doppler: f64, delay: f64, kernel: K) -> Result<Complex64> {
    let span = overlap_span(p, doppler);
    let Some((lo, hi)) = span else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let breaks = overlap_breaks(p, doppler);
    let w = 2.0 * PI * delay;
    let est = quad::integrate_pieces(
        |u| {
            let k = kernel(u);
            let (s, c) = (w * u).sin_cos();
            Complex64::new(k * c, k * s)
        },
        lo,
        hi,
        &breaks,
        DEFAULT_TOL,
    )?;
    Ok(est.value)
}

fn overlap_span(p: &PulseSpec, doppler: f64) -> Option<(f64, f64)> {
    let b = p.band_edge();
    let lo = (-b).max(-b - doppler);
    let hi = b.min(b - doppler);
    (hi > lo).then_some((lo, hi))
}

fn overlap_breaks(p: &PulseSpec, doppler: f64) -> Vec<f64> {
    let bp = p.breakpoints();
    bp.iter().copied().chain(bp.iter().map(|x| x - doppler)).collect()
}

/// `A(ν, τ) = ∫ g(t) g*(t - τ) e^{-j2πνt} dt`.
pub fn ambiguity(p: &PulseSpec, doppler: f64, delay: f64) -> Result<Complex64> {
    overlap_transform(p, doppler, delay, |u| p.eval_freq(u + doppler) * p.eval_freq(u))
}

/// `|A(ν, τ)|²`.
pub fn ambiguity_sq(p: &PulseSpec, doppler: f64, delay: f64) -> Result<f64> {
    ambiguity(p, doppler, delay).map(|a| a.norm_sqr())
}

/// Partial derivatives `(∂A/∂ν, ∂A/∂τ)` at `(ν, τ)`.
pub fn ambiguity_gradient(p: &PulseSpec, doppler: f64, delay: f64) -> Result<(Complex64, Complex64)> {
    let d_doppler = overlap_transform(p, doppler, delay, |u| {
        p.eval_freq_derivative(u + doppler) * p.eval_freq(u)
    })?;
    let d_delay = overlap_transform(p, doppler, delay, |u| {
        2.0 * PI * u * p.eval_freq(u + doppler) * p.eval_freq(u)
    })? * Complex64::new(0.0, 1.0);
    Ok((d_doppler, d_delay))
}

/// Lattice-point derivatives `(A^(ν)(k,n), A^(τ)(k,n))`, i.e. the gradient
/// of `A` at `(-nF, -kT)`.
pub fn lattice_derivatives(p: &PulseSpec, lat: &WHLattice, k: i64, n: i64) -> Result<(Complex64, Complex64)> {
    ambiguity_gradient(p, -(n as f64) * lat.freq_step, -(k as f64) * lat.time_step)
}

/// Range of `n` for which `G(u)` and `G(u + doppler - nF)` overlap.
fn doppler_indices(p: &PulseSpec, lat: &WHLattice, doppler: f64) -> std::ops::RangeInclusive<i64> {
    let reach = 2.0 * p.band_edge();
    let lo = ((doppler - reach) / lat.freq_step).floor() as i64;
    let hi = ((doppler + reach) / lat.freq_step).ceil() as i64;
    lo..=hi
}

/// `Σ_k |∫ H(u) e^{j2πu(τ - kT)} du|²` for the kernel `H` of an overlap at
/// Doppler offset `doppler`, by Poisson resummation. Returns the sum and the
/// number of aliases used.
fn delay_lattice_energy<K: Fn(f64) -> f64>(
    p: &PulseSpec,
    doppler: f64,
    delay: f64,
    time_step: f64,
    kernel: K,
) -> Result<(f64, usize)> {
    let Some((lo, hi)) = overlap_span(p, doppler) else {
        return Ok((0.0, 0));
    };
    let width = hi - lo;
    let breaks = overlap_breaks(p, doppler);
    let mut total = 0.0;
    let mut m = 0usize;
    loop {
        let shift = m as f64 / time_step;
        if shift >= width {
            break;
        }
        let mut cuts = breaks.clone();
        cuts.extend(breaks.iter().map(|x| x + shift));
        let r = quad::integrate_pieces(|u| kernel(u) * kernel(u - shift), lo + shift, hi, &cuts, DEFAULT_TOL)?;
        if m == 0 {
            total += r.value;
        } else {
            total += 2.0 * r.value * (2.0 * PI * m as f64 * delay / time_step).cos();
        }
        m += 1;
    }
    Ok((total / time_step, m.saturating_sub(1)))
}

/// Interference weight `Σ_{(k,n)≠(0,0)} |A(ν - nF, τ - kT)|²`.
pub fn interference_sum(p: &PulseSpec, lat: &WHLattice, doppler: f64, delay: f64) -> Result<f64> {
    interference_sum_with_truncation(p, lat, doppler, delay).map(|(v, _)| v)
}

fn interference_sum_with_truncation(
    p: &PulseSpec,
    lat: &WHLattice,
    doppler: f64,
    delay: f64,
) -> Result<(f64, LatticeTruncation)> {
    let mut total = 0.0;
    let mut trunc = LatticeTruncation {
        doppler_radius: 0,
        delay_aliases: 0,
    };
    for n in doppler_indices(p, lat, doppler) {
        let offset = doppler - n as f64 * lat.freq_step;
        let (s, aliases) = delay_lattice_energy(p, offset, delay, lat.time_step, |u| {
            p.eval_freq(u + offset) * p.eval_freq(u)
        })?;
        if s != 0.0 {
            trunc.doppler_radius = trunc.doppler_radius.max(n.unsigned_abs() as usize);
            trunc.delay_aliases = trunc.delay_aliases.max(aliases);
        }
        total += s;
    }
    let own = ambiguity_sq(p, doppler, delay)?;
    Ok(((total - own).max(0.0), trunc))
}

/// The same lattice sum evaluated term by term with `|k| <= k_radius`.
pub fn interference_sum_direct(
    p: &PulseSpec,
    lat: &WHLattice,
    doppler: f64,
    delay: f64,
    k_radius: usize,
) -> Result<f64> {
    let k_radius = k_radius as i64;
    let mut total = 0.0;
    for n in doppler_indices(p, lat, doppler) {
        let offset = doppler - n as f64 * lat.freq_step;
        if overlap_span(p, offset).is_none() {
            continue;
        }
        for k in -k_radius..=k_radius {
            if k == 0 && n == 0 {
                continue;
            }
            total += ambiguity_sq(p, offset, delay - k as f64 * lat.time_step)?;
        }
    }
    Ok(total)
}

/// Direct summation with `k_radius` doubled from 8 until the increment
/// falls below `tol`. Returns the value and the final radius.
pub fn interference_sum_adaptive(
    p: &PulseSpec,
    lat: &WHLattice,
    doppler: f64,
    delay: f64,
    tol: f64,
    max_radius: usize,
) -> Result<(f64, usize)> {
    let mut radius = 8;
    let mut value = interference_sum_direct(p, lat, doppler, delay, radius)?;
    while radius < max_radius {
        let next = interference_sum_direct(p, lat, doppler, delay, 2 * radius)?;
        let inc = (next - value).abs();
        radius *= 2;
        value = next;
        if inc < tol {
            break;
        }
    }
    Ok((value, radius))
}

fn scale_point(rect: &SpreadRect, u: f64, v: f64) -> DopplerDelay {
    DopplerDelay {
        doppler: u * rect.max_doppler,
        delay: v * rect.max_delay,
    }
}

/// `m_g = min |A|²` over the rectangle. The pulse is real and even, so
/// `|A|` is symmetric in both arguments and only the first quadrant is searched.
pub fn min_ambiguity_sq(p: &PulseSpec, rect: &SpreadRect) -> Result<(f64, DopplerDelay)> {
    if rect.is_degenerate() {
        return Ok((
            1.0,
            DopplerDelay {
                doppler: 0.0,
                delay: 0.0,
            },
        ));
    }
    // surface the first quadrature failure instead of searching a NaN landscape
    ambiguity_sq(p, rect.max_doppler, rect.max_delay)?;
    let best = search::grid_then_refine(
        |u, v| {
            let pt = scale_point(rect, u, v);
            ambiguity_sq(p, pt.doppler, pt.delay).unwrap_or(f64::NAN)
        },
        SEARCH_GRID,
        SEARCH_TOL,
    );
    Ok((best.value, scale_point(rect, best.u, best.v)))
}

/// `M_g`: maximum of [`interference_sum`] over the rectangle.
pub fn max_interference(
    p: &PulseSpec,
    lat: &WHLattice,
    rect: &SpreadRect,
) -> Result<(f64, DopplerDelay, LatticeTruncation)> {
    let (_, trunc) = interference_sum_with_truncation(p, lat, rect.max_doppler, rect.max_delay)?;
    if rect.is_degenerate() {
        return Ok((
            0.0,
            DopplerDelay {
                doppler: 0.0,
                delay: 0.0,
            },
            trunc,
        ));
    }
    let best = search::grid_then_refine(
        |u, v| {
            let pt = scale_point(rect, u, v);
            -interference_sum(p, lat, pt.doppler, pt.delay).unwrap_or(f64::NAN)
        },
        SEARCH_GRID,
        SEARCH_TOL,
    );
    Ok((-best.value, scale_point(rect, best.u, best.v), trunc))
}

/// Both extremes by direct search.
pub fn ambiguity_extremes(p: &PulseSpec, lat: &WHLattice, rect: &SpreadRect) -> Result<AmbiguityExtremes> {
    let (m_g, argmin) = min_ambiguity_sq(p, rect)?;
    let (big_m_g, argmax, lattice_truncation) = max_interference(p, lat, rect)?;
    Ok(AmbiguityExtremes {
        m_g,
        big_m_g,
        argmin,
        argmax,
        lattice_truncation,
    })
}

/// `c_m = π² (∫t²|g|² + ∫f²|G|²)`.
pub fn taylor_c_min(p: &PulseSpec) -> Result<f64> {
    let m = p.dispersion_moments()?;
    Ok(PI * PI * (m.time_dispersion_sq + m.freq_dispersion_sq))
}

/// `c_M = Σ_{(k,n)≠(0,0)} (|A^(ν)(k,n)|² + |A^(τ)(k,n)|²) / 4`.
pub fn taylor_c_max(p: &PulseSpec, lat: &WHLattice) -> Result<f64> {
    let mut total = 0.0;
    for n in doppler_indices(p, lat, 0.0) {
        let offset = -(n as f64) * lat.freq_step;
        let (sd, _) = delay_lattice_energy(p, offset, 0.0, lat.time_step, |u| {
            p.eval_freq_derivative(u + offset) * p.eval_freq(u)
        })?;
        let (st, _) = delay_lattice_energy(p, offset, 0.0, lat.time_step, |u| {
            2.0 * PI * u * p.eval_freq(u + offset) * p.eval_freq(u)
        })?;
        total += sd + st;
    }
    let (d0, t0) = lattice_derivatives(p, lat, 0, 0)?;
    total -= d0.norm_sqr() + t0.norm_sqr();
    Ok(total.max(0.0) / 4.0)
}

/// `c_M` by direct summation over `|k| <= k_radius` and all overlapping `n`.
pub fn taylor_c_max_direct(p: &PulseSpec, lat: &WHLattice, k_radius: usize) -> Result<f64> {
    let k_radius = k_radius as i64;
    let mut total = 0.0;
    for n in doppler_indices(p, lat, 0.0) {
        for k in -k_radius..=k_radius {
            if k == 0 && n == 0 {
                continue;
            }
            let (d, t) = lattice_derivatives(p, lat, k, n)?;
            total += d.norm_sqr() + t.norm_sqr();
        }
    }
    Ok(total / 4.0)
}

pub fn taylor_coeffs(p: &PulseSpec, lat: &WHLattice) -> Result<TaylorCoeffs> {
    let m = p.dispersion_moments()?;
    Ok(TaylorCoeffs {
        c_min: PI * PI * (m.time_dispersion_sq + m.freq_dispersion_sq),
        c_max: taylor_c_max(p, lat)?,
        time_dispersion_sq: m.time_dispersion_sq,
        freq_dispersion_sq: m.freq_dispersion_sq,
    })
}

/// One sample of the ambiguity surface for export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub doppler: f64,
    pub delay: f64,
    pub ambiguity_sq: f64,
    pub interference_sum: f64,
}

/// `|A|²` and the interference sum on a `points × points` grid covering
/// the full rectangle, Doppler-major order.
pub fn surface_samples(p: &PulseSpec, lat: &WHLattice, rect: &SpreadRect, points: usize) -> Result<Vec<SurfaceSample>> {
    let points = points.max(2);
    let coord = |i: usize, half: f64| -half + 2.0 * half * i as f64 / (points - 1) as f64;
    let mut out = Vec::with_capacity(points * points);
    for i in 0..points {
        let doppler = coord(i, rect.max_doppler);
        for j in 0..points {
            let delay = coord(j, rect.max_delay);
            out.push(SurfaceSample {
                doppler,
                delay,
                ambiguity_sq: ambiguity_sq(p, doppler, delay)?,
                interference_sum: interference_sum(p, lat, doppler, delay)?,
            });
        }
    }
    Ok(out)
}
