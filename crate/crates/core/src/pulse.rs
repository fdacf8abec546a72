//! Root-raised-cosine prototype pulse and its Weyl–Heisenberg lattice.
//!
//! The pulse is defined by its spectrum: flat at `sqrt(period)` on
//! `|f| <= (1 - rolloff) / (2 period)`, a half-cosine shoulder up to the
//! band edge `(1 + rolloff) / (2 period)`, and zero beyond. With
//! `period = sqrt(TF)` and `rolloff = TF - 1` its time shifts by `period`
//! and frequency shifts by `period` form an orthonormal set.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseFamily {
    RootRaisedCosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub family: PulseFamily,
    /// Nyquist period of the pulse, seconds.
    pub period: f64,
    pub rolloff: f64,
    /// Lattice density `T * F` the pulse was designed for.
    pub tf_product: f64,
}

/// Builds the square-setting root-raised-cosine pulse for `1 < tf_product < 2`.
pub fn make_rrc_pulse(tf_product: f64) -> Result<PulseSpec> {
    PulseSpec::root_raised_cosine(tf_product)
}

impl PulseSpec {
    pub fn root_raised_cosine(tf_product: f64) -> Result<Self> {
        if !(tf_product > 1.0 && tf_product < 2.0) {
            return Err(Error::domain("tf_product", tf_product, "1 < TF < 2"));
        }
        Ok(PulseSpec {
            family: PulseFamily::RootRaisedCosine,
            period: tf_product.sqrt(),
            rolloff: tf_product - 1.0,
            tf_product,
        })
    }

    /// The pulse `sqrt(beta) g(beta t)`: same shape, period divided by `beta`.
    pub fn dilate(&self, beta: f64) -> Self {
        PulseSpec {
            period: self.period / beta,
            ..*self
        }
    }

    /// Upper edge of the flat part of the spectrum.
    pub fn flat_edge(&self) -> f64 {
        (1.0 - self.rolloff) / (2.0 * self.period)
    }

    /// Frequency beyond which the spectrum vanishes identically.
    pub fn band_edge(&self) -> f64 {
        (1.0 + self.rolloff) / (2.0 * self.period)
    }

    /// The spectral kinks, ascending.
    pub fn breakpoints(&self) -> [f64; 4] {
        let (f1, f2) = (self.flat_edge(), self.band_edge());
        [-f2, -f1, f1, f2]
    }

    fn taper_rate(&self) -> f64 {
        PI * self.period / (2.0 * self.rolloff)
    }

    /// Spectrum `G(f)`: real, even, nonnegative, compactly supported.
    pub fn eval_freq(&self, f: f64) -> f64 {
        let a = f.abs();
        let f1 = self.flat_edge();
        if a <= f1 {
            self.period.sqrt()
        } else if a < self.band_edge() {
            // sqrt((1 + cos x) / 2) = cos(x / 2) on the shoulder
            let arg = (self.taper_rate() * (a - f1)).min(0.5 * PI);
            self.period.sqrt() * arg.cos()
        } else {
            0.0
        }
    }

    /// Derivative `G'(f)`; one-sided values at the kinks are irrelevant to
    /// integrals and the derivative is set to the interior limit.
    pub fn eval_freq_derivative(&self, f: f64) -> f64 {
        let a = f.abs();
        let f1 = self.flat_edge();
        if a <= f1 || a >= self.band_edge() {
            0.0
        } else {
            let rate = self.taper_rate();
            -f.signum() * self.period.sqrt() * rate * (rate * (a - f1)).sin()
        }
    }

    /// Impulse response `g(t)` from the closed-form root-raised-cosine
    /// expression, with limits at its removable singularities.
    pub fn eval_time(&self, t: f64) -> f64 {
        let mu = self.rolloff;
        let x = t / self.period;
        let norm = 1.0 / self.period.sqrt();
        if x == 0.0 {
            return norm * (1.0 - mu + 4.0 * mu / PI);
        }
        let q = 4.0 * mu * x;
        let denom_factor = 1.0 - q * q;
        if (1.0 - q.abs()).abs() < 1e-6 {
            if (1.0 - q.abs()).abs() < 1e-15 {
                let s = PI / (4.0 * mu);
                return norm * mu / 2f64.sqrt() * ((1.0 + 2.0 / PI) * s.sin() + (1.0 - 2.0 / PI) * s.cos());
            }
            // catastrophic cancellation next to the singular ring; integrate the spectrum instead
            return self.eval_time_quadrature(t);
        }
        let num = (PI * x * (1.0 - mu)).sin() + q * (PI * x * (1.0 + mu)).cos();
        norm * num / (PI * x * denom_factor)
    }

    /// `g(t) = 2 ∫_0^{band_edge} G(f) cos(2π f t) df`.
    pub(crate) fn eval_time_quadrature(&self, t: f64) -> f64 {
        let f1 = self.flat_edge();
        let f2 = self.band_edge();
        quad::integrate_pieces(
            |f| self.eval_freq(f) * (2.0 * PI * f * t).cos(),
            0.0,
            f2,
            &[f1],
            DEFAULT_TOL,
        )
        .map(|e| 2.0 * e.value)
        .unwrap_or(f64::NAN)
    }

    /// Second moments `∫ t² g² dt` and `∫ f² G² df`.
    ///
    /// The time moment is evaluated through `∫ t² g² dt = ∫ G'² df / (4π²)`,
    /// which keeps both integrals on the compact spectral support.
    pub fn dispersion_moments(&self) -> Result<DispersionMoments> {
        let [lo, _, _, hi] = self.breakpoints();
        let bp = self.breakpoints();
        let time = quad::integrate_pieces(
            |f| {
                let d = self.eval_freq_derivative(f);
                d * d
            },
            lo,
            hi,
            &bp,
            DEFAULT_TOL,
        )?;
        let freq = quad::integrate_pieces(
            |f| {
                let g = self.eval_freq(f);
                f * f * g * g
            },
            lo,
            hi,
            &bp,
            DEFAULT_TOL,
        )?;
        Ok(DispersionMoments {
            time_dispersion_sq: time.value / (4.0 * PI * PI),
            freq_dispersion_sq: freq.value,
        })
    }

    /// `∫ |G(f)|² df`, which equals the time-domain energy by Parseval.
    pub fn energy(&self) -> Result<f64> {
        let bp = self.breakpoints();
        let est = quad::integrate_pieces(
            |f| {
                let g = self.eval_freq(f);
                g * g
            },
            bp[0],
            bp[3],
            &bp,
            DEFAULT_TOL,
        )?;
        Ok(est.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionMoments {
    /// `∫ t² |g(t)|² dt`, s².
    pub time_dispersion_sq: f64,
    /// `∫ f² |G(f)|² df`, Hz².
    pub freq_dispersion_sq: f64,
}

/// Weyl–Heisenberg lattice: time shifts by `time_step`, modulations by `freq_step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WHLattice {
    pub time_step: f64,
    pub freq_step: f64,
}

impl WHLattice {
    pub fn new(time_step: f64, freq_step: f64) -> Result<Self> {
        if !(time_step > 0.0 && time_step.is_finite()) {
            return Err(Error::domain("time_step", time_step, "positive and finite"));
        }
        if !(freq_step > 0.0 && freq_step.is_finite()) {
            return Err(Error::domain("freq_step", freq_step, "positive and finite"));
        }
        if time_step * freq_step < 1.0 - 1e-12 {
            return Err(Error::domain(
                "time_step*freq_step",
                time_step * freq_step,
                ">= 1 (orthonormality needs TF >= 1)",
            ));
        }
        Ok(WHLattice { time_step, freq_step })
    }

    /// `T = F = sqrt(TF)`.
    pub fn square(tf_product: f64) -> Result<Self> {
        let s = tf_product.sqrt();
        Self::new(s, s)
    }

    /// The lattice matched to a root-raised-cosine pulse: `T = period`,
    /// `F = (1 + rolloff) / period`.
    pub fn matched(pulse: &PulseSpec) -> Self {
        WHLattice {
            time_step: pulse.period,
            freq_step: (1.0 + pulse.rolloff) / pulse.period,
        }
    }

    pub fn product(&self) -> f64 {
        self.time_step * self.freq_step
    }

    pub fn dilate(&self, beta: f64) -> Self {
        WHLattice {
            time_step: self.time_step / beta,
            freq_step: self.freq_step * beta,
        }
    }
}

/// Largest deviation of `<g_{k,n}, g_{0,0}>` from `δ[k]δ[n]` over
/// `|k| <= k_max`, `|n| <= n_max`.
///
/// The inner product of `g_{k,n}` with `g` is, up to a unimodular phase,
/// the ambiguity function at `(n F, k T)`.
pub fn orthonormality_residual(p: &PulseSpec, lat: &WHLattice, k_max: i64, n_max: i64) -> Result<f64> {
    let mut worst = 0.0_f64;
    for k in -k_max..=k_max {
        for n in -n_max..=n_max {
            let a = crate::ambiguity::ambiguity(p, n as f64 * lat.freq_step, k as f64 * lat.time_step)?;
            let target = if k == 0 && n == 0 { 1.0 } else { 0.0 };
            worst = worst.max((a - target).norm());
        }
    }
    Ok(worst)
}

/// Pointwise residual of the tight-frame identity
/// `Σ_n G(f - n/T₀) G(f - n/T₀ - m T₀) = T₀ δ[m]` for `|m| <= m_max`,
/// sampled at `samples` points across one period `[0, 1/T₀)`.
pub fn tight_frame_residual(p: &PulseSpec, m_max: i64, samples: usize) -> f64 {
    let t0 = p.period;
    let edge = p.band_edge();
    let mut worst = 0.0_f64;
    for i in 0..samples {
        let f = i as f64 / (samples as f64 * t0);
        for m in -m_max..=m_max {
            let shift = m as f64 * t0;
            // only finitely many shifts overlap the support of G
            let n_lo = ((f - edge) * t0).floor() as i64 - 1;
            let n_hi = ((f + edge) * t0).ceil() as i64 + 1;
            let s: f64 = (n_lo..=n_hi)
                .map(|n| {
                    let u = f - n as f64 / t0;
                    p.eval_freq(u) * p.eval_freq(u - shift)
                })
                .sum();
            let target = if m == 0 { t0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_from_tf() {
        let p = make_rrc_pulse(1.02).unwrap();
        assert!((p.period - 1.02f64.sqrt()).abs() < 1e-15);
        assert!((p.period - 1.00995).abs() < 1e-5);
        assert!((p.rolloff - 0.02).abs() < 1e-15);
    }

    #[test]
    fn rejects_tf_outside_open_interval() {
        for tf in [1.0, 2.0, 0.5, 2.5, f64::NAN] {
            assert!(matches!(make_rrc_pulse(tf), Err(Error::Domain { .. })), "tf={tf}");
        }
    }

    #[test]
    fn flat_level_at_dc() {
        let p = make_rrc_pulse(1.02).unwrap();
        assert!((p.eval_freq(0.0) - 1.02f64.sqrt().sqrt()).abs() < 1e-15);
        assert!((p.eval_freq(p.flat_edge()) - p.period.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn band_edge_continuity() {
        let p = make_rrc_pulse(1.3).unwrap();
        let e = p.band_edge();
        assert!(p.eval_freq(e * (1.0 - 1e-12)) < 1e-9);
        assert_eq!(p.eval_freq(e), 0.0);
        assert_eq!(p.eval_freq(-e * 1.5), 0.0);
    }

    #[test]
    fn shoulder_midpoint_value() {
        // cosine argument π/2 inside the raised cosine ⇔ G² = T₀/2
        let p = make_rrc_pulse(1.2).unwrap();
        let f = p.flat_edge() + p.rolloff / (2.0 * p.period);
        assert!((p.eval_freq(f) - (p.period / 2.0).sqrt()).abs() < 1e-14);
        // and directly from the three-branch definition
        let chi = (PI * p.period / p.rolloff * (f - p.flat_edge())).cos();
        assert!((p.eval_freq(f) - (p.period / 2.0 * (1.0 + chi)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn near_brick_wall_limit() {
        let p = make_rrc_pulse(1.0 + 1e-9).unwrap();
        assert!(p.rolloff < 2e-9);
        assert!((p.band_edge() - p.flat_edge() - p.rolloff / p.period).abs() < 1e-15);
        let half = 0.5 / p.period;
        assert!((p.eval_freq(0.999 * half) - p.period.sqrt()).abs() < 1e-15);
        assert_eq!(p.eval_freq(1.001 * half), 0.0);
        assert!((p.energy().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unit_energy() {
        for tf in [1.02, 1.2, 1.5, 1.9] {
            let e = make_rrc_pulse(tf).unwrap().energy().unwrap();
            assert!((e - 1.0).abs() < 1e-10, "tf={tf} energy={e}");
        }
    }

    #[test]
    fn time_value_at_origin_matches_spectrum_integral() {
        let p = make_rrc_pulse(1.02).unwrap();
        assert!((p.eval_time(0.0) - p.eval_time_quadrature(0.0)).abs() < 1e-12);
    }

    #[test]
    fn singular_ring_is_continuous() {
        let p = make_rrc_pulse(1.2).unwrap();
        let ts = p.period / (4.0 * p.rolloff);
        let at = p.eval_time(ts);
        let q = p.eval_time_quadrature(ts);
        assert!((at - q).abs() < 1e-12, "{at} vs {q}");
        for d in [1e-9, 1e-7, 1e-5, 1e-3] {
            let near = p.eval_time(ts * (1.0 + d));
            assert!((near - p.eval_time_quadrature(ts * (1.0 + d))).abs() < 1e-10, "d={d}");
        }
        assert_eq!(p.eval_time(-ts), at);
    }

    #[test]
    fn dispersion_closed_forms() {
        // ∫G'² = π² T₀² / (4μ) on the two shoulders
        let p = make_rrc_pulse(1.02).unwrap();
        let m = p.dispersion_moments().unwrap();
        let expect_t = p.period * p.period / (16.0 * p.rolloff);
        assert!((m.time_dispersion_sq - expect_t).abs() < 1e-10 * expect_t);
        assert!(m.freq_dispersion_sq > 0.0);
    }

    #[test]
    fn lattice_validation() {
        assert!(WHLattice::new(0.5, 1.0).is_err());
        assert!(WHLattice::new(-1.0, 1.0).is_err());
        let lat = WHLattice::square(1.02).unwrap();
        assert!((lat.product() - 1.02).abs() < 1e-14);
        let p = make_rrc_pulse(1.02).unwrap();
        let m = WHLattice::matched(&p);
        assert!((m.time_step - lat.time_step).abs() < 1e-15);
        assert!((m.freq_step - lat.freq_step).abs() < 1e-15);
    }

    #[test]
    fn tight_frame_identity_holds() {
        let p = make_rrc_pulse(1.02).unwrap();
        assert!(tight_frame_residual(&p, 3, 4001) < 1e-9);
        let p = make_rrc_pulse(1.5).unwrap();
        assert!(tight_frame_residual(&p, 3, 4001) < 1e-9);
    }
}
