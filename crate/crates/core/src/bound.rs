//! Capacity lower bound for underspread Rayleigh-fading WSSUS channels
//! signalled on an orthonormal Weyl–Heisenberg set.
//!
//! With `r = TF·ρ`, `δ̃ = 2ν₀T` and `h ~ CN(0, 1)` the bound reads
//!
//! ```text
//! LB = (B/TF) { E log(1 + r(1-ε) m_g |h|² / (1 + r(M_g + ε)))
//!              - inf_{0<α<1} [ δ̃ log(1 + r/(αδ̃))
//!                            + (1-δ̃) log(1 + rε/(α(1-δ̃)))
//!                            + log(1 + r(M_g + ε)/(1-α)) ] }
//! ```
//!
//! All logarithms are natural; values are in nats/s.

use serde::{Deserialize, Serialize};

use crate::ambiguity::{self, AmbiguityExtremes, DopplerDelay, LatticeTruncation, SpreadRect, TaylorCoeffs};
use crate::error::{Error, Result};
use crate::pulse::{PulseSpec, WHLattice};
use crate::search;
use crate::special::scaled_exp_integral;

/// Below this gain `E log(1 + gX)` is evaluated from its asymptotic series.
const SMALL_GAIN: f64 = 1e-4;
/// Distance from the open end `α = 1` reported when the infimum is a boundary limit.
pub const ALPHA_EDGE: f64 = 1e-10;
/// Square-setting spreads at or above this use exact extremal search in `Auto` mode.
pub const AUTO_EXACT_MIN_SPREAD: f64 = 1e-5;
/// Spreads or leakages at or above this are flagged as not underspread.
pub const UNDERSPREAD_LIMIT: f64 = 1e-2;

/// Underspread channel class: at least `1 - leakage` of the scattering
/// function's volume lies in `[-ν₀, ν₀] × [-τ₀, τ₀]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelClass {
    pub max_doppler: f64,
    pub max_delay: f64,
    pub leakage: f64,
}

impl ChannelClass {
    pub fn new(max_doppler: f64, max_delay: f64, leakage: f64) -> Result<Self> {
        SpreadRect::new(max_doppler, max_delay)?;
        if !(0.0..=1.0).contains(&leakage) {
            return Err(Error::domain("eps", leakage, "0 <= eps <= 1"));
        }
        Ok(ChannelClass {
            max_doppler,
            max_delay,
            leakage,
        })
    }

    /// `ν₀ = τ₀ = sqrt(spread) / 2`.
    pub fn square(spread: f64, leakage: f64) -> Result<Self> {
        let r = SpreadRect::square(spread)?;
        Self::new(r.max_doppler, r.max_delay, leakage)
    }

    pub fn spread(&self) -> f64 {
        4.0 * self.max_delay * self.max_doppler
    }

    pub fn rect(&self) -> SpreadRect {
        SpreadRect {
            max_doppler: self.max_doppler,
            max_delay: self.max_delay,
        }
    }

    /// Human-readable notes when the class is not clearly underspread.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.spread() >= UNDERSPREAD_LIMIT {
            w.push(format!("spread {} is not << 1", self.spread()));
        }
        if self.leakage >= UNDERSPREAD_LIMIT {
            w.push(format!("eps {} is not << 1", self.leakage));
        }
        w
    }

    pub fn dilate(&self, beta: f64) -> Self {
        ChannelClass {
            max_doppler: self.max_doppler * beta,
            max_delay: self.max_delay / beta,
            leakage: self.leakage,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Linear SNR `ρ = P/B`.
    pub snr: f64,
    /// Hz.
    pub bandwidth: f64,
    pub lattice: WHLattice,
    pub pulse: PulseSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// Bound value, nats/s. May be negative.
    pub value: f64,
    /// `max(0, value)`.
    pub capacity_lower_bound: f64,
    /// The bound is negative and says nothing.
    pub vacuous: bool,
    pub alpha_star: f64,
    pub term_fading: f64,
    pub term_delta: f64,
    pub term_eps: f64,
    pub term_interf: f64,
    pub m_g: f64,
    #[serde(rename = "M_g")]
    pub big_m_g: f64,
    pub delta_tilde: f64,
    pub tf_product: f64,
    pub bandwidth: f64,
}

impl BoundResult {
    /// `(B/TF) (term_fading - term_delta - term_eps - term_interf)`.
    pub fn recombine(&self) -> f64 {
        self.bandwidth / self.tf_product * (self.term_fading - (self.term_delta + self.term_eps + self.term_interf))
    }
}

/// `E[log(1 + gain·X)]` for `X ~ Exp(1)`, i.e. `e^{1/gain} E₁(1/gain)`.
pub fn fading_expectation(gain: f64) -> f64 {
    if gain <= 0.0 {
        return 0.0;
    }
    if gain < SMALL_GAIN {
        let g = gain;
        // Σ (-1)^{k+1} (k-1)! g^k
        return g * (1.0 - g * (1.0 - g * (2.0 - g * (6.0 - 24.0 * g))));
    }
    scaled_exp_integral(1.0 / gain)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyTerms {
    pub delta: f64,
    pub eps: f64,
    pub interf: f64,
}

impl PenaltyTerms {
    pub fn total(&self) -> f64 {
        self.delta + self.eps + self.interf
    }
}

/// The three bracketed logarithms at a given `α`; `α = 1` gives the limit
/// of the first two and drops the third only when `interf_level = 0`.
pub fn penalty_terms(tf_rho: f64, delta_tilde: f64, eps: f64, interf_level: f64, alpha: f64) -> PenaltyTerms {
    let delta = if delta_tilde > 0.0 {
        delta_tilde * (tf_rho / (alpha * delta_tilde)).ln_1p()
    } else {
        0.0
    };
    let eps_term = if eps > 0.0 {
        (1.0 - delta_tilde) * (tf_rho * eps / (alpha * (1.0 - delta_tilde))).ln_1p()
    } else {
        0.0
    };
    let interf = if interf_level > 0.0 {
        (tf_rho * interf_level / (1.0 - alpha)).ln_1p()
    } else {
        0.0
    };
    PenaltyTerms {
        delta,
        eps: eps_term,
        interf,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyInfimum {
    pub value: f64,
    pub alpha_star: f64,
    pub terms: PenaltyTerms,
}

/// Infimum over `α ∈ (0, 1)` of the penalty. The objective is a sum of
/// functions convex in `α`, so golden-section search is exact up to its
/// argument tolerance; boundary infima are returned as analytic limits.
pub fn penalty_infimum(tf_rho: f64, delta_tilde: f64, eps: f64, interf_level: f64) -> Result<PenaltyInfimum> {
    if !(tf_rho >= 0.0 && tf_rho.is_finite()) {
        return Err(Error::domain("tf_rho", tf_rho, "nonnegative and finite"));
    }
    if !(0.0..1.0).contains(&delta_tilde) {
        return Err(Error::DeltaTilde(delta_tilde));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::domain("eps", eps, "0 <= eps <= 1"));
    }
    if !(interf_level >= 0.0 && interf_level.is_finite()) {
        return Err(Error::domain("interf_level", interf_level, "nonnegative and finite"));
    }
    let senses_alpha = delta_tilde > 0.0 || eps > 0.0;
    if tf_rho == 0.0 || (!senses_alpha && interf_level == 0.0) {
        return Ok(PenaltyInfimum {
            value: 0.0,
            alpha_star: 0.5,
            terms: PenaltyTerms {
                delta: 0.0,
                eps: 0.0,
                interf: 0.0,
            },
        });
    }
    if interf_level == 0.0 {
        // decreasing in α: the infimum is the α → 1 limit
        let terms = penalty_terms(tf_rho, delta_tilde, eps, 0.0, 1.0);
        return Ok(PenaltyInfimum {
            value: terms.total(),
            alpha_star: 1.0 - ALPHA_EDGE,
            terms,
        });
    }
    if !senses_alpha {
        // increasing in α: the infimum is the α → 0 limit
        let terms = penalty_terms(tf_rho, 0.0, 0.0, interf_level, 0.0);
        return Ok(PenaltyInfimum {
            value: terms.total(),
            alpha_star: ALPHA_EDGE,
            terms,
        });
    }
    let objective = |a: f64| penalty_terms(tf_rho, delta_tilde, eps, interf_level, a).total();
    let (alpha, _) = search::golden_section(objective, 0.0, 1.0, 1e-12);
    let alpha_star = alpha.clamp(ALPHA_EDGE, 1.0 - ALPHA_EDGE);
    let terms = penalty_terms(tf_rho, delta_tilde, eps, interf_level, alpha_star);
    let value = terms.total();
    debug_assert!(
        (1..1000)
            .map(|i| objective(i as f64 * 1e-3))
            .all(|v| v >= value * (1.0 - 1e-9) - 1e-300),
        "grid scan found a smaller penalty than the golden-section minimum"
    );
    Ok(PenaltyInfimum {
        value,
        alpha_star,
        terms,
    })
}

/// Evaluates the bound for given extremes of the ambiguity function.
pub fn lb_simple(inputs: &BoundInputs, class: &ChannelClass, extremes: &AmbiguityExtremes) -> Result<BoundResult> {
    if !(inputs.snr >= 0.0 && inputs.snr.is_finite()) {
        return Err(Error::domain("snr", inputs.snr, "nonnegative and finite"));
    }
    if !(inputs.bandwidth > 0.0 && inputs.bandwidth.is_finite()) {
        return Err(Error::domain("bandwidth", inputs.bandwidth, "positive and finite"));
    }
    extremes.validate()?;
    let delta_tilde = 2.0 * class.max_doppler * inputs.lattice.time_step;
    if delta_tilde >= 1.0 {
        return Err(Error::DeltaTilde(delta_tilde));
    }
    let tf = inputs.lattice.product();
    let r = tf * inputs.snr;
    let eps = class.leakage;
    let (m_g, big_m_g) = (extremes.m_g.min(1.0), extremes.big_m_g);
    let interf_level = big_m_g + eps;
    let gain = r * (1.0 - eps) * m_g / (1.0 + r * interf_level);
    let term_fading = fading_expectation(gain);
    let pen = penalty_infimum(r, delta_tilde, eps, interf_level)?;
    let value = inputs.bandwidth / tf * (term_fading - pen.value);
    Ok(BoundResult {
        value,
        capacity_lower_bound: value.max(0.0),
        vacuous: value < 0.0,
        alpha_star: pen.alpha_star,
        term_fading,
        term_delta: pen.terms.delta,
        term_eps: pen.terms.eps,
        term_interf: pen.terms.interf,
        m_g,
        big_m_g,
        delta_tilde,
        tf_product: tf,
        bandwidth: inputs.bandwidth,
    })
}

/// Rescales time by `1/beta` and frequency by `beta`: pulse `sqrt(β) g(βt)`,
/// lattice `(T/β, βF)`, rectangle `(βν₀, τ₀/β)`. The bound is invariant.
pub fn dilate(inputs: &BoundInputs, class: &ChannelClass, beta: f64) -> Result<(BoundInputs, ChannelClass)> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "positive and finite"));
    }
    Ok((
        BoundInputs {
            pulse: inputs.pulse.dilate(beta),
            lattice: inputs.lattice.dilate(beta),
            ..*inputs
        },
        class.dilate(beta),
    ))
}

/// How `m_g` and `M_g` are obtained in the square setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExtremesMode {
    /// First-order expansion `m_g = 1 - c_m Δ`, `M_g = c_M Δ`.
    Taylor,
    /// Grid search plus refinement of the ambiguity function.
    Exact,
    /// Exact for `Δ >= 1e-5`, Taylor below.
    #[default]
    Auto,
}

impl ExtremesMode {
    pub fn resolve(self, spread: f64) -> ExtremesMode {
        match self {
            ExtremesMode::Auto if spread >= AUTO_EXACT_MIN_SPREAD => ExtremesMode::Exact,
            ExtremesMode::Auto => ExtremesMode::Taylor,
            m => m,
        }
    }
}

/// Extremes from the first-order coefficients.
pub fn taylor_extremes(coeffs: &TaylorCoeffs, rect: &SpreadRect) -> Result<AmbiguityExtremes> {
    let spread = rect.spread();
    let m_g = 1.0 - coeffs.c_min * spread;
    if m_g < 0.0 {
        return Err(Error::Extremes(format!(
            "first-order m_g = 1 - {} * {} is negative; spread too large for the Taylor route",
            coeffs.c_min, spread
        )));
    }
    let corner = DopplerDelay {
        doppler: rect.max_doppler,
        delay: rect.max_delay,
    };
    Ok(AmbiguityExtremes {
        m_g,
        big_m_g: coeffs.c_max * spread,
        argmin: corner,
        argmax: corner,
        lattice_truncation: LatticeTruncation {
            doppler_radius: 0,
            delay_aliases: 0,
        },
    })
}

/// Square-setting configuration `T = F = sqrt(TF)`, `ν₀ = τ₀ = sqrt(Δ)/2`,
/// with its extremes computed once so that the bound can be evaluated at
/// many SNR values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareSetting {
    pub pulse: PulseSpec,
    pub lattice: WHLattice,
    pub class: ChannelClass,
    pub mode: ExtremesMode,
    pub extremes: AmbiguityExtremes,
}

impl SquareSetting {
    pub fn new(tf_product: f64, spread: f64, eps: f64, mode: ExtremesMode) -> Result<Self> {
        let pulse = PulseSpec::root_raised_cosine(tf_product)?;
        let lattice = WHLattice::square(tf_product)?;
        let class = ChannelClass::square(spread, eps)?;
        let delta_tilde = (spread * tf_product).sqrt();
        if delta_tilde >= 1.0 {
            return Err(Error::DeltaTilde(delta_tilde));
        }
        let mode = mode.resolve(spread);
        let rect = class.rect();
        let extremes = match mode {
            ExtremesMode::Exact => ambiguity::ambiguity_extremes(&pulse, &lattice, &rect)?,
            _ => taylor_extremes(&ambiguity::taylor_coeffs(&pulse, &lattice)?, &rect)?,
        };
        Ok(SquareSetting {
            pulse,
            lattice,
            class,
            mode,
            extremes,
        })
    }

    pub fn bound(&self, snr: f64, bandwidth: f64) -> Result<BoundResult> {
        let inputs = BoundInputs {
            snr,
            bandwidth,
            lattice: self.lattice,
            pulse: self.pulse,
        };
        lb_simple(&inputs, &self.class, &self.extremes)
    }

    /// Bound over AWGN capacity at bandwidth 1.
    pub fn accuracy_ratio(&self, snr: f64) -> Result<f64> {
        if !(snr > 0.0) {
            return Err(Error::domain("snr", snr, "> 0"));
        }
        Ok(self.bound(snr, 1.0)?.value / snr.ln_1p())
    }
}

/// Bound in the square setting with `Auto` extremes.
pub fn lb_square(rho: f64, tf_product: f64, spread: f64, eps: f64, bandwidth: f64) -> Result<BoundResult> {
    lb_square_with_mode(rho, tf_product, spread, eps, bandwidth, ExtremesMode::Auto)
}

pub fn lb_square_with_mode(
    rho: f64,
    tf_product: f64,
    spread: f64,
    eps: f64,
    bandwidth: f64,
    mode: ExtremesMode,
) -> Result<BoundResult> {
    SquareSetting::new(tf_product, spread, eps, mode)?.bound(rho, bandwidth)
}
