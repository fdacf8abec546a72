//! Noncoherent-capacity lower bounds for underspread Rayleigh-fading WSSUS
//! channels with pulse-shaped OFDM signalling.
//!
//! The crate is organised bottom-up:
//!
//! * [`pulse`]: root-raised-cosine prototype, dispersion moments, WH lattice
//! * [`ambiguity`]: ambiguity function, `m_g` / `M_g` search, `c_m` / `c_M`
//! * [`bound`]: the lower bound, its noise-split infimum and dilation
//! * [`range`]: the SNR interval where the bound tracks AWGN capacity
//!
//! plus the numerical helpers [`quad`], [`search`] and [`special`].

// `!(x > 0.0)` is used on purpose so that NaN inputs fail validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambiguity;
pub mod bound;
pub mod error;
pub mod pulse;
pub mod quad;
pub mod range;
pub mod search;
pub mod special;

pub use ambiguity::{
    ambiguity, ambiguity_extremes, interference_sum, max_interference, min_ambiguity_sq, taylor_c_max, taylor_c_min,
    taylor_coeffs, AmbiguityExtremes, DopplerDelay, LatticeTruncation, SpreadRect, TaylorCoeffs,
};
pub use bound::{
    dilate, fading_expectation, lb_simple, lb_square, lb_square_with_mode, penalty_infimum, BoundInputs, BoundResult,
    ChannelClass, ExtremesMode, SquareSetting,
};
pub use error::{Error, Result};
pub use pulse::{make_rrc_pulse, orthonormality_residual, DispersionMoments, PulseFamily, PulseSpec, WHLattice};
pub use range::{
    accuracy_ratio, awgn_capacity, rule_of_thumb, solve_interval, solve_interval_with, sweep, sweep_with,
    IntervalOptions, IntervalResult, RuleOfThumb, Snr, SweepRow, SweepTable,
};

/// Logarithm base for reported rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LogUnit {
    #[default]
    Nats,
    Bits,
}

impl LogUnit {
    /// Factor converting a value in nats to this unit.
    pub fn from_nats(self) -> f64 {
        match self {
            LogUnit::Nats => 1.0,
            LogUnit::Bits => std::f64::consts::LOG2_E,
        }
    }
}
