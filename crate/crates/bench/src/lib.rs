//! Shared fixtures for the benchmarks.

use underspread_core::{make_rrc_pulse, PulseSpec, WHLattice};

/// Lattice density used throughout the benchmarks.
pub const TF: f64 = 1.02;

/// The square-setting pulse and lattice at [`TF`].
pub fn square_fixture() -> (PulseSpec, WHLattice) {
    (
        make_rrc_pulse(TF).expect("valid TF"),
        WHLattice::square(TF).expect("valid TF"),
    )
}

/// The 4 x 4 spread and leakage grid of the interval benchmark.
pub const GRID: [f64; 4] = [1e-7, 1e-6, 1e-5, 1e-4];
