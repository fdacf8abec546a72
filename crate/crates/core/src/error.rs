use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation it feeds.
    #[error("{name} = {value} is out of range: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// The technical condition `2 * max_doppler * time_step < 1` is violated.
    #[error("delta_tilde = 2*max_doppler*time_step = {0} must be < 1")]
    DeltaTilde(f64),

    #[error("inconsistent ambiguity extremes: {0}")]
    Extremes(String),

    /// The super-threshold set of the accuracy ratio is not one contiguous run on the scan.
    #[error("accuracy ratio exceeds the threshold on {runs} disjoint SNR runs")]
    NonContiguous { runs: usize },

    /// The super-threshold run touches the end of the scan range, so an endpoint is not bracketed.
    #[error("interval endpoint not bracketed: ratio is above threshold at scan edge {edge_db} dB")]
    Unbracketed { edge_db: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain { name, value, expected }
    }
}
