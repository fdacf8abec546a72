//! Resolved run configuration, value syntaxes and validation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use underspread_core::{ExtremesMode, LogUnit};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Pulse,
    Coeffs,
    Bound,
    Interval,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// What the `pulse` command samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `t, g(t)`
    Time,
    /// `f, G(f)`
    Freq,
    /// `doppler, delay, |A|², interference_sum` over the spread rectangle
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Lin,
    Log,
}

/// `start:stop:lin|log:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub scale: Scale,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let s = i as f64 / last;
                match self.scale {
                    Scale::Lin => self.start + (self.stop - self.start) * s,
                    Scale::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + (b - a) * s)
                    }
                }
            })
            .collect()
    }

    fn parse_with(s: &str, value: impl Fn(&str) -> Result<f64, String>) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, scale, count] = parts[..] else {
            return Err(format!("grid `{s}` is not start:stop:lin|log:count"));
        };
        let scale = match scale {
            "lin" => Scale::Lin,
            "log" => Scale::Log,
            other => return Err(format!("grid scale `{other}` is neither lin nor log")),
        };
        let count = count
            .parse()
            .map_err(|_| format!("grid count `{count}` is not an integer"))?;
        Ok(Grid {
            start: value(start)?,
            stop: value(stop)?,
            scale,
            count,
        })
    }

    /// Grid over SNR values, each accepting the `dB` suffix.
    pub fn parse_snr(s: &str) -> Result<Self, String> {
        Self::parse_with(s, parse_snr)
    }

    pub fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::param(name, "grid count must be at least 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::param(name, "grid ends must be finite"));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(CliError::param(name, "log grid ends must be positive"));
        }
        Ok(())
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with(s, |v| v.parse().map_err(|_| format!("`{v}` is not a number")))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = match self.scale {
            Scale::Lin => "lin",
            Scale::Log => "log",
        };
        write!(f, "{}:{}:{}:{}", self.start, self.stop, scale, self.count)
    }
}

/// Linear SNR from `100`, `1e3` or `20dB`.
pub fn parse_snr(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if let Some(db) = lower.strip_suffix("db") {
        let db: f64 = db.trim().parse().map_err(|_| format!("`{s}` is not an SNR in dB"))?;
        Ok(10f64.powf(db / 10.0))
    } else {
        t.parse()
            .map_err(|_| format!("`{s}` is not a linear SNR or a value like 20dB"))
    }
}

/// Everything needed to reproduce a run. Fields a command does not use
/// are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub tf_product: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Linear SNR.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    /// Linear SNR grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_range: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread_grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Half-width of the sampled range for `pulse --domain time|freq`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<f64>,
    pub format: Format,
    pub units: LogUnit,
    pub mode: ExtremesMode,
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::param(name, "missing"))
}

fn check(ok: bool, name: &str, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::param(name, msg))
    }
}

impl RunConfig {
    pub fn spread(&self) -> Result<f64, CliError> {
        require(self.spread, "spread")
    }

    pub fn eps(&self) -> Result<f64, CliError> {
        require(self.eps, "eps")
    }

    pub fn threshold(&self) -> Result<f64, CliError> {
        require(self.threshold, "threshold")
    }

    pub fn points(&self) -> Result<usize, CliError> {
        require(self.points, "points")
    }

    /// SNR values for `bound`: the single value or the grid.
    pub fn snr_values(&self) -> Result<Vec<f64>, CliError> {
        match (self.snr, self.snr_range) {
            (Some(s), None) => Ok(vec![s]),
            (None, Some(g)) => Ok(g.values()),
            (Some(_), Some(_)) => Err(CliError::param("snr", "give either --snr or --snr-range, not both")),
            (None, None) => Err(CliError::param("snr", "missing")),
        }
    }

    /// Checks the parameters the command uses before anything is computed.
    pub fn validate(&self) -> Result<(), CliError> {
        let tf = self.tf_product;
        check(tf > 1.0 && tf < 2.0, "tf", "must satisfy 1 < TF < 2")?;
        let unit = |v: f64| (0.0..1.0).contains(&v);
        let leak = |v: f64| (0.0..=1.0).contains(&v);
        match self.command {
            Command::Pulse => {
                check(self.points()? >= 2, "points", "must be at least 2")?;
                if self.domain == Some(Domain::Surface) {
                    check(unit(self.spread()?), "spread", "must satisfy 0 <= spread < 1")?;
                } else if let Some(s) = self.span {
                    check(s > 0.0 && s.is_finite(), "span", "must be positive")?;
                }
            }
            Command::Coeffs => {
                if let Some(s) = self.spread {
                    check(unit(s), "spread", "must satisfy 0 <= spread < 1")?;
                }
            }
            Command::Bound => {
                check(unit(self.spread()?), "spread", "must satisfy 0 <= spread < 1")?;
                check(leak(self.eps()?), "eps", "must satisfy 0 <= eps <= 1")?;
                if let Some(g) = self.snr_range {
                    g.validate("snr-range")?;
                }
                for s in self.snr_values()? {
                    check(s >= 0.0 && s.is_finite(), "snr", "must be nonnegative and finite")?;
                }
                let b = require(self.bandwidth, "bandwidth")?;
                check(b > 0.0 && b.is_finite(), "bandwidth", "must be positive and finite")?;
            }
            Command::Interval | Command::Sweep => {
                let t = self.threshold()?;
                check(t > 0.0 && t < 1.0, "threshold", "must satisfy 0 < threshold < 1")?;
                let tol = require(self.tol_db, "tol-db")?;
                check(tol > 0.0, "tol-db", "must be positive")?;
                if self.command == Command::Interval {
                    check(unit(self.spread()?), "spread", "must satisfy 0 <= spread < 1")?;
                    check(leak(self.eps()?), "eps", "must satisfy 0 <= eps <= 1")?;
                } else {
                    let sg = require(self.spread_grid, "spread-grid")?;
                    let eg = require(self.eps_grid, "eps-grid")?;
                    sg.validate("spread-grid")?;
                    eg.validate("eps-grid")?;
                    check(
                        sg.values().into_iter().all(unit),
                        "spread-grid",
                        "values must satisfy 0 <= spread < 1",
                    )?;
                    check(
                        eg.values().into_iter().all(leak),
                        "eps-grid",
                        "values must satisfy 0 <= eps <= 1",
                    )?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_syntax() {
        assert_eq!(parse_snr("100").unwrap(), 100.0);
        assert!((parse_snr("20dB").unwrap() - 100.0).abs() < 1e-12);
        assert!((parse_snr("-10 db").unwrap() - 0.1).abs() < 1e-15);
        assert!(parse_snr("loud").is_err());
    }

    #[test]
    fn grid_syntax_and_values() {
        let g: Grid = "1e-7:1e-4:log:4".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 4);
        for (a, b) in v.iter().zip([1e-7, 1e-6, 1e-5, 1e-4]) {
            assert!((a / b - 1.0).abs() < 1e-12);
        }
        let g: Grid = "0:1:lin:5".parse().unwrap();
        assert_eq!(g.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.to_string(), "0:1:lin:5");
        assert!("0:1:cubic:5".parse::<Grid>().is_err());
        assert!("0:1:lin".parse::<Grid>().is_err());
        let s = Grid::parse_snr("0dB:30dB:log:4").unwrap();
        assert!((s.values()[3] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn log_grid_needs_positive_ends() {
        let g: Grid = "0:1e-4:log:3".parse().unwrap();
        assert!(g.validate("spread-grid").is_err());
    }
}
