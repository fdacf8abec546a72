//! SNR operating range over which the square-setting bound stays within a
//! fixed fraction of AWGN capacity.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{ExtremesMode, SquareSetting};
use crate::error::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.75;
/// Closed-form approximations are quoted for `Δ, ε <= 1e-4`.
pub const RULE_VALIDITY_LIMIT: f64 = 1e-4;

/// An SNR carried in both linear and dB form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Snr {
    pub linear: f64,
    pub db: f64,
}

impl Snr {
    pub fn from_linear(linear: f64) -> Self {
        Snr {
            linear,
            db: 10.0 * linear.log10(),
        }
    }

    pub fn from_db(db: f64) -> Self {
        Snr::from_linear(10f64.powf(db / 10.0))
    }
}

/// `B log(1 + ρ)`, nats/s.
pub fn awgn_capacity(bandwidth: f64, rho: f64) -> f64 {
    bandwidth * rho.ln_1p()
}

/// `LB_square(ρ) / C_AWGN(ρ)`; bandwidth cancels.
pub fn accuracy_ratio(rho: f64, tf_product: f64, spread: f64, eps: f64) -> Result<f64> {
    SquareSetting::new(tf_product, spread, eps, ExtremesMode::Auto)?.accuracy_ratio(rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalOptions {
    pub threshold: f64,
    /// Linear SNR scan range.
    pub scan_min: f64,
    pub scan_max: f64,
    pub scan_points: usize,
    /// Bisection stops once the bracket is narrower than this, dB.
    pub tol_db: f64,
    pub mode: ExtremesMode,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        IntervalOptions {
            threshold: DEFAULT_THRESHOLD,
            scan_min: 1e-4,
            scan_max: 1e8,
            scan_points: 512,
            tol_db: 1e-3,
            mode: ExtremesMode::Auto,
        }
    }
}

impl IntervalOptions {
    pub fn with_threshold(threshold: f64) -> Self {
        IntervalOptions {
            threshold,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::domain("threshold", self.threshold, "0 < threshold < 1"));
        }
        if !(self.scan_min > 0.0 && self.scan_max > self.scan_min && self.scan_max.is_finite()) {
            return Err(Error::domain(
                "scan_min",
                self.scan_min,
                "0 < scan_min < scan_max < inf",
            ));
        }
        if self.scan_points < 3 {
            return Err(Error::domain("scan_points", self.scan_points as f64, ">= 3"));
        }
        if !(self.tol_db > 0.0) {
            return Err(Error::domain("tol_db", self.tol_db, "> 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalResult {
    pub threshold: f64,
    /// `None` when the ratio never reaches the threshold.
    pub snr_min: Option<Snr>,
    pub snr_max: Option<Snr>,
    pub ratio_at_min: Option<f64>,
    pub ratio_at_max: Option<f64>,
    /// Largest ratio seen on the scan.
    pub peak_ratio: f64,
    pub peak_snr: Snr,
    /// Both endpoint ratios are within 1e-3 of the threshold.
    pub converged: bool,
}

impl IntervalResult {
    pub fn is_empty(&self) -> bool {
        self.snr_min.is_none()
    }
}

/// Interval with default scan settings and `Auto` extremes.
pub fn solve_interval(tf_product: f64, spread: f64, eps: f64, threshold: f64) -> Result<IntervalResult> {
    solve_interval_with(tf_product, spread, eps, &IntervalOptions::with_threshold(threshold))
}

pub fn solve_interval_with(tf_product: f64, spread: f64, eps: f64, opts: &IntervalOptions) -> Result<IntervalResult> {
    opts.validate()?;
    let setting = SquareSetting::new(tf_product, spread, eps, opts.mode)?;
    solve_interval_for(&setting, opts)
}

/// Solves for the crossings `ratio(ρ) = threshold` of a prepared setting.
pub fn solve_interval_for(setting: &SquareSetting, opts: &IntervalOptions) -> Result<IntervalResult> {
    opts.validate()?;
    let lo_db = 10.0 * opts.scan_min.log10();
    let hi_db = 10.0 * opts.scan_max.log10();
    let n = opts.scan_points;
    let db_at = |i: usize| lo_db + (hi_db - lo_db) * i as f64 / (n - 1) as f64;
    let excess = |db: f64| -> Result<f64> { Ok(setting.accuracy_ratio(Snr::from_db(db).linear)? - opts.threshold) };

    let scan: Vec<f64> = (0..n).map(|i| excess(db_at(i))).collect::<Result<_>>()?;
    let (peak_idx, peak) = scan
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty scan");
    let peak_ratio = peak + opts.threshold;
    let peak_snr = Snr::from_db(db_at(peak_idx));

    let above: Vec<bool> = scan.iter().map(|&e| e >= 0.0).collect();
    let runs = above.windows(2).filter(|w| !w[0] && w[1]).count() + usize::from(above[0]);
    if runs == 0 {
        return Ok(IntervalResult {
            threshold: opts.threshold,
            snr_min: None,
            snr_max: None,
            ratio_at_min: None,
            ratio_at_max: None,
            peak_ratio,
            peak_snr,
            converged: true,
        });
    }
    if runs > 1 {
        return Err(Error::NonContiguous { runs });
    }
    let first = above.iter().position(|&a| a).expect("one run");
    let last = above.iter().rposition(|&a| a).expect("one run");
    if first == 0 {
        return Err(Error::Unbracketed { edge_db: lo_db });
    }
    if last == n - 1 {
        return Err(Error::Unbracketed { edge_db: hi_db });
    }

    // invariant: excess(below) < 0 <= excess(above)
    let bisect = |mut below: f64, mut above: f64| -> Result<(f64, f64)> {
        while (above - below).abs() > opts.tol_db {
            let mid = 0.5 * (below + above);
            if excess(mid)? >= 0.0 {
                above = mid;
            } else {
                below = mid;
            }
        }
        let mid = 0.5 * (below + above);
        Ok((mid, excess(mid)? + opts.threshold))
    };
    let (min_db, ratio_min) = bisect(db_at(first - 1), db_at(first))?;
    let (max_db, ratio_max) = bisect(db_at(last + 1), db_at(last))?;
    let converged = (ratio_min - opts.threshold).abs() < 1e-3 && (ratio_max - opts.threshold).abs() < 1e-3;
    Ok(IntervalResult {
        threshold: opts.threshold,
        snr_min: Some(Snr::from_db(min_db)),
        snr_max: Some(Snr::from_db(max_db)),
        ratio_at_min: Some(ratio_min),
        ratio_at_max: Some(ratio_max),
        peak_ratio,
        peak_snr,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleOfThumb {
    /// `13 sqrt(Δ)`.
    pub snr_min: Snr,
    /// `0.22 / (Δ + ε)`.
    pub snr_max: Snr,
    /// Both `Δ` and `ε` are within the range the approximations were stated for.
    pub within_validity: bool,
}

pub fn rule_of_thumb(spread: f64, eps: f64) -> RuleOfThumb {
    RuleOfThumb {
        snr_min: Snr::from_linear(13.0 * spread.sqrt()),
        snr_max: Snr::from_linear(0.22 / (spread + eps)),
        within_validity: spread <= RULE_VALIDITY_LIMIT && eps <= RULE_VALIDITY_LIMIT,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub spread: f64,
    pub eps: f64,
    pub snr_min_db: Option<f64>,
    pub snr_max_db: Option<f64>,
    pub rule_min_db: f64,
    pub rule_max_db: f64,
    /// Set when this grid point failed; the sweep carries on.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub tf_product: f64,
    pub threshold: f64,
    pub rows: Vec<SweepRow>,
}

#[derive(Serialize)]
struct CsvRow {
    spread: f64,
    eps: f64,
    snr_min_db: f64,
    snr_max_db: f64,
    rule_min_db: f64,
    rule_max_db: f64,
}

impl SweepTable {
    pub fn row(&self, spread: f64, eps: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.spread == spread && r.eps == eps)
    }

    /// CSV with header `spread,eps,snr_min_db,snr_max_db,rule_min_db,rule_max_db`;
    /// missing endpoints (empty interval or failed row) are written as `NaN`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRow {
                spread: r.spread,
                eps: r.eps,
                snr_min_db: r.snr_min_db.unwrap_or(f64::NAN),
                snr_max_db: r.snr_max_db.unwrap_or(f64::NAN),
                rule_min_db: r.rule_min_db,
                rule_max_db: r.rule_max_db,
            })?;
        }
        if self.rows.is_empty() {
            w.write_record([
                "spread",
                "eps",
                "snr_min_db",
                "snr_max_db",
                "rule_min_db",
                "rule_max_db",
            ])?;
        }
        w.flush()
    }
}

/// One interval solve and rule-of-thumb evaluation per grid point, spread
/// outer and leakage inner. Rows are computed in parallel and collected in
/// grid order.
pub fn sweep(tf_product: f64, spread_grid: &[f64], eps_grid: &[f64], threshold: f64) -> SweepTable {
    sweep_with(
        tf_product,
        spread_grid,
        eps_grid,
        &IntervalOptions::with_threshold(threshold),
    )
}

pub fn sweep_with(tf_product: f64, spread_grid: &[f64], eps_grid: &[f64], opts: &IntervalOptions) -> SweepTable {
    let points: Vec<(f64, f64)> = spread_grid
        .iter()
        .flat_map(|&s| eps_grid.iter().map(move |&e| (s, e)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(spread, eps)| {
            let rule = rule_of_thumb(spread, eps);
            let mut row = SweepRow {
                spread,
                eps,
                snr_min_db: None,
                snr_max_db: None,
                rule_min_db: rule.snr_min.db,
                rule_max_db: rule.snr_max.db,
                error: None,
            };
            match solve_interval_with(tf_product, spread, eps, opts) {
                Ok(iv) => {
                    row.snr_min_db = iv.snr_min.map(|s| s.db);
                    row.snr_max_db = iv.snr_max.map(|s| s.db);
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    SweepTable {
        tf_product,
        threshold: opts.threshold,
        rows,
    }
}
