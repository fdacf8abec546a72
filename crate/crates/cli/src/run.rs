//! Executes a validated [`RunConfig`] and renders its output.

use serde::Serialize;
use underspread_core::ambiguity::surface_samples;
use underspread_core::range::IntervalOptions;
use underspread_core::*;

use crate::config::{Command, Domain, Format, RunConfig};
use crate::error::CliError;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

/// Rows rendered as CSV after a `# config: {...}` comment line.
fn csv_with_config<T: Serialize>(config: &RunConfig, rows: &[T]) -> Result<String, CliError> {
    let mut buf = format!(
        "# config: {}\n",
        serde_json::to_string(config).map_err(|e| CliError::Io(e.to_string()))?
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    buf.push_str(&String::from_utf8(bytes).expect("csv is utf-8"));
    Ok(buf)
}

fn json_with_config<T: Serialize>(config: &RunConfig, result: T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Envelope { config, result }).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn render<T: Serialize, R: Serialize>(config: &RunConfig, rows: &[R], whole: T) -> Result<String, CliError> {
    match config.format {
        Format::Csv => csv_with_config(config, rows),
        Format::Json => json_with_config(config, whole),
    }
}

pub fn run(config: &RunConfig) -> Result<String, CliError> {
    config.validate()?;
    match config.command {
        Command::Pulse => pulse(config),
        Command::Coeffs => coeffs(config),
        Command::Bound => bound(config),
        Command::Interval => interval(config),
        Command::Sweep => sweep_cmd(config),
    }
}

#[derive(Serialize)]
struct TimeSample {
    t: f64,
    g: f64,
}

#[derive(Serialize)]
struct FreqSample {
    f: f64,
    #[serde(rename = "G")]
    g: f64,
}

fn axis(half: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| -half + 2.0 * half * i as f64 / (points - 1) as f64)
}

fn pulse(config: &RunConfig) -> Result<String, CliError> {
    let p = make_rrc_pulse(config.tf_product)?;
    let points = config.points()?;
    match config.domain.unwrap_or(Domain::Time) {
        Domain::Time => {
            let half = config.span.unwrap_or(10.0 * p.period);
            let rows: Vec<TimeSample> = axis(half, points)
                .map(|t| TimeSample { t, g: p.eval_time(t) })
                .collect();
            render(config, &rows, &rows)
        }
        Domain::Freq => {
            let half = config.span.unwrap_or(1.1 * p.band_edge());
            let rows: Vec<FreqSample> = axis(half, points)
                .map(|f| FreqSample { f, g: p.eval_freq(f) })
                .collect();
            render(config, &rows, &rows)
        }
        Domain::Surface => {
            let lat = WHLattice::square(config.tf_product)?;
            let rect = SpreadRect::square(config.spread()?)?;
            let rows = surface_samples(&p, &lat, &rect, points)?;
            render(config, &rows, &rows)
        }
    }
}

#[derive(Serialize)]
struct CoeffsRow {
    c_m: f64,
    #[serde(rename = "c_M")]
    c_big_m: f64,
    time_dispersion_sq: f64,
    freq_dispersion_sq: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_g: Option<f64>,
    #[serde(rename = "M_g", skip_serializing_if = "Option::is_none")]
    big_m_g: Option<f64>,
}

#[derive(Serialize)]
struct CoeffsResult {
    #[serde(flatten)]
    row: CoeffsRow,
    pulse: PulseSpec,
    lattice: WHLattice,
    #[serde(skip_serializing_if = "Option::is_none")]
    extremes: Option<ResolvedExtremes>,
}

#[derive(Serialize)]
struct ResolvedExtremes {
    mode: ExtremesMode,
    #[serde(flatten)]
    extremes: AmbiguityExtremes,
}

fn coeffs(config: &RunConfig) -> Result<String, CliError> {
    let tf = config.tf_product;
    let p = make_rrc_pulse(tf)?;
    let lat = WHLattice::square(tf)?;
    let c = taylor_coeffs(&p, &lat)?;
    let extremes = match config.spread {
        Some(spread) => {
            let s = SquareSetting::new(tf, spread, 0.0, config.mode)?;
            Some(ResolvedExtremes {
                mode: s.mode,
                extremes: s.extremes,
            })
        }
        None => None,
    };
    let row = || CoeffsRow {
        c_m: c.c_min,
        c_big_m: c.c_max,
        time_dispersion_sq: c.time_dispersion_sq,
        freq_dispersion_sq: c.freq_dispersion_sq,
        m_g: extremes.as_ref().map(|e| e.extremes.m_g),
        big_m_g: extremes.as_ref().map(|e| e.extremes.big_m_g),
    };
    let rows = [row()];
    let whole = CoeffsResult {
        row: row(),
        pulse: p,
        lattice: lat,
        extremes,
    };
    render(config, &rows, whole)
}

#[derive(Serialize)]
struct BoundRow {
    snr_linear: f64,
    snr_db: f64,
    value: f64,
    capacity_lower_bound: f64,
    awgn_capacity: f64,
    /// Bound over AWGN capacity; absent at zero SNR.
    ratio: Option<f64>,
    vacuous: bool,
    alpha_star: f64,
    term_fading: f64,
    term_delta: f64,
    term_eps: f64,
    term_interf: f64,
    m_g: f64,
    #[serde(rename = "M_g")]
    big_m_g: f64,
    delta_tilde: f64,
}

#[derive(Serialize)]
struct BoundResultOut<'a> {
    units: &'static str,
    mode: ExtremesMode,
    warnings: Vec<String>,
    rows: &'a [BoundRow],
}

fn rate_unit(u: LogUnit) -> &'static str {
    match u {
        LogUnit::Nats => "nats/s",
        LogUnit::Bits => "bits/s",
    }
}

fn bound(config: &RunConfig) -> Result<String, CliError> {
    let setting = SquareSetting::new(config.tf_product, config.spread()?, config.eps()?, config.mode)?;
    let bw = config.bandwidth.unwrap_or(1.0);
    let k = config.units.from_nats();
    let mut rows = Vec::new();
    for rho in config.snr_values()? {
        let b = setting.bound(rho, bw)?;
        let awgn = awgn_capacity(bw, rho);
        // the penalty terms are per-symbol nats; report them on the same B/TF scale as the value
        let per_symbol = bw / b.tf_product * k;
        rows.push(BoundRow {
            snr_linear: rho,
            snr_db: Snr::from_linear(rho).db,
            value: b.value * k,
            capacity_lower_bound: b.capacity_lower_bound * k,
            awgn_capacity: awgn * k,
            ratio: (rho > 0.0).then(|| b.value / awgn),
            vacuous: b.vacuous,
            alpha_star: b.alpha_star,
            term_fading: b.term_fading * per_symbol,
            term_delta: b.term_delta * per_symbol,
            term_eps: b.term_eps * per_symbol,
            term_interf: b.term_interf * per_symbol,
            m_g: b.m_g,
            big_m_g: b.big_m_g,
            delta_tilde: b.delta_tilde,
        });
    }
    let whole = BoundResultOut {
        units: rate_unit(config.units),
        mode: setting.mode,
        warnings: setting.class.warnings(),
        rows: &rows,
    };
    render(config, &rows, whole)
}

fn options(config: &RunConfig) -> Result<IntervalOptions, CliError> {
    Ok(IntervalOptions {
        threshold: config.threshold()?,
        tol_db: config.tol_db.unwrap_or(1e-3),
        mode: config.mode,
        ..IntervalOptions::default()
    })
}

#[derive(Serialize)]
struct IntervalRow {
    threshold: f64,
    snr_min_db: Option<f64>,
    snr_max_db: Option<f64>,
    snr_min_linear: Option<f64>,
    snr_max_linear: Option<f64>,
    rule_min_db: f64,
    rule_max_db: f64,
    peak_ratio: f64,
    peak_snr_db: f64,
}

#[derive(Serialize)]
struct IntervalOut {
    mode: ExtremesMode,
    interval: IntervalResult,
    rule_of_thumb: RuleOfThumb,
    warnings: Vec<String>,
}

fn interval(config: &RunConfig) -> Result<String, CliError> {
    let (spread, eps) = (config.spread()?, config.eps()?);
    let opts = options(config)?;
    let setting = SquareSetting::new(config.tf_product, spread, eps, opts.mode)?;
    let res = range::solve_interval_for(&setting, &opts)?;
    let rule = rule_of_thumb(spread, eps);
    let mut warnings = setting.class.warnings();
    if !rule.within_validity {
        warnings.push("rule of thumb quoted only for spread and eps up to 1e-4".to_string());
    }
    let rows = [IntervalRow {
        threshold: res.threshold,
        snr_min_db: res.snr_min.map(|s| s.db),
        snr_max_db: res.snr_max.map(|s| s.db),
        snr_min_linear: res.snr_min.map(|s| s.linear),
        snr_max_linear: res.snr_max.map(|s| s.linear),
        rule_min_db: rule.snr_min.db,
        rule_max_db: rule.snr_max.db,
        peak_ratio: res.peak_ratio,
        peak_snr_db: res.peak_snr.db,
    }];
    let whole = IntervalOut {
        mode: setting.mode,
        interval: res,
        rule_of_thumb: rule,
        warnings,
    };
    render(config, &rows, whole)
}

fn sweep_cmd(config: &RunConfig) -> Result<String, CliError> {
    let opts = options(config)?;
    let spreads = config.spread_grid.map(|g| g.values()).unwrap_or_default();
    let epss = config.eps_grid.map(|g| g.values()).unwrap_or_default();
    let table = sweep_with(config.tf_product, &spreads, &epss, &opts);
    match config.format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            let head = serde_json::to_string(config).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(format!(
                "# config: {head}\n{}",
                String::from_utf8(buf).expect("csv is utf-8")
            ))
        }
        Format::Json => json_with_config(config, &table),
    }
}
