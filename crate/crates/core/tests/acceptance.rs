//! Acceptance checks for the published figures and stated properties.
//!
//! Each test prints one `PASS`/`FAIL` line with the measured values and its
//! runtime, then asserts both the tolerance and the runtime limit.
//! Run with `cargo test -p underspread-core --test acceptance -- --nocapture`.

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{central_gradient, dense_alpha_scan, fft_transform, monte_carlo_fading, FADING_GAINS, PENALTY_CASES};
use underspread_core::ambiguity::lattice_derivatives;
use underspread_core::*;

const TF: f64 = 1.02;
const GRID: [f64; 4] = [1e-7, 1e-6, 1e-5, 1e-4];

fn report(id: u32, title: &str, pass: bool, detail: &str, elapsed: Duration, limit: Duration) {
    let ok = pass && elapsed <= limit;
    println!(
        "[{}] criterion {id} {title}: {detail} ({:.2} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(pass, "criterion {id} out of tolerance: {detail}");
    assert!(elapsed <= limit, "criterion {id} exceeded its runtime limit");
}

fn within_rel(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

#[test]
fn criterion_1_taylor_coefficients() {
    let t = Instant::now();
    let p = make_rrc_pulse(TF).unwrap();
    let lat = WHLattice::square(TF).unwrap();
    let c = taylor_coeffs(&p, &lat).unwrap();
    let ok_m = within_rel(c.c_min, 25.87, 0.005);
    let ok_big = within_rel(c.c_max, 0.77, 0.025);
    let detail = format!(
        "c_m = {:.4} (target 25.87 ± 0.5%: {}), c_M = {:.4} (target 0.77 ± 2.5%: {})",
        c.c_min,
        if ok_m { "ok" } else { "out" },
        c.c_max,
        if ok_big { "ok" } else { "out" }
    );
    report(
        1,
        "taylor coefficients",
        ok_m && ok_big,
        &detail,
        t.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_2_first_order_asymptotics() {
    let t = Instant::now();
    let p = make_rrc_pulse(TF).unwrap();
    let lat = WHLattice::square(TF).unwrap();
    let c = taylor_coeffs(&p, &lat).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    // decreasing spread, so each deviation must be smaller than the last
    for spread in [1e-4, 1e-5, 1e-6] {
        let ex = ambiguity_extremes(&p, &lat, &SpreadRect::square(spread).unwrap()).unwrap();
        let lo = (1.0 - ex.m_g) / (c.c_min * spread);
        let hi = ex.big_m_g / (c.c_max * spread);
        let in_band = (0.98..=1.02).contains(&lo) && (0.9..=1.1).contains(&hi);
        let (dev_lo, dev_hi) = ((lo - 1.0).abs(), (hi - 1.0).abs());
        let shrinking = prev.is_none_or(|(a, b)| dev_lo < a && dev_hi < b);
        pass &= in_band && shrinking;
        parts.push(format!(
            "Δ={spread:e}: (1-m_g)/(c_mΔ)={lo:.4}, M_g/(c_MΔ)={hi:.4}{}{}",
            if in_band { "" } else { " [out of band]" },
            if shrinking { "" } else { " [not shrinking]" }
        ));
        prev = Some((dev_lo, dev_hi));
    }
    report(
        2,
        "first-order asymptotics",
        pass,
        &parts.join("; "),
        t.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_3_dilation_invariance() {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(20_240_611);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let tf = rng.gen_range(1.01..1.5);
        let period = 10f64.powf(rng.gen_range(-6.0..-2.0));
        let base = make_rrc_pulse(tf).unwrap();
        let pulse = base.dilate(base.period / period);
        let lattice = WHLattice::matched(&pulse);
        let spread = 10f64.powf(rng.gen_range(-7.0..-3.0));
        let aspect = 10f64.powf(rng.gen_range(-0.5..0.5));
        let side = 0.5 * spread.sqrt();
        let class = ChannelClass::new(
            aspect * side / lattice.time_step,
            side * lattice.time_step / aspect,
            10f64.powf(rng.gen_range(-7.0..-3.0)),
        )
        .unwrap();
        let inputs = BoundInputs {
            snr: 10f64.powf(rng.gen_range(-1.0..6.0)),
            bandwidth: 10f64.powf(rng.gen_range(3.0..8.0)),
            lattice,
            pulse,
        };
        let ex = ambiguity_extremes(&pulse, &lattice, &class.rect()).unwrap();
        let reference = lb_simple(&inputs, &class, &ex).unwrap().value;
        for beta in [0.5, 2.0, 10.0] {
            let (di, dc) = dilate(&inputs, &class, beta).unwrap();
            let dex = ambiguity_extremes(&di.pulse, &di.lattice, &dc.rect()).unwrap();
            let v = lb_simple(&di, &dc, &dex).unwrap().value;
            worst = worst.max((v - reference).abs() / reference.abs());
        }
    }
    let detail = format!("20 configurations x β ∈ {{0.5, 2, 10}}, worst relative change {worst:.2e} (limit 1e-9)");
    report(
        3,
        "dilation invariance",
        worst <= 1e-9,
        &detail,
        t.elapsed(),
        Duration::from_secs(60),
    );
}

/// The 16-point sweep shared by criteria 4 to 6, with the time it took.
fn sweep_table() -> &'static (SweepTable, Duration) {
    static TABLE: OnceLock<(SweepTable, Duration)> = OnceLock::new();
    TABLE.get_or_init(|| {
        let t = Instant::now();
        let table = sweep(TF, &GRID, &GRID, 0.75);
        (table, t.elapsed())
    })
}

fn endpoints(row: &SweepRow) -> (f64, f64) {
    (row.snr_min_db.unwrap_or(f64::NAN), row.snr_max_db.unwrap_or(f64::NAN))
}

#[test]
fn criterion_4_interval_envelope() {
    let (table, elapsed) = sweep_table();
    let (mut min_lo, mut min_hi, mut max_lo, mut max_hi) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let mut complete = true;
    for row in &table.rows {
        let (a, b) = endpoints(row);
        complete &= row.error.is_none() && a.is_finite() && b.is_finite();
        min_lo = min_lo.min(a);
        min_hi = min_hi.max(a);
        max_lo = max_lo.min(b);
        max_hi = max_hi.max(b);
    }
    let pass = complete && min_lo >= -27.0 && min_hi <= -5.0 && max_lo >= 30.0 && max_hi <= 70.0;
    let detail = format!(
        "SNR_min ∈ [{min_lo:.2}, {min_hi:.2}] dB (allowed [-27, -5]), SNR_max ∈ [{max_lo:.2}, {max_hi:.2}] dB (allowed [30, 70]){}",
        if complete { "" } else { ", some rows missing" }
    );
    report(
        4,
        "interval envelope",
        pass,
        &detail,
        *elapsed,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_5_rules_of_thumb() {
    let (table, elapsed) = sweep_table();
    let factor_two_db = 10.0 * 2f64.log10();
    let (mut worst_min, mut worst_max) = (0.0_f64, 0.0_f64);
    let mut at_max = (0.0, 0.0);
    for row in &table.rows {
        let (a, b) = endpoints(row);
        let gap = |x: f64, rule: f64| if x.is_nan() { f64::INFINITY } else { (x - rule).abs() };
        worst_min = worst_min.max(gap(a, row.rule_min_db));
        let d = gap(b, row.rule_max_db);
        if d > worst_max {
            worst_max = d;
            at_max = (row.spread, row.eps);
        }
    }
    let pass = worst_min <= factor_two_db && worst_max <= factor_two_db;
    let detail = format!(
        "worst |SNR_min - 13√Δ| = {worst_min:.2} dB, worst |SNR_max - 0.22/(Δ+ε)| = {worst_max:.2} dB at Δ={:e}, ε={:e} (limit {factor_two_db:.2} dB each)",
        at_max.0, at_max.1
    );
    report(5, "rules of thumb", pass, &detail, *elapsed, Duration::from_secs(600));
}

#[test]
fn criterion_6_upper_endpoint_monotone() {
    let (table, elapsed) = sweep_table();
    let at = |s: f64, e: f64| table.row(s, e).and_then(|r| r.snr_max_db).unwrap_or(f64::NAN);
    let mut violations = Vec::new();
    for &fixed in &GRID {
        for w in GRID.windows(2) {
            // increasing spread at fixed leakage, then increasing leakage at fixed spread
            let (a, b) = (at(w[0], fixed), at(w[1], fixed));
            if b.partial_cmp(&a) == Some(std::cmp::Ordering::Greater) || b.is_nan() || a.is_nan() {
                violations.push(format!("Δ {:e}->{:e} at ε={fixed:e}: {a:.2}->{b:.2}", w[0], w[1]));
            }
            let (a, b) = (at(fixed, w[0]), at(fixed, w[1]));
            if b.partial_cmp(&a) == Some(std::cmp::Ordering::Greater) || b.is_nan() || a.is_nan() {
                violations.push(format!("ε {:e}->{:e} at Δ={fixed:e}: {a:.2}->{b:.2}", w[0], w[1]));
            }
        }
    }
    let detail = if violations.is_empty() {
        "SNR_max non-increasing along all 24 grid edges".to_string()
    } else {
        violations.join("; ")
    };
    report(
        6,
        "upper endpoint monotone",
        violations.is_empty(),
        &detail,
        *elapsed,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_7_oracle_suite() {
    let t = Instant::now();
    let p = make_rrc_pulse(TF).unwrap();
    let lat = WHLattice::square(TF).unwrap();
    let mut failures = Vec::new();

    let edge = p.band_edge();
    let mut fft_worst = 0.0_f64;
    for &nu in &[0.0, 0.003, -0.011, 0.2, 0.49] {
        let h = |u: f64| p.eval_freq(u + nu) * p.eval_freq(u);
        for (tau, oracle) in fft_transform(h, -edge - 1e-3, edge + 1e-3, 21, 4.0, 60) {
            fft_worst = fft_worst.max((ambiguity(&p, nu, tau).unwrap() - oracle).norm());
        }
    }
    if fft_worst >= 1e-7 {
        failures.push("ambiguity vs FFT");
    }

    let mut mc_worst = 0.0_f64;
    for (i, &gain) in FADING_GAINS.iter().enumerate() {
        let (mean, sd) = monte_carlo_fading(gain, 1_000_000, 0xacce97 + i as u64);
        mc_worst = mc_worst.max((fading_expectation(gain) - mean).abs() / sd);
    }
    if mc_worst >= 3.0 {
        failures.push("fading expectation vs Monte Carlo");
    }

    let mut alpha_worst = 0.0_f64;
    for (r, dt, eps, lvl) in PENALTY_CASES {
        let inf = penalty_infimum(r, dt, eps, lvl).unwrap().value;
        let scan = dense_alpha_scan(r, dt, eps, lvl, 1_000_000);
        alpha_worst = alpha_worst.max((inf - scan).abs() / scan.abs());
    }
    if alpha_worst >= 5e-5 {
        failures.push("α infimum vs dense scan");
    }

    let mut pairs = Vec::new();
    for k in -3i64..=3 {
        for n in -1i64..=1 {
            if k == 0 && n == 0 {
                continue;
            }
            let (d_nu, d_tau) = lattice_derivatives(&p, &lat, k, n).unwrap();
            let (fd_nu, fd_tau) = central_gradient(&p, -(n as f64) * lat.freq_step, -(k as f64) * lat.time_step, 1e-5);
            let norm = (d_nu.norm_sqr() + d_tau.norm_sqr()).sqrt();
            pairs.push((norm, (d_nu - fd_nu).norm() + (d_tau - fd_tau).norm()));
        }
    }
    // where the gradient vanishes exactly, measure against the largest gradient in the set
    let g_max = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
    let fd_worst = pairs
        .iter()
        .map(|&(norm, err)| err / if norm > 1e-3 * g_max { norm } else { g_max })
        .fold(0.0, f64::max);
    if fd_worst >= 1e-5 {
        failures.push("lattice derivatives vs central differences");
    }

    let ortho = orthonormality_residual(&p, &lat, 8, 2).unwrap();
    if ortho >= 1e-8 {
        failures.push("orthonormality");
    }

    let detail = format!(
        "FFT {fft_worst:.1e} (<1e-7), MC {mc_worst:.2}σ (<3σ), α scan {alpha_worst:.1e} (<5e-5), \
         derivatives {fd_worst:.1e} (<1e-5), orthonormality {ortho:.1e} (<1e-8){}",
        if failures.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failures.join(", "))
        }
    );
    report(
        7,
        "oracle suite",
        failures.is_empty(),
        &detail,
        t.elapsed(),
        Duration::from_secs(300),
    );
}
