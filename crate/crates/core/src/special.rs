//! Exponential integral.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `e^x E₁(x)` for `x > 0`: power series for `x <= 1`, Lentz continued
/// fraction above, so the result never overflows for large `x`.
pub fn scaled_exp_integral(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        x.exp() * (-EULER_GAMMA - x.ln() - sum)
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h
    }
}

/// `E₁(x) = ∫_x^∞ e^{-t}/t dt`.
pub fn exp_integral_e1(x: f64) -> f64 {
    scaled_exp_integral(x) * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // E₁(1) = 0.219383934395520..., E₁(0.1) = 1.82292395841939...
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((exp_integral_e1(0.1) - 1.822_923_958_419_390_7).abs() < 1e-14);
        // E₁(10) = 4.15696892968532e-6
        assert!((exp_integral_e1(10.0) / 4.156_968_929_685_324e-6 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn series_and_fraction_meet_continuously() {
        let below = scaled_exp_integral(1.0);
        let above = scaled_exp_integral(1.0 + 1e-12);
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn large_argument_asymptotics() {
        let x: f64 = 1e4;
        let asym = 1.0 / x - 1.0 / (x * x) + 2.0 / x.powi(3) - 6.0 / x.powi(4) + 24.0 / x.powi(5);
        assert!((scaled_exp_integral(x) - asym).abs() < 1e-14 * asym);
    }
}
