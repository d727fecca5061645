//! Exponential integrals.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Entire exponential integral `Ein(x) = ∫₀ˣ (1 − e^{−t})/t dt = E₁(x) + γ + ln x`, by its power series.
pub fn ein(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut k = 1.0;
    loop {
        term *= -x / (k + 1.0);
        k += 1.0;
        let add = term / k;
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() || k > 200.0 {
            return sum;
        }
    }
}

/// `E₁(x) = ∫ₓ^∞ e^{−t}/t dt` for `x > 0`.
pub fn e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs a positive argument, got {x}");
    if x < 1.0 {
        return -EULER_GAMMA - x.ln() + ein(x);
    }
    // Continued fraction, modified Lentz.
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
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
    h * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Tabulated values of E1.
        let cases = [
            (0.1, 1.822_923_958_419_390_7),
            (0.5, 0.559_773_594_776_160_8),
            (1.0, 0.219_383_934_395_520_3),
            (2.0, 0.048_900_510_708_061_1),
            (4.0, 0.003_779_352_409_848_906),
            (10.0, 4.156_968_929_685_324e-6),
        ];
        for (x, v) in cases {
            assert!(
                (e1(x) - v).abs() <= 1e-14 * v.max(1e-3),
                "E1({x}) = {}",
                e1(x)
            );
        }
    }

    #[test]
    fn branches_agree_at_one() {
        let a = -EULER_GAMMA - 1f64.ln() + ein(1.0);
        assert!((a - e1(1.0)).abs() < 1e-15);
    }

    #[test]
    fn ein_small_argument() {
        let x = 1e-6;
        assert!((ein(x) - (x - x * x / 4.0 + x * x * x / 18.0)).abs() < 1e-22);
    }
}
