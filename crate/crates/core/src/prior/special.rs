//! Log-gamma, digamma and trigamma by upward recurrence into the asymptotic
//! regime followed by the Stirling-type series.

use std::f64::consts::PI;

const ASYMPTOTIC_FROM: f64 = 10.0;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut z = x;
    let mut prod = 1.0;
    while z < ASYMPTOTIC_FROM {
        prod *= z;
        z += 1.0;
    }
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let series = zi
        * (1.0 / 12.0
            + zi2
                * (-1.0 / 360.0
                    + zi2
                        * (1.0 / 1260.0
                            + zi2
                                * (-1.0 / 1680.0
                                    + zi2 * (1.0 / 1188.0 + zi2 * (-691.0 / 360360.0 + zi2 / 156.0))))));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - prod.ln()
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_FROM {
        shift += 1.0 / z;
        z += 1.0;
    }
    let zi2 = 1.0 / (z * z);
    let series = zi2
        * (1.0 / 12.0
            - zi2
                * (1.0 / 120.0
                    - zi2
                        * (1.0 / 252.0
                            - zi2 * (1.0 / 240.0 - zi2 * (1.0 / 132.0 - zi2 * (691.0 / 32760.0 - zi2 / 12.0))))));
    z.ln() - 0.5 / z - series - shift
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_FROM {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let series = zi
        + 0.5 * zi2
        + zi * zi2
            * (1.0 / 6.0
                - zi2
                    * (1.0 / 30.0
                        - zi2
                            * (1.0 / 42.0
                                - zi2 * (1.0 / 30.0 - zi2 * (5.0 / 66.0 - zi2 * (691.0 / 2730.0 - zi2 * 7.0 / 6.0))))));
    series + shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn known_values() {
        const EULER: f64 = 0.577_215_664_901_532_9;
        assert!((digamma(1.0) + EULER).abs() < 1e-14);
        assert!((digamma(0.5) + EULER + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-13);
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-13);
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-14);
        assert!(rel(ln_gamma(101.0), (1..=100).map(|k| (k as f64).ln()).sum()) < 1e-13);
        // B(2,2) = 1/6
        assert!((ln_beta(2.0, 2.0) + 6f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn digamma_recurrence() {
        let mut x = 0.01;
        while x <= 100.0 {
            let lhs = digamma(x + 1.0);
            let rhs = digamma(x) + 1.0 / x;
            assert!((lhs - rhs).abs() <= 1e-12, "x={x}: {lhs} vs {rhs}");
            x *= 1.07;
        }
    }

    #[test]
    fn trigamma_is_derivative_of_digamma() {
        for x in [0.05, 0.3, 1.7, 9.9, 10.1, 55.0, 900.0] {
            let h = 1e-5 * x;
            let fd = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
            assert!(rel(trigamma(x), fd) < 1e-6, "x={x}");
        }
    }

    #[test]
    fn agrees_with_statrs() {
        for x in [0.01, 0.2, 0.99, 1.5, 3.3, 9.99, 10.0, 42.0, 999.0, 2000.0] {
            assert!(rel(ln_gamma(x), statrs::function::gamma::ln_gamma(x)) < 1e-12, "lnΓ({x})");
            assert!(rel(digamma(x), statrs::function::gamma::digamma(x)) < 1e-12, "ψ({x})");
        }
    }
}
