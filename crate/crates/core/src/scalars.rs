//! Gamma function and the crate-wide tolerance policy.

use crate::error::{Error, Result};

/// Numerical tolerances shared by the solver and the validation oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Pivots smaller than `pivot_rel_tol * ||A||_inf` are treated as zero.
    pub pivot_rel_tol: f64,
    /// Agreement required between the operational matrix and the quadrature oracle.
    pub oracle_tol: f64,
    /// Residual magnitude above which diagnostics are worth reporting.
    pub residual_report_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            pivot_rel_tol: 1e-13,
            oracle_tol: 1e-6,
            residual_report_tol: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn new(pivot_rel_tol: f64, oracle_tol: f64, residual_report_tol: f64) -> Result<Self> {
        let cfg = Self {
            pivot_rel_tol,
            oracle_tol,
            residual_report_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pivot_rel_tol", self.pivot_rel_tol),
            ("oracle_tol", self.oracle_tol),
            ("residual_report_tol", self.residual_report_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Real Gamma function for `x > 0`.
///
/// Lanczos approximation with g = 7 and nine coefficients. Arguments below
/// one half are shifted up with `Γ(x) = Γ(x + 1) / x`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "gamma argument",
            value: x,
            domain: "(0, inf)",
        });
    }
    Ok(gamma_positive(x))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return gamma_positive(x + 1.0) / x;
    }
    // Exact factorials for small integers.
    if x == x.floor() && x <= 171.0 {
        return (1..x as u64).fold(1.0, |acc, i| acc * i as f64);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    // Split the power so large arguments do not overflow before the exponential.
    let half = w.powf(0.5 * (z + 0.5));
    (2.0 * std::f64::consts::PI).sqrt() * half * (-w).exp() * half * sum
}

/// n! as a float.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Binomial coefficient as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
