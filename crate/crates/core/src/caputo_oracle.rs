//! Reference values for the variable-order Caputo derivative, used to
//! validate the operational matrices. Nothing in the solve path calls this.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::opmat::OrderFunction;
use crate::quadrature::GaussJacobi;
use crate::scalars::gamma;

type Field = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Default number of Gauss-Jacobi nodes.
pub const DEFAULT_NODES: usize = 64;

/// A function `u(x, t)` with an optional analytic `∂u/∂t`.
#[derive(Clone)]
pub struct ScalarField {
    value: Arc<Field>,
    dt: Option<Arc<Field>>,
}

impl ScalarField {
    pub fn new<F>(value: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            dt: None,
        }
    }

    pub fn with_dt<F, G>(value: F, dt: G) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            dt: Some(Arc::new(dt)),
        }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.value)(x, t)
    }

    pub fn has_analytic_dt(&self) -> bool {
        self.dt.is_some()
    }

    /// `∂u/∂t`, analytic when available, otherwise a fourth-order central difference.
    pub fn dt(&self, x: f64, t: f64) -> f64 {
        match &self.dt {
            Some(d) => d(x, t),
            None => {
                let h = 1e-4 * t.abs().max(1.0);
                let f = |s: f64| self.value(x, s);
                (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h)
            }
        }
    }

    /// `a u + b v`.
    pub fn linear_combination(a: f64, u: &ScalarField, b: f64, v: &ScalarField) -> ScalarField {
        let (u1, v1) = (u.clone(), v.clone());
        let value = move |x, t| a * u1.value(x, t) + b * v1.value(x, t);
        if u.has_analytic_dt() && v.has_analytic_dt() {
            let (u2, v2) = (u.clone(), v.clone());
            ScalarField::with_dt(value, move |x, t| a * u2.dt(x, t) + b * v2.dt(x, t))
        } else {
            ScalarField::new(value)
        }
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("analytic_dt", &self.dt.is_some())
            .finish_non_exhaustive()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::Singularity(format!("Caputo derivative requires t > 0, got {t}")))
    }
}

/// Variable-order Caputo derivative of `u` in `t` for `0 < γ(x,t) <= 1`,
/// by Gauss-Jacobi quadrature of the weakly singular integral.
pub fn caputo_vo_quadrature(u: &ScalarField, order: &OrderFunction, x: f64, t: f64, nodes: usize) -> Result<f64> {
    check_time(t)?;
    if order.bracket() != 1 {
        return Err(Error::Precondition(format!(
            "quadrature oracle supports q = 1 only, got q = {}",
            order.bracket()
        )));
    }
    let g = order.value(x, t);
    if !(g > 0.0 && g <= 1.0) {
        return Err(Error::OrderBracket { order: g, q: 1, x, t });
    }
    // The order-one limit is the classical derivative.
    if g >= 1.0 - 1e-12 {
        return Ok(u.dt(x, t));
    }
    // s = t (1 + ξ)/2, so (t - s)^{-γ} ds = (t/2)^{1-γ} (1 - ξ)^{-γ} dξ.
    let rule = GaussJacobi::new(nodes, -g, 0.0)?;
    let integral = rule.integrate(|xi| u.dt(x, 0.5 * t * (1.0 + xi)));
    Ok((0.5 * t).powf(1.0 - g) * integral / gamma(1.0 - g)?)
}

/// Closed-form Caputo derivative of `t^m`.
pub fn caputo_vo_monomial(m: u32, order: &OrderFunction, x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if m < order.bracket() {
        return Ok(0.0);
    }
    let v = order.value(x, t);
    let mf = m as f64;
    Ok(gamma(mf + 1.0)? / gamma(mf - v + 1.0)? * t.powf(mf - v))
}
