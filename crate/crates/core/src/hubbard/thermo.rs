//! Thermodynamic-limit density of state at half filling,
//!
//! ```text
//! rho(k) = 1/(2 pi) + (cos k / pi) int_0^inf dp J0(p) cos(p sin k) / (1 + exp(U p / 8))
//! ```

use std::f64::consts::PI;

use super::bessel::bessel_j0;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Damping scale in the Fermi-like factor `1 / (1 + exp(U p / DAMPING))`.
pub const DAMPING: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoOptions {
    /// Absolute error bound on `rho`.
    pub tol: f64,
    /// Largest integration cutoff `P` accepted before giving up.
    pub cutoff_cap: f64,
    /// Scale `d` in `1 / (1 + exp(U p / d))`.
    pub damping: f64,
}

impl Default for ThermoOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            cutoff_cap: 1e6,
            damping: DAMPING,
        }
    }
}

/// `1 / (1 + e^x)` without overflow.
fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Integration cutoff: both the envelope `1/(1 + e^{UP/d})` and the tail
/// integral `(d/U) e^{-UP/d}` of `|integrand|` fall below `tol / 10`.
pub fn cutoff(u: f64, tol: f64, damping: f64) -> f64 {
    let rate = u / damping;
    let envelope = (10.0 / tol - 1.0).ln() / rate;
    let tail = ((10.0 / (rate * tol)).ln() / rate).max(0.0);
    envelope.max(tail) * (1.0 + 1e-6)
}

pub fn thermodynamic_dos(u: f64, k: f64, tol: f64) -> Result<f64> {
    thermodynamic_dos_with(
        u,
        k,
        &ThermoOptions {
            tol,
            ..ThermoOptions::default()
        },
    )
}

pub fn thermodynamic_dos_with(u: f64, k: f64, opts: &ThermoOptions) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Validation(format!("U must be positive, got {u}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Validation(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if !(k.abs() <= PI + 1e-12) {
        return Err(Error::Validation(format!("k = {k} outside [-pi, pi]")));
    }
    if !(opts.damping > 0.0) || !opts.damping.is_finite() {
        return Err(Error::Validation(format!(
            "damping must be positive, got {}",
            opts.damping
        )));
    }
    let p_max = cutoff(u, opts.tol, opts.damping);
    if p_max > opts.cutoff_cap {
        return Err(Error::PrecisionLimit {
            required: p_max,
            cap: opts.cutoff_cap,
        });
    }
    let (s, c) = k.sin_cos();
    let rate = u / opts.damping;
    let integrand = |p: f64| bessel_j0(p) * (p * s).cos() * fermi(rate * p);

    // J0 cos(p sin k) beats at frequencies 1 +- |sin k|, so panels of a
    // quarter of the shortest period 2 pi / (1 + |sin k|) stay smooth
    let wavelength = 2.0 * PI / (1.0 + s.abs());
    let panel = 0.5 * wavelength;
    let panels = (p_max / panel).ceil().max(1.0) as usize;
    let budget = 0.5 * opts.tol * PI / panels as f64;
    let mut integral = 0.0;
    for i in 0..panels {
        let a = i as f64 * panel;
        let b = ((i + 1) as f64 * panel).min(p_max);
        integral += integrate(&integrand, a, b, budget)?.value;
    }
    Ok(1.0 / (2.0 * PI) + c / PI * integral)
}
