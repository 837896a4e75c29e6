//! Fisher information of the Gaussian quadrature-outcome distribution with
//! respect to the detuning or the optical depth.
//!
//! Detuning information is reported per gamma_0^2 (all detunings are in
//! units of the unbroadened linewidth); optical-depth information is
//! dimensionless. Both are per single use of the probe state.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::medium::{output_quadrature_stats, Medium};
use crate::state::ProbeState;

/// Parameter being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "detuning")]
    Detuning,
    #[serde(rename = "od")]
    OpticalDepth,
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "detuning" => Ok(Target::Detuning),
            "od" => Ok(Target::OpticalDepth),
            other => Err(format!("unknown target `{other}` (expected `detuning` or `od`)")),
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Target::Detuning => "detuning",
            Target::OpticalDepth => "od",
        })
    }
}

/// Fisher information split into its mean and variance channels:
/// `value = (dmu/dY)^2 / v + (dv/dY)^2 / (2 v^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherBreakdown {
    pub value: f64,
    pub mean_term: f64,
    pub var_term: f64,
}

/// How to differentiate the outcome statistics with respect to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    /// Central differences with step `max(|x|, 1) eps^(1/3)` and one
    /// Richardson refinement; retained for testing the analytic path.
    FiniteDifference,
}

/// Fisher information of a Gaussian outcome distribution given the
/// derivatives of its mean and variance. The mean itself does not enter.
pub fn gaussian_fisher(mu: f64, v: f64, dmu: f64, dv: f64) -> Result<FisherBreakdown> {
    if !mu.is_finite() || !dmu.is_finite() || !dv.is_finite() {
        return Err(Error::NonFiniteField("gaussian_fisher input"));
    }
    if v.is_nan() || v <= 0.0 || !v.is_finite() {
        return Err(Error::NonPositiveVariance);
    }
    let mean_term = dmu * dmu / v;
    let var_term = dv * dv / (2.0 * v * v);
    Ok(FisherBreakdown {
        value: mean_term + var_term,
        mean_term,
        var_term,
    })
}

/// Derivatives (dmu/dY, dv/dY) of the output statistics with respect to the
/// target, holding the probe parameters (and hence nbar and gamma_bar) fixed.
pub fn model_derivatives(
    state: &ProbeState,
    medium: &Medium,
    delta_bar: f64,
    target: Target,
    mode: DerivativeMode,
) -> (f64, f64) {
    match mode {
        DerivativeMode::Analytic => analytic_derivatives(state, medium, delta_bar, target),
        DerivativeMode::FiniteDifference => fd_derivatives(state, medium, delta_bar, target),
    }
}

fn analytic_derivatives(
    state: &ProbeState,
    medium: &Medium,
    delta_bar: f64,
    target: Target,
) -> (f64, f64) {
    let nbar = state.mean_photon_number();
    let gamma_bar = medium
        .power_broadened_linewidth(nbar)
        .expect("valid state has nbar >= 0");
    let g2 = gamma_bar * gamma_bar;
    let denom = delta_bar * delta_bar + g2;
    let t = medium.optical_depth;

    let phi = 0.5 * t * delta_bar / denom;
    let xi = 0.5 * t / denom;
    // d(phi + i xi)/dT = (1/2)(db + i)/denom
    // d(phi + i xi)/ddb = (T/2)[(g2 - db^2) - 2 i db]/denom^2
    let (dphi, dxi) = match target {
        Target::OpticalDepth => (0.5 * delta_bar / denom, 0.5 / denom),
        Target::Detuning => (
            0.5 * t * (g2 - delta_bar * delta_bar) / (denom * denom),
            -t * delta_bar / (denom * denom),
        ),
    };

    let (sin_d, cos_d) = (phi - state.displacement_phase).sin_cos();
    let (sin_s, cos_s) = (phi - state.squeeze_phase).sin_cos();
    let e_m = (-2.0 * state.squeeze).exp();
    let e_p = (2.0 * state.squeeze).exp();
    let v_in = e_m * cos_s * cos_s + e_p * sin_s * sin_s;
    let dv_in_dphi = 2.0 * (2.0 * state.squeeze).sinh() * (2.0 * (phi - state.squeeze_phase)).sin();
    let transmission = (-2.0 * xi).exp();

    let dmu = 2.0 * state.displacement * (-xi).exp() * (-sin_d * dphi - cos_d * dxi);
    let dv = transmission * (dv_in_dphi * dphi - 2.0 * dxi * (v_in - 1.0));
    (dmu, dv)
}

fn fd_derivatives(state: &ProbeState, medium: &Medium, delta_bar: f64, target: Target) -> (f64, f64) {
    let stats_at = |y: f64| match target {
        Target::Detuning => output_quadrature_stats(state, medium, y),
        Target::OpticalDepth => {
            let shifted = Medium {
                optical_depth: y,
                saturation_photons: medium.saturation_photons,
            };
            output_quadrature_stats(state, &shifted, delta_bar)
        }
    };
    let y0 = match target {
        Target::Detuning => delta_bar,
        Target::OpticalDepth => medium.optical_depth,
    };
    let mut h = y0.abs().max(1.0) * f64::EPSILON.cbrt();
    if target == Target::OpticalDepth {
        // keep the shifted optical depth positive
        h = h.min(y0 / 4.0);
    }
    let central = |h: f64| {
        let plus = stats_at(y0 + h);
        let minus = stats_at(y0 - h);
        ((plus.mu - minus.mu) / (2.0 * h), (plus.v - minus.v) / (2.0 * h))
    };
    let (dmu_h, dv_h) = central(h);
    let (dmu_h2, dv_h2) = central(h / 2.0);
    // one Richardson refinement: D = (4 D(h/2) - D(h)) / 3
    (
        (4.0 * dmu_h2 - dmu_h) / 3.0,
        (4.0 * dv_h2 - dv_h) / 3.0,
    )
}

/// Fisher information of the X-quadrature measurement at a working point,
/// using the analytic derivative path.
pub fn fisher_information(
    state: &ProbeState,
    medium: &Medium,
    delta_bar: f64,
    target: Target,
) -> FisherBreakdown {
    let stats = output_quadrature_stats(state, medium, delta_bar);
    let (dmu, dv) = analytic_derivatives(state, medium, delta_bar, target);
    gaussian_fisher(stats.mu, stats.v, dmu, dv).expect("output variance is positive")
}
