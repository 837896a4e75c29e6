//! Saturable resonant absorber: power-broadened linewidth, complex response
//! and the input-output map for quadrature statistics.
//!
//! All frequencies are in units of the unbroadened linewidth gamma_0, so the
//! detuning is the dimensionless `delta_bar` and the broadened linewidth is
//! `gamma_bar = sqrt(1 + nbar / n_sat) >= 1`. The response at a working point
//! is
//!
//! ```text
//! phi + i xi = (T/2) (delta_bar + i) / (delta_bar^2 + gamma_bar^2)
//! ```
//!
//! which gives the standard saturable Lorentzian: on-resonance absorption
//! scales as 1 / (1 + nbar / n_sat).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{ProbeState, QuadratureStats};

/// Physical system parameters: on-resonance optical depth and saturation
/// photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    /// On-resonance optical depth T > 0.
    #[serde(rename = "T")]
    pub optical_depth: f64,
    /// Saturation photon number n_sat > 0.
    #[serde(rename = "n_sat")]
    pub saturation_photons: f64,
}

/// The medium's action at a working point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Response {
    /// Dispersive phase shift phi (radians); odd in delta_bar.
    pub phi: f64,
    /// Amplitude attenuation exponent xi >= 0; power transmission e^{-2 xi}.
    pub xi: f64,
    /// Power-broadened linewidth in units of gamma_0; >= 1.
    pub gamma_bar: f64,
}

impl Medium {
    pub fn new(optical_depth: f64, saturation_photons: f64) -> Result<Self> {
        if !optical_depth.is_finite() {
            return Err(Error::NonFiniteField("T"));
        }
        if !saturation_photons.is_finite() {
            return Err(Error::NonFiniteField("n_sat"));
        }
        if optical_depth <= 0.0 {
            return Err(Error::NegativeMagnitude("T"));
        }
        if saturation_photons <= 0.0 {
            return Err(Error::NegativeMagnitude("n_sat"));
        }
        Ok(Self {
            optical_depth,
            saturation_photons,
        })
    }

    /// `gamma_bar = sqrt(1 + nbar / n_sat)`, monotone non-decreasing in nbar.
    pub fn power_broadened_linewidth(&self, nbar: f64) -> Result<f64> {
        if nbar.is_nan() || nbar < 0.0 || !nbar.is_finite() {
            return Err(Error::NegativePhotonNumber);
        }
        Ok((1.0 + nbar / self.saturation_photons).sqrt())
    }

    /// Complex response at detuning `delta_bar` with input photon number `nbar`.
    pub fn complex_response(&self, delta_bar: f64, nbar: f64) -> Result<Response> {
        let gamma_bar = self.power_broadened_linewidth(nbar)?;
        let denom = delta_bar * delta_bar + gamma_bar * gamma_bar;
        Ok(Response {
            phi: 0.5 * self.optical_depth * delta_bar / denom,
            xi: 0.5 * self.optical_depth / denom,
            gamma_bar,
        })
    }
}

/// Output X-quadrature statistics after transmission: the input statistics
/// taken at the rotated angle phi, attenuated, plus the vacuum contribution
/// of the absorption reservoir:
///
/// ```text
/// mu_out = mu_in(phi) e^{-xi}
/// v_out  = v_in(phi) e^{-2 xi} + (1 - e^{-2 xi})
/// ```
///
/// Saturation uses the mean photon number of the input state.
pub fn output_quadrature_stats(
    state: &ProbeState,
    medium: &Medium,
    delta_bar: f64,
) -> QuadratureStats {
    let nbar = state.mean_photon_number();
    let response = medium
        .complex_response(delta_bar, nbar)
        .expect("valid state has nbar >= 0");
    let input = state.input_quadrature_stats(response.phi);
    let transmission = (-2.0 * response.xi).exp();
    QuadratureStats {
        mu: input.mu * (-response.xi).exp(),
        v: input.v * transmission + (1.0 - transmission),
    }
}
