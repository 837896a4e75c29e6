//! Single-mode Gaussian probe states and their quadrature statistics.
//!
//! Conventions: vacuum quadrature variance is 1 (a coherent state has v = 1
//! for every measurement angle), and all phases are stored wrapped to
//! [-pi, pi).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Displaced squeezed vacuum `D(alpha) S(zeta) |0>` with
/// `alpha = R e^{i theta}` and `zeta = r e^{2i psi}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeState {
    /// Displacement magnitude R >= 0.
    #[serde(rename = "R")]
    pub displacement: f64,
    /// Displacement phase theta, wrapped to [-pi, pi).
    #[serde(rename = "theta")]
    pub displacement_phase: f64,
    /// Squeeze magnitude r >= 0.
    #[serde(rename = "r")]
    pub squeeze: f64,
    /// Squeeze phase psi, wrapped to [-pi, pi).
    #[serde(rename = "psi")]
    pub squeeze_phase: f64,
}

/// Mean and variance of a measured quadrature (a Gaussian outcome
/// distribution in the vacuum-variance-1 convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureStats {
    pub mu: f64,
    pub v: f64,
}

/// Wrap an angle to the canonical interval [-pi, pi).
pub fn wrap_phase(angle: f64) -> f64 {
    let w = (angle + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can return exactly 2*pi for inputs just below -pi
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl ProbeState {
    /// Validate and canonicalize (wrap phases). Negative magnitudes are
    /// rejected; use [`ProbeState::canonicalized`] to absorb signs into the
    /// phases instead.
    pub fn new(
        displacement: f64,
        displacement_phase: f64,
        squeeze: f64,
        squeeze_phase: f64,
    ) -> Result<Self> {
        for (value, name) in [
            (displacement, "R"),
            (displacement_phase, "theta"),
            (squeeze, "r"),
            (squeeze_phase, "psi"),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFiniteField(name));
            }
        }
        if displacement < 0.0 {
            return Err(Error::NegativeMagnitude("R"));
        }
        if squeeze < 0.0 {
            return Err(Error::NegativeMagnitude("r"));
        }
        Ok(Self {
            displacement,
            displacement_phase: wrap_phase(displacement_phase),
            squeeze,
            squeeze_phase: wrap_phase(squeeze_phase),
        })
    }

    /// Like [`ProbeState::new`] but absorbs negative magnitudes into the
    /// phases: -R e^{i theta} = R e^{i(theta+pi)} and
    /// -r e^{2i psi} = r e^{2i(psi+pi/2)}.
    pub fn canonicalized(
        displacement: f64,
        displacement_phase: f64,
        squeeze: f64,
        squeeze_phase: f64,
    ) -> Result<Self> {
        let (displacement, displacement_phase) = if displacement < 0.0 {
            (-displacement, displacement_phase + PI)
        } else {
            (displacement, displacement_phase)
        };
        let (squeeze, squeeze_phase) = if squeeze < 0.0 {
            (-squeeze, squeeze_phase + PI / 2.0)
        } else {
            (squeeze, squeeze_phase)
        };
        Self::new(displacement, displacement_phase, squeeze, squeeze_phase)
    }

    /// Vacuum state (R = r = 0).
    pub fn vacuum() -> Self {
        Self {
            displacement: 0.0,
            displacement_phase: 0.0,
            squeeze: 0.0,
            squeeze_phase: 0.0,
        }
    }

    /// Coherent state with displacement R e^{i theta}.
    pub fn coherent(displacement: f64, displacement_phase: f64) -> Result<Self> {
        Self::new(displacement, displacement_phase, 0.0, 0.0)
    }

    /// Mean photon number `<a^dag a> = R^2 + sinh^2 r`.
    pub fn mean_photon_number(&self) -> f64 {
        self.displacement * self.displacement + self.squeeze.sinh().powi(2)
    }

    /// Statistics of the generalized quadrature
    /// `X_phi = a e^{-i phi} + a^dag e^{i phi}`:
    /// mean `2 R cos(phi - theta)`, variance
    /// `e^{-2r} cos^2(phi - psi) + e^{2r} sin^2(phi - psi)`.
    pub fn input_quadrature_stats(&self, phi_angle: f64) -> QuadratureStats {
        let mu = 2.0 * self.displacement * (phi_angle - self.displacement_phase).cos();
        let (sin_sq, cos_sq) = {
            let (s, c) = (phi_angle - self.squeeze_phase).sin_cos();
            (s * s, c * c)
        };
        let v = (-2.0 * self.squeeze).exp() * cos_sq + (2.0 * self.squeeze).exp() * sin_sq;
        QuadratureStats { mu, v }
    }
}

impl QuadratureStats {
    /// Validated constructor: requires v > 0 and finite fields.
    pub fn new(mu: f64, v: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::NonFiniteField("mu"));
        }
        if !v.is_finite() {
            return Err(Error::NonFiniteField("v"));
        }
        if v <= 0.0 {
            return Err(Error::NonPositiveVariance);
        }
        Ok(Self { mu, v })
    }
}
