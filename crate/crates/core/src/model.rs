//! Parametrized Gaussian outcome models.
//!
//! A model maps a scalar parameter value to the (mean, variance) of the
//! measured quadrature. The physical transmission model is the main
//! implementation; the two synthetic families are test and calibration hooks
//! with known Fisher information.

use crate::fisher::{fisher_information, model_derivatives, DerivativeMode, Target};
use crate::medium::{output_quadrature_stats, Medium};
use crate::state::{ProbeState, QuadratureStats};

/// A Gaussian outcome distribution whose statistics depend on one scalar
/// parameter.
pub trait OutcomeModel: Sync {
    /// Outcome statistics at parameter value `y`.
    fn stats(&self, y: f64) -> QuadratureStats;

    /// Analytic derivatives (dmu/dy, dv/dy) at `y`. Used by the score-based
    /// estimators; the numeric oracle deliberately does not call this.
    fn derivatives(&self, y: f64) -> (f64, f64);

    /// Closed-form Fisher information at `y`.
    fn analytic_fisher(&self, y: f64) -> f64 {
        let s = self.stats(y);
        let (dmu, dv) = self.derivatives(y);
        crate::fisher::gaussian_fisher(s.mu, s.v, dmu, dv)
            .expect("model variance is positive")
            .value
    }
}

/// Quadrature measurement behind the saturable absorber, parametrized by the
/// estimation target. The probe (and hence the saturation level) is held
/// fixed as the parameter varies.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalModel {
    pub state: ProbeState,
    pub medium: Medium,
    pub delta_bar: f64,
    pub target: Target,
}

impl PhysicalModel {
    pub fn new(state: ProbeState, medium: Medium, delta_bar: f64, target: Target) -> Self {
        Self {
            state,
            medium,
            delta_bar,
            target,
        }
    }

    /// The parameter value at the configured working point.
    pub fn true_value(&self) -> f64 {
        match self.target {
            Target::Detuning => self.delta_bar,
            Target::OpticalDepth => self.medium.optical_depth,
        }
    }

    fn at(&self, y: f64) -> (ProbeState, Medium, f64) {
        match self.target {
            Target::Detuning => (self.state, self.medium, y),
            Target::OpticalDepth => (
                self.state,
                Medium {
                    optical_depth: y,
                    saturation_photons: self.medium.saturation_photons,
                },
                self.delta_bar,
            ),
        }
    }
}

impl OutcomeModel for PhysicalModel {
    fn stats(&self, y: f64) -> QuadratureStats {
        let (state, medium, db) = self.at(y);
        output_quadrature_stats(&state, &medium, db)
    }

    fn derivatives(&self, y: f64) -> (f64, f64) {
        let (state, medium, db) = self.at(y);
        model_derivatives(&state, &medium, db, self.target, DerivativeMode::Analytic)
    }

    fn analytic_fisher(&self, y: f64) -> f64 {
        let (state, medium, db) = self.at(y);
        fisher_information(&state, &medium, db, self.target).value
    }
}

/// Unit-variance location family Normal(y, 1); Fisher information 1.
#[derive(Debug, Clone, Copy)]
pub struct NormalLocation;

impl OutcomeModel for NormalLocation {
    fn stats(&self, y: f64) -> QuadratureStats {
        QuadratureStats { mu: y, v: 1.0 }
    }
    fn derivatives(&self, _y: f64) -> (f64, f64) {
        (1.0, 0.0)
    }
}

/// Log-variance family Normal(0, e^{2y}); Fisher information 2.
#[derive(Debug, Clone, Copy)]
pub struct NormalLogVariance;

impl OutcomeModel for NormalLogVariance {
    fn stats(&self, y: f64) -> QuadratureStats {
        QuadratureStats {
            mu: 0.0,
            v: (2.0 * y).exp(),
        }
    }
    fn derivatives(&self, y: f64) -> (f64, f64) {
        (0.0, 2.0 * (2.0 * y).exp())
    }
}
