//! Direct numeric evaluation of the continuous-outcome Fisher information
//! definition `I(Y) = int dm P(m|Y) [d ln P(m|Y) / dY]^2`.
//!
//! This is an independent oracle for the closed-form Gaussian expression: the
//! parameter derivative of ln P comes from finite differences of the model's
//! statistics (never from analytic derivatives), and the outcome integral is
//! a composite Simpson rule. Both the outcome grid and the parameter step are
//! refined until successive estimates agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::OutcomeModel;

/// Controls for the numeric Fisher-information integration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-width of the outcome grid in standard deviations; must be >= 12.
    pub half_width_sigmas: f64,
    /// Initial number of Simpson intervals (rounded up to even).
    pub base_intervals: usize,
    /// Relative agreement required between successive grid doublings.
    pub grid_rtol: f64,
    pub max_grid_refinements: u32,
    /// Initial parameter step as a fraction of max(1, |y|).
    pub initial_step: f64,
    /// Relative agreement required between successive step halvings.
    pub step_rtol: f64,
    pub max_step_refinements: u32,
    /// Absolute convergence floor; keeps the refinement loops from chasing
    /// rounding noise when the true information is zero.
    pub atol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            half_width_sigmas: 12.0,
            base_intervals: 512,
            grid_rtol: 1e-10,
            max_grid_refinements: 12,
            initial_step: 0.25,
            step_rtol: 1e-8,
            max_step_refinements: 14,
            atol: 1e-24,
        }
    }
}

/// Numerically integrate the squared-score expectation for the model's
/// Gaussian outcome density at parameter value `y0`.
pub fn numeric_fi_oracle(model: &dyn OutcomeModel, y0: f64, spec: &QuadratureSpec) -> Result<f64> {
    if spec.half_width_sigmas < 12.0 {
        return Err(Error::InvalidGrid(format!(
            "half_width_sigmas = {} but the outcome grid must cover >= 12 standard deviations",
            spec.half_width_sigmas
        )));
    }
    let mut h = spec.initial_step * y0.abs().max(1.0);
    let mut previous: Option<f64> = None;
    for _ in 0..=spec.max_step_refinements {
        // a finite difference of ln P only probes the local parameter
        // dependence when the stencil distributions overlap the center one;
        // keep halving until they do before integrating
        if stencil_overlaps(model, y0, h) {
            let (estimate, noise) = integrate_outcomes(model, y0, h, spec)?;
            if let Some(prev) = previous {
                if (estimate - prev).abs()
                    <= spec.step_rtol * estimate.abs() + 3.0 * noise + spec.atol
                {
                    return Ok(estimate);
                }
            }
            previous = Some(estimate);
        }
        h /= 2.0;
    }
    Err(Error::IntegrationDidNotConverge(format!(
        "parameter-step cascade did not settle after {} halvings",
        spec.max_step_refinements
    )))
}

/// True when every stencil distribution at y0 +/- h, y0 +/- 2h stays within
/// a few center standard deviations of the center distribution, in both mean
/// and width.
fn stencil_overlaps(model: &dyn OutcomeModel, y0: f64, h: f64) -> bool {
    let center = model.stats(y0);
    let sigma = center.v.sqrt();
    [-2.0, -1.0, 1.0, 2.0].iter().all(|k| {
        let s = model.stats(y0 + k * h);
        s.v > 0.0
            && (s.mu - center.mu).abs() <= 3.0 * sigma
            && (s.v.sqrt() - sigma).abs() <= 3.0 * sigma
    })
}

/// ln of the Normal(mu, v) density at m.
fn ln_density(m: f64, mu: f64, v: f64) -> f64 {
    let z = m - mu;
    -0.5 * (2.0 * std::f64::consts::PI * v).ln() - z * z / (2.0 * v)
}

/// Returns the integral estimate together with its floating-point noise
/// scale (the level below which refinements cannot meaningfully agree).
fn integrate_outcomes(
    model: &dyn OutcomeModel,
    y0: f64,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    // five-point stencil in the parameter: y0 and y0 +/- h, y0 +/- 2h
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let center = model.stats(y0);
    let shifted: Vec<_> = offsets.iter().map(|k| model.stats(y0 + k * h)).collect();

    let sigma_max = shifted
        .iter()
        .chain(std::iter::once(&center))
        .map(|s| s.v.sqrt())
        .fold(0.0f64, f64::max);
    let mu_spread = shifted
        .iter()
        .map(|s| (s.mu - center.mu).abs())
        .fold(0.0f64, f64::max);
    let half_width = spec.half_width_sigmas * sigma_max + mu_spread;
    let (a, b) = (center.mu - half_width, center.mu + half_width);

    // Each ln-density value carries ~eps * |ln P| rounding; the 1-8-8-1
    // stencil amplifies that by its weight sum (18) and the division by 12h.
    // The induced fluctuation of the integral is then bounded through
    // Cauchy-Schwarz by 2 delta sqrt(I) + delta^2, and no refinement can be
    // expected to agree more tightly than that.
    let max_ln = shifted
        .iter()
        .map(|s| {
            let reach = half_width + (s.mu - center.mu).abs();
            reach * reach / (2.0 * s.v) + 0.5 * (2.0 * std::f64::consts::PI * s.v).ln().abs()
        })
        .fold(0.0f64, f64::max);
    let score_noise = 18.0 * f64::EPSILON * max_ln / (12.0 * h);
    let noise_floor = |value: f64| {
        4.0 * (2.0 * score_noise * value.abs().sqrt() + score_noise * score_noise)
    };

    // P(m|y0) * score(m)^2 with the fourth-order central derivative
    // [f(-2h) - 8 f(-h) + 8 f(+h) - f(+2h)] / (12 h) of f = ln P in y.
    let integrand = |m: f64| {
        let weight = ln_density(m, center.mu, center.v).exp();
        let score = (ln_density(m, shifted[0].mu, shifted[0].v)
            - 8.0 * ln_density(m, shifted[1].mu, shifted[1].v)
            + 8.0 * ln_density(m, shifted[2].mu, shifted[2].v)
            - ln_density(m, shifted[3].mu, shifted[3].v))
            / (12.0 * h);
        weight * score * score
    };

    let mut intervals = spec.base_intervals.next_multiple_of(2);
    let mut previous = simpson(&integrand, a, b, intervals);
    for _ in 0..spec.max_grid_refinements {
        intervals *= 2;
        let refined = simpson(&integrand, a, b, intervals);
        if (refined - previous).abs()
            <= spec.grid_rtol * refined.abs() + noise_floor(refined) + spec.atol
        {
            return Ok((refined, noise_floor(refined)));
        }
        previous = refined;
    }
    Err(Error::IntegrationDidNotConverge(format!(
        "outcome grid still changing at {intervals} intervals"
    )))
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2);
    let dx = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * dx);
    }
    acc * dx / 3.0
}
