//! Empirical validation of the analytic Fisher information: homodyne-outcome
//! simulation, score-based Fisher estimation, and Cramer-Rao saturation of a
//! maximum-likelihood estimator.
//!
//! Sampling uses a counter-based generator (ChaCha8) with inverse-CDF normal
//! draws, one independent substream per batch or repetition, so the results
//! are bit-reproducible for a fixed seed regardless of thread count.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::exec;
use crate::model::OutcomeModel;
use crate::state::QuadratureStats;

/// Per-batch sample count for parallel streams; fixed so that the stream
/// layout (and hence the output) does not depend on thread count.
const BATCH: usize = 1 << 16;

/// Simulation layout for the estimator checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimConfig {
    pub n_samples: usize,
    pub n_repetitions: usize,
    pub seed: u64,
    /// True parameter value at which samples are drawn.
    pub true_value: f64,
    /// Search interval for the maximum-likelihood estimator.
    pub bracket: (f64, f64),
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be >= 1".into()));
        }
        let (lo, hi) = self.bracket;
        if lo.is_nan() || hi.is_nan() || lo >= hi || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig("bracket must be a finite interval".into()));
        }
        if self.true_value.is_nan() || self.true_value <= lo || self.true_value >= hi {
            return Err(Error::InvalidConfig(
                "bracket must contain true_value".into(),
            ));
        }
        Ok(())
    }
}

/// Mean of squared scores with its standard error, plus the score mean
/// (which must vanish, a built-in consistency check).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreStats {
    pub value: f64,
    pub std_error: f64,
    pub score_mean: f64,
    pub score_mean_se: f64,
    pub n: usize,
}

/// Outcome of the Cramer-Rao saturation check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub empirical_fisher: f64,
    pub empirical_fisher_se: f64,
    pub analytic_fisher: f64,
    pub mle_variance: f64,
    pub mle_variance_se: f64,
    /// 1 / (n_samples * mle_variance * analytic_fisher); tends to 1 for an
    /// asymptotically efficient estimator.
    pub crb_ratio: f64,
    pub crb_ratio_se: f64,
    pub n_samples: usize,
    pub n_repetitions: usize,
    /// Fraction of repetitions whose estimate landed at a bracket edge.
    pub edge_fraction: f64,
}

fn unit_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

/// Uniform in the open interval (0, 1), from the top 53 bits.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

fn draw(rng: &mut ChaCha8Rng, normal: &Normal, stats: &QuadratureStats) -> f64 {
    stats.mu + stats.v.sqrt() * normal.inverse_cdf(open_unit(rng))
}

/// Draw `n` homodyne outcomes from Normal(mu, v); deterministic for a fixed
/// seed (inverse-CDF sampling on substream 0).
pub fn sample_homodyne(stats: &QuadratureStats, n: usize, seed: u64) -> Result<Vec<f64>> {
    if stats.v.is_nan() || stats.v <= 0.0 {
        return Err(Error::NonPositiveVariance);
    }
    let normal = unit_normal();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| draw(&mut rng, &normal, stats)).collect())
}

/// Score of an outcome under the Gaussian model:
/// `d ln P / dY = dmu (m - mu)/v + dv [(m - mu)^2 - v] / (2 v^2)`.
fn score(m: f64, mu: f64, v: f64, dmu: f64, dv: f64) -> f64 {
    let z = m - mu;
    dmu * z / v + dv * (z * z - v) / (2.0 * v * v)
}

/// Estimate the Fisher information as the empirical mean of squared scores
/// at the true parameter value, using analytic statistics derivatives.
pub fn empirical_fisher(model: &dyn OutcomeModel, sim: &SimConfig) -> Result<ScoreStats> {
    sim.validate()?;
    let y0 = sim.true_value;
    let stats = model.stats(y0);
    if stats.v.is_nan() || stats.v <= 0.0 {
        return Err(Error::NonPositiveVariance);
    }
    let (dmu, dv) = model.derivatives(y0);
    let n = sim.n_samples;
    let n_batches = n.div_ceil(BATCH);
    let normal = unit_normal();

    // (sum s, sum s^2, sum s^4) per batch, combined in batch order
    let partials = exec::ordered_map((0..n_batches).collect::<Vec<_>>(), |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
        rng.set_stream(b as u64 + 1);
        let count = BATCH.min(n - b * BATCH);
        let mut acc = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..count {
            let m = draw(&mut rng, &normal, &stats);
            let s = score(m, stats.mu, stats.v, dmu, dv);
            let s2 = s * s;
            acc.0 += s;
            acc.1 += s2;
            acc.2 += s2 * s2;
        }
        acc
    });
    let (s1, s2, s4) = partials
        .into_iter()
        .fold((0.0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    let nf = n as f64;
    let value = s2 / nf;
    let score_mean = s1 / nf;
    Ok(ScoreStats {
        value,
        std_error: ((s4 / nf - value * value).max(0.0) / nf).sqrt(),
        score_mean,
        score_mean_se: ((value - score_mean * score_mean).max(0.0) / nf).sqrt(),
        n,
    })
}

/// Golden-section minimization of a unimodal function on [a, b].
fn golden_section<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Run repeated experiments, compute the maximum-likelihood estimate per
/// experiment by one-dimensional likelihood maximization over the bracket,
/// and compare the estimator variance against the Cramer-Rao bound.
pub fn crb_check(model: &dyn OutcomeModel, sim: &SimConfig) -> Result<EstimatorReport> {
    sim.validate()?;
    if sim.n_repetitions < 2 {
        return Err(Error::InvalidConfig("n_repetitions must be >= 2".into()));
    }
    let y0 = sim.true_value;
    let stats0 = model.stats(y0);
    if stats0.v.is_nan() || stats0.v <= 0.0 {
        return Err(Error::NonPositiveVariance);
    }
    let analytic = model.analytic_fisher(y0);
    if analytic.is_nan() || analytic <= 0.0 {
        return Err(Error::InvalidConfig(
            "analytic Fisher information must be positive at the true value".into(),
        ));
    }
    let (dmu0, dv0) = model.derivatives(y0);
    let (lo, hi) = sim.bracket;
    let gs_tol = 1e-10 * (hi - lo);
    let normal = unit_normal();
    let nf = sim.n_samples as f64;

    // per repetition: (estimate, sum s, sum s^2, sum s^4)
    let reps = exec::ordered_map((0..sim.n_repetitions).collect::<Vec<_>>(), |rep| {
        let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
        rng.set_stream(rep as u64 + 1);
        let (mut sum_m, mut sum_m2) = (0.0f64, 0.0f64);
        let mut acc = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..sim.n_samples {
            let m = draw(&mut rng, &normal, &stats0);
            sum_m += m;
            sum_m2 += m * m;
            let s = score(m, stats0.mu, stats0.v, dmu0, dv0);
            let s2 = s * s;
            acc.0 += s;
            acc.1 += s2;
            acc.2 += s2 * s2;
        }
        // negative log-likelihood via the sufficient statistics
        let nll = |y: f64| {
            let s = model.stats(y);
            if s.v.is_nan() || s.v <= 0.0 {
                return f64::INFINITY;
            }
            0.5 * nf * (2.0 * std::f64::consts::PI * s.v).ln()
                + (sum_m2 - 2.0 * s.mu * sum_m + nf * s.mu * s.mu) / (2.0 * s.v)
        };
        let estimate = golden_section(nll, lo, hi, gs_tol);
        (estimate, acc.0, acc.1, acc.2)
    });

    let edge_margin = 1e-3 * (hi - lo);
    let edge_count = reps
        .iter()
        .filter(|(e, ..)| *e <= lo + edge_margin || *e >= hi - edge_margin)
        .count();
    let edge_fraction = edge_count as f64 / sim.n_repetitions as f64;
    if edge_fraction > 0.01 {
        return Err(Error::BracketExcludesOptimum(100.0 * edge_fraction));
    }

    let rf = sim.n_repetitions as f64;
    let mean_est = reps.iter().map(|(e, ..)| e).sum::<f64>() / rf;
    let mle_variance = reps
        .iter()
        .map(|(e, ..)| (e - mean_est) * (e - mean_est))
        .sum::<f64>()
        / (rf - 1.0);
    // relative error of a sample variance ~ sqrt(2/(n-1)) for Gaussian-like
    // estimates; propagated to the ratio by the delta method
    let rel_se = (2.0 / (rf - 1.0)).sqrt();
    let mle_variance_se = mle_variance * rel_se;
    let crb_ratio = 1.0 / (nf * mle_variance * analytic);
    let crb_ratio_se = crb_ratio * rel_se;

    let tf = (sim.n_samples * sim.n_repetitions) as f64;
    let (s2, s4) = reps
        .iter()
        .fold((0.0, 0.0), |a, (_, _, x2, x4)| (a.0 + x2, a.1 + x4));
    let empirical = s2 / tf;
    Ok(EstimatorReport {
        empirical_fisher: empirical,
        empirical_fisher_se: ((s4 / tf - empirical * empirical).max(0.0) / tf).sqrt(),
        analytic_fisher: analytic,
        mle_variance,
        mle_variance_se,
        crb_ratio,
        crb_ratio_se,
        n_samples: sim.n_samples,
        n_repetitions: sim.n_repetitions,
        edge_fraction,
    })
}
