//! Fisher-information analysis of quadrature probing of a saturable
//! resonant absorber.
//!
//! The library models a single-mode Gaussian probe (displaced squeezed
//! vacuum) transmitted through a resonant medium with power-broadened
//! saturation, computes the classical Fisher information of the output
//! X-quadrature measurement for estimating either the detuning or the
//! on-resonance optical depth, and maximizes it over the probe parameters --
//! including the mean photon number, which is a free variable rather than a
//! budget. Comparing the squeezed-Gaussian optimum against the coherent-only
//! optimum gives the number-optimized quantum advantage, which can be mapped
//! over the (n_sat, T) plane and validated empirically by homodyne
//! simulation.
//!
//! Units: all frequencies are in units of the unbroadened linewidth gamma_0,
//! so detunings are dimensionless and detuning Fisher information is per
//! gamma_0^2. Quadratures use the vacuum-variance-1 convention.

pub mod error;
pub mod exec;
pub mod fisher;
pub mod medium;
pub mod model;
pub mod montecarlo;
pub mod optimizer;
pub mod oracle;
pub mod simplex;
pub mod state;
pub mod sweep;

pub use error::{Error, Result};
pub use fisher::{
    fisher_information, gaussian_fisher, model_derivatives, DerivativeMode, FisherBreakdown,
    Target,
};
pub use medium::{output_quadrature_stats, Medium, Response};
pub use model::{NormalLocation, NormalLogVariance, OutcomeModel, PhysicalModel};
pub use montecarlo::{
    crb_check, empirical_fisher, sample_homodyne, EstimatorReport, ScoreStats, SimConfig,
};
pub use optimizer::{
    classify_regime, optimize, optimize_recorded, quantum_advantage, quantum_advantage_recorded,
    AdvantageResult, ClassificationTolerances, OptimizationResult, OptimizerConfig, Regime,
    StartPoint, StateFamily,
};
pub use oracle::{numeric_fi_oracle, QuadratureSpec};
pub use state::{wrap_phase, ProbeState, QuadratureStats};
pub use sweep::{
    read_table_json, run_sweep, scaling_analysis, to_csv_string, write_table, AxisSpec,
    CoherentOptimum, GridSpec, ScalingReport, SweepCell, SweepMetadata, SweepTable, TableFormat,
    CSV_HEADER,
};
