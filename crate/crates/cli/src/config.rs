//! Config-file support: each subcommand accepts `--config FILE` holding a
//! single JSON object whose keys mirror the flag names (kebab-case). Flags
//! given on the command line override file values; unknown keys are
//! rejected.

use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::CliError;

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&data)
        .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
}

macro_rules! merge {
    ($flags:expr, $file:expr, $($field:ident),+ $(,)?) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.take(); } )+
    };
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EvalFile {
    #[serde(rename = "T")]
    pub optical_depth: Option<f64>,
    pub n_sat: Option<f64>,
    pub delta_bar: Option<f64>,
    #[serde(rename = "R")]
    pub displacement: Option<f64>,
    pub theta: Option<f64>,
    pub r: Option<f64>,
    pub psi: Option<f64>,
    pub target: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OptimizeFile {
    #[serde(rename = "T")]
    pub optical_depth: Option<f64>,
    pub n_sat: Option<f64>,
    pub target: Option<String>,
    pub family: Option<String>,
    pub n_starts: Option<usize>,
    pub r_max: Option<f64>,
    pub delta_bar_max: Option<f64>,
    pub nbar_max: Option<f64>,
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepFile {
    pub n_sat_min: Option<f64>,
    pub n_sat_max: Option<f64>,
    pub n_sat_points: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_points: Option<usize>,
    pub target: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub threads: Option<usize>,
    pub n_starts: Option<usize>,
    pub r_max: Option<f64>,
    pub delta_bar_max: Option<f64>,
    pub nbar_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulateFile {
    #[serde(rename = "T")]
    pub optical_depth: Option<f64>,
    pub n_sat: Option<f64>,
    pub delta_bar: Option<f64>,
    #[serde(rename = "R")]
    pub displacement: Option<f64>,
    pub theta: Option<f64>,
    pub r: Option<f64>,
    pub psi: Option<f64>,
    pub target: Option<String>,
    pub samples: Option<usize>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub bracket: Option<Vec<f64>>,
    pub true_value: Option<f64>,
    pub hook: Option<String>,
    pub json_out: Option<PathBuf>,
}

impl crate::EvalArgs {
    pub fn merge_config(&mut self) -> Result<(), CliError> {
        if let Some(path) = &self.config {
            let mut f: EvalFile = load(path)?;
            merge!(self, f, optical_depth, n_sat, delta_bar, displacement, theta, r, psi, target);
        }
        Ok(())
    }
}

impl crate::OptimizeArgs {
    pub fn merge_config(&mut self) -> Result<(), CliError> {
        if let Some(path) = &self.config {
            let mut f: OptimizeFile = load(path)?;
            merge!(self, f, optical_depth, n_sat, target, family, n_starts, r_max,
                   delta_bar_max, nbar_max, json_out);
        }
        Ok(())
    }
}

impl crate::SweepArgs {
    pub fn merge_config(&mut self) -> Result<(), CliError> {
        if let Some(path) = &self.config {
            let mut f: SweepFile = load(path)?;
            merge!(self, f, n_sat_min, n_sat_max, n_sat_points, t_min, t_max, t_points,
                   target, out, format, threads, n_starts, r_max, delta_bar_max, nbar_max);
        }
        Ok(())
    }
}

impl crate::SimulateArgs {
    pub fn merge_config(&mut self) -> Result<(), CliError> {
        if let Some(path) = &self.config {
            let mut f: SimulateFile = load(path)?;
            if self.bracket.is_empty() {
                if let Some(b) = f.bracket.take() {
                    self.bracket = b;
                }
            }
            merge!(self, f, optical_depth, n_sat, delta_bar, displacement, theta, r, psi,
                   target, samples, reps, seed, true_value, hook, json_out);
        }
        Ok(())
    }
}
