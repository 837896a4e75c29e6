//! Advantage and regime maps over a log-spaced (n_sat, T) grid, scaling
//! analysis of a fixed-T column, and contour-ready CSV/JSON output.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::exec;
use crate::fisher::Target;
use crate::medium::Medium;
use crate::optimizer::{
    quantum_advantage_recorded, AdvantageResult, OptimizerConfig, Regime, StartPoint,
};

/// One log-spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.min.is_nan() || self.min <= 0.0 || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidGrid(format!("{name}: min must be > 0 and finite")));
        }
        if self.points == 0 {
            return Err(Error::InvalidGrid(format!("{name}: need at least one point")));
        }
        if self.points == 1 {
            if self.max < self.min {
                return Err(Error::InvalidGrid(format!("{name}: max < min")));
            }
        } else if self.max <= self.min {
            return Err(Error::InvalidGrid(format!(
                "{name}: max must exceed min for a multi-point axis"
            )));
        }
        Ok(())
    }

    /// Log-spaced axis values (a single-point axis sits at `min`). The
    /// endpoints are exactly `min` and `max`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let (a, b) = (self.min.ln(), self.max.ln());
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    self.min
                } else if i == self.points - 1 {
                    self.max
                } else {
                    (a + (b - a) * i as f64 / (self.points - 1) as f64).exp()
                }
            })
            .collect()
    }
}

/// Grid over the medium parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_sat: AxisSpec,
    #[serde(rename = "T")]
    pub optical_depth: AxisSpec,
    pub target: Target,
}

impl GridSpec {
    /// Default map: 25 x 25 log-spaced over [1e-2, 1e2]^2.
    pub fn default_map(target: Target) -> Self {
        Self {
            n_sat: AxisSpec::new(1e-2, 1e2, 25),
            optical_depth: AxisSpec::new(1e-2, 1e2, 25),
            target,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.n_sat.validate("n_sat")?;
        self.optical_depth.validate("T")
    }
}

/// Coherent-family optimum recorded alongside the Gaussian one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentOptimum {
    pub value: f64,
    #[serde(rename = "R")]
    pub displacement: f64,
    pub theta: f64,
    pub delta_bar: f64,
    pub nbar: f64,
}

/// One grid cell: the medium point, both family optima, the advantage and
/// the regime of the Gaussian optimum. The flat state fields describe the
/// Gaussian-family optimum (the CSV columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub n_sat: f64,
    #[serde(rename = "T")]
    pub optical_depth: f64,
    pub target: Target,
    #[serde(rename = "I_coh")]
    pub i_coh: f64,
    #[serde(rename = "I_sq")]
    pub i_sq: f64,
    pub advantage: f64,
    #[serde(rename = "R")]
    pub displacement: f64,
    pub theta: f64,
    pub r: f64,
    pub psi: f64,
    pub delta_bar: f64,
    pub nbar: f64,
    pub regime: Regime,
    pub boundary_flag: bool,
    pub coh: CoherentOptimum,
    /// Populated when the cell's optimization is not trusted (too few
    /// agreeing starts); the values are still the best found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub config_hash: String,
    pub tool_version: String,
    pub timestamp: String,
}

/// Row-major sweep result (n_sat outer, T inner).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub grid: GridSpec,
    pub metadata: SweepMetadata,
    pub cells: Vec<SweepCell>,
}

/// Output format for [`write_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Exact column set of the CSV contract.
pub const CSV_HEADER: &str =
    "n_sat,T,target,I_coh,I_sq,advantage,R,theta,r,psi,delta_bar,nbar,regime,boundary_flag";

fn make_cell(n_sat: f64, t: f64, target: Target, adv: &AdvantageResult, min_agreeing: usize) -> SweepCell {
    let sq = &adv.sq_result;
    let coh = &adv.coh_result;
    let error = if sq.starts_agreeing < min_agreeing || coh.starts_agreeing < min_agreeing {
        Some(format!(
            "starts agreeing below threshold (gaussian {}, coherent {})",
            sq.starts_agreeing, coh.starts_agreeing
        ))
    } else {
        None
    };
    SweepCell {
        n_sat,
        optical_depth: t,
        target,
        i_coh: adv.i_coh,
        i_sq: adv.i_sq,
        advantage: adv.advantage,
        displacement: sq.state.displacement,
        theta: sq.state.displacement_phase,
        r: sq.state.squeeze,
        psi: sq.state.squeeze_phase,
        delta_bar: sq.delta_bar,
        nbar: sq.nbar,
        regime: sq.regime,
        boundary_flag: adv.boundary_flag(),
        coh: CoherentOptimum {
            value: coh.value,
            displacement: coh.state.displacement,
            theta: coh.state.displacement_phase,
            delta_bar: coh.delta_bar,
            nbar: coh.nbar,
        },
        error,
    }
}

/// Evaluate the quantum advantage on every grid cell.
///
/// Cells are evaluated along anti-diagonal wavefronts so that each cell can
/// warm-start from its already-completed neighbors (left and up) while the
/// wavefront itself runs in parallel; the traversal order is fixed, so the
/// output is identical for any thread count. Boundary-flagged cells carry
/// their best-found values plus the flag; nothing is fatal per cell.
pub fn run_sweep(grid: &GridSpec, config: &OptimizerConfig) -> Result<SweepTable> {
    grid.validate()?;
    let ns_values = grid.n_sat.values();
    let t_values = grid.optical_depth.values();
    let (ni, nj) = (ns_values.len(), t_values.len());

    let mut results: Vec<Option<AdvantageResult>> = vec![None; ni * nj];
    for diagonal in 0..(ni + nj - 1) {
        let cells: Vec<(usize, usize)> = (0..ni)
            .filter_map(|i| {
                let j = diagonal.checked_sub(i)?;
                (j < nj).then_some((i, j))
            })
            .collect();
        let computed = exec::ordered_map(cells.clone(), |(i, j)| {
            let mut cell_config = config.clone();
            for (pi, pj) in [(i.wrapping_sub(1), j), (i, j.wrapping_sub(1))] {
                if pi < ni && pj < nj {
                    if let Some(neighbor) = &results[pi * nj + pj] {
                        for part in [&neighbor.sq_result, &neighbor.coh_result] {
                            cell_config.extra_starts.push(StartPoint {
                                state: part.state,
                                delta_bar: part.delta_bar,
                            });
                        }
                    }
                }
            }
            let medium = Medium::new(t_values[j], ns_values[i]).expect("validated grid");
            quantum_advantage_recorded(&medium, grid.target, &cell_config)
        });
        for ((i, j), result) in cells.into_iter().zip(computed) {
            results[i * nj + j] = Some(result);
        }
    }

    let cells = results
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            let (i, j) = (k / nj, k % nj);
            make_cell(
                ns_values[i],
                t_values[j],
                grid.target,
                &r.expect("all cells computed"),
                config.min_agreeing,
            )
        })
        .collect();

    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&(grid, config))?);
    Ok(SweepTable {
        grid: *grid,
        metadata: SweepMetadata {
            config_hash: format!("{:x}", hasher.finalize()),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        },
        cells,
    })
}

/// Piecewise log-log fit of a fixed-T advantage column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    /// T of the column actually used (nearest grid value).
    pub column_t: f64,
    pub n_points: usize,
    /// Slope of log A vs log n_sat in the growth region.
    pub growth_slope: f64,
    /// Saturated advantage level.
    pub plateau: f64,
    /// n_sat at which the fitted growth line meets the plateau.
    pub knee_n_sat: f64,
    pub rms_residual: f64,
}

/// Fit `log A = c + s * min(log n_sat - k, 0)` (a continuous hinge: a growth
/// line that saturates at the plateau e^c) by scanning the knee and solving
/// the rest by least squares.
pub fn scaling_analysis(table: &SweepTable, fixed_t: f64) -> Result<ScalingReport> {
    let t_values = table.grid.optical_depth.values();
    let column = t_values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.ln() - fixed_t.ln())
                .abs()
                .total_cmp(&(b.ln() - fixed_t.ln()).abs())
        })
        .map(|(j, _)| j)
        .ok_or_else(|| Error::InsufficientColumn("empty grid".into()))?;
    let column_t = t_values[column];
    let nj = t_values.len();

    let points: Vec<(f64, f64)> = table
        .cells
        .iter()
        .enumerate()
        .filter(|(k, _)| k % nj == column)
        .map(|(_, c)| (c.n_sat, c.advantage))
        .collect();
    if points.len() < 8 {
        return Err(Error::InsufficientColumn(format!(
            "need >= 8 n_sat points at T = {column_t}, found {}",
            points.len()
        )));
    }
    let (ns_min, ns_max) = (points[0].0, points[points.len() - 1].0);
    if (ns_max / ns_min).log10() < 3.0 - 1e-9 {
        return Err(Error::InsufficientColumn(format!(
            "n_sat span {:.2} decades at T = {column_t}, need >= 3",
            (ns_max / ns_min).log10()
        )));
    }
    if points.iter().any(|(_, a)| a.is_nan() || *a <= 0.0) {
        return Err(Error::InsufficientColumn(
            "non-positive advantage in column".into(),
        ));
    }

    let x: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let y: Vec<f64> = points.iter().map(|(_, a)| a.ln()).collect();
    let n = x.len() as f64;
    let mut best: Option<(f64, f64, f64, f64)> = None; // (sse, slope, level, knee)
    let scan = 512;
    for step in 0..=scan {
        let knee = x[0] + (x[x.len() - 1] - x[0]) * step as f64 / scan as f64;
        let z: Vec<f64> = x.iter().map(|&xi| (xi - knee).min(0.0)).collect();
        let (zm, ym) = (z.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let var_z = z.iter().map(|zi| (zi - zm) * (zi - zm)).sum::<f64>();
        let (slope, level) = if var_z > 0.0 {
            let cov = z
                .iter()
                .zip(&y)
                .map(|(zi, yi)| (zi - zm) * (yi - ym))
                .sum::<f64>();
            let s = cov / var_z;
            (s, ym - s * zm)
        } else {
            (0.0, ym)
        };
        let sse = z
            .iter()
            .zip(&y)
            .map(|(zi, yi)| {
                let resid = yi - (level + slope * zi);
                resid * resid
            })
            .sum::<f64>();
        if best.is_none_or(|(b, ..)| sse < b) {
            best = Some((sse, slope, level, knee));
        }
    }
    let (sse, growth_slope, level, knee) = best.expect("scan is non-empty");
    Ok(ScalingReport {
        column_t,
        n_points: points.len(),
        growth_slope,
        plateau: level.exp(),
        knee_n_sat: knee.exp(),
        rms_residual: (sse / n).sqrt(),
    })
}

/// Render the table body in the fixed 14-column CSV contract. Floats use the
/// shortest decimal that round-trips, so bodies are bit-comparable.
pub fn to_csv_string(table: &SweepTable) -> String {
    let mut out = String::with_capacity(64 * (table.cells.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in &table.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            c.n_sat,
            c.optical_depth,
            c.target,
            c.i_coh,
            c.i_sq,
            c.advantage,
            c.displacement,
            c.theta,
            c.r,
            c.psi,
            c.delta_bar,
            c.nbar,
            c.regime,
            c.boundary_flag
        ));
    }
    out
}

/// Write the table as CSV (the 14-column contract) or JSON (all fields plus
/// the metadata block).
pub fn write_table(table: &SweepTable, format: TableFormat, destination: &Path) -> Result<()> {
    let mut file = std::fs::File::create(destination)?;
    match format {
        TableFormat::Csv => file.write_all(to_csv_string(table).as_bytes())?,
        TableFormat::Json => serde_json::to_writer_pretty(&mut file, table)?,
    }
    file.flush()?;
    Ok(())
}

/// Read back a JSON table written by [`write_table`].
pub fn read_table_json(path: &Path) -> Result<SweepTable> {
    let data = std::fs::read(path)?;
    Ok(serde_json::from_slice(&data)?)
}
