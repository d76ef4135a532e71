//! Run configuration: one JSON document drives every subcommand, each
//! reading the fields it needs. Site and state indices in files are
//! 1-based.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use epcluster::lattice::{LatticeConfig, LatticeSpec};
use epcluster::sweep::{expand_range, PipelineSpec, SweepParameter};

use crate::CliError;

/// Lattice description: inline object or path to a JSON file containing one.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LatticeSource {
    Inline(LatticeConfig<f64>),
    Path(String),
}

/// A numeric grid: inclusive range object or explicit value list.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    Range { start: f64, stop: f64, step: f64 },
    Explicit(Vec<f64>),
}

/// Initial wave packet for `evolve`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialPacket {
    /// Fully localized on one site (1-based index).
    Site { index: usize },
    /// Uniform amplitude on every site.
    Uniform,
    /// Explicit complex amplitudes as `[re, im]` pairs.
    Amplitudes { values: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeSource,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    /// Explicit reference states (1-based indices into the sorted
    /// spectrum); overrides threshold-based selection.
    #[serde(default)]
    pub references: Option<Vec<usize>>,
    #[serde(default)]
    pub parameter: Option<SweepParameter>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub pipeline: Option<PipelineSpec<f64>>,
    #[serde(default)]
    pub initial: Option<InitialPacket>,
    #[serde(default)]
    pub times: Option<GridConfig>,
    #[serde(default)]
    pub track_fidelities: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
    }

    /// Materialize the lattice, resolving a file reference relative to the
    /// config's own directory.
    pub fn lattice_spec(&self, config_path: &Path) -> Result<LatticeSpec<f64>, CliError> {
        let config = match &self.lattice {
            LatticeSource::Inline(c) => c.clone(),
            LatticeSource::Path(rel) => {
                let mut path = PathBuf::from(rel);
                if path.is_relative() {
                    if let Some(dir) = config_path.parent() {
                        path = dir.join(path);
                    }
                }
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    CliError::config(format!("cannot read lattice file {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::config(format!("invalid lattice file {}: {e}", path.display()))
                })?
            }
        };
        config.materialize().map_err(CliError::from)
    }

    /// 0-based reference indices, when pinned explicitly.
    pub fn reference_indices(&self, dim: usize) -> Result<Option<Vec<usize>>, CliError> {
        match &self.references {
            None => Ok(None),
            Some(raw) => {
                let mut indices = Vec::with_capacity(raw.len());
                for &r in raw {
                    if r == 0 || r > dim {
                        return Err(CliError::config(format!(
                            "reference index {r} out of range 1..={dim}"
                        )));
                    }
                    indices.push(r - 1);
                }
                Ok(Some(indices))
            }
        }
    }
}

/// Parse a `START:STOP:STEP` flag value.
pub fn parse_grid_flag(text: &str) -> Result<GridConfig, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::config(format!(
            "grid must be START:STOP:STEP, got '{text}'"
        )));
    }
    let mut values = [0.0f64; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|e| CliError::config(format!("bad grid component '{part}': {e}")))?;
    }
    Ok(GridConfig::Range {
        start: values[0],
        stop: values[1],
        step: values[2],
    })
}

pub fn expand_grid(grid: &GridConfig) -> Result<Vec<f64>, CliError> {
    match grid {
        GridConfig::Range { start, stop, step } => expand_range(*start, *stop, *step)
            .map_err(|_| CliError::config("grid must be nonempty and ascending".into())),
        GridConfig::Explicit(values) => {
            if values.is_empty() {
                return Err(CliError::config("grid must be nonempty".into()));
            }
            Ok(values.clone())
        }
    }
}
