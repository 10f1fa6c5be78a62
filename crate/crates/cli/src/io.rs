//! On-disk JSON schemas for models and identification inputs, plus the
//! conversions into the validated core types.
//!
//! A model file is a single JSON document:
//!
//! ```json
//! {
//!   "n": 4, "m": 2,
//!   "W": [[...], ...],          // n rows of n influence weights
//!   "Lambda": [...],            // n diagonal susceptibilities
//!   "C": [[...], ...],          // m x m issue coupling
//!   "D": [[...], ...],          // optional m x m initial transform
//!   "u": [[...], ...]           // n prejudice vectors of length m
//! }
//! ```

use std::fs;
use std::path::Path;

use opdyn_core::identify::ObservationData;
use opdyn_core::mat::Matrix;
use opdyn_core::model::{validate_model, ModelParts, NetworkModel};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none", default)]
    pub d: Option<Vec<Vec<f64>>>,
    pub u: Vec<Vec<f64>>,
}

fn matrix_from_nested(name: &str, rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("{name} has ragged rows")));
    }
    Ok(Matrix::from_rows(rows))
}

fn nested_from_matrix(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Flattens `n` per-agent vectors into the stacked agent-major layout.
pub fn stack_agents(name: &str, agents: &[Vec<f64>], m: usize) -> Result<Vec<f64>, CliError> {
    if agents.iter().any(|a| a.len() != m) {
        return Err(CliError::Validation(format!(
            "{name} must hold per-agent vectors of length m = {m}"
        )));
    }
    Ok(agents.iter().flatten().copied().collect())
}

pub fn unstack_agents(x: &[f64], m: usize) -> Vec<Vec<f64>> {
    x.chunks(m).map(<[f64]>::to_vec).collect()
}

impl ModelFile {
    pub fn to_parts(&self) -> Result<ModelParts, CliError> {
        Ok(ModelParts {
            n: self.n,
            m: self.m,
            w: matrix_from_nested("W", &self.w)?,
            lambda: self.lambda.clone(),
            c: matrix_from_nested("C", &self.c)?,
            d: self
                .d
                .as_ref()
                .map(|d| matrix_from_nested("D", d))
                .transpose()?,
            u: stack_agents("u", &self.u, self.m)?,
        })
    }

    pub fn to_model(&self) -> Result<NetworkModel, CliError> {
        validate_model(self.to_parts()?).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn from_model(model: &NetworkModel) -> ModelFile {
        ModelFile {
            n: model.n(),
            m: model.m(),
            w: nested_from_matrix(model.w()),
            lambda: model.lambda().to_vec(),
            c: nested_from_matrix(model.c()),
            d: if model.d_is_identity() {
                None
            } else {
                Some(nested_from_matrix(model.d()))
            },
            u: unstack_agents(model.u(), model.m()),
        }
    }
}

/// Identification input: the known network skeleton plus observations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentifyFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub observations: Observations,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Observations {
    /// Settled opinions of a stable run, one vector per agent.
    Infinite { x_prime: Vec<Vec<f64>> },
    /// Recorded rounds `x(1)..x(T)`, each one vector per agent.
    Finite { rounds: Vec<Vec<Vec<f64>>> },
}

impl IdentifyFile {
    /// Builds the validated skeleton (with a placeholder identity
    /// coupling) and the observation data.
    pub fn to_problem_parts(&self) -> Result<(NetworkModel, ObservationData), CliError> {
        let skeleton = validate_model(ModelParts {
            n: self.n,
            m: self.m,
            w: matrix_from_nested("W", &self.w)?,
            lambda: self.lambda.clone(),
            c: Matrix::identity(self.m),
            d: None,
            u: stack_agents("u", &self.u, self.m)?,
        })
        .map_err(|e| CliError::Validation(e.to_string()))?;
        let data = match &self.observations {
            Observations::Infinite { x_prime } => {
                ObservationData::SteadyState(stack_agents("x_prime", x_prime, self.m)?)
            }
            Observations::Finite { rounds } => {
                let mut snaps = Vec::with_capacity(rounds.len());
                for (k, round) in rounds.iter().enumerate() {
                    snaps.push(stack_agents(&format!("rounds[{k}]"), round, self.m)?);
                }
                ObservationData::FiniteHorizon(snaps)
            }
        };
        Ok((skeleton, data))
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&raw).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

/// Serializes with a trailing newline; key order follows the struct
/// definitions so identical inputs yield identical bytes.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// SHA-256 digest of a file, formatted `sha256:<hex>`.
pub fn file_digest(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(2 * digest.len());
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(format!("sha256:{hex}"))
}

/// Full-precision decimal rendering used in CSV output: 17 significant
/// digits, enough to round-trip any double exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
