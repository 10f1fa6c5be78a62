//! Subcommand implementations. Each takes a parsed argument struct and
//! returns a [`CliError`] carrying the exit code on failure.

pub mod analyze;
pub mod fixtures;
pub mod gossip;
pub mod identify;
pub mod limit;
pub mod simulate;

use std::path::Path;

use opdyn_core::graph::{build_graph, classify_agents, AgentClassification, InteractionGraph};
use opdyn_core::model::NetworkModel;
use opdyn_core::spectra::{analyze_spectrum, convergence_verdict, SpectralReport, Verdict};

use crate::error::CliError;
use crate::io::{read_json, ModelFile};

/// Loads and validates a model file. The model is analyzed as given:
/// the normal-form rewrite is dynamics-preserving only for scalar or
/// identity-coupled models, so it is left to callers who want it.
pub fn load_model(path: &Path) -> Result<NetworkModel, CliError> {
    let file: ModelFile = read_json(path)?;
    file.to_model()
}

pub struct Analysis {
    pub graph: InteractionGraph,
    pub classification: AgentClassification,
    pub spectral: SpectralReport,
    pub verdict: Verdict,
}

/// Full analysis pipeline on a validated model.
pub fn analyze_model(model: &NetworkModel) -> Result<Analysis, CliError> {
    let graph = build_graph(model);
    let classification = classify_agents(model, &graph);
    let spectral = analyze_spectrum(model, &classification)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let verdict = convergence_verdict(&spectral, &classification);
    Ok(Analysis { graph, classification, spectral, verdict })
}

/// Parses a non-negative integer that may be written in scientific
/// notation, e.g. `1e6`.
pub fn parse_scaled_u64(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a non-negative integer"))?;
    if !v.is_finite() || v < 0.0 || v > 2f64.powi(53) || v.fract() != 0.0 {
        return Err(format!("`{s}` is not a representable non-negative integer"));
    }
    Ok(v as u64)
}

/// Comma-separated list of scaled integers, e.g. `1e3,1e4,1e5`.
pub fn parse_checkpoint_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        out.push(parse_scaled_u64(piece)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
