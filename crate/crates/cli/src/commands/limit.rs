//! `opdyn limit`: closed-form limit opinions; exits with code 3 when the
//! model has no limit.

use std::path::PathBuf;

use clap::Args;
use opdyn_core::dynamics::limit_opinion;
use serde::Serialize;

use crate::error::CliError;
use crate::io::{unstack_agents, write_json};
use crate::manifest::RunManifest;
use crate::report::verdict_name;

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Output path.
    #[arg(long, default_value = "limit.json")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct LimitDto {
    verdict: &'static str,
    clause: &'static str,
    /// Stacked limit vector, agent-major.
    x_stacked: Vec<f64>,
    /// The same limit split into per-agent vectors.
    x_agents: Vec<Vec<f64>>,
}

pub fn run(args: &LimitArgs) -> Result<(), CliError> {
    let model = super::load_model(&args.model)?;
    let analysis = super::analyze_model(&model)?;
    let x = limit_opinion(&model, &analysis.classification, &analysis.spectral)
        .map_err(|e| CliError::NotConvergent(e.to_string()))?;

    let dto = LimitDto {
        verdict: verdict_name(analysis.verdict.kind),
        clause: analysis.verdict.clause,
        x_agents: unstack_agents(&x, model.m()),
        x_stacked: x,
    };
    write_json(&args.out, &dto)?;
    let mut manifest = RunManifest::new("limit")
        .with_input(&args.model)?
        .with_config(serde_json::json!({ "out": args.out.display().to_string() }));
    manifest.record_output(&args.out);
    manifest.write_beside(&args.out)?;

    println!(
        "{}",
        serde_json::to_string_pretty(&dto).expect("limit serializes")
    );
    Ok(())
}
