//! `opdyn simulate`: synchronous trajectory, written as CSV with one row
//! per step at full double precision.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use opdyn_core::dynamics::{simulate, TerminationReason, Trajectory, DEFAULT_CONV_TOL};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError};
use crate::io::{fmt_f64, read_json, write_json};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Output trajectory CSV.
    #[arg(long, default_value = "trajectory.csv")]
    pub out: PathBuf,
    /// Maximum number of synchronous steps.
    #[arg(long, value_parser = super::parse_scaled_u64)]
    pub max_steps: Option<u64>,
    /// Stop when consecutive states differ by less than this (∞-norm).
    #[arg(long)]
    pub conv_tol: Option<f64>,
    /// JSON file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
struct SimulateConfigFile {
    max_steps: Option<u64>,
    conv_tol: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SimulateSummary {
    termination: &'static str,
    steps: usize,
    final_state: Vec<Vec<f64>>,
}

fn termination_name(t: TerminationReason) -> &'static str {
    match t {
        TerminationReason::Converged => "converged",
        TerminationReason::StepCap => "step_cap",
        TerminationReason::Diverged => "diverged",
    }
}

pub fn write_trajectory_csv(path: &Path, n: usize, m: usize, traj: &Trajectory) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let mut header = String::from("k");
    for i in 1..=n {
        for t in 1..=m {
            header.push_str(&format!(",x{i}_{t}"));
        }
    }
    writeln!(out, "{header}").map_err(|e| io_err(path, e))?;
    for state in &traj.states {
        let mut row = state.k.to_string();
        for x in &state.x {
            row.push(',');
            row.push_str(&fmt_f64(*x));
        }
        writeln!(out, "{row}").map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let file_cfg: SimulateConfigFile = match &args.config {
        Some(path) => read_json(path)?,
        None => SimulateConfigFile::default(),
    };
    let max_steps = args.max_steps.or(file_cfg.max_steps).unwrap_or(100_000) as usize;
    let conv_tol = args.conv_tol.or(file_cfg.conv_tol).unwrap_or(DEFAULT_CONV_TOL);
    if !(conv_tol > 0.0) {
        return Err(CliError::Validation("conv_tol must be positive".into()));
    }

    let model = super::load_model(&args.model)?;
    let traj = simulate(&model, max_steps, conv_tol);
    write_trajectory_csv(&args.out, model.n(), model.m(), &traj)?;

    let summary = SimulateSummary {
        termination: termination_name(traj.termination),
        steps: traj.states.len() - 1,
        final_state: crate::io::unstack_agents(&traj.last().x, model.m()),
    };
    let summary_path = args.out.with_extension("summary.json");
    write_json(&summary_path, &summary)?;

    let mut manifest = RunManifest::new("simulate")
        .with_input(&args.model)?
        .with_config(serde_json::json!({
            "max_steps": max_steps,
            "conv_tol": conv_tol,
            "out": args.out.display().to_string(),
        }));
    manifest.record_output(&args.out);
    manifest.record_output(&summary_path);
    manifest.write_beside(&args.out)?;

    eprintln!(
        "simulate: {} after {} steps -> {}",
        summary.termination,
        summary.steps,
        args.out.display()
    );
    Ok(())
}
