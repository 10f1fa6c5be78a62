//! `opdyn gossip`: randomized pairwise-activation runs with Cesàro
//! averaging. Emits one CSV row per (replication, checkpoint) and a JSON
//! summary; identical seeds give identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Args;
use opdyn_core::gossip::{
    default_checkpoints, default_config, run_replication, validate_config, GossipConfig,
    GossipError, ReplicationStats, PRNG_IDENTITY,
};
use opdyn_core::graph::build_graph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError};
use crate::io::{fmt_f64, read_json, write_json};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct GossipArgs {
    /// Model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Output CSV of checkpointed running averages.
    #[arg(long, default_value = "gossip.csv")]
    pub out: PathBuf,
    /// Master seed; replication r uses mix64(seed, r).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Arc activations per replication (accepts e.g. `1e6`).
    #[arg(long, value_parser = super::parse_scaled_u64)]
    pub steps: Option<u64>,
    /// Number of independent replications.
    #[arg(long)]
    pub replications: Option<u32>,
    /// Comma-separated checkpoint steps (accepts e.g. `1e3,1e4`);
    /// defaults to powers of ten up to the step count.
    #[arg(long, value_parser = super::parse_checkpoint_list)]
    pub checkpoints: Option<Vec<u64>>,
    /// JSON file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
struct GossipConfigFile {
    seed: Option<u64>,
    steps: Option<u64>,
    replications: Option<u32>,
    checkpoints: Option<Vec<u64>>,
}

#[derive(Debug, Serialize)]
struct ReplicationSummary {
    seed: u64,
    final_dist_inf: f64,
    cesaro_dist_inf: f64,
    cesaro_dist_2: f64,
    osc_max_dist_inf: f64,
}

#[derive(Debug, Serialize)]
struct GossipSummary {
    prng: &'static str,
    master_seed: u64,
    steps: u64,
    replications: u32,
    checkpoints: Vec<u64>,
    reference: Vec<Vec<f64>>,
    /// Median over replications of `‖x̄(k) − x'‖∞` per checkpoint.
    median_dist_inf: Vec<[f64; 2]>,
    per_replication: Vec<ReplicationSummary>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    values[values.len() / 2]
}

fn map_gossip_error(e: GossipError) -> CliError {
    match e {
        GossipError::ObliviousAgentsPresent | GossipError::LimitUnavailable(_) => {
            CliError::NotConvergent(e.to_string())
        }
        other => CliError::Validation(other.to_string()),
    }
}

pub fn run(args: &GossipArgs) -> Result<(), CliError> {
    let file_cfg: GossipConfigFile = match &args.config {
        Some(path) => read_json(path)?,
        None => GossipConfigFile::default(),
    };
    let seed = args.seed.or(file_cfg.seed).unwrap_or(0);
    let steps = args.steps.or(file_cfg.steps).unwrap_or(1_000_000);
    let replications = args.replications.or(file_cfg.replications).unwrap_or(1);
    if steps == 0 || replications == 0 {
        return Err(CliError::Validation(
            "steps and replications must be positive".into(),
        ));
    }
    let mut checkpoints = args
        .checkpoints
        .clone()
        .or(file_cfg.checkpoints)
        .unwrap_or_else(|| default_checkpoints(steps));
    checkpoints.retain(|&k| k > 0 && k <= steps);
    checkpoints.sort_unstable();
    checkpoints.dedup();

    let model = super::load_model(&args.model)?;
    let mut config: GossipConfig = default_config(&model).map_err(map_gossip_error)?;
    config.seed = seed;
    config.steps = steps;
    config.replications = replications;
    config.checkpoints = checkpoints.clone();
    validate_config(&model, &config).map_err(map_gossip_error)?;

    let reference =
        opdyn_core::gossip::deterministic_limit(&model).map_err(map_gossip_error)?;
    let graph = build_graph(&model);

    // replications are independent; fan out and merge in order
    let reps: Vec<ReplicationStats> = (0..replications)
        .into_par_iter()
        .map(|r| run_replication(&model, &config, &graph, &reference, r))
        .collect();

    // CSV: k, rep, running average coordinates, distances
    let file = File::create(&args.out).map_err(|e| io_err(&args.out, e))?;
    let mut out = BufWriter::new(file);
    let mut header = String::from("k,rep");
    for i in 1..=model.n() {
        for t in 1..=model.m() {
            header.push_str(&format!(",xbar{i}_{t}"));
        }
    }
    header.push_str(",dist2,dist_inf");
    writeln!(out, "{header}").map_err(|e| io_err(&args.out, e))?;
    for (r, rep) in reps.iter().enumerate() {
        for ck in &rep.checkpoints {
            let mut row = format!("{},{}", ck.k, r);
            for x in &ck.cesaro {
                row.push(',');
                row.push_str(&fmt_f64(*x));
            }
            row.push(',');
            row.push_str(&fmt_f64(ck.dist2));
            row.push(',');
            row.push_str(&fmt_f64(ck.dist_inf));
            writeln!(out, "{row}").map_err(|e| io_err(&args.out, e))?;
        }
    }
    out.flush().map_err(|e| io_err(&args.out, e))?;

    let median_dist_inf = checkpoints
        .iter()
        .enumerate()
        .map(|(idx, &k)| {
            let mut dists: Vec<f64> = reps.iter().map(|r| r.checkpoints[idx].dist_inf).collect();
            [k as f64, median(&mut dists)]
        })
        .collect();
    let summary = GossipSummary {
        prng: PRNG_IDENTITY,
        master_seed: seed,
        steps,
        replications,
        checkpoints: checkpoints.clone(),
        reference: crate::io::unstack_agents(&reference, model.m()),
        median_dist_inf,
        per_replication: reps
            .iter()
            .map(|rep| {
                let final_diff: Vec<f64> = rep
                    .final_x
                    .iter()
                    .zip(&reference)
                    .map(|(a, b)| a - b)
                    .collect();
                let ces_diff: Vec<f64> = rep
                    .cesaro
                    .iter()
                    .zip(&reference)
                    .map(|(a, b)| a - b)
                    .collect();
                ReplicationSummary {
                    seed: rep.seed,
                    final_dist_inf: final_diff.iter().map(|x| x.abs()).fold(0.0, f64::max),
                    cesaro_dist_inf: ces_diff.iter().map(|x| x.abs()).fold(0.0, f64::max),
                    cesaro_dist_2: ces_diff.iter().map(|x| x * x).sum::<f64>().sqrt(),
                    osc_max_dist_inf: rep.osc_max_dist_inf,
                }
            })
            .collect(),
    };
    let summary_path = args.out.with_extension("summary.json");
    write_json(&summary_path, &summary)?;

    let mut manifest = RunManifest::new("gossip")
        .with_input(&args.model)?
        .with_config(serde_json::json!({
            "seed": seed,
            "steps": steps,
            "replications": replications,
            "checkpoints": checkpoints,
            "out": args.out.display().to_string(),
        }))
        .with_prng(seed);
    manifest.record_output(&args.out);
    manifest.record_output(&summary_path);
    manifest.write_beside(&args.out)?;

    eprintln!(
        "gossip: {} replications x {} steps -> {}",
        replications,
        steps,
        args.out.display()
    );
    Ok(())
}
