//! `opdyn analyze`: classification, spectral report, and the
//! stability/convergence verdict for one model file.

use std::path::PathBuf;

use clap::Args;

use crate::error::CliError;
use crate::io::write_json;
use crate::manifest::RunManifest;
use crate::report::AnalysisDto;

use super::{analyze_model, load_model};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Output report path.
    #[arg(long, default_value = "analysis.json")]
    pub out: PathBuf,
}

pub fn run(args: &AnalyzeArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let analysis = analyze_model(&model)?;
    let dto = AnalysisDto::new(&analysis.classification, &analysis.spectral, &analysis.verdict);

    write_json(&args.out, &dto)?;
    let mut manifest = RunManifest::new("analyze")
        .with_input(&args.model)?
        .with_config(serde_json::json!({ "out": args.out.display().to_string() }));
    manifest.record_output(&args.out);
    manifest.write_beside(&args.out)?;

    println!(
        "{}",
        serde_json::to_string_pretty(&dto).expect("report serializes")
    );
    Ok(())
}
