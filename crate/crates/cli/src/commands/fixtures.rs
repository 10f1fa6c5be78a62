//! `opdyn fixtures`: writes the bundled example inputs into a directory.

use std::fs;
use std::path::PathBuf;

use clap::Args;

use crate::error::{io_err, CliError};
use crate::io::write_json;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Directory to write the example files into.
    #[arg(long, default_value = "fixtures")]
    pub out_dir: PathBuf,
}

pub fn run(args: &FixturesArgs) -> Result<(), CliError> {
    fs::create_dir_all(&args.out_dir).map_err(|e| io_err(&args.out_dir, e))?;
    let mut manifest = RunManifest::new("fixtures").with_config(serde_json::json!({
        "out_dir": args.out_dir.display().to_string(),
    }));
    for (name, value) in crate::fixtures::all() {
        let path = args.out_dir.join(name);
        write_json(&path, &value)?;
        manifest.record_output(&path);
    }
    manifest.write_beside(&args.out_dir.join("fixtures.json"))?;
    eprintln!(
        "fixtures: wrote {} files to {}",
        manifest.outputs.len(),
        args.out_dir.display()
    );
    Ok(())
}
