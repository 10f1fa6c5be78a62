//! `opdyn identify`: estimates the issue-coupling matrix from observed
//! opinions. Exits 4 when the solver stops at its iteration budget, but
//! still writes the best iterate.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use opdyn_core::identify::{
    solve, ConstraintSet, IdentificationProblem, IdentifyError, Objective, ObservationData,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::{read_json, write_json, IdentifyFile};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeFlag {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFlag {
    None,
    Stochastic,
    Infnorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveFlag {
    SumSquares,
    SumAbs,
    MaxAbs,
}

#[derive(Debug, Args)]
pub struct IdentifyArgs {
    /// Identification input JSON (skeleton plus observations).
    #[arg(long)]
    pub input: PathBuf,
    /// Output path.
    #[arg(long, default_value = "identify.json")]
    pub out: PathBuf,
    /// Expected observation mode; must match the input file.
    #[arg(long, value_enum)]
    pub mode: Option<ModeFlag>,
    /// Feasible set for the estimate.
    #[arg(long, value_enum)]
    pub constraint: Option<ConstraintFlag>,
    /// Residual aggregation to minimize.
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveFlag>,
    /// JSON file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
struct IdentifyConfigFile {
    mode: Option<ModeFlag>,
    constraint: Option<ConstraintFlag>,
    objective: Option<ObjectiveFlag>,
}

#[derive(Debug, Serialize)]
struct IdentifyDto {
    c_hat: Vec<Vec<f64>>,
    residual_norm: f64,
    iterations: usize,
    projected_gradient_norm: f64,
    converged: bool,
    approximate: bool,
    method: &'static str,
    condition: ConditionDto,
}

#[derive(Debug, Serialize)]
struct ConditionDto {
    /// 2-norm condition estimate of the regressors; absent when the
    /// problem is numerically rank deficient.
    cond: Option<f64>,
    rank_deficient: bool,
}

fn map_identify_error(e: IdentifyError) -> CliError {
    match e {
        IdentifyError::UnstableModel => CliError::NotConvergent(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

pub fn run(args: &IdentifyArgs) -> Result<(), CliError> {
    let file_cfg: IdentifyConfigFile = match &args.config {
        Some(path) => read_json(path)?,
        None => IdentifyConfigFile::default(),
    };
    let mode = args.mode.or(file_cfg.mode);
    let constraint = args
        .constraint
        .or(file_cfg.constraint)
        .unwrap_or(ConstraintFlag::Stochastic);
    let objective = args
        .objective
        .or(file_cfg.objective)
        .unwrap_or(ObjectiveFlag::SumSquares);

    let input: IdentifyFile = read_json(&args.input)?;
    let (skeleton, data) = input.to_problem_parts()?;
    let actual_mode = match &data {
        ObservationData::FiniteHorizon(_) => ModeFlag::Finite,
        ObservationData::SteadyState(_) => ModeFlag::Infinite,
    };
    if let Some(requested) = mode {
        if requested != actual_mode {
            return Err(CliError::Validation(format!(
                "input file holds {actual_mode:?} observations but --mode {requested:?} was requested"
            )));
        }
    }

    let problem = IdentificationProblem {
        skeleton,
        data,
        constraint: match constraint {
            ConstraintFlag::None => ConstraintSet::Unconstrained,
            ConstraintFlag::Stochastic => ConstraintSet::RowStochastic,
            ConstraintFlag::Infnorm => ConstraintSet::InfNormBall,
        },
        objective: match objective {
            ObjectiveFlag::SumSquares => Objective::SumSquares,
            ObjectiveFlag::SumAbs => Objective::SumAbs,
            ObjectiveFlag::MaxAbs => Objective::MaxAbs,
        },
    };
    let result = solve(&problem).map_err(map_identify_error)?;

    let dto = IdentifyDto {
        c_hat: (0..result.c_hat.rows())
            .map(|i| result.c_hat.row(i).to_vec())
            .collect(),
        residual_norm: result.residual_norm,
        iterations: result.iterations,
        projected_gradient_norm: result.projected_gradient_norm,
        converged: result.converged,
        approximate: result.approximate,
        method: if result.approximate {
            "projected_subgradient"
        } else {
            "projected_gradient"
        },
        condition: ConditionDto {
            cond: result.condition.cond.is_finite().then_some(result.condition.cond),
            rank_deficient: result.condition.rank_deficient,
        },
    };
    write_json(&args.out, &dto)?;
    let mut manifest = RunManifest::new("identify")
        .with_input(&args.input)?
        .with_config(serde_json::json!({
            "mode": format!("{actual_mode:?}").to_lowercase(),
            "constraint": format!("{constraint:?}").to_lowercase(),
            "objective": match objective {
                ObjectiveFlag::SumSquares => "sum_squares",
                ObjectiveFlag::SumAbs => "sum_abs",
                ObjectiveFlag::MaxAbs => "max_abs",
            },
            "out": args.out.display().to_string(),
        }));
    manifest.record_output(&args.out);
    manifest.write_beside(&args.out)?;

    println!(
        "{}",
        serde_json::to_string_pretty(&dto).expect("result serializes")
    );
    if !result.converged {
        return Err(CliError::SolverNotConverged);
    }
    Ok(())
}
