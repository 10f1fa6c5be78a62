use clap::{Parser, Subcommand};
use opdyn_cli::commands;

/// Opinion dynamics on social networks with interdependent issues:
/// analysis, simulation, randomized gossip, and coupling identification.
#[derive(Parser)]
#[command(name = "opdyn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify agents and report stability/convergence.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Run the synchronous dynamics and emit the trajectory as CSV.
    Simulate(commands::simulate::SimulateArgs),
    /// Compute the closed-form limit opinions.
    Limit(commands::limit::LimitArgs),
    /// Run the randomized pairwise protocol with Cesàro averaging.
    Gossip(commands::gossip::GossipArgs),
    /// Estimate the issue-coupling matrix from observations.
    Identify(commands::identify::IdentifyArgs),
    /// Write the bundled example inputs.
    Fixtures(commands::fixtures::FixturesArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => commands::analyze::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Limit(args) => commands::limit::run(args),
        Command::Gossip(args) => commands::gossip::run(args),
        Command::Identify(args) => commands::identify::run(args),
        Command::Fixtures(args) => commands::fixtures::run(args),
    };
    if let Err(err) = result {
        eprintln!("{}", err.to_json());
        std::process::exit(err.exit_code());
    }
}
