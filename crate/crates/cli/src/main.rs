use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quadric_cli::commands::{cmd_check, cmd_jetdet, cmd_solve, cmd_tangency};
use quadric_cli::{demo, RunReport};
use quadric_core::{QuadricModel, DEFAULT_TUMANOV_BUDGET};

/// Exact verification of quadric CR models and their infinitesimal automorphisms.
///
/// MODEL is a model JSON file or `builtin` for the built-in codimension-5 example.
/// Exit codes: 0 verified, 1 a check was refuted or nothing was found, 2 input error.
#[derive(Parser, Debug)]
#[command(name = "quadric", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Maximum number of grid points for the Tumanov search.
    #[arg(long, global = true, default_value_t = DEFAULT_TUMANOV_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural checks: independence, finite type, Levi map, Tumanov, quadratic relations.
    Check {
        model: String,
        /// Probe this many random points instead of the exhaustive Tumanov grid.
        #[arg(long, value_name = "TRIALS")]
        tumanov_random: Option<usize>,
    },
    /// Tangency residual of a field: a name (X, Y, Z, U, Y0, Y1, Z1, U1, T, E) or a field JSON file.
    Tangency { model: String, field: String },
    /// Graded components of hol(M,0).
    Solve {
        model: String,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Search for a nonzero automorphism field with vanishing k-jet.
    Jetdet {
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        jet_order: u32,
        #[arg(long, allow_hyphen_values = true)]
        max_weight: i32,
    },
    /// Run every verification step on the built-in model.
    PaperDemo,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WeightArgs {
    /// A single weight μ >= -2.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<i32>,
    /// An inclusive range `LO..HI`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    weights: Option<(i32, i32)>,
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report: RunReport = match &cli.command {
        Command::Check { model, tumanov_random } => cmd_check(model, cli.budget, *tumanov_random),
        Command::Tangency { model, field } => cmd_tangency(model, field),
        Command::Solve { model, weights } => {
            let range = match (weights.weight, weights.weights) {
                (Some(w), _) => w..=w,
                (None, Some((lo, hi))) => lo..=hi,
                (None, None) => unreachable!("clap enforces one of --weight/--weights"),
            };
            cmd_solve(model, range)
        }
        Command::Jetdet {
            model,
            jet_order,
            max_weight,
        } => cmd_jetdet(model, *jet_order, *max_weight),
        Command::PaperDemo => demo::run(&QuadricModel::example()),
    };
    // a closed pipe downstream is not an error of ours
    let _ = if cli.json {
        writeln!(std::io::stdout().lock(), "{}", report.to_json())
    } else if report.error.is_some() {
        write!(std::io::stderr().lock(), "{}", report.to_text())
    } else {
        write!(std::io::stdout().lock(), "{}", report.to_text())
    };
    ExitCode::from(report.exit_code as u8)
}
