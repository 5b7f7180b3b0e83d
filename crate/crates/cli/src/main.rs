mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Error carrying the process exit code: 1 for usage or configuration
/// problems, 2 for failures while running.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<fcpso::Error> for Failure {
    fn from(err: fcpso::Error) -> Self {
        match err {
            fcpso::Error::Io(_) | fcpso::Error::Contract(_) => Self::runtime(err.to_string()),
            _ => Self::usage(err.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fcpso",
    version,
    about = "Multi-objective particle swarm optimizers and constriction-fairness analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one optimization and write its front and metadata
    Solve(SolveArgs),
    /// Run a paired comparison experiment and write comparison.csv
    Benchmark(BenchmarkArgs),
    /// Activation probability and unfairness of parameter schemes
    Fairness(FairnessArgs),
    /// Normalized EM-SMPSO hypervolume across an unfairness grid
    Profile(ProfileArgs),
    /// Quality indicators of a front CSV
    Indicators(IndicatorArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Settings file with [run] and [mutation] sections; flags override it [default: none]
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Problem name; scalable problems take an objective suffix such as dtlz2-5 [default: zdt1]
    #[arg(long)]
    pub problem: Option<String>,
    /// Objective count for DTLZ and WFG problems [default: 3 for DTLZ, 5 for WFG]
    #[arg(long)]
    pub objectives: Option<usize>,
    /// smpso, em-smpso or fcpso [default: fcpso]
    #[arg(long)]
    pub variant: Option<String>,
    /// Random seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Function-evaluation budget [default: 25000]
    #[arg(long)]
    pub evaluations: Option<usize>,
    /// Number of particles [default: 100]
    #[arg(long)]
    pub swarm_size: Option<usize>,
    /// External archive capacity [default: 100]
    #[arg(long)]
    pub archive_size: Option<usize>,
    /// Inertia weight [default: 0.1]
    #[arg(long)]
    pub inertia: Option<f64>,
    /// Parameter scheme phi1,phi2,beta1,beta2 [default: the variant's scheme]
    #[arg(long, value_name = "P1,P2,B1,B2")]
    pub scheme: Option<String>,
    /// Initial velocity: zero or uniform [default: zero]
    #[arg(long)]
    pub velocity_init: Option<String>,
    /// Polynomial mutation distribution index [default: 20]
    #[arg(long)]
    pub distribution_index: Option<f64>,
    /// Per-variable mutation probability [default: 1/n]
    #[arg(long)]
    pub per_variable_probability: Option<f64>,
    /// Fraction of particles mutated each generation [default: 0.15]
    #[arg(long)]
    pub particle_fraction: Option<f64>,
    /// Stop once archive HV reaches this fraction of the optimum [default: off]
    #[arg(long, value_name = "FRACTION")]
    pub hv_target: Option<f64>,
    /// Record archive HV every this many generations, 0 to disable [default: 0]
    #[arg(long)]
    pub record_interval: Option<usize>,
    /// Output directory [default: <results>/<problem>/<variant>/<seed>]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Results root [default: $FCPSO_RESULTS_DIR, else results]
    #[arg(long, value_name = "DIR")]
    pub results_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Experiment file or bundled name (zdt-quick, paper-zdt-dtlz) [default: zdt-quick]
    #[arg(default_value = "zdt-quick", hide_default_value = true)]
    pub spec: String,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Override the repetition count [default: from the spec]
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Override the base seed [default: from the spec]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the evaluation budget [default: from the spec]
    #[arg(long)]
    pub evaluations: Option<usize>,
    /// Results root [default: $FCPSO_RESULTS_DIR, else results]
    #[arg(long, value_name = "DIR")]
    pub results_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FairnessArgs {
    /// Parameter scheme phi1,phi2,beta1,beta2 [default: 3,5,0,1]
    #[arg(long, value_name = "P1,P2,B1,B2")]
    pub scheme: Option<String>,
    /// Also estimate by sampling this many (phi, beta) pairs [default: off]
    #[arg(long, value_name = "SAMPLES")]
    pub monte_carlo: Option<u64>,
    /// Seed for sampling [default: 1]
    #[arg(long, default_value_t = 1, hide_default_value = true)]
    pub seed: u64,
    /// Solve for the phi2 giving zero unfairness with beta ~ U(0, 1) [default: off]
    #[arg(long, conflicts_with_all = ["scheme", "monte_carlo", "epsilon", "target_mu"])]
    pub solve_fair: bool,
    /// Lower phi bound used by --solve-fair [default: 2]
    #[arg(long, default_value_t = 2.0, hide_default_value = true, requires = "solve_fair")]
    pub phi1: f64,
    /// Unfairness of phi ~ U(3, 5), beta ~ U(0, EPSILON) [default: off]
    #[arg(long, conflicts_with_all = ["scheme", "monte_carlo", "target_mu"])]
    pub epsilon: Option<f64>,
    /// Find a scheme with this unfairness [default: off]
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["scheme", "monte_carlo"])]
    pub target_mu: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Settings file with a [profile] section; flags override it [default: none]
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Comma-separated problems [default: zdt1,zdt3,zdt4]
    #[arg(long)]
    pub problems: Option<String>,
    /// Comma-separated unfairness values [default: 12 points from -0.44 to 0.42]
    #[arg(long, allow_hyphen_values = true)]
    pub mu_grid: Option<String>,
    /// Seeds per grid point [default: 20]
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// First seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Function-evaluation budget per run [default: 25000]
    #[arg(long)]
    pub evaluations: Option<usize>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Results root [default: $FCPSO_RESULTS_DIR, else results]
    #[arg(long, value_name = "DIR")]
    pub results_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndicatorArgs {
    /// Front CSV with header f1..fk [default: none, required]
    pub front: PathBuf,
    /// Reference front CSV for igd and eps [default: the problem's front when --problem is given]
    #[arg(long, value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// Hypervolume reference point r1,r2,... [default: the problem's point, else 2 per objective]
    #[arg(long, value_name = "R1,R2,..")]
    pub ref_point: Option<String>,
    /// Take the reference point and front from this problem [default: none]
    #[arg(long)]
    pub problem: Option<String>,
    /// Objective count for --problem [default: the front's width]
    #[arg(long)]
    pub objectives: Option<usize>,
    /// Report hypervolume [default: off; all available when no indicator is chosen]
    #[arg(long)]
    pub hv: bool,
    /// Report inverted generational distance [default: off]
    #[arg(long)]
    pub igd: bool,
    /// Report additive epsilon [default: off]
    #[arg(long)]
    pub eps: bool,
    /// Report spacing [default: off]
    #[arg(long)]
    pub sp: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Benchmark(args) => commands::benchmark(args),
        Command::Fairness(args) => commands::fairness(args),
        Command::Profile(args) => commands::profile(args),
        Command::Indicators(args) => commands::indicators(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
