use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Preference recovery from choice data with deferrals and multi-valued
/// choices.
#[derive(Parser, Debug)]
#[command(name = "revpref", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Choice data CSV (`subject,menu,choice[,order]`); repeat for several
    /// files. `graph` reads a relation in text form instead.
    #[arg(short, long, global = true)]
    pub input: Vec<PathBuf>,

    /// Treat the input as forced choice: blank choices are errors.
    #[arg(long, global = true)]
    pub forced: bool,

    /// Models to fit, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "rc,uc,dc")]
    pub models: Vec<String>,

    /// Largest distance score that still counts as classified.
    #[arg(long, global = true, default_value_t = 10)]
    pub threshold: u32,

    /// Seed for simulations.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Output file (directory for `report`); stdout when omitted.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; 1 runs sequentially.
    #[arg(short, long, global = true, env = "REVPREF_JOBS")]
    pub jobs: Option<usize>,

    /// Table format of the primary output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Drop subjects who always defer or always choose everything.
    #[arg(long, global = true)]
    pub exclude_uninformative: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse the input and summarise it.
    Validate,
    /// Count (or list) relations of each class.
    Enumerate(EnumerateArgs),
    /// Best-fitting model per subject and cohort summary.
    Score(SummaryArgs),
    /// Optimal relations per subject and model, or axiom-based rationalizations.
    Recover(RecoverArgs),
    /// Revealed-preference axiom checks with witnesses.
    Axioms(AxiomArgs),
    /// Separate indifference from indecisiveness for every pair.
    Separate(SeparateArgs),
    /// Descriptive statistics and satisficing/randomization screens.
    Metrics(MetricsArgs),
    /// Uniform-random subjects, optionally with percentile cutoffs.
    Simulate(SimulateArgs),
    /// DOT graph of a relation.
    Graph(GraphArgs),
    /// Full pipeline into a directory of artifacts.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct SummaryArgs {
    /// Also write the JSON summary here (otherwise it goes to stderr).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Number of alternatives.
    #[arg(short, long)]
    pub n: usize,
    /// Restrict to one class (weak-order, strict-partial-order,
    /// incomplete-preorder, preorder, linear-order).
    #[arg(long)]
    pub class: Option<String>,
    /// Print every relation in text form instead of counts.
    #[arg(long, requires = "class")]
    pub list: bool,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    /// Use the constructive axiom-based tests instead of exhaustive search.
    #[arg(long)]
    pub rationalize: bool,
}

#[derive(Args, Debug)]
pub struct AxiomArgs {
    /// Axioms to check, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    pub axiom: Vec<String>,
    /// Witnesses kept per axiom; 0 keeps all.
    #[arg(long, default_value_t = revpref::revealed::DEFAULT_WITNESS_CAP)]
    pub witness_cap: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeparationMethod {
    /// Dominant-choice criterion on the whole dataset.
    Dominant,
    /// Eliaz–Ok criterion on the best undominated-choice relation.
    EliazOk,
}

#[derive(Args, Debug)]
pub struct SeparateArgs {
    #[arg(long, value_enum, default_value_t = SeparationMethod::Dominant)]
    pub method: SeparationMethod,
    #[command(flatten)]
    pub summary: SummaryArgs,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// Flag screened subjects even when a model already classifies them.
    #[arg(long)]
    pub no_two_stage: bool,
    /// Override the first-item-only frequency cutoff.
    #[arg(long)]
    pub first_item_cutoff: Option<f64>,
    /// Override the average chosen position cutoff.
    #[arg(long)]
    pub position_cutoff: Option<f64>,
    /// Override the choose-everything count cutoff.
    #[arg(long)]
    pub choose_everything_cutoff: Option<usize>,
    #[command(flatten)]
    pub summary: SummaryArgs,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Number of simulated subjects.
    #[arg(long, default_value_t = 1000)]
    pub subjects: usize,
    /// Number of alternatives.
    #[arg(short, long, default_value_t = 6)]
    pub n: usize,
    /// Menu sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub sizes: Vec<usize>,
    /// Also compute score and screen cutoffs at this lower-tail percentile.
    #[arg(long)]
    pub percentile: Option<f64>,
    /// Metadata JSON path; defaults to `<out>.meta.json`, or stderr.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Graph name.
    #[arg(long, default_value = "preference")]
    pub name: String,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Also simulate this many uniform-random subjects on the input's menus.
    #[arg(long)]
    pub simulate: Option<usize>,
    /// Lower-tail percentile for the simulated cutoffs.
    #[arg(long, default_value_t = 2.5)]
    pub percentile: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
