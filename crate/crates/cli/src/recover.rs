use clap::ValueEnum;
use densemem::dynamics::{Diagonal, ModelSpec, TiePolicy};
use densemem::experiments::{run_trial, AsyncOrder, Corruption, Target, TrialScheduler, TrialSeed, TrialSpec};
use serde::Serialize;

use crate::{table, CliError, CliResult, Format, SEED_ENV};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Classical,
    /// Classical rule without self-coupling.
    ClassicalZero,
    Polynomial,
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    Sync,
    Async,
    FixedPoint,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum, default_value_t = Model::Exponential)]
    model: Model,
    /// Degree of the polynomial model.
    #[arg(long = "n", default_value_t = 3)]
    degree: u32,
    #[arg(long)]
    neurons: usize,
    #[arg(long)]
    patterns: usize,
    #[arg(long, default_value_t = 0)]
    flips: usize,
    /// Master seed.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Trial index under the master seed.
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long, value_enum, default_value_t = Schedule::Sync)]
    scheduler: Schedule,
    #[arg(long, default_value_t = 100)]
    max_passes: usize,
    /// Visit neurons in a seeded random order in asynchronous passes.
    #[arg(long)]
    random_order: bool,
    /// Pattern to corrupt; all patterns when omitted with `--all`.
    #[arg(long, default_value_t = 0, conflicts_with = "all")]
    target: usize,
    #[arg(long)]
    all: bool,
    /// Sample uniformly from the Hamming ball instead of the sphere.
    #[arg(long)]
    ball: bool,
    /// Ties set the neuron to +1 instead of keeping it.
    #[arg(long)]
    ties_plus_one: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Serialize)]
struct Report {
    spec: TrialSpec,
    success: bool,
    n_wrong_bits_after: usize,
    bits_checked: usize,
    ties_seen: u64,
    signal_magnitude_log: Option<f64>,
    noise_magnitude_log: Option<f64>,
    noise_dominated_neurons: usize,
}

fn spec_of(args: &Args) -> CliResult<TrialSpec> {
    let model = match args.model {
        Model::Classical => ModelSpec::classical(),
        Model::ClassicalZero => ModelSpec::classical().with_diagonal(Diagonal::Zero),
        Model::Polynomial => ModelSpec::polynomial(args.degree)?,
        Model::Exponential => ModelSpec::exponential(),
    };
    let model = if args.ties_plus_one {
        model.with_tie_policy(TiePolicy::PlusOne)
    } else {
        model
    };
    let scheduler = match args.scheduler {
        Schedule::Sync => TrialScheduler::SyncOneStep,
        Schedule::Async => TrialScheduler::AsyncOnePass,
        Schedule::FixedPoint => TrialScheduler::ToFixedPoint {
            max_passes: args.max_passes,
        },
    };
    let spec = TrialSpec::new(model, args.neurons, args.patterns, args.flips, TrialSeed::new(args.seed, args.trial))
        .with_scheduler(scheduler)
        .with_order(if args.random_order { AsyncOrder::Random } else { AsyncOrder::Sequential })
        .with_target(if args.all { Target::AllPatterns } else { Target::FixedPattern(args.target) })
        .with_corruption(if args.ball { Corruption::Ball } else { Corruption::Sphere });
    spec.validate()?;
    Ok(spec)
}

fn log_text(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| v.to_string())
}

pub fn run(args: Args) -> CliResult {
    let spec = spec_of(&args)?;
    let r = run_trial(&spec)?;
    let report = Report {
        spec,
        success: r.success,
        n_wrong_bits_after: r.n_wrong_bits_after,
        bits_checked: r.bits_checked,
        ties_seen: r.ties_seen,
        signal_magnitude_log: r.signal_magnitude_log,
        noise_magnitude_log: r.noise_magnitude_log,
        noise_dominated_neurons: r.noise_dominated_neurons,
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Table => table(&[
            ("result", if r.success { "success" } else { "failure" }.to_string()),
            ("model", spec.model.name().to_string()),
            ("N", spec.n_neurons.to_string()),
            ("M", spec.n_patterns.to_string()),
            ("flips", spec.n_flips.to_string()),
            ("scheduler", spec.scheduler.to_string()),
            ("seed", format!("{}/{}", spec.seed.master_seed, spec.seed.trial)),
            ("residual_bits", format!("{}/{}", r.n_wrong_bits_after, r.bits_checked)),
            ("ties", r.ties_seen.to_string()),
            ("log_signal", log_text(r.signal_magnitude_log)),
            ("log_noise", log_text(r.noise_magnitude_log)),
            ("noise_dominated", r.noise_dominated_neurons.to_string()),
        ]),
        Format::Csv => return Err(CliError::Usage("recover prints table or json".into())),
    };
    print!("{text}");
    Ok(())
}
