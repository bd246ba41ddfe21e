use std::time::Instant;

use densemem::dynamics::ModelSpec;
use densemem::experiments::{run_sweep, TrialSeed, TrialSpec};

use crate::{table, CliError, CliResult, SEED_ENV};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 40)]
    neurons: usize,
    #[arg(long, default_value_t = 2000)]
    patterns: usize,
    #[arg(long, default_value_t = 5)]
    flips: usize,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// Threads for the parallel run; `0` uses every core.
    #[arg(long, default_value_t = 0)]
    parallelism: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: Args) -> CliResult {
    let spec = TrialSpec::new(
        ModelSpec::exponential(),
        args.neurons,
        args.patterns,
        args.flips,
        TrialSeed::new(args.seed, 0),
    );
    let grid = [spec];
    let start = Instant::now();
    let serial = run_sweep(&grid, args.trials, 1)?;
    let t1 = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let parallel = run_sweep(&grid, args.trials, args.parallelism)?;
    let tp = start.elapsed().as_secs_f64();
    if serial != parallel {
        return Err(CliError::Io("parallel and sequential results differ".into()));
    }
    let threads = if args.parallelism == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        args.parallelism
    };
    print!(
        "{}",
        table(&[
            ("trials", args.trials.to_string()),
            ("sequential_s", format!("{t1:.4}")),
            ("parallel_s", format!("{tp:.4}")),
            ("threads", threads.to_string()),
            ("speedup", format!("{:.2}", t1 / tp)),
            ("successes", serial[0].n_success.to_string()),
        ])
    );
    Ok(())
}
