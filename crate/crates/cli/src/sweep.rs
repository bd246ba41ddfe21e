use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use densemem::experiments::{run_sweep_with, Manifest, SweepConfig, SweepResult, CSV_HEADER};

use crate::{CliError, CliResult, Format, SEED_ENV};

#[derive(clap::Args)]
pub struct Args {
    /// JSON sweep configuration; `-` reads standard input.
    #[arg(long)]
    config: PathBuf,
    /// Result file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Manifest file; defaults to `<output>.manifest.json` when `--output` is given.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; `0` uses every core. Overrides the config.
    #[arg(long)]
    parallelism: Option<usize>,
    /// Trials per point. Overrides the config.
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed. Overrides the environment and the config.
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
}

fn read_config(args: &Args) -> CliResult<SweepConfig> {
    let text = if args.config.as_os_str() == "-" {
        io::read_to_string(io::stdin())?
    } else {
        std::fs::read_to_string(&args.config)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.config.display())))?
    };
    let mut config = SweepConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(p) = args.parallelism {
        config.parallelism = p;
    }
    if let Some(t) = args.trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        config.trials = t;
    }
    Ok(config)
}

pub fn run(args: Args) -> CliResult {
    if args.format == Format::Table {
        return Err(CliError::Usage("sweep writes csv or json".into()));
    }
    let config = read_config(&args)?;
    let manifest = Manifest::new(&config)?;
    let grid = manifest.points.clone();

    let manifest_path = args
        .manifest
        .clone()
        .or_else(|| args.output.as_ref().map(|o| PathBuf::from(format!("{}.manifest.json", o.display()))));
    if let Some(path) = &manifest_path {
        std::fs::write(path, manifest.to_json() + "\n")?;
    }

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut io_error = None;
    let mut collected: Vec<SweepResult> = Vec::new();
    if args.format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
        out.flush()?;
    }
    let result = run_sweep_with(&grid, config.trials, config.parallelism, |r| {
        if args.format == Format::Csv {
            // Flush per point so an interrupted sweep keeps finished rows.
            if let Err(e) = writeln!(out, "{}", r.csv_row()).and_then(|_| out.flush()) {
                io_error = Some(e);
                return Err(densemem::Error::InvalidArgument("output closed".into()));
            }
        } else {
            collected.push(r.clone());
        }
        Ok(())
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    result?;
    if args.format == Format::Json {
        serde_json::to_writer_pretty(&mut out, &collected).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}
