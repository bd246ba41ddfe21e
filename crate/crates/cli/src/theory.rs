use clap::ValueEnum;
use densemem::theory::{alpha_star_curve, ThresholdReport};

use crate::{table, CliError, CliResult, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    Rho,
}

#[derive(clap::Args)]
pub struct Args {
    /// Corruption fraction in [0, 1/2).
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    /// Polynomial degree for `c_n` and the polynomial capacity.
    #[arg(long = "n")]
    degree: Option<u32>,
    /// Network size for `m_max` and the polynomial capacity.
    #[arg(long)]
    neurons: Option<u64>,
    /// Load exponent for `m_max`; defaults to `alpha_star(rho)`.
    #[arg(long)]
    alpha: Option<f64>,
    /// Emit a CSV curve instead of a report.
    #[arg(long, value_enum)]
    curve: Option<Curve>,
    /// Grid size for `--curve`.
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn opt<T: ToString>(v: Option<T>) -> Option<String> {
    v.map(|v| v.to_string())
}

pub fn render(report: &ThresholdReport, format: Format) -> String {
    let fields: Vec<(&str, Option<String>)> = vec![
        ("rho", Some(report.rho.to_string())),
        ("alpha_star", Some(report.alpha_star.to_string())),
        ("alpha", Some(report.alpha.to_string())),
        ("n_neurons", opt(report.n_neurons)),
        ("m_max", opt(report.m_max)),
        ("degree", opt(report.degree)),
        ("c_n", opt(report.c_n)),
        ("polynomial_capacity", opt(report.polynomial_capacity)),
    ];
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Table => {
            let rows: Vec<(&str, String)> = fields.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect();
            table(&rows)
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let values: Vec<String> = fields.into_iter().map(|f| f.1.unwrap_or_default()).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
    }
}

pub fn run(args: Args) -> CliResult {
    if let Some(Curve::Rho) = args.curve {
        if args.format == Format::Table {
            return Err(CliError::Usage("--curve emits csv or json".into()));
        }
        let curve = alpha_star_curve(args.points)?;
        let text = match args.format {
            Format::Json => {
                let rows: Vec<_> = curve
                    .iter()
                    .map(|&(rho, alpha_star)| serde_json::json!({ "rho": rho, "alpha_star": alpha_star }))
                    .collect();
                serde_json::to_string_pretty(&rows).expect("curve serializes") + "\n"
            }
            _ => std::iter::once("rho,alpha_star\n".to_string())
                .chain(curve.iter().map(|(r, a)| format!("{r},{a}\n")))
                .collect(),
        };
        print!("{text}");
        return Ok(());
    }
    let report = ThresholdReport::new(args.rho, args.neurons, args.alpha, args.degree)?;
    print!("{}", render(&report, args.format));
    Ok(())
}
