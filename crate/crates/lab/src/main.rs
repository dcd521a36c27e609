use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use lifshitz_lab::{run_experiment, scaling_fit, ExperimentConfig, ExperimentKind, Format, LabError, LabResult};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Run one experiment from a JSON config and write its table, provenance
/// sidecar and plots.
#[derive(Debug, Parser)]
#[command(name = "lab", version)]
struct Cli {
    /// tau-plus | coupling | dimer | spectrum | heat | coldyn | modified-2d
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to the config's `out`, then `out/`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn run(cli: Cli) -> LabResult<()> {
    let kind = ExperimentKind::parse(&cli.experiment)?;
    let mut cfg = ExperimentConfig::load(&cli.config).map_err(|e| match e {
        LabError::Io { path, source } => LabError::Config(format!("{}: {source}", path.display())),
        other => other,
    })?;
    if cfg.experiment != kind {
        return Err(LabError::Config(format!("config describes `{}`, not `{}`", cfg.experiment.name(), kind.name())));
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    let dir = cli.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let table = run_experiment(&cfg)?;
    for path in table.emit(&dir, cfg.format)? {
        println!("wrote {}", path.display());
    }
    for obs in ["tau_plus", "coupling_time", "tau_d"] {
        if table.by_size(obs).len() >= 3 {
            let fit = scaling_fit(&table, obs)?;
            let path = dir.join(format!("{}.fit.{obs}.json", kind.name()));
            std::fs::write(&path, serde_json::to_string_pretty(&fit).expect("fit serialises") + "\n").map_err(|source| LabError::Io { path: path.clone(), source })?;
            println!("{obs}: slope {:.4} (95% CI {:.4}..{:.4}), r² {:.4}", fit.slope, fit.ci.0, fit.ci.1, fit.r2);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
