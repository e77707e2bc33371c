use clap::{Parser, Subcommand};
use model_evidence::harness::{
    emit_boxplot_data, oracle, run_experiment, validate_experiment, ExperimentConfig, HarnessError,
    RunReport, OUTPUT_DIR_ENV,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "evidence",
    version,
    about = "Benchmark Bayesian evidence estimators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured cell and write the report directory.
    #[command(after_help = format!("The output directory can be overridden with {OUTPUT_DIR_ENV}."))]
    Run { config: PathBuf },
    /// Print closed-form and quadrature log evidences without sampling.
    Oracle { config: PathBuf },
    /// Write long-format boxplot data from a report file or directory.
    Boxplot {
        report: PathBuf,
        /// Destination; defaults to boxplot.csv beside the report.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the config, dataset headers, row counts and checksums.
    Validate { config: PathBuf },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, HarnessError> {
    let mut c = ExperimentConfig::from_file(path)?;
    c.apply_env_override();
    Ok(c)
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Run { config } => {
            let config = load(&config)?;
            let report = run_experiment(&config)?;
            print!("{}", report.render());
            println!("\nreport written to {}", config.output_dir.display());
            let failed = report.failed_cells();
            if failed > 0 {
                eprintln!("{failed} cell(s) failed");
                for c in report.cells.iter().filter(|c| c.failed()) {
                    eprintln!(
                        "  {} {} replicate {}: {}",
                        c.method,
                        c.model,
                        c.replicate,
                        c.error.as_deref().unwrap_or("")
                    );
                }
                return Ok(ExitCode::from(1));
            }
        }
        Command::Oracle { config } => {
            let config = load(&config)?;
            let o = oracle(&config)?;
            for d in &o.datasets {
                println!(
                    "dataset {} ({} rows, sha256 {})",
                    d.path.display(),
                    d.rows,
                    d.sha256
                );
            }
            for m in &o.models {
                let q = match &m.quadrature {
                    Some(Ok(v)) => format!("{v:.10}"),
                    Some(Err(e)) => format!("unavailable ({e})"),
                    None => "not applicable".into(),
                };
                let a = m
                    .analytic
                    .map_or_else(|| "none".into(), |v| format!("{v:.10}"));
                println!("{:<12} analytic {a}  quadrature {q}", m.model);
            }
            for b in &o.bayes_factors {
                println!(
                    "BF[{}/{}] = {:.4}  (log {:.8})",
                    b.numerator, b.denominator, b.bayes_factor, b.log_bayes_factor
                );
            }
        }
        Command::Boxplot { report, output } => {
            let rep = RunReport::load(&report)?;
            let dest = output.unwrap_or_else(|| {
                let dir = if report.is_dir() {
                    report.clone()
                } else {
                    report.parent().map(PathBuf::from).unwrap_or_default()
                };
                dir.join("boxplot.csv")
            });
            std::fs::write(&dest, emit_boxplot_data(&rep)).map_err(|e| HarnessError::Io {
                path: dest.clone(),
                source: e,
            })?;
            println!("{}", dest.display());
        }
        Command::Validate { config } => {
            let config = load(&config)?;
            let datasets = validate_experiment(&config)?;
            for d in &datasets {
                println!(
                    "ok {} ({} rows, sha256 {})",
                    d.path.display(),
                    d.rows,
                    d.sha256
                );
            }
            let methods: Vec<&str> = config
                .estimators
                .iter()
                .map(|e| e.method().as_str())
                .collect();
            println!(
                "ok {}: {} replicate(s), estimators [{}], output {}",
                config.name,
                config.replicates,
                methods.join(", "),
                config.output_dir.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
