//! Runs a small experiment from an inline TOML config and prints the
//! rendered report. Output files land in a temporary directory.
//!
//! cargo run --release --example harness_run

use model_evidence::harness::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"
name = "demo"
replicates = 5
seed = 9

[benchmark]
kind = "normal_gamma"
n = 50
tau0 = [0.1, 1.0]

[estimators.exact]
[estimators.laplace]

[estimators.ais]
samples = 200
ladder = { steps = 40, exponent = 5.0 }

[estimators.nested_sampling]
live_points = 200
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("evidence-harness-demo");
    let mut config = ExperimentConfig::from_toml_str(CONFIG, &dir)?;
    config.output_dir = dir.clone();
    let report = run_experiment(&config)?;
    print!("{}", report.render());
    println!("files written to {}", dir.display());
    Ok(())
}
