//! Run an experiment config in memory and print its CSV summary.

use fockbridge::harness::{run, ExperimentConfig};

const CONFIG: &str = r#"{
  "name": "eq9-demo",
  "kind": "verify-eq9",
  "modes": 1,
  "cutoff": "auto",
  "observable": "phi[1]^2 + 1/3*pi[1]^3",
  "distribution": { "kind": "uniform-box", "lower": { "phi": [-1.0], "pi": [-1.0] }, "upper": { "phi": [1.0], "pi": [1.0] } },
  "samples": 64,
  "seed": 11
}"#;

fn main() -> fockbridge::Result<()> {
    let config = ExperimentConfig::from_json_str(CONFIG)?;
    let report = run(&config)?;
    print!("{}", report.to_csv());
    println!("cutoff {} passed {}", report.basis.cutoff, report.passed);
    Ok(())
}
