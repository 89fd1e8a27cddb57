// Run a small scenario matrix from a TOML description and render the
// result tables.
//
// cargo run --release --example scenario_matrix

use std::path::Path;

use arealpp::harness::{render_csv, render_text, run_matrix, MatrixConfig};

const CONFIG: &str = r#"
replicates = 50
base_seed = 11

[structures.grid]
grid = { rows = 20, cols = 20 }
cluster = { block = { rows = [5, 14], cols = [5, 14] } }

[[scenario]]
structure = "grid"
dgm = "d1"
size = "tenth"
method = "ann"

[[scenario]]
structure = "grid"
dgm = "d3"
size = "quarter"
method = "ann"
window = "bbox"

[[scenario]]
structure = "grid"
dgm = "d2"
size = "tenth"
method = "ripley"
n_sim = 100
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = MatrixConfig::from_toml(CONFIG)?;
    let structures = cfg.load_structures(Path::new("."))?;
    let reports = run_matrix(&cfg.scenarios()?, &structures)?;
    print!("{}", render_text(&reports)?);
    println!();
    print!("{}", render_csv(&reports)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
