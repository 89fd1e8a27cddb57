// Ripley's K on grid-cell centroids against a Monte Carlo CSR envelope at
// the rule-determined radii.
//
// cargo run --release --example ripley_envelope

use arealpp::prelude::*;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = build_grid(20, 20, 1.0)?;
    let radii = radius_grid(&grid)?;
    let n = 40;
    let env = mc_envelope(n, grid.region(), &radii, 199, 2024)?;

    for (label, dgm) in [("d1", Dgm::D1), ("d3", Dgm::D3)] {
        let draw = match dgm {
            Dgm::D3 => sample_d3(&grid, n, 5)?,
            _ => sample_d1(&grid, n, 5)?,
        };
        let pts = grid.centroids_of(&draw.indices);
        let tail = if dgm == Dgm::D1 { Tail::Two } else { Tail::Right };
        let res = k_test(&pts, grid.region(), &env, tail)?;
        println!("{label} ({} test)", tail.label());
        println!(
            "  {:>5} {:>9} {:>9} {:>9} {:>9}  reject",
            "t", "K", "L", "q2.5", "q97.5"
        );
        for (k, t) in radii.radii().iter().enumerate() {
            println!(
                "  {:>5.2} {:>9.3} {:>9.3} {:>9.3} {:>9.3}  {}",
                t, res.estimate.khat[k], res.estimate.lhat[k], env.q025[k], env.q975[k], res.reject[k]
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
