// ANN ratio on a perfect lattice and on centroids of randomly observed grid
// cells, under both window choices.
//
// cargo run --example ann_lattice

use arealpp::prelude::*;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lattice: Vec<Point> = (0..10)
        .flat_map(|i| (0..10).map(move |j| Point::new(i as f64, j as f64)))
        .collect();
    let square = Region::from_rect(Rect::new(0.0, 0.0, 10.0, 10.0))?;
    let r = ann_test(&lattice, &square, WindowChoice::Study, Tail::Two)?;
    println!(
        "10x10 lattice: R = {:.6}, z = {:.2}, reject = {}",
        r.ratio, r.z, r.reject
    );
    assert_eq!(r.ratio, 2.0);

    let grid = build_grid(20, 20, 1.0)?;
    let n = sample_size(grid.n_units(), SampleSizeRule::Tenth)?;
    let draw = sample_d1(&grid, n, 42)?;
    let pts = grid.centroids_of(&draw.indices);
    for window in [WindowChoice::Study, WindowChoice::Bbox] {
        let r = ann_test(&pts, grid.region(), window, Tail::Two)?;
        println!(
            "grid, {n} random cells, window {:<5}: area = {:>6.1}, R = {:.3}, z = {:+.3}, reject = {}",
            window.label(),
            r.area,
            r.ratio,
            r.z,
            r.reject
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
