// Load a planar GeoJSON structure, inspect adjacency, and draw units under
// each data-generation mechanism.
//
// cargo run --example irregular_structure

use arealpp::prelude::*;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/irregular30.geojson");
    let s = load_structure_file(path, AdjacencyRule::Rook)?;
    println!(
        "{} units, total area {:.0}, rectangular region: {}",
        s.n_units(),
        s.region().area(),
        s.region().as_rect().is_some()
    );
    println!(
        "rook neighbours of u12: {:?}",
        s.neighbor_ids("u12").unwrap_or_default()
    );
    let queen = s.with_rule(AdjacencyRule::Queen)?;
    println!(
        "queen neighbours of u12: {:?}",
        queen.neighbor_ids("u12").unwrap_or_default()
    );

    let cluster = ClusterRegionSpec::new(&s, &["u01", "u02", "u03", "u11", "u12", "u13"], 10.0)?;
    let n = sample_size(s.n_units(), SampleSizeRule::Quarter)?;
    for (label, draw) in [
        ("d1", sample_d1(&s, n, 3)?),
        ("d2", sample_d2(&s, n, &cluster, 3)?),
        ("d3", sample_d3(&s, n, 3)?),
    ] {
        let pts = s.centroids_of(&draw.indices);
        let r = ann_test(&pts, s.region(), WindowChoice::Study, Tail::Two)?;
        println!("{label}: {:?}  R = {:.3}", draw.ids(&s), r.ratio);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
