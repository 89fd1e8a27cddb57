// Isotropic edge-correction weights: exact arcs on a rectangle, sampled arcs
// on a non-rectangular region.
//
// cargo run --example edge_weights

use arealpp::geometry::{edge_weight, edge_weight_with, ArcMethod, Point, Polygon, Rect, Region};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let square = Region::from_rect(Rect::new(0.0, 0.0, 10.0, 10.0))?;
    for (label, p) in [
        ("interior", (5.0, 5.0)),
        ("edge", (0.0, 5.0)),
        ("corner", (0.0, 0.0)),
    ] {
        let w = edge_weight(&Point::from(p), 1.0, &square)?;
        let s = edge_weight_with(
            &Point::from(p),
            1.0,
            &square,
            ArcMethod::Sampled { samples: 2048 },
        )?;
        println!("{label:<8} exact {w:.6}  sampled {s:.6}");
    }

    let l_shape = Polygon::new(
        vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 2.0),
            Point::new(2.0, 2.0),
            Point::new(2.0, 4.0),
            Point::new(0.0, 4.0),
        ],
        vec![],
    )?;
    let region = Region::new(vec![l_shape])?;
    let w = edge_weight(&Point::new(1.5, 1.5), 1.0, &region)?;
    println!("L-shape, inner corner at distance 0.71: weight {w:.4}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
