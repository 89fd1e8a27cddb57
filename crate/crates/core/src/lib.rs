//! Point-pattern tests on centroids of areal units.
//!
//! Areal data (polygons with an adjacency structure) are reduced to unit
//! centroids, and the centroids of an observed subset are tested for
//! complete spatial randomness with the average nearest neighbour ratio or
//! Ripley's K function. The [`harness`] module runs whole scenario matrices
//! with seeded, thread-count-independent replicates.
//!
//! ```
//! use arealpp::prelude::*;
//!
//! let grid = build_grid(20, 20, 1.0).unwrap();
//! let draw = sample_d1(&grid, 40, 7).unwrap();
//! let pts = grid.centroids_of(&draw.indices);
//! let res = ann_test(&pts, grid.region(), WindowChoice::Study, Tail::Two).unwrap();
//! assert!(res.ratio > 0.0);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ann;
pub mod areal;
pub mod dgm;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod ripley;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::ann::{ann_test, ann_with_area, AnnResult, Tail, WindowChoice};
    pub use crate::areal::{
        build_grid, load_structure, load_structure_file, AdjacencyRule, ArealStructure, ArealUnit,
    };
    pub use crate::dgm::{
        sample_d1, sample_d2, sample_d3, sample_size, ClusterRegionSpec, Dgm, Draw, SampleSizeRule,
    };
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{edge_weight, Point, Polygon, Rect, Region};
    pub use crate::harness::{run_matrix, run_scenario, MatrixConfig, Method, Scenario, SimulationReport};
    pub use crate::ripley::{
        k_hat, k_test, mc_envelope, radius_grid, Envelope, KEstimate, KOptions, Normalization, RadiusGrid,
    };
    pub use crate::theory::{divergence_table, lattice_count_closed, LatticeCount};
}
