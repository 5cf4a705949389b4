//! Census of connected 3- and 4-vertex motifs in simple graphs, exact or by
//! equiprobable sampling of spanning-tree frames.
//!
//! ```
//! use motif_census::{graph::load_graph, census::exact_census};
//!
//! let g = load_graph("0 1\n1 2\n2 0\n2 3", false).unwrap();
//! let census = exact_census(&g, 3).unwrap();
//! assert_eq!(census.total(), 3);
//! ```

pub mod canon;
pub mod census;
pub mod estimator;
pub mod frames;
pub mod graph;

pub use canon::{arrcode, build_arrcode, class_counts, ArrcodeTable, Family, MotifClass};
pub use census::{exact_census, exact_frame_check, ExactCensus, FrameCount};
pub use estimator::{
    mixed_estimate, optimal_lambda, run_sampled_census, single_estimate, CensusConfig,
    MotifEstimate, SampleAccumulator, SampledCensus,
};
pub use frames::{frame_totals, koef_table, FrameKind, FrameSampler, FrameTotals, KoefTable};
pub use graph::{load_graph, Graph, LoadReport};
