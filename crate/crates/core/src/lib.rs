//! Partitioning of simple polygons into connected sub-polygons with
//! prescribed relative areas and maximal compactness.
//!
//! The pipeline discretizes the input polygon into a grid of cells, assigns
//! cells to partitions through a multiplicatively-weighted potential-field
//! model, optimizes the field parameters (heuristic and/or evolutionary),
//! rebalances cell assignments, and finally simplifies the zigzag borders
//! between sub-polygons.

pub mod compactness;
pub mod corpus;
pub mod geometry;
pub mod grid;
pub mod optimize;
pub mod partition;
pub mod pipeline;
pub mod postprocess;

pub use compactness::{CompactnessMetric, ScoreReport};
pub use geometry::{Circle, OrientedRect, Point, Polygon, Polyline};
pub use grid::{Grid, GridCell, WeightRaster};
pub use optimize::{Algorithm, OptimizerConfig};
pub use partition::{ObjectiveValue, Partition, PartitionSet};
pub use pipeline::{decompose, DecomposeConfig, DecompositionResult};
pub use postprocess::SimplifyConfig;
