//! End-to-end decomposition: grid construction, optimization, rebalancing,
//! polygon extraction, border simplification, and reporting.

use crate::compactness::{score_report, ScoreReport};
use crate::geometry::Polygon;
use crate::grid::{attach_weights, build_grid, compute_cell_size, GridError, WeightRaster};
use crate::optimize::{run_pipeline, OptimizeError, OptimizerConfig};
use crate::partition::{PartitionError, PartitionSet};
use crate::postprocess::{
    ensure_nonempty, fix_disconnected, rebalance_cell_counts, simplify_borders, BorderReport,
    SimplifyConfig,
};
use std::sync::Arc;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("weights must sum to 1 +- 1e-9 (got {0})")]
    WeightSum(f64),
    #[error("weights must be positive and less than 1")]
    WeightRange,
    #[error("no weights given")]
    NoWeights,
    #[error("grid has fewer cells ({cells}) than partitions ({parts})")]
    TooFewCells { cells: usize, parts: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone)]
pub struct DecomposeConfig {
    pub optimizer: OptimizerConfig,
    pub simplify: SimplifyConfig,
    /// Optional density raster; when present, all mass accounting uses the
    /// raster mass of each cell instead of its area.
    pub raster: Option<WeightRaster>,
    /// Skip the border simplification stage.
    pub skip_simplify: bool,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            optimizer: OptimizerConfig::default(),
            simplify: SimplifyConfig::default(),
            raster: None,
            skip_simplify: false,
        }
    }
}

/// Per-partition outcome.
#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub id: usize,
    pub target_weight: f64,
    /// Mass assigned from grid cells (area, or raster mass in weighted
    /// mode), before border simplification.
    pub achieved_mass: f64,
    /// Signed relative mass error before border simplification.
    pub area_error: f64,
    /// Exact polygon-based compactness scores of the final sub-polygon.
    pub scores: ScoreReport,
    /// Area of the final (simplified) sub-polygon.
    pub polygon_area: f64,
}

#[derive(Debug, Clone, Default)]
pub struct StageTimings {
    pub grid: Duration,
    pub optimize: Duration,
    pub rebalance: Duration,
    pub simplify: Duration,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub polygons: Vec<Polygon>,
    /// Sub-polygons before border simplification (grid outlines).
    pub grid_polygons: Vec<Polygon>,
    pub reports: Vec<PartitionReport>,
    pub borders: Vec<BorderReport>,
    pub timings: StageTimings,
    pub objective_trace: Vec<f64>,
    pub cell_size: f64,
    /// True when every partition met the tolerance after rebalancing.
    pub tau_met: bool,
    /// Final partition state (cell assignment), for diagnostics.
    pub partition_set: PartitionSet,
}

pub fn validate_weights(weights: &[f64]) -> Result<(), DecomposeError> {
    if weights.is_empty() {
        return Err(DecomposeError::NoWeights);
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(DecomposeError::WeightSum(sum));
    }
    if weights.len() > 1 && weights.iter().any(|w| *w <= 0.0 || *w >= 1.0) {
        return Err(DecomposeError::WeightRange);
    }
    Ok(())
}

/// The full decomposition: returns `n = weights.len()` connected
/// sub-polygons with relative masses within the configured tolerance
/// (flagged via `tau_met` when the tolerance could not be met).
pub fn decompose(
    p: &Polygon,
    weights: &[f64],
    cfg: &DecomposeConfig,
) -> Result<DecompositionResult, DecomposeError> {
    validate_weights(weights)?;
    let tau = cfg.optimizer.tau;
    let t0 = Instant::now();
    let mut s = compute_cell_size(tau, weights, p.area())?;
    let mut grid = build_grid(p, s)?;
    if let Some(raster) = &cfg.raster {
        grid = attach_weights(&grid, raster)?;
        // In weighted mode a single cell may hold more mass than the
        // tightest tolerance band; refine until cell mass granularity fits.
        let min_w = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        for _ in 0..4 {
            let band = tau * min_w * grid.total_weight();
            let max_cell = grid.cells().iter().map(|c| c.weight).fold(0.0, f64::max);
            if max_cell <= band * (1.0 + 1e-9) {
                break;
            }
            s /= 2.0;
            grid = attach_weights(&build_grid(p, s)?, raster)?;
        }
    }
    if grid.len() < weights.len() {
        return Err(DecomposeError::TooFewCells {
            cells: grid.len(),
            parts: weights.len(),
        });
    }
    let grid = Arc::new(grid);
    let mut timings = StageTimings::default();
    timings.grid = t0.elapsed();

    let t1 = Instant::now();
    let (mut ps, trace) = run_pipeline(p, grid.clone(), weights, &cfg.optimizer)?;
    timings.optimize = t1.elapsed();

    let t2 = Instant::now();
    fix_disconnected(&mut ps);
    ensure_nonempty(&mut ps);
    rebalance_cell_counts(&mut ps, tau);
    fix_disconnected(&mut ps);
    ensure_nonempty(&mut ps);
    timings.rebalance = t2.elapsed();

    let tau_met = (0..ps.n()).all(|i| ps.area_error(i).abs() <= tau);
    let grid_polygons = ps.partitions_to_polygons()?;

    let t3 = Instant::now();
    let (polygons, borders) = if cfg.skip_simplify {
        (grid_polygons.clone(), Vec::new())
    } else {
        simplify_borders(p, &grid_polygons, grid.cell_size(), &cfg.simplify)
    };
    timings.simplify = t3.elapsed();

    let reports = (0..ps.n())
        .map(|i| {
            let achieved = ps.mass(i);
            PartitionReport {
                id: i,
                target_weight: ps.partitions[i].target_weight,
                achieved_mass: achieved,
                area_error: ps.area_error(i),
                scores: score_report(&polygons[i]),
                polygon_area: polygons[i].area(),
            }
        })
        .collect();

    Ok(DecompositionResult {
        polygons,
        grid_polygons,
        reports,
        borders,
        timings,
        objective_trace: trace,
        cell_size: grid.cell_size(),
        tau_met,
        partition_set: ps,
    })
}
