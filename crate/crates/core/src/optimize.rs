//! Search over potential-field configurations: partition initialization,
//! the iterative radius-update heuristic, CMA-ES, and random search.

use crate::compactness::CompactnessMetric;
use crate::geometry::{Point, Polygon};
use crate::grid::Grid;
use crate::partition::{PartitionError, PartitionSet};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("no optimization algorithm selected")]
    NoAlgorithm,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Pfh,
    CmaEs,
    RandomSearch,
}

/// Configuration for the optimization stage.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Algorithms to run, in order. When the heuristic is present it runs
    /// first and seeds the others.
    pub algorithms: Vec<Algorithm>,
    /// Upper bound on the relative area error of each partition.
    pub tau: f64,
    /// Iteration cap for the radius-update heuristic.
    pub max_iter_pfh: usize,
    /// Objective-evaluation budget for CMA-ES / random search.
    pub budget_evals: usize,
    /// CMA-ES population size; default 4 + floor(3 ln(dim)).
    pub population: Option<usize>,
    /// CMA-ES initial step as a fraction of the bounding-box diagonal.
    pub sigma0_frac: f64,
    pub seed: u64,
    /// Penalty coefficient for constraint violations.
    pub pi_c: f64,
    /// Compactness metric used inside the objective.
    pub shape_metric: CompactnessMetric,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            algorithms: vec![Algorithm::Pfh, Algorithm::CmaEs],
            tau: 0.05,
            max_iter_pfh: 100,
            budget_evals: 3000,
            population: None,
            sigma0_frac: 0.25,
            seed: 0,
            pi_c: 10.0,
            shape_metric: CompactnessMetric::Schwartzberg,
        }
    }
}

/// Flat parameter vector (x_i, y_i, r_i) per partition.
pub fn encode(ps: &PartitionSet) -> Vec<f64> {
    let mut v = Vec::with_capacity(3 * ps.n());
    for p in &ps.partitions {
        v.push(p.center.x);
        v.push(p.center.y);
        v.push(p.radius);
    }
    v
}

pub fn decode(ps: &mut PartitionSet, params: &[f64]) {
    for (i, chunk) in params.chunks_exact(3).enumerate() {
        ps.partitions[i].center = Point::new(chunk[0], chunk[1]);
        ps.partitions[i].radius = chunk[2];
    }
}

/// Clamps centers into the bounding box and radii into [r_min, diagonal].
pub fn clamp_params(params: &mut [f64], p: &Polygon, r_min: f64) {
    let (min, max) = p.bounding_box();
    let diag = min.dist(max);
    for chunk in params.chunks_exact_mut(3) {
        chunk[0] = chunk[0].clamp(min.x, max.x);
        chunk[1] = chunk[1].clamp(min.y, max.y);
        chunk[2] = chunk[2].clamp(r_min, diag);
    }
}

/// Places partition centers at equidistant arc-length positions along the
/// polygon perimeter (measured CCW from vertex 0) and sets each radius so
/// the field circle area matches the expected sub-polygon area.
pub fn init_partitions(
    p: &Polygon,
    grid: Arc<Grid>,
    weights: &[f64],
) -> Result<PartitionSet, OptimizeError> {
    let n = weights.len();
    let total_area = p.area();
    let perimeter = p.perimeter();
    let descriptors = (0..n)
        .map(|k| {
            let center = point_at_arc_length(p, k as f64 * perimeter / n as f64);
            let radius = (weights[k] * total_area / std::f64::consts::PI).sqrt();
            (center, radius, weights[k])
        })
        .collect();
    Ok(PartitionSet::new(grid, descriptors)?)
}

fn point_at_arc_length(p: &Polygon, mut arc: f64) -> Point {
    let verts = p.vertices();
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let len = a.dist(b);
        if arc <= len {
            let t = if len > 0.0 { arc / len } else { 0.0 };
            return Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        }
        arc -= len;
    }
    verts[0]
}

/// Linear dampening factor for iteration `iter` (1-based).
pub(crate) fn pfh_xi(iter: usize, max_iter: usize) -> f64 {
    (max_iter as f64 - iter as f64) / (2.0 * max_iter as f64)
}

/// Relative-mass-error step for the radius update.
pub(crate) fn pfh_delta(mass: f64, target: f64, xi: f64) -> f64 {
    xi * (mass / target - 1.0)
}

/// The iterative heuristic: dampened radius updates from the mass errors,
/// reassignment, and centroid recentering, until every partition is within
/// tolerance or the iteration cap. Returns the best-objective iterate seen.
pub fn pfh(mut ps: PartitionSet, cfg: &OptimizerConfig) -> PartitionSet {
    let total = ps.total_mass();
    let max_iter = cfg.max_iter_pfh.max(1);
    ps.assign_cells();
    let mut best = ps.clone();
    let mut best_obj = ps
        .objective_with_metric(cfg.pi_c, cfg.tau, cfg.shape_metric)
        .total();
    let mut iter = 1usize;
    loop {
        let xi = pfh_xi(iter, max_iter);
        for i in 0..ps.n() {
            let target = ps.partitions[i].target_weight * total;
            let delta = pfh_delta(ps.mass(i), target, xi);
            ps.partitions[i].radius /= delta + 1.0;
        }
        ps.assign_cells();
        for i in 0..ps.n() {
            let cells = ps.partitions[i].cells.clone();
            if cells.is_empty() {
                continue;
            }
            let n = cells.len() as f64;
            let cx = cells.iter().map(|&c| ps.grid().cells()[c].center.x).sum::<f64>() / n;
            let cy = cells.iter().map(|&c| ps.grid().cells()[c].center.y).sum::<f64>() / n;
            ps.partitions[i].center = Point::new(cx, cy);
        }
        let obj = ps
            .objective_with_metric(cfg.pi_c, cfg.tau, cfg.shape_metric)
            .total();
        if obj < best_obj {
            best_obj = obj;
            best = ps.clone();
        }
        let within_tol = (0..ps.n()).all(|i| {
            let target = ps.partitions[i].target_weight * total;
            (ps.mass(i) - target).abs() <= cfg.tau * target
        });
        iter += 1;
        if iter >= max_iter || within_tol {
            break;
        }
    }
    best
}

/// CMA-ES internals configuration (used directly by tests; the pipeline
/// derives one from `OptimizerConfig`).
#[derive(Debug, Clone)]
pub struct CmaConfig {
    pub sigma0: f64,
    pub population: Option<usize>,
    pub budget_evals: usize,
    pub seed: u64,
}

/// Minimizes `f` with the (mu/mu_w, lambda) covariance-matrix-adaptation
/// evolution strategy. Deterministic for a fixed seed; returns the best
/// evaluated point and its objective value.
pub fn cmaes_minimize(
    initial: &[f64],
    mut f: impl FnMut(&[f64]) -> f64,
    cfg: &CmaConfig,
) -> (Vec<f64>, f64) {
    let dim = initial.len();
    let mut best_x = initial.to_vec();
    let mut best_f = f(initial);
    if cfg.budget_evals == 0 || dim == 0 {
        return (best_x, best_f);
    }
    let lambda = cfg
        .population
        .unwrap_or(4 + (3.0 * (dim as f64).ln()).floor() as usize)
        .max(4);
    let mu = lambda / 2;
    let mut weights: Vec<f64> = (0..mu)
        .map(|i| ((mu as f64 + 0.5).ln() - ((i + 1) as f64).ln()).max(0.0))
        .collect();
    let wsum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= wsum;
    }
    let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
    let n = dim as f64;
    let c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
    let d_sigma = 1.0 + 2.0 * ((mu_eff - 1.0) / (n + 1.0)).sqrt().max(0.0) + c_sigma;
    let c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
    let c_1 = 2.0 / ((n + 1.3).powi(2) + mu_eff);
    let c_mu = (1.0 - c_1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0).powi(2) + mu_eff));
    let chi_n = n.sqrt() * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut mean = DVector::from_column_slice(initial);
    let mut sigma = cfg.sigma0;
    let mut cov: DMatrix<f64> = DMatrix::identity(dim, dim);
    let mut p_sigma = DVector::zeros(dim);
    let mut p_c = DVector::zeros(dim);
    let mut evals = 1usize; // the initial point
    let mut gen = 0usize;

    while evals < cfg.budget_evals {
        gen += 1;
        // Eigendecomposition of the covariance for sampling and the
        // sigma-path whitening transform.
        let eig = cov.clone().symmetric_eigen();
        let sqrt_d: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&v| v.max(1e-30).sqrt())
            .collect();
        let b = eig.eigenvectors;
        let mut samples: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            if evals >= cfg.budget_evals {
                break;
            }
            let z = DVector::from_iterator(
                dim,
                (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)),
            );
            let y = &b * DVector::from_iterator(dim, z.iter().zip(&sqrt_d).map(|(zi, d)| zi * d));
            let x = &mean + sigma * &y;
            let fx = f(x.as_slice());
            evals += 1;
            if fx < best_f {
                best_f = fx;
                best_x = x.as_slice().to_vec();
            }
            samples.push((fx, x, y));
        }
        if samples.len() < 2 {
            break;
        }
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let mu_used = mu.min(samples.len());
        let mut y_w = DVector::zeros(dim);
        for (i, (_, _, y)) in samples.iter().take(mu_used).enumerate() {
            y_w += weights[i] * y;
        }
        mean = &mean + sigma * &y_w;
        // Whitened evolution path for step-size control.
        let c_inv_sqrt_y = {
            let bt_y = b.transpose() * &y_w;
            &b * DVector::from_iterator(dim, bt_y.iter().zip(&sqrt_d).map(|(v, d)| v / d))
        };
        p_sigma = (1.0 - c_sigma) * &p_sigma
            + (c_sigma * (2.0 - c_sigma) * mu_eff).sqrt() * &c_inv_sqrt_y;
        let ps_norm = p_sigma.norm();
        let expected_decay =
            (1.0 - (1.0 - c_sigma).powi(2 * gen as i32)).sqrt();
        let h_sigma = if ps_norm / expected_decay < (1.4 + 2.0 / (n + 1.0)) * chi_n {
            1.0
        } else {
            0.0
        };
        p_c = (1.0 - c_c) * &p_c + h_sigma * (c_c * (2.0 - c_c) * mu_eff).sqrt() * &y_w;
        let mut rank_mu = DMatrix::zeros(dim, dim);
        for (i, (_, _, y)) in samples.iter().take(mu_used).enumerate() {
            rank_mu += weights[i] * (y * y.transpose());
        }
        let delta_h = (1.0 - h_sigma) * c_c * (2.0 - c_c);
        cov = (1.0 - c_1 - c_mu) * &cov
            + c_1 * (&p_c * p_c.transpose() + delta_h * &cov)
            + c_mu * rank_mu;
        sigma *= ((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0)).exp();
        if !sigma.is_finite() || sigma < 1e-300 {
            break;
        }
    }
    (best_x, best_f)
}

/// Uniform sampling of centers in the bounding box and radii in
/// [r_min, diagonal]; returns the best of the samples and the initial point.
pub fn random_search(
    initial: &[f64],
    mut f: impl FnMut(&[f64]) -> f64,
    p: &Polygon,
    r_min: f64,
    budget: usize,
    seed: u64,
) -> (Vec<f64>, f64) {
    let mut best_x = initial.to_vec();
    let mut best_f = f(initial);
    let (min, max) = p.bounding_box();
    let diag = min.dist(max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = initial.len() / 3;
    for _ in 0..budget {
        let mut x = Vec::with_capacity(3 * n);
        for _ in 0..n {
            x.push(rng.gen_range(min.x..=max.x));
            x.push(rng.gen_range(min.y..=max.y));
            x.push(rng.gen_range(r_min..=diag));
        }
        let fx = f(&x);
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
    }
    (best_x, best_f)
}

/// Runs the selected algorithms in order (the heuristic first when present,
/// seeding the others) and leaves the partition set assigned under the best
/// parameters found. Returns the set and the objective trace per stage.
pub fn run_pipeline(
    p: &Polygon,
    grid: Arc<Grid>,
    weights: &[f64],
    cfg: &OptimizerConfig,
) -> Result<(PartitionSet, Vec<f64>), OptimizeError> {
    if cfg.algorithms.is_empty() {
        return Err(OptimizeError::NoAlgorithm);
    }
    let r_min = grid.cell_size() / 2.0;
    let mut ps = init_partitions(p, grid, weights)?;
    ps.assign_cells();
    let mut trace = Vec::new();

    let mut algorithms = cfg.algorithms.clone();
    if let Some(pos) = algorithms.iter().position(|a| *a == Algorithm::Pfh) {
        algorithms.remove(pos);
        algorithms.insert(0, Algorithm::Pfh);
    }

    let mut best_params = encode(&ps);
    let eval_params = |ps: &mut PartitionSet, params: &[f64]| -> f64 {
        let mut clamped = params.to_vec();
        clamp_params(&mut clamped, p, r_min);
        decode(ps, &clamped);
        ps.assign_cells();
        ps.objective_with_metric(cfg.pi_c, cfg.tau, cfg.shape_metric)
            .total()
    };
    let mut best_obj = eval_params(&mut ps, &best_params);

    for alg in &algorithms {
        match alg {
            Algorithm::Pfh => {
                decode(&mut ps, &best_params);
                let out = pfh(ps.clone(), cfg);
                let params = encode(&out);
                let obj = eval_params(&mut ps, &params);
                if obj <= best_obj {
                    best_obj = obj;
                    best_params = params;
                }
            }
            Algorithm::CmaEs => {
                let cma_cfg = CmaConfig {
                    sigma0: cfg.sigma0_frac * p.bounding_diagonal(),
                    population: cfg.population,
                    budget_evals: cfg.budget_evals,
                    seed: cfg.seed,
                };
                let mut scratch = ps.clone();
                let (params, _) = cmaes_minimize(
                    &best_params,
                    |x| eval_params(&mut scratch, x),
                    &cma_cfg,
                );
                let obj = eval_params(&mut ps, &params);
                if obj <= best_obj {
                    best_obj = obj;
                    best_params = params;
                }
            }
            Algorithm::RandomSearch => {
                let mut scratch = ps.clone();
                let (params, _) = random_search(
                    &best_params,
                    |x| eval_params(&mut scratch, x),
                    p,
                    r_min,
                    cfg.budget_evals,
                    cfg.seed,
                );
                let obj = eval_params(&mut ps, &params);
                if obj <= best_obj {
                    best_obj = obj;
                    best_params = params;
                }
            }
        }
        trace.push(best_obj);
    }
    // Leave the set assigned under the best parameters.
    let final_obj = eval_params(&mut ps, &best_params);
    debug_assert!(final_obj <= best_obj + 1e-12);
    Ok((ps, trace))
}
