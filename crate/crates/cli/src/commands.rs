//! Command implementations shared by the binary and the integration tests.

use crate::io::{self, IoError};
use crate::svg::{render, RenderOptions};
use areadecomp::corpus::generate_polygon;
use areadecomp::optimize::Algorithm;
use areadecomp::{decompose, DecomposeConfig, DecompositionResult, Polygon, WeightRaster};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Exit codes: 1 unreadable input, 2 invalid polygon or weights,
/// 3 tolerance not met (outputs are still written).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Unreadable(String),
    #[error("{0}")]
    Invalid(String),
    #[error("area tolerance not met: {0}")]
    TauNotMet(String),
    #[error("cannot write output: {0}")]
    WriteFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unreadable(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::TauNotMet(_) => 3,
            CliError::WriteFailed(_) => 1,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Unreadable(m) => CliError::Unreadable(m),
            IoError::InvalidPolygon(m) => CliError::Invalid(m),
        }
    }
}

/// One decomposition run as specified on the command line.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub input: PathBuf,
    pub weights: Vec<f64>,
    pub tau: f64,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub pi_c: f64,
    pub raster: Option<PathBuf>,
    pub skip_simplify: bool,
    pub out: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn parse_algorithms(text: &str) -> Result<Vec<Algorithm>, CliError> {
    let mut algs = Vec::new();
    for name in text.split(',') {
        match name.trim().to_ascii_lowercase().as_str() {
            "pfh" => algs.push(Algorithm::Pfh),
            "cmaes" | "cma-es" => algs.push(Algorithm::CmaEs),
            "random" | "random-search" => algs.push(Algorithm::RandomSearch),
            other => {
                return Err(CliError::Invalid(format!(
                    "unknown optimizer '{other}' (expected pfh, cmaes, or random)"
                )))
            }
        }
    }
    Ok(algs)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::WriteFailed(format!("{}: {e}", path.display())))
}

fn run_decompose(
    polygon: &Polygon,
    spec: &RunSpec,
) -> Result<DecompositionResult, CliError> {
    let mut cfg = DecomposeConfig::default();
    cfg.optimizer.tau = spec.tau;
    cfg.optimizer.seed = spec.seed;
    cfg.optimizer.pi_c = spec.pi_c;
    cfg.optimizer.algorithms = spec.algorithms.clone();
    cfg.skip_simplify = spec.skip_simplify;
    if let Some(raster_path) = &spec.raster {
        let text = std::fs::read_to_string(raster_path)
            .map_err(|e| CliError::Unreadable(format!("{}: {e}", raster_path.display())))?;
        let raster =
            WeightRaster::parse(&text).map_err(|e| CliError::Unreadable(e.to_string()))?;
        cfg.raster = Some(raster);
    }
    decompose(polygon, &spec.weights, &cfg).map_err(|e| CliError::Invalid(e.to_string()))
}

/// Decompose an input polygon and write GeoJSON / stats / SVG outputs.
/// On an unmet tolerance the outputs are written before the error returns.
pub fn cmd_decompose(spec: &RunSpec) -> Result<DecompositionResult, CliError> {
    let polygon = io::read_polygon_file(&spec.input)?;
    let res = run_decompose(&polygon, spec)?;

    if let Some(out) = &spec.out {
        let fc = io::result_to_geojson(&res);
        write_file(out, &format!("{:#}\n", fc))?;
    }
    if let Some(stats) = &spec.stats {
        write_file(stats, &io::result_to_stats(&res))?;
    }
    if let Some(svg_path) = &spec.svg {
        let opts = RenderOptions::default();
        write_file(svg_path, &render(&polygon, &res, &opts))?;
    }
    if !res.tau_met {
        let worst = res
            .reports
            .iter()
            .map(|r| r.area_error.abs())
            .fold(0.0f64, f64::max);
        return Err(CliError::TauNotMet(format!(
            "worst relative error {worst:.6} exceeds tau {}",
            spec.tau
        )));
    }
    Ok(res)
}

/// Write `count` random simple polygons as WKT, one file per polygon.
/// Identical seeds produce byte-identical files.
pub fn cmd_gen_corpus(
    out_dir: &Path,
    count: usize,
    vertex_range: (usize, usize),
    seed: u64,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::WriteFailed(format!("{}: {e}", out_dir.display())))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut paths = Vec::with_capacity(count);
    for i in 0..count {
        let poly = generate_polygon(&mut rng, vertex_range);
        let path = out_dir.join(format!("poly_{i:04}.wkt"));
        write_file(&path, &format!("{}\n", io::polygon_to_wkt(&poly)))?;
        paths.push(path);
    }
    Ok(paths)
}

/// One benchmark case: a fixed weight vector applied to every instance.
struct BenchCase {
    name: &'static str,
    weights: Vec<f64>,
}

fn normalize(ws: &[f64]) -> Vec<f64> {
    let sum: f64 = ws.iter().sum();
    ws.iter().map(|w| w / sum).collect()
}

/// The five standard weight configurations. Cases with printed weight
/// tables that do not sum to exactly 1 are normalized; case 5 draws a
/// random number of partitions in [2, 9] with flat-Dirichlet weights.
fn bench_cases(rng: &mut ChaCha8Rng) -> Vec<BenchCase> {
    let mut cases = vec![
        BenchCase { name: "case1", weights: normalize(&[0.5, 0.5]) },
        BenchCase { name: "case2", weights: normalize(&[0.166, 0.333, 0.5]) },
        BenchCase { name: "case3", weights: normalize(&[0.1, 0.2, 0.4, 0.5]) },
        BenchCase { name: "case4", weights: normalize(&[0.2; 5]) },
    ];
    for rep in 0..2 {
        let n = rng.gen_range(2..=9);
        let gamma = rand_distr::Gamma::new(1.0f64, 1.0).unwrap();
        let raw: Vec<f64> = (0..n).map(|_| rng.sample(gamma)).collect();
        cases.push(BenchCase {
            name: if rep == 0 { "case5a" } else { "case5b" },
            weights: normalize(&raw),
        });
    }
    cases
}

/// Run the weight configurations over a seeded random corpus and report
/// mean compactness, error statistics, and tolerance success rates.
pub fn cmd_bench(
    instances: usize,
    tau: f64,
    seed: u64,
    json_out: Option<&Path>,
) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = bench_cases(&mut rng);
    let polygons: Vec<Polygon> = (0..instances)
        .map(|_| generate_polygon(&mut rng, (6, 14)))
        .collect();

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<8} {:>4} {:>6} {:>12} {:>12} {:>10}",
        "case", "n", "ok", "mean_score", "mean_|err|", "failures"
    );
    let mut report = Vec::new();
    for case in &cases {
        let mut scores = Vec::new();
        let mut errs = Vec::new();
        let mut ok = 0usize;
        let mut failures = 0usize;
        for (i, p) in polygons.iter().enumerate() {
            let mut cfg = DecomposeConfig::default();
            cfg.optimizer.tau = tau;
            cfg.optimizer.seed = seed ^ (i as u64);
            match decompose(p, &case.weights, &cfg) {
                Ok(res) => {
                    if res.tau_met {
                        ok += 1;
                    }
                    for r in &res.reports {
                        scores.push(r.scores.collective);
                        errs.push(r.area_error.abs());
                    }
                }
                Err(_) => failures += 1,
            }
        }
        let mean = |v: &[f64]| {
            if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 }
        };
        let _ = writeln!(
            table,
            "{:<8} {:>4} {:>6} {:>12.4} {:>12.4} {:>10}",
            case.name,
            case.weights.len(),
            format!("{ok}/{instances}"),
            mean(&scores),
            mean(&errs),
            failures
        );
        report.push(json!({
            "case": case.name,
            "weights": case.weights,
            "tau_met": ok,
            "instances": instances,
            "mean_collective_score": mean(&scores),
            "mean_abs_error": mean(&errs),
            "failures": failures,
        }));
    }
    if let Some(path) = json_out {
        let doc = json!({ "tau": tau, "seed": seed, "cases": report });
        write_file(path, &format!("{:#}\n", doc))?;
    }
    Ok(table)
}

/// Re-run a decomposition and write only the SVG rendering.
pub fn cmd_render(spec: &RunSpec, opts: &RenderOptions) -> Result<(), CliError> {
    let polygon = io::read_polygon_file(&spec.input)?;
    let res = run_decompose(&polygon, spec)?;
    let svg_path = spec
        .svg
        .clone()
        .ok_or_else(|| CliError::Invalid("render requires an --svg output path".into()))?;
    write_file(&svg_path, &render(&polygon, &res, opts))
}
