use areadecomp_cli::commands::{
    cmd_bench, cmd_decompose, cmd_gen_corpus, cmd_render, parse_algorithms, CliError, RunSpec,
};
use areadecomp_cli::svg::RenderOptions;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Partition a simple polygon into connected sub-polygons with prescribed
/// relative areas (or raster masses) while maximizing compactness.
#[derive(Parser)]
#[command(name = "areadecomp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input polygon file (GeoJSON or WKT, detected automatically).
    input: PathBuf,
    /// Comma-separated relative weights; must sum to 1.
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<f64>,
    /// Per-partition relative error tolerance.
    #[arg(long, default_value_t = 0.05)]
    tau: f64,
    /// Comma-separated optimizer chain: pfh, cmaes, random.
    #[arg(long, default_value = "pfh,cmaes")]
    opt: String,
    /// Random seed; identical seeds produce identical outputs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constraint-violation penalty coefficient.
    #[arg(long, default_value_t = 10.0)]
    pi_c: f64,
    /// Optional ESRI ASCII density raster; switches mass accounting from
    /// areas to raster mass.
    #[arg(long)]
    raster: Option<PathBuf>,
    /// Skip border simplification.
    #[arg(long)]
    skip_simplify: bool,
    /// GeoJSON FeatureCollection output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Line-delimited stats output path.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// SVG rendering output path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl DecomposeArgs {
    fn to_spec(&self) -> Result<RunSpec, CliError> {
        Ok(RunSpec {
            input: self.input.clone(),
            weights: self.weights.clone(),
            tau: self.tau,
            algorithms: parse_algorithms(&self.opt)?,
            seed: self.seed,
            pi_c: self.pi_c,
            raster: self.raster.clone(),
            skip_simplify: self.skip_simplify,
            out: self.out.clone(),
            stats: self.stats.clone(),
            svg: self.svg.clone(),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a polygon and write GeoJSON / stats / SVG outputs.
    Decompose(DecomposeArgs),
    /// Generate a corpus of random simple polygons as WKT files.
    GenCorpus {
        /// Output directory (created if missing).
        out_dir: PathBuf,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        min_vertices: usize,
        #[arg(long, default_value_t = 14)]
        max_vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the standard weight configurations over a random corpus.
    Bench {
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[arg(long, default_value_t = 0.05)]
        tau: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional JSON report path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decompose a polygon and write only the SVG rendering.
    Render {
        #[command(flatten)]
        args: DecomposeArgs,
        /// Rendered width in pixels.
        #[arg(long, default_value_t = 800.0)]
        width: f64,
        /// Draw the grid cell overlay.
        #[arg(long)]
        grid: bool,
        /// Hide the filled sub-polygons.
        #[arg(long)]
        no_partitions: bool,
        /// Hide the outer boundary.
        #[arg(long)]
        no_outline: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose(args) => {
            let res = cmd_decompose(&args.to_spec()?)?;
            eprintln!(
                "decomposed into {} partitions (cell size {:.6}, tolerance met: {})",
                res.reports.len(),
                res.cell_size,
                res.tau_met
            );
            Ok(())
        }
        Command::GenCorpus { out_dir, count, min_vertices, max_vertices, seed } => {
            let paths =
                cmd_gen_corpus(&out_dir, count, (min_vertices, max_vertices), seed)?;
            eprintln!("wrote {} polygons to {}", paths.len(), out_dir.display());
            Ok(())
        }
        Command::Bench { instances, tau, seed, json } => {
            let table = cmd_bench(instances, tau, seed, json.as_deref())?;
            print!("{table}");
            Ok(())
        }
        Command::Render { args, width, grid, no_partitions, no_outline } => {
            let opts = RenderOptions {
                width,
                show_grid: grid,
                show_partitions: !no_partitions,
                show_outline: !no_outline,
            };
            cmd_render(&args.to_spec()?, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
