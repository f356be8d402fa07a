//! `denjoy`: metric computations and hyperbolicity diagnostics for Denjoy
//! domains from the command line.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use denjoy::density::MetricKind;
use denjoy::hyperbolicity::{Subsequence, TailAssumption};

use output::Failure;

#[derive(Parser, Debug)]
#[command(name = "denjoy", version, about = "Metrics and hyperbolicity diagnostics on Denjoy domains")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// qh, hyp-lower or hyp-upper.
    #[arg(long, global = true, default_value = "qh", value_parser = parse_metric)]
    pub metric: MetricKind,
    /// Grid refinement depth.
    #[arg(long, global = true, default_value_t = 6)]
    pub depth: u32,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = denjoy::density::DEFAULT_TOL)]
    pub tol: f64,
    /// Generator units to materialize, overriding the spec.
    #[arg(long, global = true)]
    pub truncate: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a domain spec and print its gaps.
    Validate { spec: PathBuf },
    /// Sample δ, β and the densities on a grid.
    Density {
        spec: PathBuf,
        /// x0,x1,y0,y1
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// nx,ny
        #[arg(long, default_value = "64,64")]
        grid: String,
    },
    /// Solve a geodesic between two points or from gap 0 to a gap.
    Geodesic {
        spec: PathBuf,
        #[arg(long, conflicts_with = "points", required_unless_present = "points")]
        gap: Option<usize>,
        /// Two points re,im re,im.
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        points: Option<Vec<String>>,
    },
    /// Fundamental-geodesic scan of the distances to the real axis.
    Scan {
        spec: PathBuf,
        #[arg(long)]
        max_n: usize,
        /// geometric or linear.
        #[arg(long, default_value = "geometric", value_parser = parse_subseq)]
        subseq: Subsequence,
    },
    /// Decide hyperbolicity from the gap structure.
    Classify {
        spec: PathBuf,
        /// none, lim-zero or liminf-positive.
        #[arg(long, default_value = "none", value_parser = parse_tail)]
        tail_assumption: TailAssumption,
    },
    /// Inner-uniformity probe points for gap n.
    Probe {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Width of the bigon formed by a fundamental geodesic and its mirror image.
    Thinness {
        spec: PathBuf,
        #[arg(long)]
        gap: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

fn parse_metric(s: &str) -> Result<MetricKind, String> {
    s.parse().map_err(|e: denjoy::Error| e.to_string())
}

fn parse_subseq(s: &str) -> Result<Subsequence, String> {
    s.parse().map_err(|e: denjoy::Error| e.to_string())
}

fn parse_tail(s: &str) -> Result<TailAssumption, String> {
    s.parse().map_err(|e: denjoy::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("DENJOY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization can only fail if something already built the pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let g = &cli.global;
    let result = match &cli.command {
        Command::Validate { spec } => commands::validate(g, spec),
        Command::Density { spec, window, grid } => commands::density(g, spec, window, grid),
        Command::Geodesic { spec, gap, points } => commands::geodesic(g, spec, *gap, points.as_deref()),
        Command::Scan { spec, max_n, subseq } => commands::scan(g, spec, *max_n, *subseq),
        Command::Classify {
            spec,
            tail_assumption,
        } => commands::classify(g, spec, *tail_assumption),
        Command::Probe { spec, n } => commands::probe(g, spec, *n),
        Command::Thinness { spec, gap, samples } => commands::thinness(g, spec, *gap, *samples),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, name, message }) => {
            let body = serde_json::json!({ "error": name, "message": message });
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}
