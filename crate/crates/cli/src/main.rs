use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cubelab_cli::cache::Cache;
use cubelab_cli::spec::schedule;
use cubelab_cli::{run, CliError, ExperimentSpec, Format, Kind, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "cubelab", version, about = "Counts rational and quadratic points of bounded height and checks them against predicted constants")]
struct Args {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Field discriminant; 1 for the rationals.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    field_disc: i64,
    /// Cutoff, or the first cutoff of a schedule.
    #[arg(long, default_value_t = 100.0)]
    b: f64,
    /// Last cutoff of the schedule.
    #[arg(long)]
    b_max: Option<f64>,
    /// Number of geometrically spaced cutoffs; without it the schedule is every integer in [b, b-max].
    #[arg(long)]
    steps: Option<usize>,
    /// Largest relative error a row may show and still pass.
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    #[arg(long)]
    workers: Option<usize>,
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, env = "CUBELAB_CACHE_DIR", default_value = ".cubelab-cache")]
    cache_dir: PathBuf,
    #[arg(long)]
    no_cache: bool,
    /// Seed for randomly chosen inputs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn execute(args: Args) -> Result<bool, CliError> {
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let spec = ExperimentSpec {
        name: format!("{}-d{}", args.kind, args.field_disc),
        kind: args.kind,
        field_disc: args.field_disc,
        b_schedule: schedule(args.b, args.b_max, args.steps)?,
        tolerance: args.tol,
        workers,
        output_path: args.out.clone(),
        format: args.format,
        seed: args.seed,
    };
    let cache = (!args.no_cache).then(|| Cache::new(&args.cache_dir));
    let mut log = |line: String| eprintln!("{line}");
    let report = run(&spec, RunOptions { cache: cache.as_ref(), log: &mut log })?;
    match &spec.output_path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(spec.format, &mut w)?;
            w.flush()?;
        }
        None => report.write(spec.format, io::stdout().lock())?,
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some rows failed their tolerance");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
