use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use satmist::engine::{PositionSource, Simulation};
use satmist::orbital::{self, write_trace, PositionTrace};
use satmist::sweep::{self, Scaling, SweepSpec};
use satmist::{metrics, parse_config, Error, Layer, PolicyId, SimulationConfig};

#[derive(Parser)]
#[command(name = "satmist", version, about = "Satellite mist/edge/cloud task orchestration simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (`section.key=value` lines)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of mist satellites
    #[arg(long)]
    satellites: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single simulation and print its metrics as CSV
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        policy: Option<String>,
        /// Position trace to use instead of the orbit propagator
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Directory for results.csv and metadata.txt
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the satellite-count × policy × seed grid
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Run only this policy
        #[arg(long)]
        policy: Option<String>,
        /// Comma-separated mist satellite counts (default 100,200,…,1000)
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<usize>>,
        /// Comma-separated seeds (overrides --seed)
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Scale edge and cloud counts with the mist count
        #[arg(long)]
        proportional: bool,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Write generated satellite positions in the trace format
    TraceExport {
        #[command(flatten)]
        common: Common,
        /// Sampling step in seconds (default: the tick interval)
        #[arg(long)]
        step: Option<f64>,
        /// Output directory; the trace goes to trace.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(common: &Common) -> Result<SimulationConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => {
            let f = File::open(path)
                .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
            parse_config(BufReader::new(f))?
        }
        None => SimulationConfig::default(),
    };
    if let Some(n) = common.satellites {
        cfg.constellation.shells[Layer::Mist].count = n;
    }
    if let Some(seed) = common.seed {
        cfg.rng_seed = seed;
        cfg.constellation.rng_seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_single(
    common: &Common,
    policy: Option<&str>,
    trace: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Error> {
    let mut cfg = load_config(common)?;
    if let Some(p) = policy {
        cfg.policy = p.parse()?;
    }
    let mut sim = Simulation::new(cfg)?;
    if let Some(path) = trace {
        let f = File::open(path)
            .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
        let tr = PositionTrace::load(BufReader::new(f))?;
        sim = sim.with_positions(PositionSource::Trace(tr))?;
    }
    let record = sim.run()?.record;
    let records = [record];
    metrics::emit_csv(io::stdout().lock(), &records)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let f = File::create(dir.join(sweep::RESULTS_FILE))?;
        metrics::emit_csv(BufWriter::new(f), &records)?;
        fs::write(dir.join(sweep::METADATA_FILE), sweep::METADATA)?;
    }
    Ok(())
}

fn trace_export(common: &Common, step: Option<f64>, out: Option<&Path>) -> Result<(), Error> {
    let cfg = load_config(common)?;
    let step = step.unwrap_or(cfg.tick_interval_s);
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config("trace step must be > 0".into()));
    }
    let elements = orbital::build_constellation(&cfg.constellation)?;
    let samples = (cfg.sim_duration_s / step).ceil() as usize;
    let times: Vec<f64> = (0..=samples)
        .map(|k| (k as f64 * step).min(cfg.sim_duration_s))
        .collect();
    let rows = elements.iter().enumerate().flat_map(|(id, (_, e))| {
        let frame = orbital::OrbitFrame::new(e);
        let mut last = -1.0;
        times
            .iter()
            .filter(move |&&t| {
                let keep = t > last;
                last = t;
                keep
            })
            .map(move |&t| (id.to_string(), t, frame.position_at(t)))
    });
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let f = File::create(dir.join("trace.csv"))?;
            let mut w = BufWriter::new(f);
            write_trace(&mut w, rows)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_trace(&mut w, rows)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_grid(
    common: &Common,
    policy: Option<&str>,
    counts: Option<Vec<usize>>,
    seeds: Option<Vec<u64>>,
    proportional: bool,
    out: &Path,
    parallel: usize,
) -> Result<(), Error> {
    let base = load_config(common)?;
    let mut spec = SweepSpec {
        output_dir: Some(out.to_path_buf()),
        parallel,
        scaling: if proportional {
            Scaling::Proportional
        } else {
            Scaling::MistOnly
        },
        seeds: vec![base.rng_seed],
        ..SweepSpec::default()
    };
    if let Some(c) = counts {
        spec.satellite_counts = c;
    } else if let Some(n) = common.satellites {
        spec.satellite_counts = vec![n];
    }
    if let Some(s) = seeds {
        spec.seeds = s;
    }
    if let Some(p) = policy {
        spec.policies = vec![p.parse::<PolicyId>()?];
    }
    let records = sweep::run_sweep(&spec, &base)?;
    eprintln!(
        "wrote {} records to {}",
        records.len(),
        out.join(sweep::RESULTS_FILE).display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run {
            common,
            policy,
            trace,
            out,
        } => run_single(&common, policy.as_deref(), trace.as_deref(), out.as_deref()),
        Command::Sweep {
            common,
            policy,
            counts,
            seeds,
            proportional,
            out,
            parallel,
        } => run_grid(&common, policy.as_deref(), counts, seeds, proportional, &out, parallel),
        Command::TraceExport { common, step, out } => trace_export(&common, step, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
