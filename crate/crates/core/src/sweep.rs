//! Grid runner over satellite count × policy × seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::SimulationConfig;
use crate::engine;
use crate::error::{Error, Result};
use crate::layer::Layer;
use crate::metrics::{self, fmt_sig6, MetricsRecord};
use crate::orchestrate::PolicyId;

/// How the swept satellite count maps onto the constellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Only the mist layer changes; edge and cloud counts stay fixed.
    MistOnly,
    /// Edge and cloud counts scale by `count / base mist count` (rounded, ≥ 1).
    Proportional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub satellite_counts: Vec<usize>,
    pub policies: Vec<PolicyId>,
    pub seeds: Vec<u64>,
    pub scaling: Scaling,
    pub output_dir: Option<PathBuf>,
    /// Concurrent runs; 1 runs sequentially.
    pub parallel: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            satellite_counts: (1..=10).map(|k| k * 100).collect(),
            policies: PolicyId::ALL.to_vec(),
            seeds: vec![1],
            scaling: Scaling::MistOnly,
            output_dir: None,
            parallel: 1,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.satellite_counts.is_empty() {
            return Err(Error::Config("sweep needs at least one satellite count".into()));
        }
        if self.satellite_counts[0] == 0
            || self.satellite_counts.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Config(
                "satellite counts must be positive and strictly increasing".into(),
            ));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("sweep needs at least one policy".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("sweep needs at least one seed".into()));
        }
        if self.parallel == 0 {
            return Err(Error::Config("parallelism must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Every `(count, policy, seed)` point with its derived configuration,
    /// in output order.
    pub fn points(&self, base: &SimulationConfig) -> Vec<SimulationConfig> {
        let base_mist = base.constellation.shells[Layer::Mist].count.max(1) as f64;
        let mut out = Vec::new();
        for &count in &self.satellite_counts {
            for &policy in &self.policies {
                for &seed in &self.seeds {
                    let mut cfg = base.clone();
                    cfg.policy = policy;
                    cfg.rng_seed = seed;
                    cfg.constellation.rng_seed = seed;
                    let shells = &mut cfg.constellation.shells;
                    if self.scaling == Scaling::Proportional {
                        let f = count as f64 / base_mist;
                        for l in [Layer::EdgeDc, Layer::Cloud] {
                            let n = shells[l].count;
                            if n > 0 {
                                shells[l].count = ((n as f64 * f).round() as usize).max(1);
                            }
                        }
                    }
                    shells[Layer::Mist].count = count;
                    out.push(cfg);
                }
            }
        }
        out
    }
}

/// Runs every sweep point. Results come back in `points` order regardless of
/// how runs were scheduled.
pub fn run_sweep(spec: &SweepSpec, base: &SimulationConfig) -> Result<Vec<MetricsRecord>> {
    spec.validate()?;
    let points = spec.points(base);
    for p in &points {
        p.validate()?;
    }
    if let Some(dir) = &spec.output_dir {
        fs::create_dir_all(dir)?;
        ensure_writable(dir)?;
    }

    let records: Vec<MetricsRecord> = if spec.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.parallel)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| points.par_iter().map(engine::run).collect::<Result<Vec<_>>>())?
    } else {
        points.iter().map(engine::run).collect::<Result<Vec<_>>>()?
    };

    if let Some(dir) = &spec.output_dir {
        write_outputs(dir, &records)?;
    }
    Ok(records)
}

fn ensure_writable(dir: &Path) -> Result<()> {
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)?;
    Ok(())
}

pub const RESULTS_FILE: &str = "results.csv";
pub const METADATA_FILE: &str = "metadata.txt";

/// Conventions behind the numbers in `results.csv`.
pub const METADATA: &str = "\
satellites: mist satellite count (edge and cloud counts come from the configuration)
avg_e2e_s: mean created-to-result-returned time over succeeded tasks only
success_rate_pct: succeeded / (succeeded + failed); unfinished tasks are excluded
total_energy_j: radio energy of satellite-to-satellite transfers only (no compute or idle energy)
total_energy_db: 10*log10(total_energy_j), unit dB(J); -inf when no transfer took place
avg_vm_cpu_pct: busy time over the run duration, averaged over all VMs including idle ones
";

type Column = fn(&MetricsRecord) -> Option<f64>;

/// Plot-data files: `(file name, column extractor)`.
pub const PLOT_FILES: [(&str, Column); 4] = [
    ("plot_vm_cpu_pct.csv", |r| Some(r.avg_vm_cpu_pct)),
    ("plot_avg_e2e_s.csv", |r| r.avg_e2e_delay_s),
    ("plot_energy_db.csv", |r| Some(r.total_energy_db)),
    ("plot_success_rate_pct.csv", |r| r.success_rate_pct),
];

/// Writes `results.csv`, `metadata.txt` and one plot-data file per metric (rows: satellite
/// count; columns: policies, averaged over seeds that reported a value).
pub fn write_outputs(dir: &Path, records: &[MetricsRecord]) -> Result<()> {
    let mut buf = Vec::new();
    metrics::emit_csv(&mut buf, records)?;
    fs::write(dir.join(RESULTS_FILE), buf)?;
    fs::write(dir.join(METADATA_FILE), METADATA)?;

    let mut policies: Vec<PolicyId> = Vec::new();
    for r in records {
        if !policies.contains(&r.policy) {
            policies.push(r.policy);
        }
    }
    for (name, extract) in PLOT_FILES {
        fs::write(dir.join(name), plot_table(records, &policies, extract))?;
    }
    Ok(())
}

fn plot_table(
    records: &[MetricsRecord],
    policies: &[PolicyId],
    extract: fn(&MetricsRecord) -> Option<f64>,
) -> String {
    let mut cells: BTreeMap<(usize, PolicyId), (f64, usize)> = BTreeMap::new();
    let mut counts: Vec<usize> = Vec::new();
    for r in records {
        if !counts.contains(&r.satellite_count) {
            counts.push(r.satellite_count);
        }
        if let Some(v) = extract(r) {
            let e = cells.entry((r.satellite_count, r.policy)).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    let mut out = String::from("satellites");
    for p in policies {
        out.push(',');
        out.push_str(p.name());
    }
    out.push('\n');
    for c in counts {
        out.push_str(&c.to_string());
        for p in policies {
            out.push(',');
            if let Some((sum, n)) = cells.get(&(c, *p)) {
                out.push_str(&fmt_sig6(sum / *n as f64));
            }
        }
        out.push('\n');
    }
    out
}
