//! Per-run aggregates and their CSV form.
//!
//! Average delay is taken over succeeded tasks only. Energy covers radio
//! transfers only, in joules and as `10·log10(J)` ("dB(J)"); a run with no
//! transfers reports `-inf` dB(J). CPU usage is averaged over every VM,
//! including idle ones.

use std::io::{BufRead, Write};

use crate::engine::{FailureCause, Task, TaskState};
use crate::error::{Error, Result};
use crate::infra::Vm;
use crate::layer::PerLayer;
use crate::netenergy;
use crate::orchestrate::PolicyId;

pub const CSV_HEADER: &str = "policy,satellites,seed,generated,succeeded,failed_deadline,failed_mobility,failed_no_destination,unfinished,success_rate_pct,avg_e2e_s,total_energy_j,total_energy_db,avg_vm_cpu_pct";

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub policy: PolicyId,
    pub satellite_count: usize,
    pub seed: u64,
    pub generated: u64,
    pub succeeded: u64,
    pub failed_deadline: u64,
    pub failed_mobility: u64,
    pub failed_no_destination: u64,
    pub unfinished: u64,
    pub success_rate_pct: Option<f64>,
    pub avg_e2e_delay_s: Option<f64>,
    pub total_energy_j: f64,
    pub total_energy_db: f64,
    pub avg_vm_cpu_pct: f64,
    /// Placed tasks per executing layer. Not part of the CSV.
    pub per_layer_task_counts: PerLayer<u64>,
}

impl MetricsRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn from_run(
        policy: PolicyId,
        satellite_count: usize,
        seed: u64,
        tasks: &[Task],
        vms: &[Vm],
        sim_duration: f64,
        total_energy_j: f64,
        per_layer_task_counts: PerLayer<u64>,
    ) -> Self {
        let mut r = MetricsRecord {
            policy,
            satellite_count,
            seed,
            generated: tasks.len() as u64,
            succeeded: 0,
            failed_deadline: 0,
            failed_mobility: 0,
            failed_no_destination: 0,
            unfinished: 0,
            success_rate_pct: None,
            avg_e2e_delay_s: None,
            total_energy_j,
            total_energy_db: energy_db_or_neg_inf(total_energy_j),
            avg_vm_cpu_pct: avg_cpu(vms, sim_duration),
            per_layer_task_counts,
        };
        for t in tasks {
            match (t.state, t.failure_cause) {
                (TaskState::Succeeded, _) => r.succeeded += 1,
                (TaskState::Failed, FailureCause::Deadline) => r.failed_deadline += 1,
                (TaskState::Failed, FailureCause::Mobility) => r.failed_mobility += 1,
                (TaskState::Failed, _) => r.failed_no_destination += 1,
                _ => r.unfinished += 1,
            }
        }
        r.success_rate_pct = success_rate(&r);
        r.avg_e2e_delay_s = avg_e2e(
            tasks
                .iter()
                .filter(|t| t.state == TaskState::Succeeded)
                .filter_map(Task::e2e_delay),
        );
        r
    }

    pub fn failed(&self) -> u64 {
        self.failed_deadline + self.failed_mobility + self.failed_no_destination
    }

    pub fn finished(&self) -> u64 {
        self.succeeded + self.failed()
    }

    /// `generated = succeeded + failed + unfinished`.
    pub fn is_conserved(&self) -> bool {
        self.generated == self.finished() + self.unfinished
    }
}

fn energy_db_or_neg_inf(joules: f64) -> f64 {
    netenergy::energy_db(joules).unwrap_or(f64::NEG_INFINITY)
}

/// `100·succeeded / finished`, absent when nothing finished.
pub fn success_rate(record: &MetricsRecord) -> Option<f64> {
    let finished = record.finished();
    (finished > 0).then(|| 100.0 * record.succeeded as f64 / finished as f64)
}

pub fn avg_e2e(delays: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = delays
        .into_iter()
        .fold((0.0, 0usize), |(s, n), d| (s + d, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn avg_cpu(vms: &[Vm], sim_duration: f64) -> f64 {
    if vms.is_empty() {
        return 0.0;
    }
    vms.iter().map(|v| v.utilization_pct(sim_duration)).sum::<f64>() / vms.len() as f64
}

/// Formats with 6 significant digits, `%g` style, trailing zeros trimmed.
pub fn fmt_sig6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_sig6).unwrap_or_default()
}

pub fn csv_row(r: &MetricsRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.policy,
        r.satellite_count,
        r.seed,
        r.generated,
        r.succeeded,
        r.failed_deadline,
        r.failed_mobility,
        r.failed_no_destination,
        r.unfinished,
        opt(r.success_rate_pct),
        opt(r.avg_e2e_delay_s),
        fmt_sig6(r.total_energy_j),
        fmt_sig6(r.total_energy_db),
        fmt_sig6(r.avg_vm_cpu_pct),
    )
}

/// Header plus one LF-terminated row per record.
pub fn emit_csv<W: Write>(mut out: W, records: &[MetricsRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", csv_row(r))?;
    }
    Ok(())
}

pub fn to_csv_string(records: &[MetricsRecord]) -> String {
    let mut buf = Vec::new();
    emit_csv(&mut buf, records).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Reads records written by [`emit_csv`]. `per_layer_task_counts` is not
/// stored in the CSV and comes back zeroed.
pub fn parse_csv<R: BufRead>(source: R) -> Result<Vec<MetricsRecord>> {
    let mut lines = source.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h == CSV_HEADER => {}
        Some((_, Err(e))) => return Err(e.into()),
        _ => {
            return Err(Error::Syntax {
                line: 1,
                msg: "missing CSV header".into(),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let err = |msg: &str| Error::Syntax {
            line: lineno,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 14 {
            return Err(err("expected 14 columns"));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|_| err(&format!("bad integer `{s}`")));
        let real = |s: &str| s.parse::<f64>().map_err(|_| err(&format!("bad number `{s}`")));
        let maybe = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                real(s).map(Some)
            }
        };
        out.push(MetricsRecord {
            policy: f[0].parse()?,
            satellite_count: int(f[1])? as usize,
            seed: int(f[2])?,
            generated: int(f[3])?,
            succeeded: int(f[4])?,
            failed_deadline: int(f[5])?,
            failed_mobility: int(f[6])?,
            failed_no_destination: int(f[7])?,
            unfinished: int(f[8])?,
            success_rate_pct: maybe(f[9])?,
            avg_e2e_delay_s: maybe(f[10])?,
            total_energy_j: real(f[11])?,
            total_energy_db: real(f[12])?,
            avg_vm_cpu_pct: real(f[13])?,
            per_layer_task_counts: PerLayer::default(),
        });
    }
    Ok(out)
}
