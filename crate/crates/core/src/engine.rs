//! Discrete-event core.
//!
//! Each task goes through generate → orchestrate → upload → queue/execute →
//! download → succeed/fail. Events are processed in `(time, seq)` order,
//! where `seq` is a counter assigned at scheduling time, so two runs of the
//! same configuration replay the exact same event sequence.
//!
//! Positions are evaluated lazily at event times. The periodic mobility tick
//! only samples load statistics. Range is re-checked once, when execution
//! completes and the result is about to be sent back.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::config::{ArrivalMode, SimulationConfig};
use crate::error::{Error, Result};
use crate::infra::{SatId, SatelliteNode, TaskId, Vm, VmId};
use crate::layer::{Layer, PerLayer};
use crate::metrics::{self, MetricsRecord};
use crate::netenergy;
use crate::orbital::{self, OrbitFrame, PositionTrace, Vec3};
use crate::orchestrate::{self, Candidate, TaskDemand};

const ARRIVAL_STREAM: u64 = 1;
const POLICY_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskState {
    Created,
    Uploading,
    Queued,
    Executing,
    Downloading,
    Succeeded,
    Failed,
}

impl TaskState {
    pub fn is_terminal(self) -> bool {
        matches!(self, TaskState::Succeeded | TaskState::Failed)
    }

    fn rank(self) -> u8 {
        match self {
            TaskState::Created => 0,
            TaskState::Uploading => 1,
            TaskState::Queued => 2,
            TaskState::Executing => 3,
            TaskState::Downloading => 4,
            TaskState::Succeeded | TaskState::Failed => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureCause {
    None,
    Deadline,
    Mobility,
    NoDestination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: TaskId,
    pub origin: SatId,
    pub created_at: f64,
    pub length_mi: f64,
    pub input_bits: f64,
    pub output_bits: f64,
    pub max_latency_s: f64,
    pub state: TaskState,
    pub failure_cause: FailureCause,
    pub assigned_vm: Option<VmId>,
    pub finished_at: Option<f64>,
}

impl Task {
    pub fn e2e_delay(&self) -> Option<f64> {
        self.finished_at.map(|f| f - self.created_at)
    }

    fn advance(&mut self, next: TaskState) {
        debug_assert!(
            !self.state.is_terminal() && next.rank() >= self.state.rank(),
            "illegal transition {:?} -> {:?}",
            self.state,
            next
        );
        self.state = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    TaskGenerated(TaskId),
    UploadComplete(TaskId),
    ExecutionComplete(TaskId),
    DownloadComplete(TaskId),
    MobilityTick,
    SimEnd,
}

impl EventKind {
    fn code(self) -> (u64, u64) {
        match self {
            EventKind::TaskGenerated(t) => (1, t as u64),
            EventKind::UploadComplete(t) => (2, t as u64),
            EventKind::ExecutionComplete(t) => (3, t as u64),
            EventKind::DownloadComplete(t) => (4, t as u64),
            EventKind::MobilityTick => (5, 0),
            EventKind::SimEnd => (6, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub seq: u64,
    pub kind: EventKind,
}

impl Eq for Event {}

impl Ord for Event {
    // Reversed so the max-heap pops the earliest (time, seq) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-queue of events keyed by `(time, seq)`.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Event>,
    next_seq: u64,
}

impl EventQueue {
    pub fn schedule(&mut self, time: f64, kind: EventKind) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Event { time, seq, kind });
        seq
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// Where satellite positions come from.
#[derive(Debug, Clone)]
pub enum PositionSource {
    Orbits(Vec<OrbitFrame>),
    /// Trace keyed by the satellite index rendered as a decimal string.
    Trace(PositionTrace),
    /// Fixed positions, mostly for hand-checkable scenarios.
    Static(Vec<Vec3>),
}

impl PositionSource {
    fn fill(&self, t: f64, ids: &[String], out: &mut Vec<Vec3>) -> Result<()> {
        out.clear();
        match self {
            PositionSource::Orbits(frames) => out.extend(frames.iter().map(|f| f.position_at(t))),
            PositionSource::Static(p) => out.extend_from_slice(p),
            PositionSource::Trace(tr) => {
                for id in ids {
                    out.push(tr.position(id, t)?);
                }
            }
        }
        Ok(())
    }

    fn position(&self, sat: SatId, t: f64, ids: &[String]) -> Result<Vec3> {
        match self {
            PositionSource::Orbits(frames) => Ok(frames[sat].position_at(t)),
            PositionSource::Static(p) => Ok(p[sat]),
            PositionSource::Trace(tr) => tr.position(&ids[sat], t),
        }
    }
}

/// A task to inject instead of the generated Poisson workload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskSpec {
    pub created_at: f64,
    pub origin: SatId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferKind {
    Upload,
    Download,
}

/// One completed radio transfer and the energy charged for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferRecord {
    pub task: TaskId,
    pub kind: TransferKind,
    pub bits: f64,
    pub distance_m: f64,
    pub tx_joules: f64,
    pub rx_joules: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickSample {
    pub time: f64,
    pub tasks_in_flight: usize,
    pub busy_vms: usize,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub record: MetricsRecord,
    pub tasks: Vec<Task>,
    pub vms: Vec<Vm>,
    pub transfers: Vec<TransferRecord>,
    pub ticks: Vec<TickSample>,
    pub events_processed: u64,
    /// FNV-1a digest of the processed `(time, seq, kind)` sequence.
    pub event_digest: u64,
    /// Number of placement decisions that selected a VM.
    pub placements: u64,
}

/// Draws Poisson arrival times on `[0, duration)` for one origin.
pub fn generate_tasks<R: Rng + ?Sized>(
    config: &SimulationConfig,
    origin: &SatelliteNode,
    rng: &mut R,
) -> Vec<(f64, Task)> {
    let rate_per_s = config.task.rate_per_min / 60.0;
    arrival_times(rate_per_s, config.sim_duration_s, rng)
        .into_iter()
        .map(|t| (t, new_task(0, origin.id, t, config)))
        .collect()
}

fn arrival_times<R: Rng + ?Sized>(rate_per_s: f64, duration: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    if rate_per_s <= 0.0 {
        return out;
    }
    let exp = Exp::new(rate_per_s).expect("positive rate");
    let mut t = exp.sample(rng);
    while t < duration {
        out.push(t);
        t += exp.sample(rng);
    }
    out
}

fn new_task(id: TaskId, origin: SatId, created_at: f64, config: &SimulationConfig) -> Task {
    let p = &config.task;
    Task {
        id,
        origin,
        created_at,
        length_mi: p.length_mi,
        input_bits: p.input_bits,
        output_bits: p.output_bits,
        max_latency_s: p.max_latency_s,
        state: TaskState::Created,
        failure_cause: FailureCause::None,
        assigned_vm: None,
        finished_at: None,
    }
}

pub struct Simulation {
    config: SimulationConfig,
    satellites: Vec<SatelliteNode>,
    vms: Vec<Vm>,
    positions: PositionSource,
    sat_ids: Vec<String>,
    workload: Option<Vec<TaskSpec>>,
}

impl Simulation {
    /// Validates the configuration and lays out satellites and VMs.
    pub fn new(config: SimulationConfig) -> Result<Self> {
        config.validate()?;
        let elements = orbital::build_constellation(&config.constellation)?;
        let mut satellites = Vec::with_capacity(elements.len());
        let mut vms = Vec::new();
        for (id, (layer, _)) in elements.iter().enumerate() {
            let profile = config.profiles[*layer];
            let vm_ids: Vec<VmId> = (0..profile.vms_per_satellite)
                .map(|_| {
                    let vm_id = vms.len();
                    vms.push(Vm::new(vm_id, id, *layer, profile.vm_mips));
                    vm_id
                })
                .collect();
            satellites.push(SatelliteNode {
                id,
                layer: *layer,
                vm_ids,
            });
        }
        let frames = elements.iter().map(|(_, e)| OrbitFrame::new(e)).collect();
        let sat_ids = (0..satellites.len()).map(|i| i.to_string()).collect();
        Ok(Simulation {
            config,
            satellites,
            vms,
            positions: PositionSource::Orbits(frames),
            sat_ids,
            workload: None,
        })
    }

    /// Replaces the orbit propagator with another position source.
    pub fn with_positions(mut self, source: PositionSource) -> Result<Self> {
        match &source {
            PositionSource::Orbits(f) if f.len() != self.satellites.len() => {
                return Err(Error::Config("orbit count does not match constellation".into()))
            }
            PositionSource::Static(p) if p.len() != self.satellites.len() => {
                return Err(Error::Config("position count does not match constellation".into()))
            }
            PositionSource::Static(p) if p.iter().any(|v| !v.is_finite()) => {
                return Err(Error::Config("static positions must be finite".into()))
            }
            PositionSource::Trace(tr) => {
                for id in &self.sat_ids {
                    let (start, end) = tr
                        .span(id)
                        .ok_or_else(|| Error::UnknownSatellite(id.clone()))?;
                    if start > 0.0 || end < self.config.sim_duration_s {
                        return Err(Error::Config(format!(
                            "trace for satellite `{id}` covers [{start}, {end}] but the run needs [0, {}]",
                            self.config.sim_duration_s
                        )));
                    }
                }
            }
            _ => {}
        }
        self.positions = source;
        Ok(self)
    }

    /// Uses an explicit task list instead of Poisson arrivals.
    pub fn with_workload(mut self, tasks: Vec<TaskSpec>) -> Result<Self> {
        for t in &tasks {
            if t.origin >= self.satellites.len() {
                return Err(Error::Config(format!("task origin {} does not exist", t.origin)));
            }
            if !(t.created_at >= 0.0 && t.created_at < self.config.sim_duration_s) {
                return Err(Error::Config(format!(
                    "task creation time {} outside the run",
                    t.created_at
                )));
            }
        }
        self.workload = Some(tasks);
        Ok(self)
    }

    pub fn satellites(&self) -> &[SatelliteNode] {
        &self.satellites
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    fn build_tasks(&self) -> Vec<Task> {
        let cfg = &self.config;
        if let Some(specs) = &self.workload {
            return specs
                .iter()
                .enumerate()
                .map(|(id, s)| new_task(id, s.origin, s.created_at, cfg))
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(ARRIVAL_STREAM);
        let mist: Vec<&SatelliteNode> = self
            .satellites
            .iter()
            .filter(|s| s.layer == Layer::Mist)
            .collect();
        let mut tasks = Vec::new();
        match cfg.task.arrival {
            ArrivalMode::PerSatellite => {
                for sat in &mist {
                    tasks.extend(generate_tasks(cfg, sat, &mut rng).into_iter().map(|(_, t)| t));
                }
            }
            ArrivalMode::Global => {
                if !mist.is_empty() {
                    let times = arrival_times(cfg.task.rate_per_min / 60.0, cfg.sim_duration_s, &mut rng);
                    for t in times {
                        let origin = mist[rng.random_range(0..mist.len())].id;
                        tasks.push(new_task(0, origin, t, cfg));
                    }
                }
            }
        }
        for (id, t) in tasks.iter_mut().enumerate() {
            t.id = id;
        }
        tasks
    }

    pub fn run(self) -> Result<RunReport> {
        let tasks = self.build_tasks();
        let mut policy_rng = ChaCha8Rng::seed_from_u64(self.config.rng_seed);
        policy_rng.set_stream(POLICY_STREAM);
        let mut world = World {
            ctx: self.config.placement_context(),
            config: self.config,
            satellites: self.satellites,
            vms: self.vms,
            positions: self.positions,
            sat_ids: self.sat_ids,
            tasks,
            transfer_distance: Vec::new(),
            transfers: Vec::new(),
            ticks: Vec::new(),
            queue: EventQueue::default(),
            policy_rng,
            clock: 0.0,
            energy_j: 0.0,
            placements: 0,
            pos_buf: Vec::new(),
            cand_buf: Vec::new(),
        };
        world.transfer_distance = vec![0.0; world.tasks.len()];
        world.simulate()
    }
}

struct World {
    config: SimulationConfig,
    ctx: orchestrate::PlacementContext,
    satellites: Vec<SatelliteNode>,
    vms: Vec<Vm>,
    positions: PositionSource,
    sat_ids: Vec<String>,
    tasks: Vec<Task>,
    /// Distance used for the task's pending transfer.
    transfer_distance: Vec<f64>,
    transfers: Vec<TransferRecord>,
    ticks: Vec<TickSample>,
    queue: EventQueue,
    policy_rng: ChaCha8Rng,
    clock: f64,
    energy_j: f64,
    placements: u64,
    pos_buf: Vec<Vec3>,
    cand_buf: Vec<Candidate>,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv_mix(mut h: u64, word: u64) -> u64 {
    for b in word.to_le_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

impl World {
    fn simulate(mut self) -> Result<RunReport> {
        let duration = self.config.sim_duration_s;
        self.queue.schedule(duration, EventKind::SimEnd);
        for id in 0..self.tasks.len() {
            let at = self.tasks[id].created_at;
            self.queue.schedule(at, EventKind::TaskGenerated(id));
        }
        if self.config.tick_interval_s < duration {
            self.queue.schedule(self.config.tick_interval_s, EventKind::MobilityTick);
        }

        let mut processed = 0u64;
        let mut digest = FNV_OFFSET;
        while let Some(ev) = self.queue.pop() {
            debug_assert!(ev.time >= self.clock, "event scheduled in the past");
            self.clock = ev.time;
            processed += 1;
            let (code, id) = ev.kind.code();
            digest = fnv_mix(fnv_mix(fnv_mix(digest, ev.time.to_bits()), code), id);
            match ev.kind {
                EventKind::TaskGenerated(t) => self.on_task_generated(t)?,
                EventKind::UploadComplete(t) => self.on_upload_complete(t),
                EventKind::ExecutionComplete(t) => self.on_execution_complete(t)?,
                EventKind::DownloadComplete(t) => self.on_download_complete(t),
                EventKind::MobilityTick => self.on_tick(),
                EventKind::SimEnd => break,
            }
        }

        let record = self.build_record();
        Ok(RunReport {
            record,
            tasks: self.tasks,
            vms: self.vms,
            transfers: self.transfers,
            ticks: self.ticks,
            events_processed: processed,
            event_digest: digest,
            placements: self.placements,
        })
    }

    fn on_task_generated(&mut self, id: TaskId) -> Result<()> {
        let now = self.clock;
        let origin = self.tasks[id].origin;
        self.positions.fill(now, &self.sat_ids, &mut self.pos_buf)?;
        let src = self.pos_buf[origin];
        self.cand_buf.clear();
        for vm in &self.vms {
            self.cand_buf.push(Candidate {
                vm_id: vm.id,
                host_layer: vm.layer,
                distance_m: orbital::distance(src, self.pos_buf[vm.host]),
                queue_len: vm.pending(),
                vm_mips: vm.mips,
                assigned_count: vm.assigned_count,
            });
        }
        let demand = TaskDemand {
            length_mi: self.tasks[id].length_mi,
            input_bits: self.tasks[id].input_bits,
        };
        let selection = orchestrate::select(
            self.config.policy,
            &self.cand_buf,
            &demand,
            &self.ctx,
            &mut self.policy_rng,
        );
        let sel = match selection {
            Ok(s) => s,
            Err(Error::NoFeasibleCandidate) => {
                self.fail(id, FailureCause::NoDestination);
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        self.placements += 1;
        let distance = self.cand_buf[sel.index].distance_m;
        let vm = &mut self.vms[sel.vm_id];
        vm.assign();
        self.tasks[id].assigned_vm = Some(sel.vm_id);

        if vm.host == origin {
            self.start_queueing(id);
        } else {
            self.tasks[id].advance(TaskState::Uploading);
            self.transfer_distance[id] = distance;
            let tx = netenergy::transmission_delay(self.tasks[id].input_bits, &self.config.link);
            let sent = vm.reserve_link(now, tx);
            let arrive = sent + netenergy::propagation_delay(distance, &self.config.link);
            self.queue.schedule(arrive, EventKind::UploadComplete(id));
        }
        Ok(())
    }

    fn start_queueing(&mut self, id: TaskId) {
        let now = self.clock;
        let vm_id = self.tasks[id].assigned_vm.expect("placed task has a VM");
        let vm = &mut self.vms[vm_id];
        let exec = self.tasks[id].length_mi / vm.mips;
        let idle = vm.queue_len() == 0;
        let done = vm.enqueue(id, now, exec);
        self.tasks[id].advance(if idle {
            TaskState::Executing
        } else {
            TaskState::Queued
        });
        self.queue.schedule(done, EventKind::ExecutionComplete(id));
    }

    fn charge(&mut self, id: TaskId, kind: TransferKind) {
        let bits = match kind {
            TransferKind::Upload => self.tasks[id].input_bits,
            TransferKind::Download => self.tasks[id].output_bits,
        };
        let d = self.transfer_distance[id];
        let tx_joules = netenergy::tx_energy(bits, d, &self.config.radio);
        let rx_joules = netenergy::rx_energy(bits, &self.config.radio);
        self.energy_j += tx_joules + rx_joules;
        self.transfers.push(TransferRecord {
            task: id,
            kind,
            bits,
            distance_m: d,
            tx_joules,
            rx_joules,
        });
    }

    fn on_upload_complete(&mut self, id: TaskId) {
        self.charge(id, TransferKind::Upload);
        self.start_queueing(id);
    }

    fn on_execution_complete(&mut self, id: TaskId) -> Result<()> {
        let now = self.clock;
        let vm_id = self.tasks[id].assigned_vm.expect("executed task has a VM");
        let vm = &mut self.vms[vm_id];
        let head = vm.pop_head();
        debug_assert_eq!(head, Some(id), "FIFO order violated");
        if let Some(next) = vm.head() {
            self.tasks[next].advance(TaskState::Executing);
        }
        let (host, layer) = (vm.host, vm.layer);
        let origin = self.tasks[id].origin;
        if host == origin {
            self.finish(id);
            return Ok(());
        }
        let d = orbital::distance(
            self.positions.position(host, now, &self.sat_ids)?,
            self.positions.position(origin, now, &self.sat_ids)?,
        );
        if !netenergy::in_range(d, layer, &self.config.link) {
            self.fail(id, FailureCause::Mobility);
            return Ok(());
        }
        self.tasks[id].advance(TaskState::Downloading);
        self.transfer_distance[id] = d;
        let tx = netenergy::transmission_delay(self.tasks[id].output_bits, &self.config.link);
        let sent = self.vms[vm_id].reserve_link(now, tx);
        let arrive = sent + netenergy::propagation_delay(d, &self.config.link);
        self.queue.schedule(arrive, EventKind::DownloadComplete(id));
        Ok(())
    }

    fn on_download_complete(&mut self, id: TaskId) {
        self.charge(id, TransferKind::Download);
        self.finish(id);
    }

    /// Terminal bookkeeping once the result is back at the origin.
    fn finish(&mut self, id: TaskId) {
        let now = self.clock;
        let task = &mut self.tasks[id];
        task.finished_at = Some(now);
        if now - task.created_at <= task.max_latency_s {
            task.advance(TaskState::Succeeded);
        } else {
            task.advance(TaskState::Failed);
            task.failure_cause = FailureCause::Deadline;
        }
    }

    fn fail(&mut self, id: TaskId, cause: FailureCause) {
        let now = self.clock;
        let task = &mut self.tasks[id];
        task.advance(TaskState::Failed);
        task.failure_cause = cause;
        task.finished_at = Some(now);
    }

    fn on_tick(&mut self) {
        let now = self.clock;
        let tasks_in_flight = self
            .tasks
            .iter()
            .filter(|t| t.created_at <= now && !t.state.is_terminal())
            .count();
        let busy_vms = self.vms.iter().filter(|v| v.queue_len() > 0).count();
        self.ticks.push(TickSample {
            time: now,
            tasks_in_flight,
            busy_vms,
        });
        let next = now + self.config.tick_interval_s;
        if next < self.config.sim_duration_s {
            self.queue.schedule(next, EventKind::MobilityTick);
        }
    }

    fn build_record(&self) -> MetricsRecord {
        let mut per_layer: PerLayer<u64> = PerLayer::default();
        for t in &self.tasks {
            if let Some(vm) = t.assigned_vm {
                per_layer[self.vms[vm].layer] += 1;
            }
        }
        let mist_count = self
            .satellites
            .iter()
            .filter(|s| s.layer == Layer::Mist)
            .count();
        metrics::MetricsRecord::from_run(
            self.config.policy,
            mist_count,
            self.config.rng_seed,
            &self.tasks,
            &self.vms,
            self.config.sim_duration_s,
            self.energy_j,
            per_layer,
        )
    }
}

/// Runs one simulation and returns its metrics.
pub fn run(config: &SimulationConfig) -> Result<MetricsRecord> {
    Ok(Simulation::new(config.clone())?.run()?.record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queue_orders_by_time_then_seq() {
        let mut q = EventQueue::default();
        q.schedule(5.0, EventKind::MobilityTick);
        q.schedule(1.0, EventKind::TaskGenerated(0));
        q.schedule(5.0, EventKind::SimEnd);
        q.schedule(1.0, EventKind::TaskGenerated(1));
        let order: Vec<EventKind> = std::iter::from_fn(|| q.pop()).map(|e| e.kind).collect();
        assert_eq!(
            order,
            vec![
                EventKind::TaskGenerated(0),
                EventKind::TaskGenerated(1),
                EventKind::MobilityTick,
                EventKind::SimEnd
            ]
        );
    }

    fn small_config(mist: usize) -> SimulationConfig {
        let mut c = SimulationConfig::default();
        c.constellation.shells[Layer::Mist].count = mist;
        c.sim_duration_s = 120.0;
        c
    }

    #[test]
    fn zero_rate_means_no_work() {
        let mut c = small_config(10);
        c.task.rate_per_min = 0.0;
        let r = Simulation::new(c).unwrap().run().unwrap();
        assert_eq!(r.record.generated, 0);
        assert_eq!(r.record.total_energy_j, 0.0);
        assert_eq!(r.ticks.len(), 119);
    }

    #[test]
    fn arrivals_are_reproducible() {
        let c = small_config(1);
        let sat = SatelliteNode {
            id: 0,
            layer: Layer::Mist,
            vm_ids: vec![0],
        };
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            generate_tasks(&c, &sat, &mut rng)
                .into_iter()
                .map(|(t, _)| t)
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(4), draw(4));
        assert_ne!(draw(4), draw(5));
        assert!(draw(4).iter().all(|&t| (0.0..120.0).contains(&t)));
    }

    #[test]
    fn invalid_config_rejected_up_front() {
        let mut c = small_config(10);
        c.tick_interval_s = 0.0;
        assert!(Simulation::new(c).is_err());
    }

    #[test]
    fn workload_validation() {
        let sim = Simulation::new(small_config(2)).unwrap();
        let bad = vec![TaskSpec {
            created_at: 1.0,
            origin: 999,
        }];
        assert!(sim.with_workload(bad).is_err());
    }
}
