//! Satellites, their VMs, and the single-server FIFO model behind each VM.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::layer::{Layer, PerLayer};

pub type SatId = usize;
pub type VmId = usize;
pub type TaskId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct SatelliteNode {
    pub id: SatId,
    pub layer: Layer,
    pub vm_ids: Vec<VmId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerProfile {
    pub vm_mips: f64,
    pub vms_per_satellite: usize,
}

impl LayerProfile {
    pub fn validate(&self, layer: Layer) -> Result<()> {
        if !(self.vm_mips > 0.0 && self.vm_mips.is_finite()) {
            return Err(Error::Config(format!("{layer} VM MIPS must be > 0")));
        }
        if self.vms_per_satellite == 0 {
            return Err(Error::Config(format!("{layer} needs at least one VM per satellite")));
        }
        Ok(())
    }
}

pub fn default_profiles() -> PerLayer<LayerProfile> {
    PerLayer::new(
        LayerProfile {
            vm_mips: 10_000.0,
            vms_per_satellite: 1,
        },
        LayerProfile {
            vm_mips: 40_000.0,
            vms_per_satellite: 1,
        },
        LayerProfile {
            vm_mips: 100_000.0,
            vms_per_satellite: 1,
        },
    )
}

/// A compute slot: one non-preemptive FIFO server plus one FIFO radio link.
#[derive(Debug, Clone, PartialEq)]
pub struct Vm {
    pub id: VmId,
    pub host: SatId,
    pub layer: Layer,
    pub mips: f64,
    queue: VecDeque<TaskId>,
    busy_until: f64,
    busy_time_total: f64,
    link_free_at: f64,
    pending: usize,
    pub assigned_count: u64,
}

impl Vm {
    pub fn new(id: VmId, host: SatId, layer: Layer, mips: f64) -> Self {
        assert!(mips > 0.0, "VM MIPS must be positive");
        Vm {
            id,
            host,
            layer,
            mips,
            queue: VecDeque::new(),
            busy_until: 0.0,
            busy_time_total: 0.0,
            link_free_at: 0.0,
            pending: 0,
            assigned_count: 0,
        }
    }

    /// Appends a task and returns its completion time,
    /// `max(now, busy_until) + exec_seconds`.
    pub fn enqueue(&mut self, task: TaskId, now: f64, exec_seconds: f64) -> f64 {
        debug_assert!(exec_seconds > 0.0);
        let done = now.max(self.busy_until) + exec_seconds;
        self.busy_until = done;
        self.busy_time_total += exec_seconds;
        self.queue.push_back(task);
        done
    }

    /// Removes the task at the head of the queue once it has executed.
    pub fn pop_head(&mut self) -> Option<TaskId> {
        let head = self.queue.pop_front();
        if head.is_some() {
            self.pending = self.pending.saturating_sub(1);
        }
        head
    }

    pub fn head(&self) -> Option<TaskId> {
        self.queue.front().copied()
    }

    /// Tasks in the FIFO, waiting or executing.
    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Records a placement decision for this VM.
    pub fn assign(&mut self) {
        self.assigned_count += 1;
        self.pending += 1;
    }

    /// Tasks placed here that have not finished executing, including those
    /// still uploading.
    pub fn pending(&self) -> usize {
        self.pending
    }

    pub fn busy_until(&self) -> f64 {
        self.busy_until
    }

    /// Total execution time committed to this VM, including work that runs
    /// past any horizon.
    pub fn busy_time_total(&self) -> f64 {
        self.busy_time_total
    }

    /// Busy time inside `[0, horizon]`. Work queued past the horizon forms one
    /// contiguous busy period ending at `busy_until`, so it can be cut off
    /// exactly.
    pub fn busy_time_within(&self, horizon: f64) -> f64 {
        (self.busy_time_total - (self.busy_until - horizon).max(0.0)).max(0.0)
    }

    pub fn utilization_pct(&self, sim_duration: f64) -> f64 {
        debug_assert!(sim_duration > 0.0);
        100.0 * self.busy_time_within(sim_duration).min(sim_duration) / sim_duration
    }

    /// Reserves the VM's radio link for `tx_seconds` and returns when the
    /// transmission finishes. Transfers through one VM's link are serialized.
    pub fn reserve_link(&mut self, now: f64, tx_seconds: f64) -> f64 {
        let end = now.max(self.link_free_at) + tx_seconds;
        self.link_free_at = end;
        end
    }
}

pub fn utilization_pct(vm: &Vm, sim_duration: f64) -> f64 {
    vm.utilization_pct(sim_duration)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vm() -> Vm {
        Vm::new(0, 0, Layer::Mist, 10_000.0)
    }

    #[test]
    fn idle_vm_completes_after_exec() {
        let mut v = vm();
        assert_eq!(v.enqueue(1, 10.0, 2.0), 12.0);
    }

    #[test]
    fn busy_vm_appends_to_tail() {
        let mut v = vm();
        v.enqueue(1, 5.0, 10.0);
        assert_eq!(v.busy_until(), 15.0);
        assert_eq!(v.enqueue(2, 10.0, 2.0), 17.0);
    }

    #[test]
    fn fifo_recurrence() {
        let mut v = vm();
        let done: Vec<f64> = (0..3).map(|k| v.enqueue(k, 0.0, 2.0)).collect();
        assert_eq!(done, vec![2.0, 4.0, 6.0]);
        assert_eq!(v.pop_head(), Some(0));
        assert_eq!(v.head(), Some(1));
        assert_eq!(v.queue_len(), 2);
    }

    #[test]
    fn utilization() {
        let mut v = vm();
        assert_eq!(v.utilization_pct(600.0), 0.0);
        v.enqueue(0, 100.0, 30.0);
        assert_eq!(v.utilization_pct(600.0), 5.0);

        let mut full = vm();
        full.enqueue(0, 0.0, 600.0);
        assert_eq!(full.utilization_pct(600.0), 100.0);
    }

    #[test]
    fn work_past_horizon_is_clipped() {
        let mut v = vm();
        v.enqueue(0, 0.0, 5.0);
        v.enqueue(1, 599.0, 10.0);
        assert_eq!(v.busy_time_total(), 15.0);
        assert_eq!(v.busy_time_within(600.0), 6.0);
        assert_eq!(v.utilization_pct(600.0), 1.0);
    }

    #[test]
    fn link_serializes_transfers() {
        let mut v = vm();
        assert_eq!(v.reserve_link(0.0, 1.0), 1.0);
        assert_eq!(v.reserve_link(0.5, 1.0), 2.0);
        assert_eq!(v.reserve_link(5.0, 1.0), 6.0);
    }

    #[test]
    fn profile_validation() {
        let p = LayerProfile {
            vm_mips: 0.0,
            vms_per_satellite: 1,
        };
        assert!(p.validate(Layer::Mist).is_err());
        let p = LayerProfile {
            vm_mips: 1.0,
            vms_per_satellite: 0,
        };
        assert!(p.validate(Layer::Mist).is_err());
    }
}
