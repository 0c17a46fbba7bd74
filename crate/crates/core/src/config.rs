//! Simulation configuration and its flat `section.key=value` text format.
//!
//! Blank lines and lines starting with `#` are ignored; trailing `# ...`
//! comments are stripped. Unknown keys are rejected and missing keys keep
//! their defaults.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::infra::{default_profiles, LayerProfile};
use crate::layer::{Layer, LayerMask, PerLayer};
use crate::netenergy::{LinkParams, RadioParams};
use crate::orbital::{ConstellationSpec, Phasing};
use crate::orchestrate::{PlacementContext, PolicyId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrivalMode {
    /// `rate_per_min` applies to every mist satellite independently.
    PerSatellite,
    /// `rate_per_min` is the total rate, with origins drawn uniformly.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskProfile {
    pub rate_per_min: f64,
    pub arrival: ArrivalMode,
    pub length_mi: f64,
    pub input_bits: f64,
    pub output_bits: f64,
    pub max_latency_s: f64,
}

impl Default for TaskProfile {
    fn default() -> Self {
        TaskProfile {
            rate_per_min: 20.0,
            arrival: ArrivalMode::PerSatellite,
            length_mi: 10_000.0,
            input_bits: 2e9,
            output_bits: 2e8,
            max_latency_s: 12.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub sim_duration_s: f64,
    pub tick_interval_s: f64,
    pub constellation: ConstellationSpec,
    pub profiles: PerLayer<LayerProfile>,
    pub link: LinkParams,
    pub radio: RadioParams,
    pub task: TaskProfile,
    pub policy: PolicyId,
    pub tradeoff_layer_weight: PerLayer<f64>,
    pub architecture: LayerMask,
    pub rng_seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            sim_duration_s: 600.0,
            tick_interval_s: 1.0,
            constellation: ConstellationSpec::default(),
            profiles: default_profiles(),
            link: LinkParams::default(),
            radio: RadioParams::default(),
            task: TaskProfile::default(),
            policy: PolicyId::DistanceOnly,
            tradeoff_layer_weight: PerLayer::new(1.0, 1.0, 1.2),
            architecture: LayerMask::ALL,
            rng_seed: 1,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sim_duration_s > 0.0 && self.sim_duration_s.is_finite()) {
            return Err(Error::Config("simulation duration must be > 0".into()));
        }
        if !(self.tick_interval_s > 0.0 && self.tick_interval_s.is_finite()) {
            return Err(Error::Config("tick interval must be > 0".into()));
        }
        self.constellation.validate()?;
        for (layer, p) in self.profiles.iter() {
            p.validate(layer)?;
        }
        self.link.validate()?;
        let t = &self.task;
        if !(t.rate_per_min >= 0.0 && t.rate_per_min.is_finite()) {
            return Err(Error::Config("task rate must be ≥ 0".into()));
        }
        if !(t.length_mi > 0.0) {
            return Err(Error::Config("task length must be > 0".into()));
        }
        if !(t.input_bits > 0.0) {
            return Err(Error::Config("task input size must be > 0".into()));
        }
        if !(t.output_bits >= 0.0) {
            return Err(Error::Config("task output size must be ≥ 0".into()));
        }
        if !(t.max_latency_s > 0.0) {
            return Err(Error::Config("task max latency must be > 0".into()));
        }
        if self.architecture.is_empty() {
            return Err(Error::Config("architecture enables no layer".into()));
        }
        for (layer, w) in self.tradeoff_layer_weight.iter() {
            if !(*w > 0.0) {
                return Err(Error::Config(format!("trade-off weight for {layer} must be > 0")));
            }
        }
        Ok(())
    }

    pub fn placement_context(&self) -> PlacementContext {
        PlacementContext {
            architecture: self.architecture,
            link: self.link,
            radio: self.radio,
            tradeoff_layer_weight: self.tradeoff_layer_weight,
        }
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let shells = &mut self.constellation.shells;
        match key {
            "simulation.duration_s" => self.sim_duration_s = num(key, value)?,
            "simulation.tick_s" => self.tick_interval_s = num(key, value)?,
            "constellation.mist" => shells[Layer::Mist].count = count(key, value)?,
            "constellation.edge_dc" => shells[Layer::EdgeDc].count = count(key, value)?,
            "constellation.cloud" => shells[Layer::Cloud].count = count(key, value)?,
            "constellation.phasing" => {
                self.constellation.phasing = value.parse::<Phasing>().map_err(|_| invalid(key, value))?
            }
            "constellation.mist_planes" => shells[Layer::Mist].planes = count(key, value)?,
            "constellation.edge_planes" => shells[Layer::EdgeDc].planes = count(key, value)?,
            "constellation.cloud_planes" => shells[Layer::Cloud].planes = count(key, value)?,
            "orbit.mist_altitude_m" => shells[Layer::Mist].altitude_m = num(key, value)?,
            "orbit.edge_altitude_m" => shells[Layer::EdgeDc].altitude_m = num(key, value)?,
            "orbit.cloud_altitude_m" => shells[Layer::Cloud].altitude_m = num(key, value)?,
            "orbit.inclination_deg" => {
                let deg: f64 = num(key, value)?;
                if !(0.0..180.0).contains(&deg) {
                    return Err(Error::InvalidValue {
                        key: key.into(),
                        msg: "inclination must be in [0, 180) degrees".into(),
                    });
                }
                for l in Layer::ALL {
                    shells[l].inclination_rad = deg.to_radians();
                }
            }
            "link.bandwidth_bps" => self.link.bandwidth_bps = num(key, value)?,
            "link.speed_mps" => self.link.propagation_speed_mps = num(key, value)?,
            "link.range_mist_m" => self.link.range_by_layer[Layer::Mist] = num(key, value)?,
            "link.range_edge_m" => self.link.range_by_layer[Layer::EdgeDc] = num(key, value)?,
            "link.range_cloud_m" => self.link.range_by_layer[Layer::Cloud] = num(key, value)?,
            "radio.e_elec" | "radio.eps_fs" | "radio.eps_mp" => {
                let v: f64 = num(key, value)?;
                let (mut e, mut fs, mut mp) = (self.radio.e_elec, self.radio.eps_fs, self.radio.eps_mp);
                match key {
                    "radio.e_elec" => e = v,
                    "radio.eps_fs" => fs = v,
                    _ => mp = v,
                }
                self.radio = RadioParams::new(e, fs, mp).map_err(|err| Error::InvalidValue {
                    key: key.into(),
                    msg: err.to_string(),
                })?;
            }
            "task.rate_per_min" => self.task.rate_per_min = num(key, value)?,
            "task.arrival" => {
                self.task.arrival = match value {
                    "per_satellite" => ArrivalMode::PerSatellite,
                    "global" => ArrivalMode::Global,
                    _ => return Err(invalid(key, value)),
                }
            }
            "task.length_mi" => self.task.length_mi = num(key, value)?,
            "task.input_bits" => self.task.input_bits = num(key, value)?,
            "task.output_bits" => self.task.output_bits = num(key, value)?,
            "task.max_latency_s" => self.task.max_latency_s = num(key, value)?,
            "vm.mist_mips" => self.profiles[Layer::Mist].vm_mips = num(key, value)?,
            "vm.edge_mips" => self.profiles[Layer::EdgeDc].vm_mips = num(key, value)?,
            "vm.cloud_mips" => self.profiles[Layer::Cloud].vm_mips = num(key, value)?,
            "vm.mist_per_satellite" => self.profiles[Layer::Mist].vms_per_satellite = count(key, value)?,
            "vm.edge_per_satellite" => self.profiles[Layer::EdgeDc].vms_per_satellite = count(key, value)?,
            "vm.cloud_per_satellite" => self.profiles[Layer::Cloud].vms_per_satellite = count(key, value)?,
            "policy.name" => self.policy = value.parse().map_err(|_| invalid(key, value))?,
            "policy.tradeoff_mist_weight" => self.tradeoff_layer_weight[Layer::Mist] = num(key, value)?,
            "policy.tradeoff_edge_weight" => self.tradeoff_layer_weight[Layer::EdgeDc] = num(key, value)?,
            "policy.tradeoff_cloud_weight" => self.tradeoff_layer_weight[Layer::Cloud] = num(key, value)?,
            "architecture.layers" => self.architecture = value.parse().map_err(|_| invalid(key, value))?,
            "rng.seed" => {
                self.rng_seed = value.parse().map_err(|_| invalid(key, value))?;
                self.constellation.rng_seed = self.rng_seed;
            }
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }
}

fn invalid(key: &str, value: &str) -> Error {
    Error::InvalidValue {
        key: key.to_string(),
        msg: format!("cannot parse `{value}`"),
    }
}

fn num(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| invalid(key, value))
}

/// Non-negative integer; accepts integral floats such as `1e3`.
fn count(key: &str, value: &str) -> Result<usize> {
    if let Ok(n) = value.parse::<usize>() {
        return Ok(n);
    }
    match value.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(v as usize),
        _ => Err(invalid(key, value)),
    }
}

/// Parses a configuration stream on top of the defaults and validates it.
pub fn parse_config<R: BufRead>(source: R) -> Result<SimulationConfig> {
    let mut cfg = SimulationConfig::default();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Syntax {
            line: idx + 1,
            msg: format!("expected `key=value`, found `{content}`"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Syntax {
                line: idx + 1,
                msg: "empty key".into(),
            });
        }
        cfg.set(key, value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}
