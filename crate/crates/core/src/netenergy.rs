//! Link delays and first-order radio energy.
//!
//! Transmitting `k` bits over distance `d` costs `k·(e_elec + eps_fs·d²)` below
//! the crossover distance `d0 = sqrt(eps_fs/eps_mp)` and `k·(e_elec + eps_mp·d⁴)`
//! at or above it. Receiving costs `k·e_elec`.

use crate::error::{Error, Result};
use crate::layer::{Layer, PerLayer};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams<T = f64> {
    pub e_elec: T,
    pub eps_fs: T,
    pub eps_mp: T,
    crossover_d0: T,
}

impl<T: Scalar> RadioParams<T> {
    pub fn new(e_elec: T, eps_fs: T, eps_mp: T) -> Result<Self> {
        for (name, v) in [("e_elec", e_elec), ("eps_fs", eps_fs), ("eps_mp", eps_mp)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::Domain(format!("radio constant {name} must be > 0, got {v}")));
            }
        }
        Ok(RadioParams {
            e_elec,
            eps_fs,
            eps_mp,
            crossover_d0: (eps_fs / eps_mp).sqrt(),
        })
    }

    /// Distance where the free-space and multipath amplifier terms meet.
    pub fn crossover_d0(&self) -> T {
        self.crossover_d0
    }
}

impl Default for RadioParams<f64> {
    fn default() -> Self {
        RadioParams::new(5e-8, 1e-11, 1.3e-15).expect("default radio constants are positive")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams<T = f64> {
    pub bandwidth_bps: T,
    pub propagation_speed_mps: T,
    pub range_by_layer: PerLayer<T>,
}

impl<T: Scalar> LinkParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_bps > T::zero()) {
            return Err(Error::Config("link bandwidth must be > 0".into()));
        }
        if !(self.propagation_speed_mps > T::zero()) {
            return Err(Error::Config("propagation speed must be > 0".into()));
        }
        for (layer, r) in self.range_by_layer.iter() {
            if !(*r >= T::zero()) {
                return Err(Error::Config(format!("{layer} range must be ≥ 0")));
            }
        }
        Ok(())
    }
}

impl Default for LinkParams<f64> {
    fn default() -> Self {
        LinkParams {
            bandwidth_bps: 1e9,
            propagation_speed_mps: 3e8,
            range_by_layer: PerLayer::new(32e6, 36e6, 40e6),
        }
    }
}

pub fn transmission_delay<T: Scalar>(bits: T, link: &LinkParams<T>) -> T {
    bits / link.bandwidth_bps
}

pub fn propagation_delay<T: Scalar>(d: T, link: &LinkParams<T>) -> T {
    d / link.propagation_speed_mps
}

pub fn tx_energy<T: Scalar>(bits: T, d: T, radio: &RadioParams<T>) -> T {
    let amp = if d < radio.crossover_d0 {
        radio.eps_fs * d * d
    } else {
        let d2 = d * d;
        radio.eps_mp * d2 * d2
    };
    bits * (radio.e_elec + amp)
}

pub fn rx_energy<T: Scalar>(bits: T, radio: &RadioParams<T>) -> T {
    bits * radio.e_elec
}

/// Energy on a decibel scale, `10·log10(joules)`, reported as dB(J).
pub fn energy_db<T: Scalar>(total_joules: T) -> Result<T> {
    if !(total_joules > T::zero()) {
        return Err(Error::Domain(format!(
            "energy must be positive for a dB value, got {total_joules}"
        )));
    }
    Ok(T::lit(10.0) * total_joules.log10())
}

pub fn in_range<T: Scalar>(d: T, dest: Layer, link: &LinkParams<T>) -> bool {
    d <= link.range_by_layer[dest]
}
