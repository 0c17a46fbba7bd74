//! Constellation generation, circular-orbit propagation and position traces.
//!
//! Orbits are circular Keplerian orbits around a spherical Earth with no
//! perturbations. A satellite's position at time `t` is the in-plane circular
//! motion rotated by the inclination (about x) and then the RAAN (about z).
//!
//! Externally produced coordinates can be supplied through the trace format
//! (`sat_id,t,x,y,z`), which is read by [`PositionTrace::load`] and written by
//! [`write_trace`].

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::layer::{Layer, PerLayer};
use crate::scalar::Scalar;

/// Mean Earth radius, meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
/// Standard gravitational parameter of Earth, m³/s².
pub const EARTH_MU: f64 = 3.986004418e14;
/// Lowest admissible orbit altitude, meters.
pub const MIN_ALTITUDE_M: f64 = 400_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3 { x, y, z }
    }

    pub fn norm(&self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    fn lerp(a: Self, b: Self, w: T) -> Self {
        Vec3 {
            x: a.x + (b.x - a.x) * w,
            y: a.y + (b.y - a.y) * w,
            z: a.z + (b.z - a.z) * w,
        }
    }
}

impl<T: Scalar> std::ops::Sub for Vec3<T> {
    type Output = Vec3<T>;
    fn sub(self, o: Self) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// Euclidean distance between two points.
pub fn distance<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> T {
    (a - b).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalElements<T = f64> {
    pub altitude_m: T,
    pub inclination_rad: T,
    pub raan_rad: T,
    pub phase_rad: T,
}

impl<T: Scalar> OrbitalElements<T> {
    pub fn new(altitude_m: T, inclination_rad: T, raan_rad: T, phase_rad: T) -> Result<Self> {
        let e = OrbitalElements {
            altitude_m,
            inclination_rad,
            raan_rad,
            phase_rad,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.altitude_m >= T::lit(MIN_ALTITUDE_M)) {
            return Err(Error::Domain(format!(
                "altitude {} m is below the {} m floor",
                self.altitude_m, MIN_ALTITUDE_M
            )));
        }
        let two_pi = T::TAU();
        for (name, a) in [
            ("inclination", self.inclination_rad),
            ("raan", self.raan_rad),
            ("phase", self.phase_rad),
        ] {
            if !(a >= T::zero() && a < two_pi) {
                return Err(Error::Domain(format!("{name} {a} rad outside [0, 2π)")));
            }
        }
        Ok(())
    }

    pub fn radius_m(&self) -> T {
        T::lit(EARTH_RADIUS_M) + self.altitude_m
    }

    /// Orbital period T = 2π·sqrt(a³/μ).
    pub fn period_s(&self) -> T {
        let a = self.radius_m();
        T::TAU() * (a * a * a / T::lit(EARTH_MU)).sqrt()
    }

    pub fn mean_motion(&self) -> T {
        let a = self.radius_m();
        (T::lit(EARTH_MU) / (a * a * a)).sqrt()
    }
}

/// Wraps an angle into [0, 2π).
pub fn wrap_angle<T: Scalar>(a: T) -> T {
    let two_pi = T::TAU();
    let r = a % two_pi;
    let r = if r < T::zero() { r + two_pi } else { r };
    // `r + 2π` can round up to exactly 2π for tiny negative inputs.
    if r >= two_pi {
        T::zero()
    } else {
        r
    }
}

/// Position of a satellite on its circular orbit at time `t` seconds.
pub fn position_at<T: Scalar>(e: &OrbitalElements<T>, t: T) -> Vec3<T> {
    OrbitFrame::new(e).position_at(t)
}

/// Precomputed orbit-plane basis, so repeated propagation costs one `sin_cos`.
#[derive(Debug, Clone, Copy)]
pub struct OrbitFrame<T = f64> {
    radius: T,
    mean_motion: T,
    phase: T,
    p: Vec3<T>,
    q: Vec3<T>,
}

impl<T: Scalar> OrbitFrame<T> {
    pub fn new(e: &OrbitalElements<T>) -> Self {
        let (si, ci) = e.inclination_rad.sin_cos();
        let (so, co) = e.raan_rad.sin_cos();
        OrbitFrame {
            radius: e.radius_m(),
            mean_motion: e.mean_motion(),
            phase: e.phase_rad,
            // Rz(raan)·Rx(incl) applied to the in-plane x and y axes.
            p: Vec3::new(co, so, T::zero()),
            q: Vec3::new(-so * ci, co * ci, si),
        }
    }

    pub fn position_at(&self, t: T) -> Vec3<T> {
        let u = self.phase + self.mean_motion * t;
        let (su, cu) = u.sin_cos();
        let r = self.radius;
        Vec3::new(
            r * (cu * self.p.x + su * self.q.x),
            r * (cu * self.p.y + su * self.q.y),
            r * (cu * self.p.z + su * self.q.z),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phasing {
    WalkerDelta,
    RandomUniform,
}

impl std::str::FromStr for Phasing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "walker_delta" => Ok(Phasing::WalkerDelta),
            "random_uniform" => Ok(Phasing::RandomUniform),
            other => Err(Error::Config(format!("unknown phasing `{other}`"))),
        }
    }
}

impl std::fmt::Display for Phasing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phasing::WalkerDelta => "walker_delta",
            Phasing::RandomUniform => "random_uniform",
        })
    }
}

/// Orbital shell parameters for one layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub count: usize,
    pub altitude_m: f64,
    /// Number of orbital planes; 0 picks `ceil(sqrt(count))`.
    pub planes: usize,
    pub inclination_rad: f64,
}

impl Shell {
    pub fn plane_count(&self) -> usize {
        if self.count == 0 {
            0
        } else if self.planes == 0 {
            ((self.count as f64).sqrt().ceil() as usize).max(1)
        } else {
            self.planes.min(self.count)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationSpec {
    pub shells: PerLayer<Shell>,
    pub phasing: Phasing,
    pub rng_seed: u64,
}

impl Default for ConstellationSpec {
    fn default() -> Self {
        let incl = 53f64.to_radians();
        ConstellationSpec {
            shells: PerLayer::new(
                Shell {
                    count: 1000,
                    altitude_m: 400_000.0,
                    planes: 0,
                    inclination_rad: incl,
                },
                Shell {
                    count: 24,
                    altitude_m: 2_000_000.0,
                    planes: 0,
                    inclination_rad: incl,
                },
                Shell {
                    count: 18,
                    altitude_m: 10_000_000.0,
                    planes: 0,
                    inclination_rad: incl,
                },
            ),
            phasing: Phasing::WalkerDelta,
            rng_seed: 1,
        }
    }
}

impl ConstellationSpec {
    pub fn total(&self) -> usize {
        self.shells.0.iter().map(|s| s.count).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.total() == 0 {
            return Err(Error::Config("constellation has no satellites".into()));
        }
        for (layer, shell) in self.shells.iter() {
            if !(shell.altitude_m >= MIN_ALTITUDE_M) {
                return Err(Error::Config(format!(
                    "{layer} altitude {} m is below the {MIN_ALTITUDE_M} m floor",
                    shell.altitude_m
                )));
            }
            let i = shell.inclination_rad;
            if !(0.0..std::f64::consts::TAU).contains(&i) {
                return Err(Error::Config(format!(
                    "{layer} inclination {i} rad outside [0, 2π)"
                )));
            }
        }
        Ok(())
    }
}

/// Generates orbital elements for every satellite, layer-major.
///
/// Walker-delta places `planes` planes at RAAN spacing 2π/planes with
/// satellites evenly phased within each plane (no inter-plane phase offset).
/// When the count does not divide evenly, the first planes get one extra
/// satellite. Random-uniform draws inclination in [0, π), RAAN and phase in
/// [0, 2π) from a single seeded stream.
pub fn build_constellation(spec: &ConstellationSpec) -> Result<Vec<(Layer, OrbitalElements)>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(spec.total());
    for (layer, shell) in spec.shells.iter() {
        match spec.phasing {
            Phasing::WalkerDelta => {
                let planes = shell.plane_count();
                let base = shell.count.checked_div(planes).unwrap_or(0);
                let extra = shell.count.checked_rem(planes).unwrap_or(0);
                for p in 0..planes {
                    let in_plane = base + usize::from(p < extra);
                    let raan = wrap_angle(tau * p as f64 / planes as f64);
                    for k in 0..in_plane {
                        let phase = wrap_angle(tau * k as f64 / in_plane as f64);
                        out.push((
                            layer,
                            OrbitalElements {
                                altitude_m: shell.altitude_m,
                                inclination_rad: shell.inclination_rad,
                                raan_rad: raan,
                                phase_rad: phase,
                            },
                        ));
                    }
                }
            }
            Phasing::RandomUniform => {
                for _ in 0..shell.count {
                    let inclination_rad = rng.random_range(0.0..std::f64::consts::PI);
                    let raan_rad = rng.random_range(0.0..tau);
                    let phase_rad = rng.random_range(0.0..tau);
                    out.push((
                        layer,
                        OrbitalElements {
                            altitude_m: shell.altitude_m,
                            inclination_rad,
                            raan_rad,
                            phase_rad,
                        },
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Sampled satellite positions with linear interpolation between samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PositionTrace {
    samples: BTreeMap<String, Vec<(f64, Vec3)>>,
}

pub const TRACE_HEADER: &str = "sat_id,t,x,y,z";

impl PositionTrace {
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut samples: BTreeMap<String, Vec<(f64, Vec3)>> = BTreeMap::new();
        let mut seen_header = false;
        for (idx, line) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if !seen_header {
                if line.trim() != TRACE_HEADER {
                    return Err(Error::Trace {
                        line: lineno,
                        msg: format!("expected header `{TRACE_HEADER}`"),
                    });
                }
                seen_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 || fields[0].is_empty() {
                return Err(Error::Trace {
                    line: lineno,
                    msg: format!("expected 5 fields, found {}", fields.len()),
                });
            }
            let mut nums = [0f64; 4];
            for (slot, raw) in nums.iter_mut().zip(&fields[1..]) {
                *slot = raw
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Trace {
                        line: lineno,
                        msg: format!("`{raw}` is not a finite number"),
                    })?;
            }
            let series = samples.entry(fields[0].to_string()).or_default();
            if let Some(&(last, _)) = series.last() {
                if nums[0] <= last {
                    return Err(Error::Trace {
                        line: lineno,
                        msg: format!(
                            "timestamp {} for `{}` does not increase past {last}",
                            nums[0], fields[0]
                        ),
                    });
                }
            }
            series.push((nums[0], Vec3::new(nums[1], nums[2], nums[3])));
        }
        Ok(PositionTrace { samples })
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn satellites(&self) -> impl Iterator<Item = &str> {
        self.samples.keys().map(String::as_str)
    }

    /// Time span `(first, last)` covered by a satellite's samples.
    pub fn span(&self, sat: &str) -> Option<(f64, f64)> {
        let s = self.samples.get(sat)?;
        Some((s.first()?.0, s.last()?.0))
    }

    pub fn position(&self, sat: &str, t: f64) -> Result<Vec3> {
        let series = self
            .samples
            .get(sat)
            .ok_or_else(|| Error::UnknownSatellite(sat.to_string()))?;
        let (start, end) = (series[0].0, series[series.len() - 1].0);
        if !(t >= start && t <= end) {
            return Err(Error::TraceOutOfRange {
                sat: sat.to_string(),
                t,
                start,
                end,
            });
        }
        let hi = series.partition_point(|(ts, _)| *ts < t);
        let (t1, p1) = series[hi];
        if t1 == t || hi == 0 {
            return Ok(p1);
        }
        let (t0, p0) = series[hi - 1];
        Ok(Vec3::lerp(p0, p1, (t - t0) / (t1 - t0)))
    }
}

/// Writes samples in the trace format. Rows must already be grouped so that
/// timestamps increase per satellite.
pub fn write_trace<W: Write>(
    mut out: W,
    rows: impl IntoIterator<Item = (String, f64, Vec3)>,
) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for (id, t, p) in rows {
        writeln!(out, "{id},{t},{},{},{}", p.x, p.y, p.z)?;
    }
    Ok(())
}
