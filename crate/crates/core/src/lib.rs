//! Discrete-event simulator for task orchestration in a three-tier satellite
//! constellation (mist, edge datacenter and cloud satellites).
//!
//! Mist satellites generate heavy computing tasks. A placement policy picks
//! the VM that runs each task, and the simulator accounts for delays, radio
//! energy, VM utilization and task outcomes.
//!
//! The geometry, radio and placement math is generic over [`Scalar`]
//! (`f32`/`f64`); the engine runs on [`Real`].

// NaN must fail validation, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod engine;
pub mod error;
pub mod infra;
pub mod layer;
pub mod metrics;
pub mod netenergy;
pub mod orbital;
pub mod orchestrate;
pub mod scalar;
pub mod sweep;

pub use config::{parse_config, SimulationConfig};
pub use engine::{run, RunReport, Simulation};
pub use error::{Error, Result};
pub use layer::{Layer, LayerMask, PerLayer};
pub use metrics::MetricsRecord;
pub use orchestrate::PolicyId;
pub use scalar::Scalar;
pub use sweep::{run_sweep, SweepSpec};

/// Scalar type used by the simulation engine.
pub type Real = f64;

pub type Vec3f = orbital::Vec3<f32>;
pub type Vec3d = orbital::Vec3<f64>;
pub type OrbitalElementsF32 = orbital::OrbitalElements<f32>;
pub type OrbitalElementsF64 = orbital::OrbitalElements<f64>;
pub type RadioParamsF32 = netenergy::RadioParams<f32>;
pub type RadioParamsF64 = netenergy::RadioParams<f64>;
pub type CandidateF32 = orchestrate::Candidate<f32>;
pub type CandidateF64 = orchestrate::Candidate<f64>;
