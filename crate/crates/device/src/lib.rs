//! Behavioral DRAM device simulator. A `Device` is built from a
//! `DeviceProfile` describing hidden geometry (tiled subarray pattern,
//! bitline structure, cell polarity, coupled rows, edge pairing), address
//! remapping, and disturbance/retention fault parameters; it is then driven
//! exclusively through the command interface from `xray_core`.
//!
//! Ground truth (`truth`, `Device::geometry`, `peek_host_row`) is for the
//! validation harness. The discovery engine never links against this crate.

pub mod addrmap;
pub mod cells;
pub mod engine;
pub mod faults;
pub mod geometry;
pub mod presets;
pub mod profile;
pub mod truth;

pub use engine::Device;
pub use profile::{DeviceProfile, FaultParams, PolarityRule, ProfileError};
