//! Shared DRAM experiment types (commands, traces, address interpretation,
//! report schema) and the reverse-engineering engine that discovers a
//! device's hidden subarray structure and disturbance characteristics by
//! issuing memory commands.
//!
//! Device implementations live elsewhere and are reached exclusively
//! through [`iface::MemoryCommands`]; this crate cannot name a device's
//! ground truth, which keeps discovery honest by construction.

pub mod command;
pub mod driver;
pub mod iface;
pub mod infer;
pub mod lens;
pub mod payload;
pub mod report;
pub mod trace;

pub use command::{Command, CommandKind, CommandResult, ProtocolError};
pub use driver::Driver;
pub use iface::{ApparentFlip, FlipRecord, FlipWitness, HostInfo, MemoryCommands, Timing};
pub use lens::{AddressInterpretation, DqPermutation, InterpretationLens, RemapConfig, RowScramble};
pub use payload::Payload;
pub use report::{
    AggressorPatterns, Anomaly, AnomalyKind, BankReport, Bitline, InferenceReport,
    MisconceptionReport, Polarity, Side, SideMap, StructuralReport, SweepTable, VariationReport,
    Verdict,
};
pub use trace::{format_trace, parse_trace, TraceError};
