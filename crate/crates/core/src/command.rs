//! The DRAM command set: the only channel between a host and a device.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::payload::Payload;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommandKind {
    Act,
    Pre,
    Rd,
    Wr,
    Ref,
    Nop,
}

impl CommandKind {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            CommandKind::Act => "ACT",
            CommandKind::Pre => "PRE",
            CommandKind::Rd => "RD",
            CommandKind::Wr => "WR",
            CommandKind::Ref => "REF",
            CommandKind::Nop => "NOP",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ACT" => CommandKind::Act,
            "PRE" => CommandKind::Pre,
            "RD" => CommandKind::Rd,
            "WR" => CommandKind::Wr,
            "REF" => CommandKind::Ref,
            "NOP" => CommandKind::Nop,
            _ => return None,
        })
    }
}

/// One timestamped command. `row` is a host row address and is meaningful
/// for ACT (RD/WR implicitly target the open row; the field is carried for
/// trace fidelity). `burst` is reserved and always 0 in current traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Command {
    pub issue_cycle: u64,
    pub kind: CommandKind,
    pub bank: u32,
    pub row: u32,
    pub burst: u32,
    pub payload: Option<Payload>,
}

impl Command {
    pub fn act(issue_cycle: u64, bank: u32, row: u32) -> Self {
        Command { issue_cycle, kind: CommandKind::Act, bank, row, burst: 0, payload: None }
    }

    pub fn pre(issue_cycle: u64, bank: u32) -> Self {
        Command { issue_cycle, kind: CommandKind::Pre, bank, row: 0, burst: 0, payload: None }
    }

    pub fn rd(issue_cycle: u64, bank: u32) -> Self {
        Command { issue_cycle, kind: CommandKind::Rd, bank, row: 0, burst: 0, payload: None }
    }

    pub fn wr(issue_cycle: u64, bank: u32, payload: Payload) -> Self {
        Command {
            issue_cycle,
            kind: CommandKind::Wr,
            bank,
            row: 0,
            burst: 0,
            payload: Some(payload),
        }
    }

    pub fn refresh(issue_cycle: u64) -> Self {
        Command { issue_cycle, kind: CommandKind::Ref, bank: 0, row: 0, burst: 0, payload: None }
    }
}

/// What a command produced. Real hardware is silent about timing-violation
/// charge sharing, so ACT never reports it; an under-tRAS precharge is
/// flagged because the simulator can afford the observability.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandResult {
    pub data: Option<Payload>,
    pub restore_violation: bool,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("cycle {cycle} does not advance past cycle {last} (trace ordering)")]
    NonMonotonicCycle { cycle: u64, last: u64 },
    #[error("bank {bank} out of range (device has {banks} banks)")]
    BankOutOfRange { bank: u32, banks: u32 },
    #[error("host row {row} out of range (bank has {rows} rows)")]
    RowOutOfRange { row: u32, rows: u32 },
    #[error("ACT on bank {bank}: bank phase is ACTIVE (row {active_row} open)")]
    ActWhileActive { bank: u32, active_row: u32 },
    #[error("{kind} on bank {bank}: bank phase is IDLE")]
    BankIdle { kind: &'static str, bank: u32 },
    #[error("REF with bank {bank} ACTIVE; precharge all banks first")]
    RefWhileActive { bank: u32 },
    #[error("WR payload width {got} does not match row width {want}")]
    PayloadWidth { got: u32, want: u32 },
    #[error("time cannot move backward: target {target} < current {current}")]
    TimeReversal { target: u64, current: u64 },
}
