//! The command interface a device exposes to a host. The discovery engine
//! links against nothing else, so hidden device structure stays hidden by
//! construction.

use serde::{Deserialize, Serialize};

use crate::command::{Command, CommandKind, CommandResult, ProtocolError};

/// Datasheet-level facts a host legitimately knows about a part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HostInfo {
    pub num_banks: u32,
    pub rows_per_bank: u32,
    pub row_width_bits: u32,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    #[serde(rename = "tCK_ns")]
    pub tck_ns: f64,
    #[serde(rename = "tRAS_cycles")]
    pub tras_cycles: u64,
    #[serde(rename = "tRP_cycles")]
    pub trp_cycles: u64,
    #[serde(rename = "tRCD_cycles")]
    pub trcd_cycles: u64,
    #[serde(rename = "tREFW_cycles")]
    pub trefw_cycles: u64,
}

/// A memory device driven one command at a time.
///
/// `hammer` is defined as sugar over `issue`: `count` back-to-back
/// ACT/PRE cycles of `row`, each held open for `act_cycles`, with tRP
/// between cycles. Implementations may take a fast path but must stay
/// state-identical to the default expansion.
pub trait MemoryCommands {
    fn host_info(&self) -> HostInfo;
    fn now(&self) -> u64;
    fn issue(&mut self, cmd: Command) -> Result<CommandResult, ProtocolError>;
    fn advance_to(&mut self, cycle: u64) -> Result<(), ProtocolError>;

    fn hammer(
        &mut self,
        bank: u32,
        row: u32,
        count: u64,
        act_cycles: u64,
    ) -> Result<(), ProtocolError> {
        let trp = self.host_info().timing.trp_cycles;
        for _ in 0..count {
            let t = self.now() + 1;
            self.issue(Command::act(t, bank, row))?;
            self.issue(Command::pre(t + act_cycles, bank))?;
            self.advance_to(t + act_cycles + trp)?;
        }
        Ok(())
    }
}

/// One disturbance flip, recorded by the device in its own coordinates
/// along with the host row whose activation caused it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipRecord {
    pub cycle: u64,
    pub bank: u32,
    pub aggressor_host_row: u32,
    pub aggressor_internal_row: u32,
    pub victim_internal_row: u32,
    pub victim_internal_bit: u32,
    /// true: cell went charged -> discharged
    pub discharged: bool,
}

/// A flip re-expressed the way a host holding some address interpretation
/// would label it. Produced device-side; see `AddressInterpretation`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApparentFlip {
    pub bank: u32,
    pub aggressor_host_row: u32,
    pub victim_row: u32,
    pub victim_bit: u32,
}

/// Extension used only by the misinterpretation demonstration: the device
/// keeps a log of disturbance flips and can re-express it under a chosen
/// address interpretation. Discovery operations must not require this.
pub trait FlipWitness: MemoryCommands {
    fn clear_flip_log(&mut self);
    fn flip_log_len(&self) -> usize;
    fn view_flips_under(&self, interp: &crate::lens::AddressInterpretation) -> Vec<ApparentFlip>;
}

/// Per-command legality rules that do not depend on device internals.
pub fn check_kind_needs_payload(kind: CommandKind, has_payload: bool) -> bool {
    match kind {
        CommandKind::Wr => has_payload,
        _ => true,
    }
}
