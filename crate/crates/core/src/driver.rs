//! Legal-timing command sequences over the raw interface, addressed in the
//! lens's logical coordinates. Every discovery operation drives a device
//! through this: plain reads and writes, calibrated hammering, and the
//! deliberate timing-violation sequence that performs a row copy.

use crate::command::{Command, ProtocolError};
use crate::iface::{HostInfo, MemoryCommands};
use crate::lens::InterpretationLens;
use crate::payload::Payload;

/// Fraction of tRP within which a destination activation still finds the
/// bitlines carrying the previous row's charge.
pub const COPY_WINDOW_FRAC: f64 = 0.6;

pub fn copy_window_cycles(trp: u64) -> u64 {
    ((trp as f64) * COPY_WINDOW_FRAC).floor().max(1.0) as u64
}

pub struct Driver<'a> {
    dev: &'a mut dyn MemoryCommands,
    pub lens: InterpretationLens,
    info: HostInfo,
}

impl<'a> Driver<'a> {
    pub fn new(dev: &'a mut dyn MemoryCommands, lens: InterpretationLens) -> Self {
        let info = dev.host_info();
        Driver { dev, lens, info }
    }

    pub fn info(&self) -> HostInfo {
        self.info
    }

    pub fn rows(&self) -> u32 {
        self.info.rows_per_bank
    }

    pub fn width(&self) -> u32 {
        self.info.row_width_bits
    }

    pub fn now(&self) -> u64 {
        self.dev.now()
    }

    pub fn wait(&mut self, cycles: u64) -> Result<(), ProtocolError> {
        let t = self.dev.now() + cycles;
        self.dev.advance_to(t)
    }

    pub fn refresh(&mut self) -> Result<(), ProtocolError> {
        let t = self.dev.now() + 1;
        self.dev.issue(Command::refresh(t))?;
        Ok(())
    }

    pub fn write_row(
        &mut self,
        bank: u32,
        logical_row: u32,
        data: &Payload,
    ) -> Result<(), ProtocolError> {
        let host_row = self.lens.issue_row(logical_row);
        let host_data = self.lens.encode_payload(data);
        let tm = self.info.timing;
        let t = self.dev.now() + 1;
        self.dev.issue(Command::act(t, bank, host_row))?;
        self.dev.issue(Command::wr(t + tm.trcd_cycles, bank, host_data))?;
        self.dev.issue(Command::pre(t + tm.tras_cycles, bank))?;
        self.dev.advance_to(t + tm.tras_cycles + tm.trp_cycles)
    }

    pub fn read_row(&mut self, bank: u32, logical_row: u32) -> Result<Payload, ProtocolError> {
        let host_row = self.lens.issue_row(logical_row);
        let tm = self.info.timing;
        let t = self.dev.now() + 1;
        self.dev.issue(Command::act(t, bank, host_row))?;
        let res = self.dev.issue(Command::rd(t + tm.trcd_cycles, bank))?;
        self.dev.issue(Command::pre(t + tm.tras_cycles, bank))?;
        self.dev.advance_to(t + tm.tras_cycles + tm.trp_cycles)?;
        Ok(self.lens.decode_payload(&res.data.expect("RD returns data")))
    }

    /// `count` back-to-back ACT/PRE cycles of the aggressor, each held open
    /// for `act_cycles` (pass `timing.tras_cycles` for minimum-legal cycles).
    pub fn hammer(
        &mut self,
        bank: u32,
        logical_row: u32,
        count: u64,
        act_cycles: u64,
    ) -> Result<(), ProtocolError> {
        let host_row = self.lens.issue_row(logical_row);
        self.dev.hammer(bank, host_row, count, act_cycles)
    }

    /// The timing-violation sequence: open src, precharge at tRAS, then
    /// activate dst before the bitlines equalize. Leaves the bank precharged.
    pub fn row_copy(&mut self, bank: u32, src: u32, dst: u32) -> Result<(), ProtocolError> {
        let src_host = self.lens.issue_row(src);
        let dst_host = self.lens.issue_row(dst);
        let tm = self.info.timing;
        let delta = (copy_window_cycles(tm.trp_cycles) / 2).max(1);
        let t = self.dev.now() + 1;
        self.dev.issue(Command::act(t, bank, src_host))?;
        self.dev.issue(Command::pre(t + tm.tras_cycles, bank))?;
        let t2 = t + tm.tras_cycles + delta;
        self.dev.issue(Command::act(t2, bank, dst_host))?;
        self.dev.issue(Command::pre(t2 + tm.tras_cycles, bank))?;
        self.dev.advance_to(t2 + tm.tras_cycles + tm.trp_cycles)
    }

    /// Same sequence but with the destination activation at a chosen offset
    /// after the precharge, for window experiments.
    pub fn row_copy_with_delay(
        &mut self,
        bank: u32,
        src: u32,
        dst: u32,
        delta: u64,
    ) -> Result<(), ProtocolError> {
        let src_host = self.lens.issue_row(src);
        let dst_host = self.lens.issue_row(dst);
        let tm = self.info.timing;
        let t = self.dev.now() + 1;
        self.dev.issue(Command::act(t, bank, src_host))?;
        self.dev.issue(Command::pre(t + tm.tras_cycles, bank))?;
        let t2 = t + tm.tras_cycles + delta.max(1);
        self.dev.issue(Command::act(t2, bank, dst_host))?;
        self.dev.issue(Command::pre(t2 + tm.tras_cycles, bank))?;
        self.dev.advance_to(t2 + tm.tras_cycles + tm.trp_cycles)
    }
}
