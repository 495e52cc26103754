//! Cycle-stamped DRAM command state machine: activation sensing with
//! coupled-row composites, legal-timing restore, sense-amp latch lifetimes
//! that make under-tRP activation a row copy, disturbance hooks on every
//! precharge, lazy retention decay, and round-robin refresh.

use xray_core::command::{Command, CommandKind, CommandResult, ProtocolError};
use xray_core::driver::copy_window_cycles;
use xray_core::iface::{ApparentFlip, FlipRecord, FlipWitness, HostInfo, MemoryCommands};
use xray_core::lens::AddressInterpretation;
use xray_core::payload::Payload;
use xray_core::report::Polarity;

use crate::addrmap;
use crate::cells::BankCells;
use crate::faults::FaultModel;
use crate::geometry::Geometry;
use crate::profile::{DeviceProfile, ProfileError};

/// Round-robin refresh granularity: one REF restores rows_per_bank/64 rows
/// in every bank.
pub const REF_GROUPS: u32 = 64;

const FLIP_LOG_CAP: usize = 4_000_000;

struct ActiveRows {
    host_row: u32,
    rows: Vec<u32>,
    act_cycle: u64,
}

struct BankPhase {
    active: Option<ActiveRows>,
}

struct Strip {
    latch: Vec<u64>,
    source_sub: u32,
    latched: bool,
    /// Cycle at which the bitlines are equalized again; `u64::MAX` while the
    /// row is still open.
    valid_until: u64,
}

impl Strip {
    fn new(width: u32) -> Self {
        Strip {
            latch: vec![0; ((width as usize) + 63) / 64],
            source_sub: 0,
            latched: false,
            valid_until: 0,
        }
    }

    #[inline]
    fn get(&self, bit: u32) -> bool {
        (self.latch[(bit / 64) as usize] >> (bit % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, bit: u32, v: bool) {
        if v {
            self.latch[(bit / 64) as usize] |= 1 << (bit % 64);
        } else {
            self.latch[(bit / 64) as usize] &= !(1 << (bit % 64));
        }
    }
}

pub struct Device {
    profile: DeviceProfile,
    geom: Geometry,
    faults: FaultModel,
    banks: Vec<BankPhase>,
    strips: Vec<Vec<Strip>>,
    cells: Vec<Option<BankCells>>,
    clock: u64,
    last_issue: u64,
    ref_group: u32,
    copy_window: u64,
    flip_log: Option<Vec<FlipRecord>>,
}

impl Device {
    pub fn new(profile: DeviceProfile) -> Result<Device, ProfileError> {
        profile.validate()?;
        let geom = Geometry::new(&profile);
        if let Some(stride) = profile.coupled_row_stride {
            check_stride_strips(&geom, stride)?;
        }
        let faults = FaultModel::new(&profile.fault_params);
        let banks = (0..profile.num_banks).map(|_| BankPhase { active: None }).collect();
        let strips = (0..profile.num_banks)
            .map(|_| (0..geom.num_strips()).map(|_| Strip::new(geom.width)).collect())
            .collect();
        let copy_window = copy_window_cycles(profile.timing.trp_cycles);
        Ok(Device {
            cells: (0..profile.num_banks).map(|_| None).collect(),
            banks,
            strips,
            geom,
            faults,
            copy_window,
            profile,
            clock: 0,
            last_issue: 0,
            ref_group: 0,
            flip_log: None,
        })
    }

    pub fn profile(&self) -> &DeviceProfile {
        &self.profile
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn fault_model(&self) -> &FaultModel {
        &self.faults
    }

    /// Override the charge-share window (cycles after PRE within which a
    /// destination activation copies). For window experiments; the default
    /// comes from `copy_window_cycles`.
    pub fn set_copy_window(&mut self, cycles: u64) {
        self.copy_window = cycles;
    }

    fn cells_mut(&mut self, bank: u32) -> &mut BankCells {
        let slot = &mut self.cells[bank as usize];
        slot.get_or_insert_with(|| BankCells::new(self.geom.rows, self.geom.width))
    }

    fn check_bank(&self, bank: u32) -> Result<(), ProtocolError> {
        if bank >= self.profile.num_banks {
            return Err(ProtocolError::BankOutOfRange { bank, banks: self.profile.num_banks });
        }
        Ok(())
    }

    fn activated_rows(&self, host_row: u32) -> Vec<u32> {
        let internal = self.profile.remap.host_to_internal(host_row, self.geom.rows);
        match self.profile.coupled_row_stride {
            Some(stride) => vec![internal, (internal + stride) % self.geom.rows],
            None => vec![internal],
        }
    }

    fn anti(&self, sub: u32) -> bool {
        self.geom.polarity(sub) == Polarity::Anti
    }

    /// Sense one internal row at `now`: strips still inside the charge-share
    /// window overwrite their cells with the latched values (the row copy
    /// path); everything else senses normally after lazy retention decay.
    /// The row ends fully restored and re-latched on its strips.
    fn sense_row(&mut self, bank: u32, row: u32, now: u64) {
        let (sub, _, _) = self.geom.subarray_of(row);
        let width = self.geom.width;
        let inversion = self.profile.datapath_inversion;
        let anti_dst = self.anti(sub);

        self.cells_mut(bank);
        let geom = &self.geom;
        let faults = &self.faults;
        let cells = self.cells[bank as usize].as_mut().expect("allocated");
        let strips = &mut self.strips[bank as usize];

        for bit in 0..width {
            let strip = &strips[geom.strip_of(sub, bit) as usize];
            if strip.latched && now < strip.valid_until {
                let src_charge = strip.get(bit);
                let src_anti = geom.polarity(strip.source_sub) == Polarity::Anti;
                let src_value = src_charge ^ src_anti;
                let dst_value = src_value ^ (strip.source_sub != sub && inversion);
                cells.set_charge(row, bit, dst_value ^ anti_dst);
            } else if cells.charged(row, bit) {
                let deadline =
                    cells.last_restore[row as usize] + faults.retention_cycles(bank, row, bit);
                if now >= deadline {
                    cells.set_charge(row, bit, false);
                }
            }
        }
        for bit in 0..width {
            cells.reset_cell(row, bit);
        }
        cells.last_restore[row as usize] = now;
        for bit in 0..width {
            let id = geom.strip_of(sub, bit) as usize;
            let charged = cells.charged(row, bit);
            strips[id].set(bit, charged);
        }
        let mut seen = [u32::MAX; 2];
        for bit in 0..width {
            let id = geom.strip_of(sub, bit);
            if !seen.contains(&id) {
                seen[if seen[0] == u32::MAX { 0 } else { 1 }] = id;
                let strip = &mut strips[id as usize];
                strip.source_sub = sub;
                strip.latched = true;
                strip.valid_until = u64::MAX;
            }
        }
    }

    /// Disturbance bookkeeping for one completed ACT/PRE cycle of an
    /// aggressor row. Victims across a sense-amplifier boundary are immune.
    fn disturb_once(&mut self, bank: u32, agg: u32, agg_host: u32, act_time: u64, now: u64) {
        let tras = self.profile.timing.tras_cycles;
        let rh_inc = self.faults.rh_increment_units(act_time, tras);
        let pg_inc = self.faults.pg_increment_units(act_time, tras);
        let (_, lo, size) = self.geom.subarray_of(agg);
        let hi = lo + size;
        let width = self.geom.width;

        self.cells_mut(bank);
        for bit in 0..width {
            let up = self.geom.partner_side(agg, bit) == xray_core::report::Side::Upper;
            let (rh_victim, pg_victim) =
                if up { (agg + 1, agg.wrapping_sub(1)) } else { (agg.wrapping_sub(1), agg + 1) };
            if rh_victim >= lo && rh_victim < hi {
                self.accumulate(bank, rh_victim, bit, Mechanism::Rh, rh_inc, agg, agg_host, now);
            }
            if pg_victim >= lo && pg_victim < hi {
                self.accumulate(bank, pg_victim, bit, Mechanism::Pg, pg_inc, agg, agg_host, now);
            }
        }
    }

    fn accumulate(
        &mut self,
        bank: u32,
        row: u32,
        bit: u32,
        mech: Mechanism,
        inc: u64,
        agg: u32,
        agg_host: u32,
        now: u64,
    ) {
        let faults = &self.faults;
        let cells = self.cells[bank as usize].as_mut().expect("allocated");
        if cells.flipped(row, bit) {
            return;
        }
        let mut charged = cells.charged(row, bit);
        if charged {
            let deadline = cells.last_restore[row as usize] + faults.retention_cycles(bank, row, bit);
            if now >= deadline {
                cells.set_charge(row, bit, false);
                charged = false;
            }
        }
        let idx = cells.idx(row, bit);
        let flipped = match mech {
            // the shared-region mechanism charges up discharged victims
            Mechanism::Rh if !charged => {
                cells.acc_rh[idx] += inc;
                cells.acc_rh[idx] > faults.rh_threshold_units(bank, row, bit)
            }
            // the passing gate drains charged victims
            Mechanism::Pg if charged => {
                cells.acc_pg[idx] += inc;
                cells.acc_pg[idx] > faults.pg_threshold_units(bank, row, bit)
            }
            _ => false,
        };
        if flipped {
            let discharged = charged;
            cells.set_charge(row, bit, !charged);
            cells.acc_rh[idx] = 0;
            cells.acc_pg[idx] = 0;
            cells.set_flipped(row, bit, true);
            self.log_flip(FlipRecord {
                cycle: now,
                bank,
                aggressor_host_row: agg_host,
                aggressor_internal_row: agg,
                victim_internal_row: row,
                victim_internal_bit: bit,
                discharged,
            });
        }
    }

    fn log_flip(&mut self, rec: FlipRecord) {
        if let Some(log) = &mut self.flip_log {
            if log.len() < FLIP_LOG_CAP {
                log.push(rec);
            }
        }
    }

    fn do_act(&mut self, bank: u32, host_row: u32, now: u64) -> Result<(), ProtocolError> {
        if host_row >= self.geom.rows {
            return Err(ProtocolError::RowOutOfRange { row: host_row, rows: self.geom.rows });
        }
        if let Some(active) = &self.banks[bank as usize].active {
            return Err(ProtocolError::ActWhileActive { bank, active_row: active.host_row });
        }
        let rows = self.activated_rows(host_row);
        for &r in &rows {
            self.sense_row(bank, r, now);
        }
        self.banks[bank as usize].active = Some(ActiveRows { host_row, rows, act_cycle: now });
        Ok(())
    }

    fn do_pre(&mut self, bank: u32, now: u64) -> Result<bool, ProtocolError> {
        let active = self.banks[bank as usize]
            .active
            .take()
            .ok_or(ProtocolError::BankIdle { kind: "PRE", bank })?;
        let act_time = now - active.act_cycle;
        let violation = act_time < self.profile.timing.tras_cycles;
        for &row in &active.rows {
            let (sub, _, _) = self.geom.subarray_of(row);
            let width = self.geom.width;
            for bit in 0..width {
                let id = self.geom.strip_of(sub, bit) as usize;
                let strip = &mut self.strips[bank as usize][id];
                strip.valid_until = now + self.copy_window;
            }
        }
        for &row in &active.rows {
            self.disturb_once(bank, row, active.host_row, act_time, now);
        }
        Ok(violation)
    }

    fn do_rd(&mut self, bank: u32) -> Result<Payload, ProtocolError> {
        let row = self.banks[bank as usize]
            .active
            .as_ref()
            .ok_or(ProtocolError::BankIdle { kind: "RD", bank })?
            .rows[0];
        let (sub, _, _) = self.geom.subarray_of(row);
        let anti = self.anti(sub);
        let width = self.geom.width;
        let cells = self.cells[bank as usize].as_ref().expect("active row has cells");
        let dq = &self.profile.remap.dq_permutation;
        let mut host = Payload::zero(width);
        for bit in 0..width {
            let value = cells.charged(row, bit) ^ anti;
            host.set(dq.to_host_bit(bit), value);
        }
        Ok(host)
    }

    fn do_wr(&mut self, bank: u32, payload: &Payload, now: u64) -> Result<(), ProtocolError> {
        let width = self.geom.width;
        if payload.width() != width {
            return Err(ProtocolError::PayloadWidth { got: payload.width(), want: width });
        }
        let rows = {
            let active = self.banks[bank as usize]
                .active
                .as_ref()
                .ok_or(ProtocolError::BankIdle { kind: "WR", bank })?;
            active.rows.clone()
        };
        for row in rows {
            let (sub, _, _) = self.geom.subarray_of(row);
            let anti = self.anti(sub);
            let geom = &self.geom;
            let dq = &self.profile.remap.dq_permutation;
            let cells = self.cells[bank as usize].as_mut().expect("active row has cells");
            for bit in 0..width {
                let value = payload.get(dq.to_host_bit(bit));
                cells.set_charge(row, bit, value ^ anti);
                cells.reset_cell(row, bit);
            }
            cells.last_restore[row as usize] = now;
            let strips = &mut self.strips[bank as usize];
            for bit in 0..width {
                let charged = self.cells[bank as usize].as_ref().unwrap().charged(row, bit);
                strips[geom.strip_of(sub, bit) as usize].set(bit, charged);
            }
        }
        Ok(())
    }

    fn do_ref(&mut self, now: u64) -> Result<(), ProtocolError> {
        for (i, bank) in self.banks.iter().enumerate() {
            if bank.active.is_some() {
                return Err(ProtocolError::RefWhileActive { bank: i as u32 });
            }
        }
        let rows = self.geom.rows;
        let group_rows = (rows / REF_GROUPS).max(1);
        let start = (self.ref_group % REF_GROUPS) * group_rows;
        self.ref_group = (self.ref_group + 1) % REF_GROUPS;
        for bank in 0..self.profile.num_banks {
            self.cells_mut(bank);
            for row in start..(start + group_rows).min(rows) {
                self.refresh_row(bank, row, now);
                if let Some(stride) = self.profile.coupled_row_stride {
                    self.refresh_row(bank, (row + stride) % rows, now);
                }
            }
        }
        Ok(())
    }

    /// Sense-and-restore without touching the strips: decayed cells stay
    /// lost, everything else is restored and its retention deadline re-arms.
    fn refresh_row(&mut self, bank: u32, row: u32, now: u64) {
        let width = self.geom.width;
        let faults = &self.faults;
        let cells = self.cells[bank as usize].as_mut().expect("allocated");
        for bit in 0..width {
            if cells.charged(row, bit) {
                let deadline =
                    cells.last_restore[row as usize] + faults.retention_cycles(bank, row, bit);
                if now >= deadline {
                    cells.set_charge(row, bit, false);
                }
            }
            cells.reset_cell(row, bit);
        }
        cells.last_restore[row as usize] = now;
    }

    /// Harness-side accumulator inspection (shared-region, passing-gate) in
    /// fixed-point units; zero when the bank was never touched.
    pub fn inspect_accumulators(&self, bank: u32, internal_row: u32, bit: u32) -> (u64, u64) {
        match &self.cells[bank as usize] {
            Some(cells) => {
                let idx = cells.idx(internal_row, bit);
                (cells.acc_rh[idx], cells.acc_pg[idx])
            }
            None => (0, 0),
        }
    }

    /// Harness-side raw charge inspection, ignoring pending decay.
    pub fn inspect_charged(&self, bank: u32, internal_row: u32, bit: u32) -> bool {
        self.cells[bank as usize].as_ref().is_some_and(|c| c.charged(internal_row, bit))
    }

    /// Harness-side sticky-flip inspection.
    pub fn inspect_flipped(&self, bank: u32, internal_row: u32, bit: u32) -> bool {
        self.cells[bank as usize].as_ref().is_some_and(|c| c.flipped(internal_row, bit))
    }

    /// Harness-side view of a host row at the current cycle, without issuing
    /// commands or disturbing state (beyond materializing due decay).
    pub fn peek_host_row(&mut self, bank: u32, host_row: u32) -> Payload {
        let now = self.clock;
        let row = self.profile.remap.host_to_internal(host_row, self.geom.rows);
        let (sub, _, _) = self.geom.subarray_of(row);
        let anti = self.anti(sub);
        let width = self.geom.width;
        self.cells_mut(bank);
        let faults = &self.faults;
        let cells = self.cells[bank as usize].as_mut().expect("allocated");
        let dq = &self.profile.remap.dq_permutation;
        let mut host = Payload::zero(width);
        for bit in 0..width {
            let mut charged = cells.charged(row, bit);
            if charged {
                let deadline =
                    cells.last_restore[row as usize] + faults.retention_cycles(bank, row, bit);
                if now >= deadline {
                    cells.set_charge(row, bit, false);
                    charged = false;
                }
            }
            host.set(dq.to_host_bit(bit), charged ^ anti);
        }
        host
    }

    /// Exact count of cycles one hammer iteration occupies, shared by the
    /// batched fast path and the default per-command expansion.
    fn hammer_period(&self, act_cycles: u64) -> u64 {
        act_cycles + self.profile.timing.trp_cycles + 1
    }

    fn batch_victim(
        &mut self,
        bank: u32,
        row: u32,
        bit: u32,
        mech: Mechanism,
        inc: u64,
        count: u64,
        pre0: u64,
        period: u64,
        agg: u32,
        agg_host: u32,
    ) {
        let faults = &self.faults;
        let cells = self.cells[bank as usize].as_mut().expect("allocated");
        if cells.flipped(row, bit) {
            return;
        }
        let idx = cells.idx(row, bit);
        let mut charged = cells.charged(row, bit);
        // cycles before the retention deadline interrupts a charged victim
        let mut charged_cycles = count;
        if charged {
            let deadline = cells.last_restore[row as usize] + faults.retention_cycles(bank, row, bit);
            charged_cycles = if deadline <= pre0 {
                0
            } else {
                (deadline - pre0).div_ceil(period).min(count)
            };
            if charged_cycles == 0 {
                cells.set_charge(row, bit, false);
                charged = false;
            }
        }

        match mech {
            Mechanism::Pg => {
                if !charged {
                    return; // discharged victims never accumulate passing-gate stress
                }
                let window = charged_cycles;
                let thr = faults.pg_threshold_units(bank, row, bit);
                let need = thr.saturating_sub(cells.acc_pg[idx]) / inc + 1;
                if need <= window {
                    let cycle = pre0 + (need - 1) * period;
                    cells.set_charge(row, bit, false);
                    cells.acc_rh[idx] = 0;
                    cells.acc_pg[idx] = 0;
                    cells.set_flipped(row, bit, true);
                    self.log_flip(FlipRecord {
                        cycle,
                        bank,
                        aggressor_host_row: agg_host,
                        aggressor_internal_row: agg,
                        victim_internal_row: row,
                        victim_internal_bit: bit,
                        discharged: true,
                    });
                } else {
                    cells.acc_pg[idx] += window * inc;
                    if charged_cycles < count {
                        cells.set_charge(row, bit, false); // decayed mid-batch
                    }
                }
            }
            Mechanism::Rh => {
                // a charged victim only feeds this mechanism once it decays
                let window = if charged { count - charged_cycles } else { count };
                if window == 0 {
                    return;
                }
                if charged {
                    cells.set_charge(row, bit, false);
                }
                let thr = faults.rh_threshold_units(bank, row, bit);
                let need = thr.saturating_sub(cells.acc_rh[idx]) / inc + 1;
                if need <= window {
                    let cycle = pre0 + (count - window + need - 1) * period;
                    cells.set_charge(row, bit, true);
                    cells.acc_rh[idx] = 0;
                    cells.acc_pg[idx] = 0;
                    cells.set_flipped(row, bit, true);
                    self.log_flip(FlipRecord {
                        cycle,
                        bank,
                        aggressor_host_row: agg_host,
                        aggressor_internal_row: agg,
                        victim_internal_row: row,
                        victim_internal_bit: bit,
                        discharged: false,
                    });
                } else {
                    cells.acc_rh[idx] += window * inc;
                }
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mechanism {
    Rh,
    Pg,
}

/// Coupled activation drives two subarrays at once; their strip sets must
/// be disjoint or the composite would overwrite itself.
fn check_stride_strips(geom: &Geometry, stride: u32) -> Result<(), ProfileError> {
    for k in 0..geom.num_subarrays {
        let (base, _) = geom.subarray_bounds(k);
        let (k2, _, _) = geom.subarray_of((base + stride) % geom.rows);
        for bit in [0, geom.width - 1] {
            for bit2 in [0, geom.width - 1] {
                if geom.strip_of(k, bit) == geom.strip_of(k2, bit2) {
                    return Err(ProfileError::Stride { stride, half: geom.rows / 2 });
                }
            }
        }
    }
    Ok(())
}

impl MemoryCommands for Device {
    fn host_info(&self) -> HostInfo {
        self.profile.host_info()
    }

    fn now(&self) -> u64 {
        self.clock
    }

    fn issue(&mut self, cmd: Command) -> Result<CommandResult, ProtocolError> {
        if cmd.issue_cycle <= self.last_issue || cmd.issue_cycle < self.clock {
            return Err(ProtocolError::NonMonotonicCycle {
                cycle: cmd.issue_cycle,
                last: self.last_issue.max(self.clock),
            });
        }
        if cmd.kind != CommandKind::Ref && cmd.kind != CommandKind::Nop {
            self.check_bank(cmd.bank)?;
        }
        let now = cmd.issue_cycle;
        self.last_issue = now;
        self.clock = now;
        let mut result = CommandResult::default();
        match cmd.kind {
            CommandKind::Act => self.do_act(cmd.bank, cmd.row, now)?,
            CommandKind::Pre => result.restore_violation = self.do_pre(cmd.bank, now)?,
            CommandKind::Rd => result.data = Some(self.do_rd(cmd.bank)?),
            CommandKind::Wr => {
                let payload = cmd.payload.as_ref().expect("WR carries a payload");
                self.do_wr(cmd.bank, payload, now)?;
            }
            CommandKind::Ref => self.do_ref(now)?,
            CommandKind::Nop => {}
        }
        Ok(result)
    }

    fn advance_to(&mut self, cycle: u64) -> Result<(), ProtocolError> {
        if cycle < self.clock {
            return Err(ProtocolError::TimeReversal { target: cycle, current: self.clock });
        }
        self.clock = cycle;
        Ok(())
    }

    /// Closed-form equivalent of `count` ACT/PRE cycles; state-identical to
    /// the default per-command expansion (covered by property tests).
    fn hammer(
        &mut self,
        bank: u32,
        row: u32,
        count: u64,
        act_cycles: u64,
    ) -> Result<(), ProtocolError> {
        self.check_bank(bank)?;
        if row >= self.geom.rows {
            return Err(ProtocolError::RowOutOfRange { row, rows: self.geom.rows });
        }
        if let Some(active) = &self.banks[bank as usize].active {
            return Err(ProtocolError::ActWhileActive { bank, active_row: active.host_row });
        }
        if count == 0 {
            return Ok(());
        }
        let period = self.hammer_period(act_cycles);
        let t0 = self.clock + 1;
        let t_last = t0 + (count - 1) * period;
        let tras = self.profile.timing.tras_cycles;
        let rh_inc = self.faults.rh_increment_units(act_cycles, tras);
        let pg_inc = self.faults.pg_increment_units(act_cycles, tras);

        let rows = self.activated_rows(row);
        for &r in &rows {
            self.sense_row(bank, r, t0);
        }
        for &agg in &rows {
            let (sub, lo, size) = self.geom.subarray_of(agg);
            let hi = lo + size;
            let width = self.geom.width;
            let pre0 = t0 + act_cycles;
            for bit in 0..width {
                let up = self.geom.partner_side(agg, bit) == xray_core::report::Side::Upper;
                let (rh_victim, pg_victim) =
                    if up { (agg + 1, agg.wrapping_sub(1)) } else { (agg.wrapping_sub(1), agg + 1) };
                if rh_victim >= lo && rh_victim < hi {
                    self.batch_victim(
                        bank, rh_victim, bit, Mechanism::Rh, rh_inc, count, pre0, period, agg, row,
                    );
                }
                if pg_victim >= lo && pg_victim < hi {
                    self.batch_victim(
                        bank, pg_victim, bit, Mechanism::Pg, pg_inc, count, pre0, period, agg, row,
                    );
                }
            }
            // the aggressor itself was re-sensed every cycle
            let cells = self.cells[bank as usize].as_mut().expect("allocated");
            cells.last_restore[agg as usize] = t_last;
            for bit in 0..width {
                cells.reset_cell(agg, bit);
            }
            let strips = &mut self.strips[bank as usize];
            for bit in 0..width {
                let id = self.geom.strip_of(sub, bit) as usize;
                strips[id].source_sub = sub;
                strips[id].latched = true;
                strips[id].valid_until = t_last + act_cycles + self.copy_window;
            }
        }
        self.last_issue = t_last + act_cycles;
        self.clock = t_last + act_cycles + self.profile.timing.trp_cycles;
        Ok(())
    }
}

impl FlipWitness for Device {
    fn clear_flip_log(&mut self) {
        self.flip_log = Some(Vec::new());
    }

    fn flip_log_len(&self) -> usize {
        self.flip_log.as_ref().map_or(0, |l| l.len())
    }

    fn view_flips_under(&self, interp: &AddressInterpretation) -> Vec<ApparentFlip> {
        let log = self.flip_log.as_deref().unwrap_or(&[]);
        addrmap::view_under(&self.profile.remap, interp, self.geom.rows, log)
    }
}
