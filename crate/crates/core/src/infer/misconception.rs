//! Reproduction of the "non-adjacent disturbance" misreading: hammer rows,
//! then label the recorded victims the way a host holding a given address
//! interpretation would. Neglecting the register clock driver's address
//! inversion turns physically adjacent victims into apparently distant ones.

use std::collections::BTreeMap;

use crate::command::ProtocolError;
use crate::iface::FlipWitness;
use crate::infer::InferOptions;
use crate::lens::AddressInterpretation;
use crate::payload::Payload;
use crate::report::MisconceptionReport;

pub fn misconception_demo<D: FlipWitness + ?Sized>(
    dev: &mut D,
    bank: u32,
    interp: AddressInterpretation,
    opts: &InferOptions,
) -> Result<MisconceptionReport, ProtocolError> {
    let info = dev.host_info();
    let rows = info.rows_per_bank;
    let width = info.row_width_bits;
    let tras = info.timing.tras_cycles;

    let step = (rows / (opts.misconception_rows + 1)).max(1);
    let aggressors: Vec<u32> =
        (1..opts.misconception_rows + 1).map(|i| (i * step).clamp(2, rows - 3)).collect();

    dev.clear_flip_log();
    for fill in [Payload::ones(width), Payload::zero(width)] {
        // background everywhere so every potential victim holds known data
        for r in 0..rows {
            let t = dev.now() + 1;
            dev.issue(crate::command::Command::act(t, bank, r))?;
            dev.issue(crate::command::Command::wr(t + info.timing.trcd_cycles, bank, fill.clone()))?;
            dev.issue(crate::command::Command::pre(t + info.timing.tras_cycles, bank))?;
            dev.advance_to(t + info.timing.tras_cycles + info.timing.trp_cycles)?;
        }
        for &a in &aggressors {
            dev.hammer(bank, a, opts.hammer_ceiling, tras)?;
        }
    }

    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    for flip in dev.view_flips_under(&interp) {
        let d = flip.victim_row.abs_diff(flip.aggressor_host_row);
        *histogram.entry(d).or_insert(0) += 1;
    }

    Ok(MisconceptionReport { interpretation: interp, histogram: histogram.into_iter().collect() })
}
