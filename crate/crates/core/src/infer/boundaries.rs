//! Subarray boundary discovery from activate-induced bitflips: sense
//! amplifiers isolate subarrays, so a row at a boundary is disturbed from
//! one neighbor only.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::infer::InferOptions;
use crate::payload::Payload;
use crate::report::{Anomaly, AnomalyKind};

#[derive(Debug, Clone)]
pub struct BoundaryScan {
    /// Interior subarray start rows, ascending.
    pub boundaries: Vec<u32>,
    /// Rows no aggressor could flip at the count ceiling.
    pub undecided: Vec<u32>,
    pub calibrated_count: u64,
    pub anomalies: Vec<Anomaly>,
}

/// Hammer `aggressor` and report whether `victim` flipped under either data
/// background. Escalates to the ceiling before giving up on a side.
fn side_flips(
    drv: &mut Driver<'_>,
    bank: u32,
    victim: u32,
    aggressor: u32,
    count: u64,
    ceiling: u64,
) -> Result<bool, ProtocolError> {
    let width = drv.width();
    let tras = drv.info().timing.tras_cycles;
    for c in [count, ceiling] {
        for bg in [Payload::zero(width), Payload::ones(width)] {
            drv.write_row(bank, victim, &bg)?;
            drv.hammer(bank, aggressor, c, tras)?;
            if drv.read_row(bank, victim)? != bg {
                return Ok(true);
            }
        }
        if count == ceiling {
            break;
        }
    }
    Ok(false)
}

pub fn find_boundaries_aib(
    drv: &mut Driver<'_>,
    bank: u32,
    calibrated_count: u64,
    opts: &InferOptions,
) -> Result<BoundaryScan, ProtocolError> {
    let rows = drv.rows();
    let mut boundaries = Vec::new();
    let mut undecided = Vec::new();
    for r in 0..rows {
        let from_lower = if r > 0 {
            side_flips(drv, bank, r, r - 1, calibrated_count, opts.hammer_ceiling)?
        } else {
            false
        };
        let from_upper = if r + 1 < rows {
            side_flips(drv, bank, r, r + 1, calibrated_count, opts.hammer_ceiling)?
        } else {
            false
        };
        if !from_lower && !from_upper {
            undecided.push(r);
        } else if r > 0 && from_upper && !from_lower {
            boundaries.push(r);
        }
    }
    let mut anomalies = Vec::new();
    if !undecided.is_empty() {
        anomalies.push(Anomaly {
            kind: AnomalyKind::UndecidedRows,
            bank,
            detail: format!(
                "{} rows produced no flips from either side at count {}",
                undecided.len(),
                opts.hammer_ceiling
            ),
        });
    }
    Ok(BoundaryScan { boundaries, undecided, calibrated_count, anomalies })
}
