//! Activation-count calibration: double from the starting count until
//! disturbance flips appear on a set of probe rows, so the scans that follow
//! work on any reasonably parameterized part.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::infer::InferOptions;
use crate::payload::Payload;

/// Fixed probe offsets, spread over the bank and covering both parities.
fn probe_rows(rows: u32) -> Vec<u32> {
    let picks = [rows / 5, rows / 3, rows / 2 + 1, (2 * rows) / 3, rows - rows / 5];
    let mut v: Vec<u32> = picks.iter().map(|&r| r.clamp(2, rows - 3)).collect();
    v.dedup();
    v
}

pub fn calibrate_hammer(
    drv: &mut Driver<'_>,
    bank: u32,
    opts: &InferOptions,
) -> Result<u64, ProtocolError> {
    let width = drv.width();
    let tras = drv.info().timing.tras_cycles;
    let probes = probe_rows(drv.rows());
    let mut count = opts.hammer_start;
    loop {
        let mut all_hit = true;
        for &victim in &probes {
            let mut hit = false;
            'bg: for bg in [Payload::zero(width), Payload::ones(width)] {
                for agg in [victim - 1, victim + 1] {
                    drv.write_row(bank, victim, &bg)?;
                    drv.hammer(bank, agg, count, tras)?;
                    if drv.read_row(bank, victim)? != bg {
                        hit = true;
                        break 'bg;
                    }
                }
            }
            if !hit {
                all_hit = false;
                break;
            }
        }
        if all_hit || count >= opts.hammer_ceiling {
            return Ok(count.min(opts.hammer_ceiling));
        }
        count = (count * 2).min(opts.hammer_ceiling);
    }
}
