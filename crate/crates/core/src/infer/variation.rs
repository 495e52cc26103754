//! Intra- versus inter-chip variation: per-row bit error distributions at a
//! fixed activation count, and the lowest count that produces any flip on
//! each chip.

use rayon::prelude::*;

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::iface::MemoryCommands;
use crate::infer::InferOptions;
use crate::lens::InterpretationLens;
use crate::payload::Payload;
use crate::report::{ChipVariation, FiveNumber, VariationReport};

fn sampled_rows(rows: u32, step: u32) -> Vec<u32> {
    (1..rows - 1).step_by(step.max(1) as usize).collect()
}

/// Double-sided hammer of every sampled row under both fills; per-row error
/// counts summed over the two fills.
fn row_error_counts(
    drv: &mut Driver<'_>,
    bank: u32,
    rows: &[u32],
    count: u64,
) -> Result<Vec<u64>, ProtocolError> {
    let width = drv.width();
    let tras = drv.info().timing.tras_cycles;
    let mut out = Vec::with_capacity(rows.len());
    for &v in rows {
        let mut errors = 0u64;
        for bg in [Payload::ones(width), Payload::zero(width)] {
            drv.write_row(bank, v, &bg)?;
            drv.hammer(bank, v - 1, count, tras)?;
            drv.hammer(bank, v + 1, count, tras)?;
            errors += drv.read_row(bank, v)?.diff_bits(&bg).len() as u64;
        }
        out.push(errors);
    }
    Ok(out)
}

fn any_flip(
    drv: &mut Driver<'_>,
    bank: u32,
    probes: &[u32],
    count: u64,
) -> Result<bool, ProtocolError> {
    let width = drv.width();
    let tras = drv.info().timing.tras_cycles;
    for &v in probes {
        for bg in [Payload::ones(width), Payload::zero(width)] {
            drv.write_row(bank, v, &bg)?;
            drv.hammer(bank, v - 1, count, tras)?;
            drv.hammer(bank, v + 1, count, tras)?;
            if drv.read_row(bank, v)? != bg {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Smallest activation count incurring any bitflip on the probed rows.
fn search_hc_first(
    drv: &mut Driver<'_>,
    bank: u32,
    probes: &[u32],
    ceiling: u64,
) -> Result<Option<u64>, ProtocolError> {
    if !any_flip(drv, bank, probes, ceiling)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1u64, ceiling);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if any_flip(drv, bank, probes, mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Run the fixed-count characterization over `n_chips` independently seeded
/// chips. The factory builds chip `i` fresh; chips shard across workers and
/// the aggregation is index-ordered, so reports do not depend on the worker
/// count.
pub fn variation_stats<F>(
    factory: F,
    n_chips: u32,
    bank: u32,
    opts: &InferOptions,
) -> VariationReport
where
    F: Fn(u32) -> (Box<dyn MemoryCommands + Send>, InterpretationLens, u64) + Sync,
{
    let mut chips: Vec<ChipVariation> = (0..n_chips)
        .into_par_iter()
        .map(|idx| {
            let (mut dev, lens, seed) = factory(idx);
            let mut drv = Driver::new(dev.as_mut(), lens);
            let rows = sampled_rows(drv.rows(), opts.variation_row_step);
            let counts = row_error_counts(&mut drv, bank, &rows, opts.variation_count)
                .expect("variation hammer");
            let mut as_f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            let summary = FiveNumber::of(&mut as_f);
            let probes: Vec<u32> = rows.iter().copied().step_by(4).collect();
            let hc_first = search_hc_first(&mut drv, bank, &probes, opts.hammer_ceiling)
                .expect("hc_first search");
            ChipVariation { chip_index: idx, seed, hc_first, row_errors: summary }
        })
        .collect();
    chips.sort_by_key(|c| c.chip_index);

    let medians: Vec<f64> = chips.iter().map(|c| c.row_errors.median).collect();
    let mean = medians.iter().sum::<f64>() / medians.len() as f64;
    let var = medians.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / medians.len() as f64;
    let inter = var.sqrt();
    let intra = chips.iter().map(|c| c.row_errors.iqr()).sum::<f64>() / chips.len() as f64;
    let ratio = inter / intra.max(1e-9);

    VariationReport {
        chips,
        inter_chip_std_of_medians: inter,
        mean_intra_chip_iqr: intra,
        dispersion_ratio: ratio,
    }
}
