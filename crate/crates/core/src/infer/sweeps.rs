//! Sensitivity sweeps: apply a composite aggressor pattern (double-sided
//! hammering against the matching victim data state) over a grid of
//! activation counts or activated times, and report per-row bit error rates
//! normalized to the first grid point.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::infer::patterns::fill_for_charge;
use crate::infer::InferOptions;
use crate::report::{PatternKind, Polarity, StructuralReport, SweepAxis, SweepPoint, SweepTable};

fn subarray_polarity(structure: &StructuralReport, row: u32) -> Polarity {
    let ord = structure.boundaries.iter().take_while(|&&b| b <= row).count();
    structure.polarity.get(ord).copied().unwrap_or(Polarity::True)
}

/// Interior victim rows with both neighbors in-subarray, spread evenly.
fn sample_victims(structure: &StructuralReport, want: u32) -> Vec<u32> {
    let rows = structure.rows_per_bank;
    let mut starts = vec![0u32];
    starts.extend_from_slice(&structure.boundaries);
    starts.push(rows);
    let mut victims = Vec::new();
    let step = (rows / (want + 1)).max(1);
    let mut r = 1u32;
    while victims.len() < want as usize && r + 1 < rows {
        let in_interior = starts.windows(2).any(|w| r > w[0] && r + 1 < w[1]);
        if in_interior {
            victims.push(r);
            r += step;
        } else {
            r += 1;
        }
    }
    victims
}

pub fn sweep_sensitivity(
    drv: &mut Driver<'_>,
    bank: u32,
    pattern: PatternKind,
    axis: SweepAxis,
    structure: &StructuralReport,
    _patterns: &crate::report::AggressorPatterns,
    opts: &InferOptions,
) -> Result<SweepTable, ProtocolError> {
    let width = drv.width();
    let tm = drv.info().timing;
    let victims = sample_victims(structure, opts.sweep_rows);
    let charged = pattern == PatternKind::EffCharge;

    let grid: Vec<(f64, u64, u64)> = match axis {
        SweepAxis::ActCount => opts
            .sweep_count_grid
            .iter()
            .map(|&c| (c as f64, c, tm.tras_cycles))
            .collect(),
        SweepAxis::ActTime => opts
            .sweep_time_ns
            .iter()
            .map(|&ns| (ns, opts.variation_count, (ns / tm.tck_ns).round() as u64))
            .collect(),
    };

    let mut points = Vec::with_capacity(grid.len());
    let mut first_flips = 0u64;
    for (idx, &(axis_value, count, act_cycles)) in grid.iter().enumerate() {
        let mut flips = 0u64;
        for &v in &victims {
            let bg = fill_for_charge(width, subarray_polarity(structure, v), charged);
            drv.write_row(bank, v, &bg)?;
            drv.hammer(bank, v - 1, count, act_cycles)?;
            drv.hammer(bank, v + 1, count, act_cycles)?;
            flips += drv.read_row(bank, v)?.diff_bits(&bg).len() as u64;
        }
        if idx == 0 {
            first_flips = flips;
        }
        let relative_ber = if idx == 0 {
            1.0
        } else {
            flips as f64 / first_flips.max(1) as f64
        };
        points.push(SweepPoint { axis_value, flips, relative_ber });
    }

    Ok(SweepTable { axis, pattern, points })
}
