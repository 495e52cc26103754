//! Worst-case aggressor pattern recovery. Each victim bit is vulnerable to
//! exactly one neighbor side per data state; single-sided hammering against
//! charged and discharged backgrounds assigns the effective side per bit and
//! row parity, and the bit-index period of the assignment exposes the
//! device's internal serialization.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::infer::InferOptions;
use crate::payload::Payload;
use crate::report::{AggressorPatterns, Polarity, Side, SideMap};

/// Host payload that puts every cell of the row into the requested charge
/// state, given the row's cell polarity.
pub fn fill_for_charge(width: u32, polarity: Polarity, charged: bool) -> Payload {
    let bit = match polarity {
        Polarity::True => charged,
        Polarity::Anti => !charged,
    };
    if bit {
        Payload::ones(width)
    } else {
        Payload::zero(width)
    }
}

fn subarray_of(boundaries: &[u32], rows: u32, row: u32) -> (usize, u32, u32) {
    let mut starts = vec![0u32];
    starts.extend_from_slice(boundaries);
    starts.push(rows);
    for (i, w) in starts.windows(2).enumerate() {
        if row >= w[0] && row < w[1] {
            return (i, w[0], w[1]);
        }
    }
    unreachable!("row in range");
}

/// Victim rows with both neighbors inside the same subarray, `per_parity`
/// of each row parity, spread across the bank.
fn sample_victims(boundaries: &[u32], rows: u32, per_parity: u32) -> Vec<u32> {
    let mut victims = Vec::new();
    for parity in 0..2u32 {
        let mut picked = 0;
        let step = (rows / (per_parity + 1)).max(2);
        let mut r = 2 + parity;
        while picked < per_parity && r + 1 < rows {
            let (_, lo, hi) = subarray_of(boundaries, rows, r);
            if r > lo && r + 1 < hi {
                victims.push(r);
                picked += 1;
                r += step - step % 2;
            } else {
                r += 2;
            }
        }
    }
    victims
}

pub fn discover_aggressor_patterns(
    drv: &mut Driver<'_>,
    bank: u32,
    boundaries: &[u32],
    polarity: &[Polarity],
    opts: &InferOptions,
) -> Result<AggressorPatterns, ProtocolError> {
    let rows = drv.rows();
    let width = drv.width() as usize;
    let tras = drv.info().timing.tras_cycles;
    let victims = sample_victims(boundaries, rows, opts.pattern_rows_per_parity);

    // hit[charged][parity][side][bit]
    let mut hit = vec![vec![[[false; 2]; 2]; width]; 2];

    for &v in &victims {
        let (sub, _, _) = subarray_of(boundaries, rows, v);
        let pol = polarity.get(sub).copied().unwrap_or(Polarity::True);
        for (ci, charged) in [(0usize, false), (1usize, true)] {
            let bg = fill_for_charge(width as u32, pol, charged);
            for (si, agg) in [(0usize, v - 1), (1usize, v + 1)] {
                drv.write_row(bank, v, &bg)?;
                drv.hammer(bank, agg, opts.hammer_ceiling, tras)?;
                let data = drv.read_row(bank, v)?;
                for b in data.diff_bits(&bg) {
                    hit[ci][b as usize][(v % 2) as usize][si] = true;
                }
            }
        }
    }

    let map_for = |ci: usize, parity: usize| -> Vec<Option<Side>> {
        (0..width)
            .map(|b| match hit[ci][b][parity] {
                [true, false] => Some(Side::Lower),
                [false, true] => Some(Side::Upper),
                _ => None,
            })
            .collect()
    };

    let eff_charge = SideMap { even_row: map_for(1, 0), odd_row: map_for(1, 1) };
    let eff_discharge = SideMap { even_row: map_for(0, 0), odd_row: map_for(0, 1) };

    let serialization_period = detect_period_joint(&eff_charge, &eff_discharge);
    Ok(AggressorPatterns { eff_charge, eff_discharge, serialization_period })
}

/// Smallest period consistent with all four recovered side maps.
fn detect_period_joint(charge: &SideMap, discharge: &SideMap) -> Option<u8> {
    let maps = [&charge.even_row, &charge.odd_row, &discharge.even_row, &discharge.odd_row];
    'cand: for &p in &[2u8, 4, 8] {
        for map in maps {
            for i in 0..map.len().saturating_sub(p as usize) {
                if let (Some(a), Some(b)) = (map[i], map[i + p as usize]) {
                    if a != b {
                        continue 'cand;
                    }
                }
            }
        }
        // reject periods that never see a resolved pair
        let resolved = maps.iter().any(|m| {
            (0..m.len().saturating_sub(p as usize)).any(|i| m[i].is_some() && m[i + p as usize].is_some())
        });
        if resolved {
            return Some(p);
        }
    }
    None
}
