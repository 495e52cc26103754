//! True-/anti-cell discovery through retention failures: with refresh
//! withheld, charged cells leak. Rows that lose written 1s store 1 charged
//! (true cells); rows that lose written 0s store 0 charged (anti cells).
//! Polarity transitions are boundary candidates.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::payload::Payload;
use crate::report::{Anomaly, AnomalyKind, Polarity};

#[derive(Debug, Clone)]
pub struct RetentionScan {
    pub polarity_by_row: Vec<Option<Polarity>>,
    pub polarity_by_subarray: Vec<Polarity>,
    pub boundary_candidates: Vec<u32>,
    pub anomalies: Vec<Anomaly>,
}

/// Decay fractions per row after writing `fill` everywhere and waiting.
fn decay_pass(
    drv: &mut Driver<'_>,
    bank: u32,
    fill: &Payload,
    wait_cycles: u64,
) -> Result<Vec<f64>, ProtocolError> {
    let rows = drv.rows();
    let width = drv.width() as f64;
    for r in 0..rows {
        drv.write_row(bank, r, fill)?;
    }
    drv.wait(wait_cycles)?;
    let mut fracs = Vec::with_capacity(rows as usize);
    for r in 0..rows {
        let data = drv.read_row(bank, r)?;
        fracs.push(data.diff_bits(fill).len() as f64 / width);
    }
    Ok(fracs)
}

/// Every row either clearly decayed or clearly held its data.
fn confident(fracs: &[f64]) -> bool {
    fracs.iter().all(|&f| f <= 0.05 || f >= 0.5)
}

pub fn find_true_anti(
    drv: &mut Driver<'_>,
    bank: u32,
    boundaries: &[u32],
) -> Result<RetentionScan, ProtocolError> {
    let rows = drv.rows() as usize;
    let width = drv.width();
    let trefw = drv.info().timing.trefw_cycles;
    let mut anomalies = Vec::new();

    let mut passes: Option<(Vec<f64>, Vec<f64>)> = None;
    for mult in [4u64, 16, 64] {
        let wait = trefw * mult;
        let ones = decay_pass(drv, bank, &Payload::ones(width), wait)?;
        let zeros = decay_pass(drv, bank, &Payload::zero(width), wait)?;
        let any_decay = ones.iter().chain(zeros.iter()).any(|&f| f > 0.0);
        if any_decay && confident(&ones) && confident(&zeros) {
            passes = Some((ones, zeros));
            break;
        }
        log::debug!("retention wait {mult}x tREFW inconclusive, escalating");
    }

    let (ones, zeros) = match passes {
        Some(p) => p,
        None => {
            anomalies.push(Anomaly {
                kind: AnomalyKind::RetentionNoDecay,
                bank,
                detail: "no conclusive retention decay up to 64x tREFW".into(),
            });
            return Ok(RetentionScan {
                polarity_by_row: vec![None; rows],
                polarity_by_subarray: Vec::new(),
                boundary_candidates: Vec::new(),
                anomalies,
            });
        }
    };

    let polarity_by_row: Vec<Option<Polarity>> = (0..rows)
        .map(|r| match (ones[r] >= 0.5, zeros[r] >= 0.5) {
            (true, false) => Some(Polarity::True),
            (false, true) => Some(Polarity::Anti),
            _ => None,
        })
        .collect();

    let boundary_candidates: Vec<u32> = (1..rows)
        .filter(|&r| {
            matches!((polarity_by_row[r - 1], polarity_by_row[r]), (Some(a), Some(b)) if a != b)
        })
        .map(|r| r as u32)
        .collect();

    // majority polarity per subarray from the boundary list
    let mut starts = vec![0u32];
    starts.extend_from_slice(boundaries);
    starts.push(rows as u32);
    let mut polarity_by_subarray = Vec::with_capacity(starts.len() - 1);
    for w in starts.windows(2) {
        let (lo, hi) = (w[0] as usize, w[1] as usize);
        let t = polarity_by_row[lo..hi].iter().filter(|p| **p == Some(Polarity::True)).count();
        let a = polarity_by_row[lo..hi].iter().filter(|p| **p == Some(Polarity::Anti)).count();
        polarity_by_subarray.push(if t >= a { Polarity::True } else { Polarity::Anti });
    }

    Ok(RetentionScan { polarity_by_row, polarity_by_subarray, boundary_candidates, anomalies })
}
