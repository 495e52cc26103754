//! Edge-subarray pairing: within each period group the outward bitline
//! halves of the first and last subarrays terminate in the same sense
//! amplifiers, so a row copy between the two ends of a group moves data
//! despite the large address distance.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::infer::rowcopy::{classify_fraction, probe_copy, CopyClass};
use crate::report::{Anomaly, AnomalyKind, Bitline};

fn subarray_ordinal(boundaries: &[u32], row: u32) -> u32 {
    boundaries.iter().take_while(|&&b| b <= row).count() as u32
}

pub fn detect_edge_pairs(
    drv: &mut Driver<'_>,
    bank: u32,
    boundaries: &[u32],
    bitline: Bitline,
) -> Result<(Option<u32>, Vec<(u32, u32)>, Vec<Anomaly>), ProtocolError> {
    if bitline == Bitline::Folded {
        return Ok((None, Vec::new(), Vec::new()));
    }
    let rows = drv.rows();
    let width = drv.width();

    let mut confirmed = None;
    'cand: for &period in &[rows / 8, rows / 4, rows / 2] {
        if period < 2 {
            continue;
        }
        // group edges must fall on subarray boundaries
        for g in 1..rows / period {
            if !boundaries.contains(&(g * period)) {
                continue 'cand;
            }
        }
        let groups = (rows / period).min(2);
        for g in 0..groups {
            let src = g * period;
            let dst = g * period + period - 1;
            let src_sub = subarray_ordinal(boundaries, src);
            let dst_sub = subarray_ordinal(boundaries, dst);
            if src_sub == dst_sub {
                continue 'cand;
            }
            let (as_is, inverted) = probe_copy(drv, bank, src, dst)?;
            let class = classify_fraction(as_is + inverted, width);
            // a group of two subarrays is fed through both its strips, so
            // the end-to-end copy comes back full rather than half
            let expected = if dst_sub - src_sub >= 2 { CopyClass::Half } else { CopyClass::Full };
            if class != expected {
                continue 'cand;
            }
        }
        confirmed = Some(period);
        break;
    }

    match confirmed {
        Some(period) => {
            let mut pairs = Vec::new();
            for g in 0..rows / period {
                let first = subarray_ordinal(boundaries, g * period);
                let last = subarray_ordinal(boundaries, g * period + period - 1);
                pairs.push((first, last));
            }
            Ok((Some(period), pairs, Vec::new()))
        }
        None => Ok((
            None,
            Vec::new(),
            vec![Anomaly {
                kind: AnomalyKind::NoEdgePeriod,
                bank,
                detail: "no candidate period produced the paired-edge copy signature".into(),
            }],
        )),
    }
}
