//! Coupled-row detection: on affected parts a single activation opens two
//! rows at a fixed stride. A row copy sourced at `i` then lands at both the
//! destination and the destination's coupled partner, which is detectable
//! with sentinel fills.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::payload::Payload;
use crate::report::{Anomaly, AnomalyKind};

fn subarray_span(boundaries: &[u32], rows: u32, row: u32) -> (u32, u32) {
    let mut lo = 0u32;
    let mut hi = rows;
    for &b in boundaries {
        if b <= row {
            lo = b;
        } else {
            hi = b;
            break;
        }
    }
    (lo, hi)
}

fn same_subarray_pair(boundaries: &[u32], rows: u32, row: u32) -> bool {
    let (lo, hi) = subarray_span(boundaries, rows, row);
    row >= lo && row + 1 < hi
}

pub fn detect_coupled_rows(
    drv: &mut Driver<'_>,
    bank: u32,
    boundaries: &[u32],
) -> Result<(Option<u32>, Vec<Anomaly>), ProtocolError> {
    let rows = drv.rows();
    let width = drv.width();
    let fill_a = Payload::from_fn(width, |b| b % 2 == 0);
    let fill_b = Payload::from_fn(width, |b| b % 4 < 2);
    let fill_c = Payload::from_fn(width, |b| b % 8 < 4);
    let fill_d = Payload::from_fn(width, |b| b % 3 == 0);

    let mut candidates = vec![rows / 2];
    for s in [rows / 4, rows / 8] {
        if s >= 4 {
            candidates.push(s);
        }
    }

    let mut confirmed = Vec::new();
    for &stride in &candidates {
        // an anchor whose pair and whose stride-partner's pair both sit
        // inside one subarray
        let mut anchor = None;
        let mut starts = vec![0u32];
        starts.extend_from_slice(boundaries);
        for &lo in &starts {
            let (a, b) = subarray_span(boundaries, rows, lo);
            let mid = a + (b - a) / 2;
            if mid + stride + 1 < rows
                && same_subarray_pair(boundaries, rows, mid)
                && same_subarray_pair(boundaries, rows, mid + stride)
            {
                anchor = Some(mid);
                break;
            }
        }
        let i = match anchor {
            Some(i) => i,
            None => continue,
        };

        drv.write_row(bank, i, &fill_a)?;
        drv.write_row(bank, i + stride, &fill_b)?;
        drv.write_row(bank, i + 1, &fill_c)?;
        drv.write_row(bank, i + stride + 1, &fill_d)?;
        drv.row_copy(bank, i, i + 1)?;
        if drv.read_row(bank, i + stride + 1)? != fill_d {
            confirmed.push(stride);
        }
    }

    let mut anomalies = Vec::new();
    if confirmed.len() > 1 {
        anomalies.push(Anomaly {
            kind: AnomalyKind::MultipleStrides,
            bank,
            detail: format!("strides {confirmed:?} all showed coupled activation"),
        });
    }
    Ok((confirmed.first().copied(), anomalies))
}
