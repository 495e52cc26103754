//! Row-copy classification: a timing-violation copy lands fully inside one
//! subarray, on half the bits across an open-bitline boundary, and not at
//! all across a folded boundary. Fractions trace the boundaries; the bit
//! values reveal whether the datapath inverts cross-subarray copies.

use crate::command::ProtocolError;
use crate::driver::Driver;
use crate::payload::Payload;
use crate::report::{Anomaly, AnomalyKind, Bitline};

#[derive(Debug, Clone)]
pub struct RowCopyScan {
    pub boundaries: Vec<u32>,
    pub bitline: Bitline,
    /// None when no cross-subarray bits ever moved (folded parts).
    pub inversion: Option<bool>,
    pub anomalies: Vec<Anomaly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopyClass {
    Full,
    Half,
    None,
    Odd,
}

pub fn classify_fraction(copied: u32, width: u32) -> CopyClass {
    let f = copied as f64 / width as f64;
    if f >= 0.9 {
        CopyClass::Full
    } else if (0.4..=0.6).contains(&f) {
        CopyClass::Half
    } else if f <= 0.1 {
        CopyClass::None
    } else {
        CopyClass::Odd
    }
}

/// Copy `src` onto `dst` twice with complementary destination fills and
/// count which bits took the source value as-is and which took it inverted.
pub fn probe_copy(
    drv: &mut Driver<'_>,
    bank: u32,
    src: u32,
    dst: u32,
) -> Result<(u32, u32), ProtocolError> {
    let width = drv.width();
    let ones = Payload::ones(width);
    let zeros = Payload::zero(width);

    // src all-ones over dst all-zeros: a changed bit carried the value as-is
    drv.write_row(bank, src, &ones)?;
    drv.write_row(bank, dst, &zeros)?;
    drv.row_copy(bank, src, dst)?;
    let as_is = drv.read_row(bank, dst)?.count_ones();

    // src all-ones over dst all-ones: a changed bit carried the value inverted
    drv.write_row(bank, src, &ones)?;
    drv.write_row(bank, dst, &ones)?;
    drv.row_copy(bank, src, dst)?;
    let inverted = width - drv.read_row(bank, dst)?.count_ones();

    Ok((as_is, inverted))
}

pub fn scan_row_copy(drv: &mut Driver<'_>, bank: u32) -> Result<RowCopyScan, ProtocolError> {
    let rows = drv.rows();
    let width = drv.width();
    let mut boundaries = Vec::new();
    let mut anomalies = Vec::new();
    let mut half_seen = false;
    let mut cross_as_is = 0u64;
    let mut cross_inverted = 0u64;

    for r in 0..rows - 1 {
        let (as_is, inverted) = probe_copy(drv, bank, r, r + 1)?;
        match classify_fraction(as_is + inverted, width) {
            CopyClass::Full => {}
            CopyClass::Half => {
                half_seen = true;
                cross_as_is += as_is as u64;
                cross_inverted += inverted as u64;
                boundaries.push(r + 1);
            }
            CopyClass::None => boundaries.push(r + 1),
            CopyClass::Odd => {
                anomalies.push(Anomaly {
                    kind: AnomalyKind::CopyFraction,
                    bank,
                    detail: format!(
                        "copy {r}->{}: {} of {width} bits moved (expected ~0, ~W/2 or ~W)",
                        r + 1,
                        as_is + inverted
                    ),
                });
                boundaries.push(r + 1);
            }
        }
    }

    let bitline = if half_seen { Bitline::Open } else { Bitline::Folded };
    let inversion = if cross_as_is + cross_inverted == 0 {
        None
    } else {
        Some(cross_inverted > cross_as_is)
    };
    Ok(RowCopyScan { boundaries, bitline, inversion, anomalies })
}
