//! Re-expression of recorded flips under a chosen address interpretation.
//!
//! Flip records carry device-internal victim coordinates plus the host row
//! the experimenter actually issued. A host that believes in a remapping
//! layer un-applies it to name the victim; a host that neglects the layer
//! reports raw coordinates (rows) or raw pin positions (bits). Comparing
//! the result against the issued aggressor row reproduces the classic
//! "non-adjacent disturbance" artifact when the register clock driver's
//! inversion is neglected.

use xray_core::iface::{ApparentFlip, FlipRecord};
use xray_core::lens::{AddressInterpretation, RemapConfig};

pub fn apparent_victim_row(
    remap: &RemapConfig,
    interp: &AddressInterpretation,
    rows: u32,
    victim_internal: u32,
) -> u32 {
    let mut r = victim_internal;
    if interp.apply_row_scramble {
        r = remap.row_scramble.invert(r, rows);
    }
    if interp.apply_rcd_inversion && remap.rcd_inverted {
        r = (rows - 1) - r;
    }
    r
}

pub fn apparent_victim_bit(
    remap: &RemapConfig,
    interp: &AddressInterpretation,
    victim_internal_bit: u32,
) -> u32 {
    if interp.apply_dq_permutation {
        victim_internal_bit
    } else {
        // neglecting the shuffle leaves the flip at the pin position it was
        // observed on
        remap.dq_permutation.to_host_bit(victim_internal_bit)
    }
}

pub fn view_under(
    remap: &RemapConfig,
    interp: &AddressInterpretation,
    rows: u32,
    flips: &[FlipRecord],
) -> Vec<ApparentFlip> {
    flips
        .iter()
        .map(|f| ApparentFlip {
            bank: f.bank,
            aggressor_host_row: f.aggressor_host_row,
            victim_row: apparent_victim_row(remap, interp, rows, f.victim_internal_row),
            victim_bit: apparent_victim_bit(remap, interp, f.victim_internal_bit),
        })
        .collect()
}
