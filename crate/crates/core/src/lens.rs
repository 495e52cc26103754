//! Address interpretation: which remapping layers a host believes exist
//! between its addresses/data and the device's internal rows/columns.
//!
//! The layer descriptors themselves are board-level wiring facts (register
//! clock driver inversion, DIMM DQ shuffling, decoder scramble). A host that
//! knows them can compensate on the command path; a host that neglects one
//! reproduces the classic misinterpretations.

use serde::{Deserialize, Serialize};

/// Which layers the host compensates for. All-true is the correct view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddressInterpretation {
    pub apply_rcd_inversion: bool,
    pub apply_row_scramble: bool,
    pub apply_dq_permutation: bool,
}

impl AddressInterpretation {
    pub fn correct() -> Self {
        AddressInterpretation {
            apply_rcd_inversion: true,
            apply_row_scramble: true,
            apply_dq_permutation: true,
        }
    }

    pub fn naive() -> Self {
        AddressInterpretation {
            apply_rcd_inversion: false,
            apply_row_scramble: false,
            apply_dq_permutation: false,
        }
    }
}

/// Row-decoder scramble descriptor. XOR with a mask keeps the map an
/// involution; the identity is the common case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RowScramble {
    #[serde(rename = "IDENTITY")]
    Identity,
    #[serde(rename = "XOR_MASK")]
    XorMask { mask: u32 },
}

impl RowScramble {
    pub fn apply(&self, row: u32, rows: u32) -> u32 {
        match self {
            RowScramble::Identity => row,
            RowScramble::XorMask { mask } => (row ^ mask) % rows,
        }
    }

    /// XOR masks are involutions, so forward and inverse coincide.
    pub fn invert(&self, row: u32, rows: u32) -> u32 {
        self.apply(row, rows)
    }
}

/// DQ pin shuffle: `map[internal_bit] = host_bit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DqPermutation {
    #[serde(rename = "IDENTITY")]
    Identity,
    #[serde(rename = "EXPLICIT")]
    Explicit { map: Vec<u32> },
}

impl DqPermutation {
    pub fn to_host_bit(&self, internal_bit: u32) -> u32 {
        match self {
            DqPermutation::Identity => internal_bit,
            DqPermutation::Explicit { map } => map[internal_bit as usize],
        }
    }

    pub fn to_internal_bit(&self, host_bit: u32) -> u32 {
        match self {
            DqPermutation::Identity => host_bit,
            DqPermutation::Explicit { map } => {
                map.iter().position(|&h| h == host_bit).expect("bijective dq map") as u32
            }
        }
    }

    pub fn is_bijection(&self, width: u32) -> bool {
        match self {
            DqPermutation::Identity => true,
            DqPermutation::Explicit { map } => {
                if map.len() != width as usize {
                    return false;
                }
                let mut seen = vec![false; width as usize];
                for &h in map {
                    if h >= width || seen[h as usize] {
                        return false;
                    }
                    seen[h as usize] = true;
                }
                true
            }
        }
    }
}

/// The full remap record of one chip: RCD address inversion (modeled as a
/// bitwise complement of the row address, optionally restricted by a mask),
/// decoder scramble, DQ shuffle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemapConfig {
    pub rcd_inverted: bool,
    pub row_scramble: RowScramble,
    pub dq_permutation: DqPermutation,
}

impl RemapConfig {
    pub fn identity() -> Self {
        RemapConfig {
            rcd_inverted: false,
            row_scramble: RowScramble::Identity,
            dq_permutation: DqPermutation::Identity,
        }
    }

    fn invert_row(&self, row: u32, rows: u32) -> u32 {
        if self.rcd_inverted {
            // full bitwise complement within the row address width
            (rows - 1) - row
        } else {
            row
        }
    }

    /// host row -> internal row: scramble(invert(host)).
    pub fn host_to_internal(&self, host_row: u32, rows: u32) -> u32 {
        self.row_scramble.apply(self.invert_row(host_row, rows), rows)
    }

    /// internal row -> host row.
    pub fn internal_to_host(&self, internal_row: u32, rows: u32) -> u32 {
        self.invert_row(self.row_scramble.invert(internal_row, rows), rows)
    }
}

/// A host-side view combining the wiring facts with the subset of layers the
/// host chooses to believe. The discovery engine addresses rows and bits in
/// "logical" coordinates; under the correct interpretation those coincide
/// with the device's internal coordinates.
#[derive(Debug, Clone)]
pub struct InterpretationLens {
    pub interp: AddressInterpretation,
    pub remap: RemapConfig,
    pub rows: u32,
    pub width: u32,
}

impl InterpretationLens {
    pub fn new(interp: AddressInterpretation, remap: RemapConfig, rows: u32, width: u32) -> Self {
        InterpretationLens { interp, remap, rows, width }
    }

    pub fn identity(rows: u32, width: u32) -> Self {
        InterpretationLens::new(AddressInterpretation::naive(), RemapConfig::identity(), rows, width)
    }

    /// The host row to issue so that the believed layers land on logical
    /// row `logical`.
    pub fn issue_row(&self, logical: u32) -> u32 {
        let mut r = logical;
        if self.interp.apply_row_scramble {
            r = self.remap.row_scramble.invert(r, self.rows);
        }
        if self.interp.apply_rcd_inversion && self.remap.rcd_inverted {
            r = (self.rows - 1) - r;
        }
        r
    }

    /// Map a payload bit from logical (believed-internal) position to the
    /// host bus position, for writes.
    pub fn encode_payload(&self, logical: &crate::payload::Payload) -> crate::payload::Payload {
        if !self.interp.apply_dq_permutation {
            return logical.clone();
        }
        crate::payload::Payload::from_fn(self.width, |host_bit| {
            logical.get(self.remap.dq_permutation.to_internal_bit(host_bit))
        })
    }

    /// Map a payload read off the host bus back to logical bit positions.
    pub fn decode_payload(&self, host: &crate::payload::Payload) -> crate::payload::Payload {
        if !self.interp.apply_dq_permutation {
            return host.clone();
        }
        crate::payload::Payload::from_fn(self.width, |logical_bit| {
            host.get(self.remap.dq_permutation.to_host_bit(logical_bit))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payload::Payload;

    #[test]
    fn complement_reverses_adjacent_rows() {
        let remap = RemapConfig {
            rcd_inverted: true,
            row_scramble: RowScramble::Identity,
            dq_permutation: DqPermutation::Identity,
        };
        // 13-bit row space: host 0 maps to 8191
        assert_eq!(remap.host_to_internal(0, 8192), 8191);
        for r in 0..100u32 {
            let a = remap.host_to_internal(r, 8192);
            let b = remap.host_to_internal(r + 1, 8192);
            assert_eq!(a, b + 1, "adjacent host rows stay adjacent, reversed");
        }
    }

    #[test]
    fn lens_round_trip_through_correct_view() {
        let remap = RemapConfig {
            rcd_inverted: true,
            row_scramble: RowScramble::XorMask { mask: 0b1100000 },
            dq_permutation: DqPermutation::Explicit {
                map: (0..16).map(|b| (b + 5) % 16).collect(),
            },
        };
        let lens =
            InterpretationLens::new(AddressInterpretation::correct(), remap.clone(), 1 << 10, 16);
        for logical in [0u32, 1, 17, 511, 1023] {
            let host = lens.issue_row(logical);
            assert_eq!(remap.host_to_internal(host, 1 << 10), logical);
        }
        let p = Payload::from_fn(16, |b| b % 3 == 1);
        assert_eq!(lens.decode_payload(&lens.encode_payload(&p)), p);
    }
}
