//! Hidden bank geometry: tiled subarray pattern, the per-cell active-region
//! partner sides that the 6F² layout creates, and sense-amplifier strip
//! connectivity for open and folded bitline structures.

use xray_core::report::{Bitline, Polarity, Side};

use crate::profile::{DeviceProfile, PolarityRule};

#[derive(Debug, Clone)]
pub struct Geometry {
    pub rows: u32,
    pub width: u32,
    pub bitline: Bitline,
    pub serialization_period: u8,
    pub edge_period: u32,
    pattern: Vec<u32>,
    prefix: Vec<u32>,
    pattern_sum: u32,
    pub subs_per_group: u32,
    pub num_subarrays: u32,
    polarity_rule: PolarityRule,
}

impl Geometry {
    pub fn new(profile: &DeviceProfile) -> Self {
        let pattern = profile.subarray_pattern.clone();
        let mut prefix = Vec::with_capacity(pattern.len() + 1);
        let mut acc = 0u32;
        prefix.push(0);
        for &s in &pattern {
            acc += s;
            prefix.push(acc);
        }
        let pattern_sum = acc;
        let repeats = profile.rows_per_bank / pattern_sum;
        let num_subarrays = repeats * pattern.len() as u32;
        let subs_per_group =
            (profile.edge_pair_period / pattern_sum) * pattern.len() as u32;
        Geometry {
            rows: profile.rows_per_bank,
            width: profile.row_width_bits,
            bitline: profile.bitline_structure,
            serialization_period: profile.serialization_period,
            edge_period: profile.edge_pair_period,
            pattern,
            prefix,
            pattern_sum,
            subs_per_group,
            num_subarrays,
            polarity_rule: profile.polarity_rule,
        }
    }

    /// (ordinal, base row, size) of the subarray containing `row` under the
    /// tiled pattern.
    pub fn subarray_of(&self, row: u32) -> (u32, u32, u32) {
        debug_assert!(row < self.rows);
        let rep = row / self.pattern_sum;
        let off = row % self.pattern_sum;
        let mut idx = 0;
        while self.prefix[idx + 1] <= off {
            idx += 1;
        }
        (
            rep * self.pattern.len() as u32 + idx as u32,
            rep * self.pattern_sum + self.prefix[idx],
            self.pattern[idx],
        )
    }

    pub fn subarray_bounds(&self, ordinal: u32) -> (u32, u32) {
        let rep = ordinal / self.pattern.len() as u32;
        let idx = (ordinal % self.pattern.len() as u32) as usize;
        let base = rep * self.pattern_sum + self.prefix[idx];
        (base, base + self.pattern[idx])
    }

    pub fn same_subarray(&self, a: u32, b: u32) -> bool {
        self.subarray_of(a).0 == self.subarray_of(b).0
    }

    /// Interior subarray start rows.
    pub fn boundaries(&self) -> Vec<u32> {
        (1..self.num_subarrays).map(|k| self.subarray_bounds(k).0).collect()
    }

    pub fn sizes(&self) -> Vec<u32> {
        (0..self.num_subarrays).map(|k| self.subarray_bounds(k).1 - self.subarray_bounds(k).0).collect()
    }

    fn serialization_group(&self, bit: u32) -> u32 {
        bit / (self.serialization_period as u32 / 2)
    }

    /// Which neighbor row shares cell (row, bit)'s active region. The
    /// opposite side neighbor is separated by a passing gate only.
    pub fn partner_side(&self, row: u32, bit: u32) -> Side {
        if (self.serialization_group(bit) + row) % 2 == 0 {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    pub fn polarity(&self, ordinal: u32) -> Polarity {
        match self.polarity_rule {
            PolarityRule::AllTrue => Polarity::True,
            PolarityRule::AlternatingBySubarray => {
                if ordinal % 2 == 0 {
                    Polarity::True
                } else {
                    Polarity::Anti
                }
            }
        }
    }

    pub fn polarity_of_row(&self, row: u32) -> Polarity {
        self.polarity(self.subarray_of(row).0)
    }

    /// Open-bitline side of a bit within a subarray: which strip (above or
    /// below the subarray) its bitline terminates in. Alternates across
    /// serialization groups and flips with the subarray ordinal so that one
    /// strip serves the same bit positions of both adjacent subarrays.
    pub fn sa_side(&self, ordinal: u32, bit: u32) -> Side {
        if (self.serialization_group(bit) + ordinal) % 2 == 0 {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    pub fn num_strips(&self) -> u32 {
        self.num_subarrays
    }

    /// Strip id holding cell (subarray `ordinal`, `bit`).
    ///
    /// Folded parts give every subarray one dedicated strip. Open parts
    /// share strips between neighbors inside an edge-period group, and the
    /// group's two outward halves meet in a single wrap strip, which is what
    /// makes the group's first and last subarrays work in tandem.
    pub fn strip_of(&self, ordinal: u32, bit: u32) -> u32 {
        match self.bitline {
            Bitline::Folded => ordinal,
            Bitline::Open => {
                let m = self.subs_per_group;
                let group = ordinal / m;
                let local = ordinal % m;
                match self.sa_side(ordinal, bit) {
                    Side::Upper => {
                        if local == m - 1 {
                            group * m
                        } else {
                            group * m + local + 1
                        }
                    }
                    Side::Lower => {
                        if local == 0 {
                            group * m
                        } else {
                            group * m + local
                        }
                    }
                }
            }
        }
    }

    /// (first, last) subarray ordinals of each edge-period group.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        let m = self.subs_per_group;
        (0..self.num_subarrays / m).map(|g| (g * m, g * m + m - 1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn toy_geometry() -> Geometry {
        Geometry::new(&presets::toy_open(1))
    }

    #[test]
    fn subarray_lookup_matches_prefix_scan() {
        // brute-force prefix-sum oracle over the tiled pattern
        let g = toy_geometry();
        let mut starts = Vec::new();
        let mut row = 0;
        while row < g.rows {
            for &s in &g.pattern {
                starts.push((row, s));
                row += s;
            }
        }
        for r in 0..g.rows {
            let (ord, base, size) = g.subarray_of(r);
            let oracle = starts.iter().position(|&(b, s)| r >= b && r < b + s).unwrap();
            assert_eq!(ord as usize, oracle);
            assert_eq!((base, size), starts[oracle]);
        }
    }

    #[test]
    fn paper_pattern_positions() {
        let g = Geometry::new(&presets::mfr_a_2016(1));
        assert_eq!(g.subarray_of(0), (0, 0, 640));
        assert_eq!(g.subarray_of(639), (0, 0, 640));
        assert_eq!(g.subarray_of(640), (1, 640, 640));

        let g = Geometry::new(&presets::mfr_b(1));
        // third subarray of the 688/688/672 pattern ends at row 2047
        assert_eq!(g.subarray_of(2047), (2, 1376, 672));
    }

    #[test]
    fn partner_sides_split_half_half_and_flip_with_parity() {
        let g = toy_geometry();
        for row in 0..g.rows.min(64) {
            let upper =
                (0..g.width).filter(|&b| g.partner_side(row, b) == Side::Upper).count() as u32;
            assert_eq!(upper, g.width / 2);
            for bit in 0..g.width {
                assert_ne!(g.partner_side(row, bit), g.partner_side(row + 1, bit));
            }
        }
    }

    #[test]
    fn shared_active_region_is_symmetric() {
        let g = toy_geometry();
        for row in 0..g.rows - 1 {
            for bit in 0..g.width {
                if g.partner_side(row, bit) == Side::Upper {
                    assert_eq!(g.partner_side(row + 1, bit), Side::Lower);
                }
            }
        }
    }

    #[test]
    fn open_strips_are_shared_with_matching_bits() {
        let g = toy_geometry();
        for k in 0..g.num_subarrays - 1 {
            if k / g.subs_per_group != (k + 1) / g.subs_per_group {
                continue; // no strip across group ends
            }
            for bit in 0..g.width {
                if g.sa_side(k, bit) == Side::Upper {
                    assert_eq!(g.sa_side(k + 1, bit), Side::Lower);
                    assert_eq!(g.strip_of(k, bit), g.strip_of(k + 1, bit));
                }
            }
        }
    }

    #[test]
    fn wrap_strip_pairs_group_edges() {
        let g = toy_geometry();
        let (first, last) = g.edge_pairs()[0];
        for bit in 0..g.width {
            if g.sa_side(first, bit) == Side::Lower {
                // the outward half of the bottom edge meets the top edge's
                // outward half in one strip
                if g.sa_side(last, bit) == Side::Upper {
                    assert_eq!(g.strip_of(first, bit), g.strip_of(last, bit));
                }
            }
        }
    }

    #[test]
    fn folded_strips_are_dedicated() {
        let g = Geometry::new(&presets::toy_folded(1));
        for k in 0..g.num_subarrays {
            for bit in 0..g.width {
                assert_eq!(g.strip_of(k, bit), k);
            }
        }
    }
}
