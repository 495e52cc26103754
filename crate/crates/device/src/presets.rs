//! Canned device profiles: the four characterized parts at desk scale, two
//! toy parts for fast property suites, and a seeded randomizer for oracle
//! equivalence runs.

use xray_core::iface::Timing;
use xray_core::lens::{DqPermutation, RemapConfig, RowScramble};
use xray_core::report::Bitline;

use crate::profile::{DeviceProfile, FaultParams, PolarityRule};

fn ddr4_timing() -> Timing {
    Timing {
        tck_ns: 1.25,
        tras_cycles: 28, // 35 ns
        trp_cycles: 11,
        trcd_cycles: 11,
        trefw_cycles: 51_200_000, // 64 ms
    }
}

fn hbm2_timing() -> Timing {
    Timing {
        tck_ns: 2.5,
        tras_cycles: 14, // 35 ns
        trp_cycles: 6,
        trcd_cycles: 6,
        trefw_cycles: 25_600_000, // 64 ms
    }
}

/// Disturbance parameters shared by the characterized parts. The passing
/// gate distribution is steep (count doubling multiplies its error rate by
/// ~150) while the shared-region distribution is wide, which keeps its
/// activated-time response under the observed 1.52x envelope.
fn standard_faults(seed: u64) -> FaultParams {
    FaultParams {
        rh_threshold_mean: 6.0e6,
        rh_threshold_sigma: 2.0,
        pg_threshold_mean: 6.0e5,
        pg_threshold_sigma: 0.35,
        pg_time_exponent: 1.0,
        rh_time_epsilon: 0.05,
        retention_mean: 3.0e8,
        retention_sigma: 0.25,
        chip_offset_sigma: 0.8,
        seed,
    }
}

fn identity_remap(inverted: bool) -> RemapConfig {
    RemapConfig {
        rcd_inverted: inverted,
        row_scramble: RowScramble::Identity,
        dq_permutation: DqPermutation::Identity,
    }
}

pub fn mfr_a_2016(seed: u64) -> DeviceProfile {
    let mut pattern = vec![640u32; 11];
    pattern.extend([576, 576]);
    DeviceProfile {
        chip_label: "mfrA-2016".into(),
        num_banks: 1,
        rows_per_bank: 131_072,
        row_width_bits: 64,
        subarray_pattern: pattern,
        bitline_structure: Bitline::Open,
        datapath_inversion: true,
        polarity_rule: PolarityRule::AllTrue,
        coupled_row_stride: Some(65_536),
        edge_pair_period: 16_384, // rows_per_bank / 8
        serialization_period: 8,
        timing: ddr4_timing(),
        fault_params: standard_faults(seed),
        remap: identity_remap(true),
    }
}

pub fn mfr_a_2018(seed: u64) -> DeviceProfile {
    let mut pattern = vec![832u32; 4];
    pattern.push(768);
    DeviceProfile {
        chip_label: "mfrA-2018".into(),
        num_banks: 1,
        rows_per_bank: 32_768,
        row_width_bits: 64,
        subarray_pattern: pattern,
        bitline_structure: Bitline::Open,
        datapath_inversion: true,
        polarity_rule: PolarityRule::AllTrue,
        coupled_row_stride: Some(16_384),
        edge_pair_period: 8_192, // rows_per_bank / 4
        serialization_period: 4,
        timing: ddr4_timing(),
        fault_params: standard_faults(seed),
        remap: identity_remap(true),
    }
}

pub fn mfr_b(seed: u64) -> DeviceProfile {
    DeviceProfile {
        chip_label: "mfrB".into(),
        num_banks: 1,
        rows_per_bank: 16_384,
        row_width_bits: 64,
        subarray_pattern: vec![688, 688, 672],
        bitline_structure: Bitline::Open,
        datapath_inversion: false,
        polarity_rule: PolarityRule::AlternatingBySubarray,
        coupled_row_stride: None,
        edge_pair_period: 4_096, // rows_per_bank / 4
        serialization_period: 2,
        timing: ddr4_timing(),
        fault_params: standard_faults(seed),
        remap: identity_remap(false),
    }
}

pub fn hbm2(seed: u64) -> DeviceProfile {
    let mut pattern = vec![832u32; 4];
    pattern.push(768);
    DeviceProfile {
        chip_label: "hbm2".into(),
        num_banks: 1,
        rows_per_bank: 16_384,
        row_width_bits: 64,
        subarray_pattern: pattern,
        bitline_structure: Bitline::Open,
        datapath_inversion: true,
        polarity_rule: PolarityRule::AllTrue,
        coupled_row_stride: Some(8_192),
        edge_pair_period: 8_192, // rows_per_bank / 2
        serialization_period: 2,
        timing: hbm2_timing(),
        fault_params: standard_faults(seed),
        remap: identity_remap(true),
    }
}

pub fn preset(name: &str, seed: u64) -> Option<DeviceProfile> {
    Some(match name {
        "mfrA-2016" => mfr_a_2016(seed),
        "mfrA-2018" => mfr_a_2018(seed),
        "mfrB" => mfr_b(seed),
        "hbm2" => hbm2(seed),
        _ => return None,
    })
}

pub const PRESET_NAMES: [&str; 4] = ["mfrA-2016", "mfrA-2018", "mfrB", "hbm2"];

/// Small open-bitline part for the command-engine property suite. Fault
/// thresholds are scaled down so short hammers flip; retention sits a
/// decade above the refresh window so refreshed data never decays.
pub fn toy_open(seed: u64) -> DeviceProfile {
    DeviceProfile {
        chip_label: "toy-open".into(),
        num_banks: 2,
        rows_per_bank: 256,
        row_width_bits: 64,
        subarray_pattern: vec![64],
        bitline_structure: Bitline::Open,
        datapath_inversion: true,
        polarity_rule: PolarityRule::AlternatingBySubarray,
        coupled_row_stride: None,
        edge_pair_period: 128,
        serialization_period: 4,
        timing: Timing {
            tck_ns: 1.0,
            tras_cycles: 28,
            trp_cycles: 11,
            trcd_cycles: 11,
            trefw_cycles: 100_000,
        },
        fault_params: FaultParams {
            rh_threshold_mean: 60_000.0,
            rh_threshold_sigma: 1.0,
            pg_threshold_mean: 8_000.0,
            pg_threshold_sigma: 0.3,
            pg_time_exponent: 1.0,
            rh_time_epsilon: 0.05,
            retention_mean: 4_000_000.0,
            retention_sigma: 0.1,
            chip_offset_sigma: 0.5,
            seed,
        },
        remap: identity_remap(false),
    }
}

pub fn toy_folded(seed: u64) -> DeviceProfile {
    let mut p = toy_open(seed);
    p.chip_label = "toy-folded".into();
    p.bitline_structure = Bitline::Folded;
    p.datapath_inversion = false;
    p
}

/// Deterministic randomized profile: random pattern summing to a divisor of
/// the row count, random polarity, stride, edge period and serialization,
/// with the register clock driver inversion on half the draws.
pub fn randomized(seed: u64) -> DeviceProfile {
    // splitmix64 steps; good enough spread for configuration draws
    let mut state = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };

    let rows: u32 = [2048u32, 4096, 8192][(next() % 3) as usize];
    let width: u32 = [32u32, 64][(next() % 2) as usize];
    let serialization: u8 = [2u8, 4, 8][(next() % 3) as usize];

    // split a divisor of the row count into 1..=4 random sizes
    let repeat_total: u32 = rows / [4u32, 8][(next() % 2) as usize];
    let parts = 1 + (next() % 4) as u32;
    let mut pattern = Vec::with_capacity(parts as usize);
    let mut left = repeat_total;
    for i in 0..parts {
        let remaining = parts - i;
        if remaining == 1 {
            pattern.push(left);
        } else {
            let max = left - 16 * (remaining - 1);
            let min = 16u32;
            let size = min + (next() % ((max - min).max(1) as u64)) as u32;
            pattern.push(size);
            left -= size;
        }
    }

    // even subarray count per edge group keeps the strip ring pairable
    let per_repeat = pattern.len() as u32;
    let mut group_repeats = if per_repeat % 2 == 0 { 1 } else { 2 };
    if next() % 2 == 0 && repeat_total * group_repeats * 2 <= rows {
        group_repeats *= 2;
    }
    let edge_period = repeat_total * group_repeats;

    let folded = next() % 4 == 0;
    let inversion = if folded { false } else { next() % 2 == 0 };

    DeviceProfile {
        chip_label: format!("random-{seed}"),
        num_banks: 1 + (next() % 2) as u32,
        rows_per_bank: rows,
        row_width_bits: width,
        subarray_pattern: pattern,
        bitline_structure: if folded { Bitline::Folded } else { Bitline::Open },
        datapath_inversion: inversion,
        polarity_rule: if next() % 2 == 0 {
            PolarityRule::AllTrue
        } else {
            PolarityRule::AlternatingBySubarray
        },
        coupled_row_stride: if next() % 2 == 0 { Some(rows / 2) } else { None },
        edge_pair_period: edge_period,
        serialization_period: serialization,
        timing: ddr4_timing(),
        fault_params: standard_faults(seed ^ 0xD1CE),
        remap: RemapConfig {
            rcd_inverted: seed % 2 == 0,
            row_scramble: RowScramble::Identity,
            dq_permutation: DqPermutation::Identity,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            let p = preset(name, 1).unwrap();
            p.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        toy_open(1).validate().unwrap();
        toy_folded(1).validate().unwrap();
    }

    #[test]
    fn preset_facts() {
        let a16 = mfr_a_2016(1);
        assert_eq!(a16.edge_pair_period, a16.rows_per_bank / 8);
        assert_eq!(a16.coupled_row_stride, Some(a16.rows_per_bank / 2));
        let a18 = mfr_a_2018(1);
        assert_eq!(a18.edge_pair_period, a18.rows_per_bank / 4);
        assert_eq!(a18.subarray_pattern, vec![832, 832, 832, 832, 768]);
        let b = mfr_b(1);
        assert_eq!(b.edge_pair_period, b.rows_per_bank / 4);
        assert!(!b.datapath_inversion);
        assert_eq!(b.coupled_row_stride, None);
        let h = hbm2(1);
        assert_eq!(h.edge_pair_period, h.rows_per_bank / 2);
        assert_eq!(h.polarity_rule, PolarityRule::AllTrue);
        assert!((h.timing.tck_ns - 2.5).abs() < 1e-9);
    }

    #[test]
    fn randomized_profiles_validate_and_are_deterministic() {
        for seed in 0..40 {
            let p = randomized(seed);
            p.validate().unwrap_or_else(|e| panic!("seed {seed}: {e}\n{p:?}"));
            assert_eq!(p, randomized(seed));
        }
        let inverted = (0..40).filter(|&s| randomized(s).remap.rcd_inverted).count();
        assert_eq!(inverted, 20);
    }
}
