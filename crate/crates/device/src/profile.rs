//! Device profiles: the complete hidden configuration of one simulated
//! chip. Profiles load from JSON with exactly these field names; unknown
//! keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use xray_core::iface::Timing;
use xray_core::lens::RemapConfig;
use xray_core::report::Bitline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarityRule {
    #[serde(rename = "ALL_TRUE")]
    AllTrue,
    /// Even subarray ordinals hold true cells, odd ordinals anti cells.
    #[serde(rename = "ALTERNATING_BY_SUBARRAY")]
    AlternatingBySubarray,
}

/// Log-normal disturbance and retention parameters. The `*_mean` fields are
/// medians in linear units (activations or cycles); the sigmas act in log
/// space. `chip_offset_sigma` scales every disturbance threshold of a chip
/// by one shared log-normal factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultParams {
    pub rh_threshold_mean: f64,
    pub rh_threshold_sigma: f64,
    pub pg_threshold_mean: f64,
    pub pg_threshold_sigma: f64,
    pub pg_time_exponent: f64,
    pub rh_time_epsilon: f64,
    pub retention_mean: f64,
    pub retention_sigma: f64,
    pub chip_offset_sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceProfile {
    pub chip_label: String,
    pub num_banks: u32,
    pub rows_per_bank: u32,
    pub row_width_bits: u32,
    pub subarray_pattern: Vec<u32>,
    pub bitline_structure: Bitline,
    pub datapath_inversion: bool,
    pub polarity_rule: PolarityRule,
    pub coupled_row_stride: Option<u32>,
    pub edge_pair_period: u32,
    pub serialization_period: u8,
    pub timing: Timing,
    pub fault_params: FaultParams,
    pub remap: RemapConfig,
}

#[derive(Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("num_banks: must be positive")]
    NumBanks,
    #[error("rows_per_bank: must be a positive power of two, got {0}")]
    RowsPerBank(u32),
    #[error("row_width_bits: must be positive and a multiple of serialization_period, got {0}")]
    RowWidth(u32),
    #[error("subarray_pattern: empty")]
    EmptyPattern,
    #[error("subarray_pattern: size {0} is too small (minimum 4 rows)")]
    TinySubarray(u32),
    #[error("subarray_pattern: sum {sum} does not divide rows_per_bank {rows}")]
    PatternSum { sum: u64, rows: u32 },
    #[error("edge_pair_period: {period} is not a multiple of the pattern sum {sum}")]
    PeriodNotMultiple { period: u32, sum: u64 },
    #[error("edge_pair_period: {period} does not divide rows_per_bank {rows}")]
    PeriodNotDivisor { period: u32, rows: u32 },
    #[error("edge_pair_period: open-bitline groups need at least two subarrays per period")]
    SingleSubarrayGroup,
    #[error(
        "edge_pair_period: open-bitline groups need an even subarray count \
         (the strip ring is not consistently pairable otherwise)"
    )]
    OddSubarrayGroup,
    #[error("serialization_period: must be 2, 4 or 8, got {0}")]
    SerializationPeriod(u8),
    #[error("coupled_row_stride: {stride} is not rows_per_bank/2 = {half}")]
    Stride { stride: u32, half: u32 },
    #[error("timing: tRAS must exceed tRCD and tRP must be at least 4")]
    Timing,
    #[error("fault_params: sigmas must be non-negative and medians positive")]
    FaultParams,
    #[error("remap: dq_permutation is not a bijection over row_width_bits")]
    DqPermutation,
}

impl DeviceProfile {
    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.num_banks == 0 {
            return Err(ProfileError::NumBanks);
        }
        if self.rows_per_bank == 0 || !self.rows_per_bank.is_power_of_two() {
            return Err(ProfileError::RowsPerBank(self.rows_per_bank));
        }
        if !matches!(self.serialization_period, 2 | 4 | 8) {
            return Err(ProfileError::SerializationPeriod(self.serialization_period));
        }
        if self.row_width_bits == 0 || self.row_width_bits % self.serialization_period as u32 != 0
        {
            return Err(ProfileError::RowWidth(self.row_width_bits));
        }
        if self.subarray_pattern.is_empty() {
            return Err(ProfileError::EmptyPattern);
        }
        if let Some(&s) = self.subarray_pattern.iter().find(|&&s| s < 4) {
            return Err(ProfileError::TinySubarray(s));
        }
        let sum: u64 = self.subarray_pattern.iter().map(|&s| s as u64).sum();
        if sum == 0 || self.rows_per_bank as u64 % sum != 0 {
            return Err(ProfileError::PatternSum { sum, rows: self.rows_per_bank });
        }
        let period = self.edge_pair_period;
        if period == 0 || period as u64 % sum != 0 {
            return Err(ProfileError::PeriodNotMultiple { period, sum });
        }
        if self.rows_per_bank % period != 0 {
            return Err(ProfileError::PeriodNotDivisor { period, rows: self.rows_per_bank });
        }
        if self.bitline_structure == Bitline::Open {
            let subs_per_group = (period as u64 / sum) * self.subarray_pattern.len() as u64;
            if subs_per_group < 2 {
                return Err(ProfileError::SingleSubarrayGroup);
            }
            if subs_per_group % 2 != 0 {
                return Err(ProfileError::OddSubarrayGroup);
            }
        }
        if let Some(stride) = self.coupled_row_stride {
            if stride != self.rows_per_bank / 2 {
                return Err(ProfileError::Stride { stride, half: self.rows_per_bank / 2 });
            }
        }
        let tm = &self.timing;
        if tm.tras_cycles <= tm.trcd_cycles || tm.trp_cycles < 4 || tm.tck_ns <= 0.0 {
            return Err(ProfileError::Timing);
        }
        let fp = &self.fault_params;
        if fp.rh_threshold_sigma < 0.0
            || fp.pg_threshold_sigma < 0.0
            || fp.retention_sigma < 0.0
            || fp.chip_offset_sigma < 0.0
            || fp.rh_threshold_mean <= 0.0
            || fp.pg_threshold_mean <= 0.0
            || fp.retention_mean <= 0.0
        {
            return Err(ProfileError::FaultParams);
        }
        if !self.remap.dq_permutation.is_bijection(self.row_width_bits) {
            return Err(ProfileError::DqPermutation);
        }
        Ok(())
    }

    pub fn host_info(&self) -> xray_core::iface::HostInfo {
        xray_core::iface::HostInfo {
            num_banks: self.num_banks,
            rows_per_bank: self.rows_per_bank,
            row_width_bits: self.row_width_bits,
            timing: self.timing,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let profile: DeviceProfile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        profile.validate().map_err(|e| e.to_string())?;
        Ok(profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn pattern_sum_must_divide_rows() {
        let mut p = presets::toy_open(1);
        p.subarray_pattern = vec![1000];
        p.rows_per_bank = 8192;
        assert!(matches!(p.validate(), Err(ProfileError::PatternSum { sum: 1000, rows: 8192 })));
    }

    #[test]
    fn paper_patterns_are_accepted() {
        // eleven subarrays of 640 rows and two of 576 sum to 8192
        let mut p = presets::mfr_a_2016(1);
        assert_eq!(p.subarray_pattern.iter().sum::<u32>(), 8192);
        p.validate().unwrap();
        // two subarrays of 688 and one of 672 sum to 2048
        let q = presets::mfr_b(1);
        assert_eq!(q.subarray_pattern.iter().sum::<u32>(), 2048);
        q.validate().unwrap();
    }

    #[test]
    fn unknown_json_keys_are_rejected() {
        let mut v: serde_json::Value =
            serde_json::from_str(&presets::toy_open(1).to_json()).unwrap();
        v.as_object_mut().unwrap().insert("surprise".into(), 1.into());
        assert!(DeviceProfile::from_json(&v.to_string()).unwrap_err().contains("surprise"));
    }

    #[test]
    fn json_round_trip() {
        let p = presets::mfr_b(3);
        let q = DeviceProfile::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }
}
