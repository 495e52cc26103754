//! Discovery report schema. The device-side ground-truth oracle emits the
//! same structural record, so structure recovery is checked by plain
//! equality.

use serde::{Deserialize, Serialize};

use crate::lens::AddressInterpretation;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bitline {
    #[serde(rename = "OPEN")]
    Open,
    #[serde(rename = "FOLDED")]
    Folded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "TRUE")]
    True,
    #[serde(rename = "ANTI")]
    Anti,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "UPPER")]
    Upper,
    #[serde(rename = "LOWER")]
    Lower,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }
}

/// Everything the three techniques can establish about hidden geometry.
/// Fields that a configuration makes unobservable (a folded part has no
/// shared sense-amplifier strips) are `None` on both sides of an oracle
/// comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub rows_per_bank: u32,
    /// Interior subarray start rows, strictly increasing.
    pub boundaries: Vec<u32>,
    /// Per-subarray sizes over the whole bank; sums to `rows_per_bank`.
    pub sizes: Vec<u32>,
    /// Minimal repeating unit of `sizes`.
    pub repeat_pattern: Vec<u32>,
    pub bitline: Bitline,
    pub cross_copy_inversion: Option<bool>,
    /// Per-subarray cell polarity, indexed by subarray ordinal.
    pub polarity: Vec<Polarity>,
    pub coupled_row_stride: Option<u32>,
    pub edge_pair_period: Option<u32>,
    /// Paired edge subarrays (first ordinal, last ordinal) per period group.
    pub edge_pairs: Vec<(u32, u32)>,
    pub serialization_period: Option<u8>,
}

impl StructuralReport {
    pub fn validate(&self) -> Result<(), String> {
        let mut prev = 0u32;
        for &b in &self.boundaries {
            if b <= prev && prev != 0 || b == 0 || b >= self.rows_per_bank {
                return Err(format!("boundary {b} out of order or out of range"));
            }
            prev = b;
        }
        let total: u64 = self.sizes.iter().map(|&s| s as u64).sum();
        if total != self.rows_per_bank as u64 {
            return Err(format!("sizes sum {total} != rows_per_bank {}", self.rows_per_bank));
        }
        Ok(())
    }
}

/// Smallest cyclic repeating unit of a size list.
pub fn minimal_repeat(sizes: &[u32]) -> Vec<u32> {
    let n = sizes.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| sizes[i] == sizes[i - p]) {
            return sizes[..p].to_vec();
        }
    }
    sizes.to_vec()
}

/// Effective aggressor side per bit index, split by victim row parity.
/// `None` marks a bit left unresolved at the activation-count ceiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideMap {
    pub even_row: Vec<Option<Side>>,
    pub odd_row: Vec<Option<Side>>,
}

impl SideMap {
    /// Smallest period from {2,4,8} consistent with both parity maps, if
    /// the resolved bits admit one.
    pub fn detect_period(&self) -> Option<u8> {
        'cand: for &p in &[2u8, 4, 8] {
            for map in [&self.even_row, &self.odd_row] {
                for (i, side) in map.iter().enumerate() {
                    let j = i + p as usize;
                    if j >= map.len() {
                        break;
                    }
                    if let (Some(a), Some(b)) = (side, &map[j]) {
                        if a != b {
                            continue 'cand;
                        }
                    }
                }
            }
            return Some(p);
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggressorPatterns {
    pub eff_charge: SideMap,
    pub eff_discharge: SideMap,
    pub serialization_period: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "ACT_COUNT")]
    ActCount,
    #[serde(rename = "ACT_TIME")]
    ActTime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub flips: u64,
    pub relative_ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub pattern: PatternKind,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternKind {
    #[serde(rename = "EFF_CHARGE")]
    EffCharge,
    #[serde(rename = "EFF_DISCHARGE")]
    EffDischarge,
}

impl SweepTable {
    /// `axis_value,relative_ber` rows, for plotting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("axis_value,relative_ber\n");
        for p in &self.points {
            s.push_str(&format!("{},{}\n", p.axis_value, p.relative_ber));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Technique {
    #[serde(rename = "AIB")]
    Aib,
    #[serde(rename = "ROW_COPY")]
    RowCopy,
    #[serde(rename = "RETENTION")]
    Retention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryStatus {
    #[serde(rename = "CONFIRMED")]
    Confirmed,
    #[serde(rename = "SINGLE_SOURCE")]
    SingleSource,
    #[serde(rename = "CONFLICT")]
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub row: u32,
    pub sources: Vec<Technique>,
    pub status: BoundaryStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONSISTENT")]
    Consistent,
    #[serde(rename = "CONFLICTED")]
    Conflicted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub boundaries: Vec<BoundaryCheck>,
    pub verdict: Verdict,
}

/// Boundary evidence from one technique. `exhaustive` marks techniques that
/// scanned every row and can therefore contradict a claim (the retention
/// test only speaks where polarity changes, so its silence proves nothing).
#[derive(Debug, Clone)]
pub struct BoundaryEvidence {
    pub technique: Technique,
    pub claimed: Vec<u32>,
    pub exhaustive: bool,
}

pub fn cross_check(evidence: &[BoundaryEvidence]) -> CrossCheck {
    use std::collections::BTreeSet;
    let union: BTreeSet<u32> =
        evidence.iter().flat_map(|e| e.claimed.iter().copied()).collect();
    let mut checks = Vec::new();
    let mut verdict = Verdict::Consistent;
    for row in union {
        let sources: Vec<Technique> = evidence
            .iter()
            .filter(|e| e.claimed.contains(&row))
            .map(|e| e.technique)
            .collect();
        let contradicted = evidence
            .iter()
            .any(|e| e.exhaustive && !e.claimed.contains(&row));
        let status = if contradicted {
            verdict = Verdict::Conflicted;
            BoundaryStatus::Conflict
        } else if sources.len() >= 2 {
            BoundaryStatus::Confirmed
        } else {
            BoundaryStatus::SingleSource
        };
        checks.push(BoundaryCheck { row, sources, status });
    }
    CrossCheck { boundaries: checks, verdict }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnomalyKind {
    #[serde(rename = "UNDECIDED_ROWS")]
    UndecidedRows,
    #[serde(rename = "COPY_FRACTION")]
    CopyFraction,
    #[serde(rename = "MULTIPLE_STRIDES")]
    MultipleStrides,
    #[serde(rename = "NO_EDGE_PERIOD")]
    NoEdgePeriod,
    #[serde(rename = "RETENTION_NO_DECAY")]
    RetentionNoDecay,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomaly {
    pub kind: AnomalyKind,
    pub bank: u32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl FiveNumber {
    pub fn of(samples: &mut [f64]) -> FiveNumber {
        assert!(!samples.is_empty());
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q = |f: f64| {
            let pos = f * (samples.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - pos.floor();
            samples[lo] * (1.0 - frac) + samples[hi] * frac
        };
        FiveNumber { min: samples[0], q1: q(0.25), median: q(0.5), q3: q(0.75), max: samples[samples.len() - 1] }
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChipVariation {
    pub chip_index: u32,
    pub seed: u64,
    pub hc_first: Option<u64>,
    pub row_errors: FiveNumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationReport {
    pub chips: Vec<ChipVariation>,
    pub inter_chip_std_of_medians: f64,
    pub mean_intra_chip_iqr: f64,
    pub dispersion_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisconceptionReport {
    pub interpretation: AddressInterpretation,
    /// (host row distance, victim count), ascending by distance.
    pub histogram: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankReport {
    pub bank: u32,
    pub structure: StructuralReport,
    pub aggressor_patterns: Option<AggressorPatterns>,
    pub sweep_act_count: Option<SweepTable>,
    pub sweep_act_time: Option<SweepTable>,
    pub undecided_rows: Vec<u32>,
    pub cross_check: CrossCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceReport {
    pub schema_version: u32,
    pub chip_label: String,
    pub banks: Vec<BankReport>,
    pub variation: Option<VariationReport>,
    pub misconception: Option<MisconceptionReport>,
    pub anomalies: Vec<Anomaly>,
}

impl InferenceReport {
    pub fn new(chip_label: impl Into<String>) -> Self {
        InferenceReport {
            schema_version: REPORT_SCHEMA_VERSION,
            chip_label: chip_label.into(),
            banks: Vec::new(),
            variation: None,
            misconception: None,
            anomalies: Vec::new(),
        }
    }

    pub fn has_conflict(&self) -> bool {
        self.banks.iter().any(|b| b.cross_check.verdict == Verdict::Conflicted)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_repeat_finds_unit() {
        assert_eq!(minimal_repeat(&[640, 640, 576, 640, 640, 576]), vec![640, 640, 576]);
        assert_eq!(minimal_repeat(&[688, 688, 672]), vec![688, 688, 672]);
        assert_eq!(minimal_repeat(&[64, 64, 64, 64]), vec![64]);
    }

    #[test]
    fn cross_check_confirms_and_conflicts() {
        let ev = vec![
            BoundaryEvidence { technique: Technique::Aib, claimed: vec![640, 1280], exhaustive: true },
            BoundaryEvidence { technique: Technique::RowCopy, claimed: vec![640, 1280], exhaustive: true },
            BoundaryEvidence { technique: Technique::Retention, claimed: vec![640], exhaustive: false },
        ];
        let cc = cross_check(&ev);
        assert_eq!(cc.verdict, Verdict::Consistent);
        assert!(cc.boundaries.iter().all(|b| b.status == BoundaryStatus::Confirmed));

        // a boundary only one exhaustive technique saw is a conflict
        let ev = vec![
            BoundaryEvidence { technique: Technique::Aib, claimed: vec![640, 999], exhaustive: true },
            BoundaryEvidence { technique: Technique::RowCopy, claimed: vec![640], exhaustive: true },
        ];
        let cc = cross_check(&ev);
        assert_eq!(cc.verdict, Verdict::Conflicted);
        let bad = cc.boundaries.iter().find(|b| b.row == 999).unwrap();
        assert_eq!(bad.status, BoundaryStatus::Conflict);
    }

    #[test]
    fn retention_silence_is_not_contradiction() {
        let ev = vec![
            BoundaryEvidence { technique: Technique::Aib, claimed: vec![100], exhaustive: true },
            BoundaryEvidence { technique: Technique::RowCopy, claimed: vec![100], exhaustive: true },
            BoundaryEvidence { technique: Technique::Retention, claimed: vec![], exhaustive: false },
        ];
        assert_eq!(cross_check(&ev).verdict, Verdict::Consistent);
    }

    #[test]
    fn side_map_period_detection() {
        let mk = |p: usize, w: usize| -> Vec<Option<Side>> {
            (0..w)
                .map(|b| Some(if (b / (p / 2)) % 2 == 0 { Side::Upper } else { Side::Lower }))
                .collect()
        };
        for &p in &[2usize, 4, 8] {
            let m = SideMap { even_row: mk(p, 32), odd_row: mk(p, 32).iter().map(|s| s.map(Side::opposite)).collect() };
            assert_eq!(m.detect_period(), Some(p as u8));
        }
    }
}
