//! The reverse-engineering engine. Everything here drives a device purely
//! through `MemoryCommands` (plus `FlipWitness` for the misinterpretation
//! demonstration) and reconstructs hidden structure from observed behavior.

pub mod boundaries;
pub mod calibrate;
pub mod coupled;
pub mod edges;
pub mod misconception;
pub mod patterns;
pub mod retention;
pub mod rowcopy;
pub mod sweeps;
pub mod variation;

use rayon::prelude::*;

use crate::iface::MemoryCommands;
use crate::lens::InterpretationLens;
use crate::report::{
    cross_check, minimal_repeat, Anomaly, BankReport, BoundaryEvidence, InferenceReport,
    StructuralReport, Technique,
};

/// Tunables for the discovery pipeline. Defaults match the experiment
/// budgets the report figures were produced with.
#[derive(Debug, Clone)]
pub struct InferOptions {
    /// First activation count tried during calibration.
    pub hammer_start: u64,
    /// Calibration and escalation stop here.
    pub hammer_ceiling: u64,
    /// Victim rows sampled per parity when recovering aggressor patterns.
    pub pattern_rows_per_parity: u32,
    /// Victim rows sampled per sweep grid point.
    pub sweep_rows: u32,
    pub sweep_count_grid: Vec<u64>,
    pub sweep_time_ns: Vec<f64>,
    /// Fixed activation count for the per-row error distribution.
    pub variation_count: u64,
    /// Sample every n-th row for variation statistics (1 = full scan).
    pub variation_row_step: u32,
    /// Aggressor rows sampled by the misinterpretation demonstration.
    pub misconception_rows: u32,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions {
            hammer_start: 100_000,
            hammer_ceiling: 1_600_000,
            pattern_rows_per_parity: 32,
            sweep_rows: 512,
            sweep_count_grid: (0..9).map(|i| 200_000 + 25_000 * i).collect(),
            sweep_time_ns: (0..9).map(|i| 35.0 + 17.5 * i as f64).collect(),
            variation_count: 300_000,
            variation_row_step: 16,
            misconception_rows: 16,
        }
    }
}

/// Pipeline stages in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageSet {
    pub boundaries: bool,
    pub structure: bool,
    pub patterns: bool,
    pub sweeps: bool,
}

impl StageSet {
    pub fn all() -> Self {
        StageSet { boundaries: true, structure: true, patterns: true, sweeps: true }
    }

    pub fn structure_only() -> Self {
        StageSet { boundaries: true, structure: true, patterns: false, sweeps: false }
    }
}

/// Run the selected per-bank stages against one device instance. Returns
/// the bank report plus any anomalies the techniques raised.
pub fn run_bank(
    dev: &mut dyn MemoryCommands,
    lens: &InterpretationLens,
    bank: u32,
    stages: StageSet,
    opts: &InferOptions,
) -> (BankReport, Vec<Anomaly>) {
    let mut drv = crate::driver::Driver::new(dev, lens.clone());
    let mut anomalies: Vec<Anomaly> = Vec::new();

    let cal = calibrate::calibrate_hammer(&mut drv, bank, opts).expect("calibration issues commands");
    log::info!("bank {bank}: calibrated hammer count {}", cal);

    let aib = boundaries::find_boundaries_aib(&mut drv, bank, cal, opts)
        .expect("aib scan issues commands");
    anomalies.extend(aib.anomalies.clone());

    let copy = rowcopy::scan_row_copy(&mut drv, bank).expect("row-copy scan issues commands");
    anomalies.extend(copy.anomalies.clone());

    let ret = retention::find_true_anti(&mut drv, bank, &aib.boundaries)
        .expect("retention scan issues commands");
    anomalies.extend(ret.anomalies.clone());

    let (stride, stride_anoms) =
        coupled::detect_coupled_rows(&mut drv, bank, &aib.boundaries).expect("stride probe");
    anomalies.extend(stride_anoms);

    let (edge_period, edge_pairs, edge_anoms) =
        edges::detect_edge_pairs(&mut drv, bank, &aib.boundaries, copy.bitline)
            .expect("edge probe");
    anomalies.extend(edge_anoms);

    let rows = drv.rows();
    let sizes = sizes_from_boundaries(rows, &aib.boundaries);
    let structure = StructuralReport {
        rows_per_bank: rows,
        boundaries: aib.boundaries.clone(),
        repeat_pattern: minimal_repeat(&sizes),
        sizes,
        bitline: copy.bitline,
        cross_copy_inversion: copy.inversion,
        polarity: ret.polarity_by_subarray.clone(),
        coupled_row_stride: stride,
        edge_pair_period: edge_period,
        edge_pairs,
        serialization_period: None,
    };

    let evidence = vec![
        BoundaryEvidence { technique: Technique::Aib, claimed: aib.boundaries.clone(), exhaustive: true },
        BoundaryEvidence { technique: Technique::RowCopy, claimed: copy.boundaries.clone(), exhaustive: true },
        BoundaryEvidence {
            technique: Technique::Retention,
            claimed: ret.boundary_candidates.clone(),
            exhaustive: false,
        },
    ];
    let check = cross_check(&evidence);

    let mut report = BankReport {
        bank,
        structure,
        aggressor_patterns: None,
        sweep_act_count: None,
        sweep_act_time: None,
        undecided_rows: aib.undecided,
        cross_check: check,
    };
    for a in &mut anomalies {
        a.bank = bank;
    }

    if stages.patterns {
        let pats = patterns::discover_aggressor_patterns(
            &mut drv,
            bank,
            &report.structure.boundaries,
            &report.structure.polarity,
            opts,
        )
        .expect("pattern discovery issues commands");
        report.structure.serialization_period = pats.serialization_period;
        report.aggressor_patterns = Some(pats);
    }

    if stages.sweeps {
        let pats = report.aggressor_patterns.as_ref().expect("sweeps require patterns");
        report.sweep_act_count = Some(
            sweeps::sweep_sensitivity(
                &mut drv,
                bank,
                crate::report::PatternKind::EffCharge,
                crate::report::SweepAxis::ActCount,
                &report.structure,
                pats,
                opts,
            )
            .expect("sweep issues commands"),
        );
        report.sweep_act_time = Some(
            sweeps::sweep_sensitivity(
                &mut drv,
                bank,
                crate::report::PatternKind::EffDischarge,
                crate::report::SweepAxis::ActTime,
                &report.structure,
                pats,
                opts,
            )
            .expect("sweep issues commands"),
        );
    }

    (report, anomalies)
}

fn sizes_from_boundaries(rows: u32, boundaries: &[u32]) -> Vec<u32> {
    let mut sizes = Vec::with_capacity(boundaries.len() + 1);
    let mut prev = 0;
    for &b in boundaries {
        sizes.push(b - prev);
        prev = b;
    }
    sizes.push(rows - prev);
    sizes
}

/// Full pipeline across banks. The factory builds one device instance per
/// bank so banks can run on parallel workers; aggregation is sorted, so the
/// report is identical for any worker count.
pub fn run_pipeline<F>(
    factory: F,
    lens: &InterpretationLens,
    chip_label: &str,
    num_banks: u32,
    stages: StageSet,
    opts: &InferOptions,
) -> InferenceReport
where
    F: Fn() -> Box<dyn MemoryCommands + Send> + Sync,
{
    let mut banks: Vec<(BankReport, Vec<Anomaly>)> = (0..num_banks)
        .into_par_iter()
        .map(|bank| {
            let mut dev = factory();
            run_bank(dev.as_mut(), lens, bank, stages, opts)
        })
        .collect();
    banks.sort_by_key(|(b, _)| b.bank);

    let mut report = InferenceReport::new(chip_label);
    for (bank, anoms) in banks {
        report.anomalies.extend(anoms);
        report.banks.push(bank);
    }
    report
}
