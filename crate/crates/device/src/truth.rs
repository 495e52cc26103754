//! Ground-truth oracle: the device's actual structure in the discovery
//! report schema, for harness-side comparison. The discovery engine cannot
//! link against this module.

use xray_core::report::{
    minimal_repeat, AggressorPatterns, BankReport, Bitline, CrossCheck, InferenceReport, Side,
    SideMap, StructuralReport, Verdict,
};

use crate::engine::Device;

pub fn ground_truth_structure(dev: &Device) -> StructuralReport {
    let geom = dev.geometry();
    let profile = dev.profile();
    let boundaries = geom.boundaries();
    let sizes = geom.sizes();
    let folded = profile.bitline_structure == Bitline::Folded;
    StructuralReport {
        rows_per_bank: geom.rows,
        boundaries,
        repeat_pattern: minimal_repeat(&sizes),
        sizes,
        bitline: profile.bitline_structure,
        cross_copy_inversion: if folded { None } else { Some(profile.datapath_inversion) },
        polarity: (0..geom.num_subarrays).map(|k| geom.polarity(k)).collect(),
        coupled_row_stride: profile.coupled_row_stride,
        edge_pair_period: if folded { None } else { Some(profile.edge_pair_period) },
        edge_pairs: if folded { Vec::new() } else { geom.edge_pairs() },
        serialization_period: Some(profile.serialization_period),
    }
}

pub fn ground_truth_patterns(dev: &Device) -> AggressorPatterns {
    let geom = dev.geometry();
    let side_map = |eff_charge: bool| -> SideMap {
        let map = |row_parity: u32| -> Vec<Option<Side>> {
            (0..geom.width)
                .map(|bit| {
                    let partner = geom.partner_side(row_parity, bit);
                    // charged victims fall to the passing gate across from
                    // the shared region; discharged victims to the shared
                    // region itself
                    Some(if eff_charge { partner.opposite() } else { partner })
                })
                .collect()
        };
        SideMap { even_row: map(0), odd_row: map(1) }
    };
    AggressorPatterns {
        eff_charge: side_map(true),
        eff_discharge: side_map(false),
        serialization_period: Some(dev.profile().serialization_period),
    }
}

/// Full report in the discovery schema with every structural fact filled
/// from the profile, one entry per bank.
pub fn ground_truth_report(dev: &Device) -> InferenceReport {
    let profile = dev.profile();
    let structure = ground_truth_structure(dev);
    let patterns = ground_truth_patterns(dev);
    let mut report = InferenceReport::new(profile.chip_label.clone());
    for bank in 0..profile.num_banks {
        report.banks.push(BankReport {
            bank,
            structure: structure.clone(),
            aggressor_patterns: Some(patterns.clone()),
            sweep_act_count: None,
            sweep_act_time: None,
            undecided_rows: Vec::new(),
            cross_check: CrossCheck { boundaries: Vec::new(), verdict: Verdict::Consistent },
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Device;
    use crate::presets;

    #[test]
    fn truth_echoes_profile_structure() {
        let dev = Device::new(presets::mfr_a_2016(1)).unwrap();
        let s = ground_truth_structure(&dev);
        s.validate().unwrap();
        assert_eq!(s.repeat_pattern, presets::mfr_a_2016(1).subarray_pattern);
        assert_eq!(s.bitline, Bitline::Open);
        assert_eq!(s.cross_copy_inversion, Some(true));
        assert_eq!(s.edge_pair_period, Some(16_384));
        // the first repeat's boundaries: cumulative sums of the pattern
        assert_eq!(&s.boundaries[..12], &[
            640, 1280, 1920, 2560, 3200, 3840, 4480, 5120, 5760, 6400, 7040, 7616
        ]);
        assert_eq!(s.boundaries[12], 8192);
    }

    #[test]
    fn folded_truth_leaves_unobservables_empty() {
        let dev = Device::new(presets::toy_folded(1)).unwrap();
        let s = ground_truth_structure(&dev);
        assert_eq!(s.bitline, Bitline::Folded);
        assert_eq!(s.cross_copy_inversion, None);
        assert_eq!(s.edge_pair_period, None);
        assert!(s.edge_pairs.is_empty());
    }

    #[test]
    fn truth_patterns_are_side_complementary() {
        let dev = Device::new(presets::toy_open(1)).unwrap();
        let p = ground_truth_patterns(&dev);
        for (c, d) in p.eff_charge.even_row.iter().zip(&p.eff_discharge.even_row) {
            assert_eq!(c.unwrap(), d.unwrap().opposite());
        }
        assert_eq!(p.eff_charge.detect_period(), Some(4));
    }
}
