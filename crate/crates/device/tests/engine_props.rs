//! Command-engine property suite on the toy parts: data-path round trips,
//! row-copy semantics and conservation, retention/refresh behavior,
//! disturbance boundary isolation, and batched-hammer equivalence.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use xray_core::command::{Command, ProtocolError};
use xray_core::driver::{copy_window_cycles, Driver};
use xray_core::iface::MemoryCommands;
use xray_core::lens::{AddressInterpretation, InterpretationLens};
use xray_core::payload::Payload;
use xray_device::{presets, Device, DeviceProfile};

fn device(profile: DeviceProfile) -> Device {
    Device::new(profile).unwrap()
}

fn lens_for(dev: &Device) -> InterpretationLens {
    let info = dev.host_info();
    InterpretationLens::new(
        AddressInterpretation::correct(),
        dev.profile().remap.clone(),
        info.rows_per_bank,
        info.row_width_bits,
    )
}

#[test]
fn write_read_round_trip_random_payloads() {
    let mut dev = device(presets::toy_open(11));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let rows = drv.rows();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let bank = rng.gen_range(0..2);
        let row = rng.gen_range(0..rows);
        let bits: Vec<bool> = (0..width).map(|_| rng.gen_bool(0.5)).collect();
        let payload = Payload::from_fn(width, |b| bits[b as usize]);
        drv.write_row(bank, row, &payload).unwrap();
        assert_eq!(drv.read_row(bank, row).unwrap(), payload);
    }
}

#[test]
fn row_copy_same_subarray_is_full() {
    let mut dev = device(presets::toy_open(2));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let data = Payload::from_fn(width, |b| b % 3 != 0);
    drv.write_row(0, 10, &data).unwrap();
    drv.write_row(0, 11, &data.invert()).unwrap();
    drv.row_copy(0, 10, 11).unwrap();
    assert_eq!(drv.read_row(0, 11).unwrap(), data);
    // and the source still holds its data
    assert_eq!(drv.read_row(0, 10).unwrap(), data);
}

#[test]
fn row_copy_outside_window_is_normal_sensing() {
    let mut dev = device(presets::toy_open(2));
    let trp = dev.host_info().timing.trp_cycles;
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let data = Payload::from_fn(width, |b| b % 3 != 0);
    let own = data.invert();
    drv.write_row(0, 10, &data).unwrap();
    drv.write_row(0, 11, &own).unwrap();
    drv.row_copy_with_delay(0, 10, 11, trp).unwrap();
    assert_eq!(drv.read_row(0, 11).unwrap(), own);
}

#[test]
fn cross_subarray_copy_moves_half_inverted_per_flag() {
    // toy_open sets datapath_inversion; rows 63/64 straddle a boundary
    let mut dev = device(presets::toy_open(2));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let ones = Payload::ones(width);
    // inverted copy of all-ones over all-ones shows up as cleared bits
    drv.write_row(0, 63, &ones).unwrap();
    drv.write_row(0, 64, &ones).unwrap();
    drv.row_copy(0, 63, 64).unwrap();
    let after = drv.read_row(0, 64).unwrap();
    assert_eq!(after.count_ones(), width / 2);
    // as-is trial: nothing changes when the flag inverts
    drv.write_row(0, 63, &ones).unwrap();
    drv.write_row(0, 64, &Payload::zero(width)).unwrap();
    drv.row_copy(0, 63, 64).unwrap();
    assert_eq!(drv.read_row(0, 64).unwrap().count_ones(), 0);
}

#[test]
fn folded_cross_copy_is_a_no_op() {
    let mut dev = device(presets::toy_folded(2));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let data = Payload::from_fn(width, |b| b % 5 == 0);
    let own = Payload::from_fn(width, |b| b % 7 == 0);
    drv.write_row(0, 63, &data).unwrap();
    drv.write_row(0, 64, &own).unwrap();
    drv.row_copy(0, 63, 64).unwrap();
    assert_eq!(drv.read_row(0, 64).unwrap(), own);
}

#[test]
fn copy_conservation_changes_only_the_destination() {
    let mut dev = device(presets::toy_open(9));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let rows = drv.rows();
    for r in 0..rows {
        drv.write_row(0, r, &Payload::from_fn(width, |b| (r + b) % 2 == 0)).unwrap();
    }
    let before: Vec<Payload> = (0..rows).map(|r| drv.read_row(0, r).unwrap()).collect();
    drv.row_copy(0, 20, 21).unwrap(); // same subarray
    drv.row_copy(0, 63, 64).unwrap(); // across a boundary
    for r in 0..rows {
        let now = drv.read_row(0, r).unwrap();
        match r {
            21 => assert_eq!(now, before[20]),
            64 => {
                let changed = now.diff_bits(&before[64]).len() as u32;
                assert_eq!(changed, width / 2);
            }
            _ => assert_eq!(now, before[r as usize], "row {r} must be untouched"),
        }
    }
}

#[test]
fn double_cross_copy_cancels_inversion() {
    let mut dev = device(presets::toy_open(5));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let data = Payload::from_fn(width, |b| b % 3 == 1);
    // up into the next subarray, then back down onto another row of the
    // original subarray: doubly-copied bits re-invert to the original
    drv.write_row(0, 62, &data).unwrap();
    drv.write_row(0, 64, &data).unwrap(); // same fill, so crossed bits show as inverted
    drv.write_row(0, 40, &Payload::zero(width)).unwrap();
    drv.row_copy(0, 62, 64).unwrap();
    let mid = drv.read_row(0, 64).unwrap();
    let crossed = mid.diff_bits(&data);
    assert_eq!(crossed.len() as u32, width / 2);
    drv.row_copy(0, 64, 40).unwrap();
    let end = drv.read_row(0, 40).unwrap();
    for &b in &crossed {
        assert_eq!(end.get(b), data.get(b), "bit {b} should have re-inverted");
    }
}

#[test]
fn retention_decay_follows_polarity() {
    // toy_open alternates polarity by subarray: rows 0..64 true cells,
    // 64..128 anti cells
    let mut dev = device(presets::toy_open(4));
    let retention = dev.profile().fault_params.retention_mean as u64;
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    // charged everywhere: 1s in a true subarray, 0s in an anti subarray
    drv.write_row(0, 10, &Payload::ones(width)).unwrap();
    drv.write_row(0, 70, &Payload::zero(width)).unwrap();
    // discharged everywhere: stable under decay
    drv.write_row(0, 11, &Payload::zero(width)).unwrap();
    drv.write_row(0, 71, &Payload::ones(width)).unwrap();
    drv.wait(retention * 3).unwrap();
    assert_eq!(drv.read_row(0, 10).unwrap().count_ones(), 0, "true cells decay 1 -> 0");
    assert_eq!(drv.read_row(0, 70).unwrap().count_ones(), width, "anti cells decay 0 -> 1");
    assert_eq!(drv.read_row(0, 11).unwrap().count_ones(), 0, "discharged true cells hold");
    assert_eq!(drv.read_row(0, 71).unwrap().count_ones(), width, "discharged anti cells hold");
}

#[test]
fn advance_without_due_deadlines_changes_nothing() {
    let mut dev = device(presets::toy_open(4));
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let data = Payload::from_fn(width, |b| b % 2 == 0);
    drv.write_row(0, 5, &data).unwrap();
    drv.wait(1000).unwrap(); // far below the retention floor
    assert_eq!(drv.read_row(0, 5).unwrap(), data);
}

#[test]
fn refresh_cadence_suppresses_retention_errors() {
    let mut dev = device(presets::toy_open(6));
    let trefw = dev.host_info().timing.trefw_cycles;
    let retention = dev.profile().fault_params.retention_mean as u64;
    let groups = 64u64;
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let rows = drv.rows();
    let data = Payload::from_fn(width, |b| b % 3 == 0);
    for r in 0..rows {
        drv.write_row(0, r, &data).unwrap();
        drv.write_row(1, r, &data).unwrap();
    }
    // every group refreshed once per tREFW, for several retention lifetimes
    let horizon = drv.now() + retention * 3;
    while drv.now() < horizon {
        drv.wait(trefw / groups).unwrap();
        drv.refresh().unwrap();
    }
    for bank in 0..2 {
        for r in 0..rows {
            assert_eq!(drv.read_row(bank, r).unwrap(), data, "bank {bank} row {r}");
        }
    }
}

#[test]
fn hammering_boundary_rows_never_crosses_the_strip() {
    let mut dev = device(presets::toy_open(8));
    let ceiling = 2_000_000;
    let tras = dev.host_info().timing.tras_cycles;
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    for bg in [Payload::zero(width), Payload::ones(width)] {
        // row 63 ends subarray 0; row 64 starts subarray 1
        for r in 62..=65 {
            drv.write_row(0, r, &bg).unwrap();
        }
        drv.hammer(0, 63, ceiling, tras).unwrap();
        assert_eq!(drv.read_row(0, 64).unwrap(), bg, "no flips across the boundary");
        assert_ne!(drv.read_row(0, 62).unwrap(), bg, "in-subarray victim flips");
    }
}

#[test]
fn restore_violation_is_flagged_but_silent() {
    let mut dev = device(presets::toy_open(3));
    let t = dev.now() + 1;
    dev.issue(Command::act(t, 0, 7)).unwrap();
    let res = dev.issue(Command::pre(t + 3, 0)).unwrap();
    assert!(res.restore_violation);
    let t = dev.now() + 20;
    dev.issue(Command::act(t, 0, 7)).unwrap();
    let res = dev.issue(Command::pre(t + 28, 0)).unwrap();
    assert!(!res.restore_violation);
}

#[test]
fn protocol_errors_name_the_bank_phase() {
    let mut dev = device(presets::toy_open(3));
    let t = dev.now() + 1;
    assert_eq!(
        dev.issue(Command::rd(t, 0)).unwrap_err(),
        ProtocolError::BankIdle { kind: "RD", bank: 0 }
    );
    dev.issue(Command::act(t + 1, 0, 3)).unwrap();
    assert_eq!(
        dev.issue(Command::act(t + 2, 0, 4)).unwrap_err(),
        ProtocolError::ActWhileActive { bank: 0, active_row: 3 }
    );
    assert_eq!(
        dev.issue(Command::refresh(t + 3)).unwrap_err(),
        ProtocolError::RefWhileActive { bank: 0 }
    );
    dev.issue(Command::pre(t + 40, 0)).unwrap();
    assert_eq!(
        dev.issue(Command::pre(t + 41, 0)).unwrap_err(),
        ProtocolError::BankIdle { kind: "PRE", bank: 0 }
    );
    assert_eq!(
        dev.issue(Command::act(t + 41, 0, 3)).unwrap_err(),
        ProtocolError::NonMonotonicCycle { cycle: t + 41, last: t + 41 }
    );
    assert_eq!(
        dev.advance_to(1).unwrap_err(),
        ProtocolError::TimeReversal { target: 1, current: dev.now() }
    );
}

/// Delegating wrapper that hides the device's fast hammer path so the
/// trait's default per-command expansion runs instead.
struct NaivePath<'a>(&'a mut Device);

impl MemoryCommands for NaivePath<'_> {
    fn host_info(&self) -> xray_core::iface::HostInfo {
        self.0.host_info()
    }
    fn now(&self) -> u64 {
        self.0.now()
    }
    fn issue(&mut self, cmd: Command) -> Result<xray_core::command::CommandResult, ProtocolError> {
        self.0.issue(cmd)
    }
    fn advance_to(&mut self, cycle: u64) -> Result<(), ProtocolError> {
        self.0.advance_to(cycle)
    }
}

/// Tiny retention so deadlines interrupt hammers mid-batch; small
/// thresholds so flips happen within a few thousand cycles.
fn stress_profile(seed: u64) -> DeviceProfile {
    let mut p = presets::toy_open(seed);
    p.fault_params.retention_mean = 50_000.0;
    p.fault_params.retention_sigma = 0.4;
    p.fault_params.rh_threshold_mean = 1_500.0;
    p.fault_params.rh_threshold_sigma = 0.8;
    p.fault_params.pg_threshold_mean = 900.0;
    p.fault_params.pg_threshold_sigma = 0.5;
    p
}

#[test]
fn batched_hammer_is_state_identical_to_command_expansion() {
    for seed in 0..3u64 {
        for &(count, act_cycles) in &[(1u64, 28u64), (7, 28), (400, 28), (2500, 28), (900, 140)] {
            let mut fast = device(stress_profile(seed));
            let mut slow = device(stress_profile(seed));
            let width = fast.host_info().row_width_bits;
            let rows = fast.host_info().rows_per_bank;

            let prep = |dev: &mut Device| {
                let lens = lens_for(dev);
                let mut drv = Driver::new(dev, lens);
                for r in 14..=18 {
                    drv.write_row(0, r, &Payload::from_fn(width, |b| (b + r) % 2 == 0)).unwrap();
                }
            };
            prep(&mut fast);
            prep(&mut slow);

            fast.hammer(0, 16, count, act_cycles).unwrap();
            NaivePath(&mut slow).hammer(0, 16, count, act_cycles).unwrap();

            assert_eq!(fast.now(), slow.now(), "clock (count {count}, act {act_cycles})");
            for r in 0..rows {
                for b in 0..width {
                    assert_eq!(
                        (
                            fast.inspect_charged(0, r, b),
                            fast.inspect_flipped(0, r, b),
                            fast.inspect_accumulators(0, r, b)
                        ),
                        (
                            slow.inspect_charged(0, r, b),
                            slow.inspect_flipped(0, r, b),
                            slow.inspect_accumulators(0, r, b)
                        ),
                        "cell ({r},{b}) seed {seed} count {count} act {act_cycles}"
                    );
                }
            }
        }
    }
}

#[test]
fn charge_share_window_constant_is_sane() {
    assert_eq!(copy_window_cycles(11), 6);
    assert_eq!(copy_window_cycles(6), 3);
    assert!(copy_window_cycles(4) >= 1);
}

#[test]
fn identical_profiles_replay_identically() {
    let build = || device(presets::toy_open(42));
    let mut a = build();
    let mut b = build();
    let lens = lens_for(&a);
    let trace = {
        let mut drv = Driver::new(&mut a, lens.clone());
        let width = drv.width();
        drv.write_row(0, 5, &Payload::ones(width)).unwrap();
        drv.hammer(0, 6, 40_000, 28).unwrap();
        drv.row_copy(0, 5, 6).unwrap();
        drv.wait(2_000_000).unwrap();
        drv.read_row(0, 5).unwrap()
    };
    let replay = {
        let mut drv = Driver::new(&mut b, lens);
        let width = drv.width();
        drv.write_row(0, 5, &Payload::ones(width)).unwrap();
        drv.hammer(0, 6, 40_000, 28).unwrap();
        drv.row_copy(0, 5, 6).unwrap();
        drv.wait(2_000_000).unwrap();
        drv.read_row(0, 5).unwrap()
    };
    assert_eq!(trace, replay);
    for r in 0..256 {
        for bit in 0..64 {
            assert_eq!(a.inspect_charged(0, r, bit), b.inspect_charged(0, r, bit));
        }
    }
}

#[test]
fn coupled_activation_mirrors_data_effects() {
    let mut p = presets::toy_open(13);
    p.coupled_row_stride = Some(128);
    let mut dev = device(p);
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let data = Payload::from_fn(width, |b| b % 4 < 2);

    // a write splashes onto the coupled partner
    drv.write_row(0, 10, &data).unwrap();
    assert_eq!(drv.read_row(0, 138).unwrap(), data);

    // a row copy lands at the destination and its partner
    let other = Payload::from_fn(width, |b| b % 4 >= 2);
    drv.write_row(0, 20, &other).unwrap();
    drv.write_row(0, 21, &Payload::zero(width)).unwrap();
    drv.row_copy(0, 20, 21).unwrap();
    assert_eq!(drv.read_row(0, 21).unwrap(), other);
    assert_eq!(drv.read_row(0, 149).unwrap(), other);
}

#[test]
fn coupled_hammer_disturbs_both_neighborhoods() {
    let mut p = presets::toy_open(14);
    p.coupled_row_stride = Some(128);
    let mut dev = device(p);
    let tras = dev.host_info().timing.tras_cycles;
    let lens = lens_for(&dev);
    let mut drv = Driver::new(&mut dev, lens);
    let width = drv.width();
    let bg = Payload::ones(width);
    for r in [9u32, 10, 11, 137, 138, 139] {
        drv.write_row(0, r, &bg).unwrap();
    }
    drv.hammer(0, 10, 2_000_000, tras).unwrap();
    assert_ne!(drv.read_row(0, 9).unwrap(), bg);
    assert_ne!(drv.read_row(0, 11).unwrap(), bg);
    assert_ne!(drv.read_row(0, 137).unwrap(), bg);
    assert_ne!(drv.read_row(0, 139).unwrap(), bg);
}
