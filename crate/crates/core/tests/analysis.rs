// Copyright 2026 The nanorod-lifshitz developers
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

//! Separation sweeps on constant media and on the shipped cards.

use std::path::Path;
use std::sync::Arc;

use nanorod_lifshitz::analysis::{local_exponent, sweep, sweep_column, Column, ExtremumKind};
use nanorod_lifshitz::dielectric::{load_material_card, DielectricModel};
use nanorod_lifshitz::free_energy::{free_energy, EnergyMode, IntegrationSettings};
use nanorod_lifshitz::matsubara::ThermalEnvironment;
use nanorod_lifshitz::rod_kernel::RodSystem;

fn constant(v: f64) -> Arc<DielectricModel> {
    Arc::new(DielectricModel::constant("c", v).unwrap())
}

fn card(name: &str) -> Arc<DielectricModel> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../materials").join(name);
    Arc::new(load_material_card(path).unwrap().model)
}

fn shipped() -> RodSystem {
    RodSystem::new(1e-9, 1e-9, card("sio2.toml"), card("zno.toml"), card("bromobenzene.toml"))
        .unwrap()
}

fn loose() -> IntegrationSettings {
    IntegrationSettings {
        rel_tol: 1e-6,
        ..Default::default()
    }
}

#[test]
fn matched_medium_sweep_is_empty() {
    let sys = RodSystem::new(1e-9, 1e-9, constant(2.0), constant(3.0), constant(2.0)).unwrap();
    let env = ThermalEnvironment::default();
    let report = sweep(&sys, &env, 1e-8, 1e-6, 4, &loose()).unwrap();
    assert!(report.grid.iter().all(|r| r.f_ret == 0.0 && r.f_nonret == 0.0 && r.f_n0 == 0.0));
    assert!(report.boundaries.is_empty() && report.extrema.is_empty());
    assert!(report.ratio().is_empty());
}

#[test]
fn persistent_intermediate_medium_repels_everywhere() {
    let sys = RodSystem::new(1e-9, 1e-9, constant(2.0), constant(4.0), constant(3.0)).unwrap();
    let env = ThermalEnvironment::default();
    let report = sweep(&sys, &env, 5e-9, 5e-6, 4, &loose()).unwrap();
    assert!(report.boundaries.is_empty());
    assert_eq!(report.region_count(), 1);
    assert!(report.grid.iter().all(|r| r.f_ret > 0.0 && r.f_nonret > 0.0 && r.f_n0 > 0.0));
    // frequency-independent media: the nonretarded sum has no tail decay
    assert!(report.grid.iter().all(|r| !r.converged_nonret));
    assert!(!report.all_converged());
}

#[test]
fn constant_media_exponent_is_minus_five() {
    let sys = RodSystem::new(1e-9, 1e-9, constant(3.0), constant(3.5), constant(2.0)).unwrap();
    let env = ThermalEnvironment::default();
    let report = sweep(&sys, &env, 1e-8, 1e-6, 8, &loose()).unwrap();
    for row in &report.grid[1..report.grid.len() - 1] {
        let p = local_exponent(&report, Column::Nonret, row.r).unwrap();
        assert!((p + 5.0).abs() < 1e-9, "{p}");
        assert!((local_exponent(&report, Column::N0, row.r).unwrap() + 5.0).abs() < 1e-9);
    }
    // between grid points the bracketing pair is used
    let mid = (report.grid[3].r * report.grid[4].r).sqrt();
    assert!((local_exponent(&report, Column::Nonret, mid).unwrap() + 5.0).abs() < 1e-9);
    assert!(local_exponent(&report, Column::Nonret, 1e-8).is_err());
    assert!(local_exponent(&report, Column::Nonret, 2e-6).is_err());
}

#[test]
fn shipped_cards_boundaries_are_bracketed() {
    let sys = shipped();
    let env = ThermalEnvironment::default();
    let s = loose();
    let report = sweep(&sys, &env, 2e-8, 2e-6, 6, &s).unwrap();
    assert!(report.all_converged(), "{:?}", report.warnings);
    assert_eq!(report.boundaries.len(), 2);
    assert_eq!(report.region_count(), 3);
    for b in &report.boundaries {
        let below = free_energy(&sys, &env, b.r * (1.0 - 1e-3), EnergyMode::Retarded, &s).unwrap();
        let above = free_energy(&sys, &env, b.r * (1.0 + 1e-3), EnergyMode::Retarded, &s).unwrap();
        assert!(below.free_energy.signum() == b.sign_below as f64);
        assert!(above.free_energy.signum() == -(b.sign_below as f64));
    }
    assert!(report.extrema.iter().any(|e| e.kind == ExtremumKind::Maximum && e.f > 0.0));
    assert!(report.extrema.iter().any(|e| e.kind == ExtremumKind::Minimum && e.f < 0.0));
    for e in &report.extrema {
        let f = free_energy(&sys, &env, e.r, EnergyMode::Retarded, &s).unwrap().free_energy;
        for side in [e.r * 0.98, e.r * 1.02] {
            let g = free_energy(&sys, &env, side, EnergyMode::Retarded, &s).unwrap().free_energy;
            match e.kind {
                ExtremumKind::Maximum => assert!(g < f),
                ExtremumKind::Minimum => assert!(g > f),
            }
        }
    }

    // the exponent is undefined across a sign change
    let b = report.boundaries[0].r;
    assert!(local_exponent(&report, Column::Ret, b).is_err());
}

#[test]
fn entropic_column_exponent_at_large_separation() {
    let sys = shipped();
    let env = ThermalEnvironment::default();
    let report = sweep_column(&sys, &env, 2e-6, 1e-5, 8, &loose(), Column::N0).unwrap();
    let r = report.grid[report.grid.len() / 2].r;
    let p = local_exponent(&report, Column::N0, r).unwrap();
    assert!((p + 5.0).abs() < 0.05, "{p}");
    assert!(report.boundaries.is_empty());
}

#[test]
fn sweep_rejects_bad_ranges() {
    let sys = shipped();
    let env = ThermalEnvironment::default();
    assert!(sweep(&sys, &env, 1e-6, 1e-7, 16, &loose()).is_err());
    assert!(sweep(&sys, &env, 0.0, 1e-7, 16, &loose()).is_err());
    assert!(sweep(&sys, &env, 1e-8, 1e-7, 2, &loose()).is_err());
}
