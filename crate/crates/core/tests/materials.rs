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

//! Shipped material cards and crossing detection.

use std::path::{Path, PathBuf};

use nanorod_lifshitz::dielectric::{
    eval_epsilon, find_crossings, load_material_card, DielectricModel, Oscillator,
    OscillatorModel,
};
use proptest::prelude::*;

const CARDS: [&str; 3] = ["sio2.toml", "zno.toml", "bromobenzene.toml"];

fn path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../materials").join(name)
}

#[test]
fn shipped_cards_are_passive_and_decreasing() {
    for name in CARDS {
        let card = load_material_card(path(name)).unwrap();
        assert!(card.representative, "{name} should be tagged representative");
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let xi = 1e10 * 10f64.powf(8.0 * i as f64 / 999.0);
            let e = eval_epsilon(&card.model, xi).unwrap();
            assert!(e >= 1.0, "{name} at {xi}: {e}");
            assert!(e <= prev, "{name} not decreasing at {xi}");
            prev = e;
        }
    }
}

#[test]
fn shipped_crossings_are_ordered() {
    let sio2 = load_material_card(path("sio2.toml")).unwrap().model;
    let zno = load_material_card(path("zno.toml")).unwrap().model;
    let bb = load_material_card(path("bromobenzene.toml")).unwrap().model;
    let low = find_crossings(&zno, &bb, 0.0, 1e18).unwrap().crossings;
    let high = find_crossings(&sio2, &bb, 0.0, 1e18).unwrap().crossings;
    assert_eq!(low.len(), 1);
    assert_eq!(high.len(), 1);
    assert!(low[0].xi < high[0].xi);
    // both rods lie below the medium in the static limit
    assert_eq!(low[0].sign_below, -1);
    assert_eq!(high[0].sign_below, -1);
}

fn model(terms: &[(f64, f64)]) -> DielectricModel {
    DielectricModel::oscillators(
        "m",
        OscillatorModel::new(
            terms
                .iter()
                .map(|&(c, w)| Oscillator::undamped(c, w).unwrap())
                .collect(),
        ),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn crossings_alternate(
        a in prop::collection::vec((0.1f64..3.0, 13.0f64..17.0), 1..4),
        b in prop::collection::vec((0.1f64..3.0, 13.0f64..17.0), 1..4),
    ) {
        let to = |v: &[(f64, f64)]| v.iter().map(|&(c, lw)| (c, 10f64.powf(lw))).collect::<Vec<_>>();
        let (ma, mb) = (model(&to(&a)), model(&to(&b)));
        let report = find_crossings(&ma, &mb, 0.0, 1e19).unwrap();
        for pair in report.crossings.windows(2) {
            prop_assert_eq!(pair[0].sign_below, -pair[1].sign_below);
            prop_assert!(pair[0].xi < pair[1].xi);
        }
        for c in &report.crossings {
            let d = ma.epsilon(c.xi) - mb.epsilon(c.xi);
            prop_assert!(d.abs() < 1e-6 * ma.epsilon(c.xi));
        }
    }
}
