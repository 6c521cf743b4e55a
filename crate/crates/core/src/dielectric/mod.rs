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

//! Dielectric functions on the imaginary frequency axis.
//!
//! A [`DielectricModel`] is either a sum of damped oscillators, a table of
//! real-axis loss ε″(ω) mapped to the imaginary axis by the Kramers-Kronig
//! transform, or a frequency-independent constant (useful for model
//! systems). [`find_crossings`] locates the frequencies where two media
//! have equal ε(iξ); each crossing flips the sign of the corresponding
//! spectral contribution to the rod-rod interaction.

mod card;
mod kk;

use std::sync::Arc;

pub use card::{load_material_card, parse_loss_table, parse_material_card, MaterialCard, SourceType};
pub use kk::{kk_transform, TabulatedLossData, TabulatedModel, DEFAULT_CACHE_POINTS_PER_DECADE};

use crate::error::{Error, Result};

/// One damped oscillator term `C / (1 + (ξ/ω)² + gξ/ω²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oscillator {
    /// Strength C (dimensionless).
    pub strength: f64,
    /// Resonance ω in rad/s.
    pub resonance: f64,
    /// Damping g in rad/s.
    pub damping: f64,
}

impl Oscillator {
    pub fn new(strength: f64, resonance: f64, damping: f64) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(Error::data(format!(
                "oscillator strength must be non-negative, got {strength}"
            )));
        }
        if !(resonance > 0.0 && resonance.is_finite()) {
            return Err(Error::data(format!(
                "oscillator resonance must be positive, got {resonance}"
            )));
        }
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(Error::data(format!(
                "oscillator damping must be non-negative, got {damping}"
            )));
        }
        Ok(Self {
            strength,
            resonance,
            damping,
        })
    }

    pub fn undamped(strength: f64, resonance: f64) -> Result<Self> {
        Self::new(strength, resonance, 0.0)
    }

    #[inline]
    fn contribution(&self, xi: f64) -> f64 {
        let t = xi / self.resonance;
        self.strength / (1.0 + t * t + self.damping * t / self.resonance)
    }
}

/// ε(iξ) = 1 + Σ_j C_j / (1 + (ξ/ω_j)² + g_j ξ/ω_j²)
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OscillatorModel {
    terms: Vec<Oscillator>,
}

impl OscillatorModel {
    pub fn new(terms: Vec<Oscillator>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[Oscillator] {
        &self.terms
    }

    #[inline]
    pub fn epsilon(&self, xi: f64) -> f64 {
        1.0 + self.terms.iter().map(|o| o.contribution(xi)).sum::<f64>()
    }

    /// ε(0) = 1 + Σ C_j
    pub fn static_value(&self) -> f64 {
        self.epsilon(0.0)
    }
}

#[derive(Clone, Debug)]
pub enum DielectricSource {
    /// Frequency-independent ε (≥ 1).
    Constant(f64),
    Oscillators(OscillatorModel),
    Tabulated(TabulatedModel),
}

/// An evaluable ε(iξ) for one material. Immutable once built.
#[derive(Clone, Debug)]
pub struct DielectricModel {
    label: String,
    source: DielectricSource,
}

impl DielectricModel {
    pub fn constant(label: impl Into<String>, value: f64) -> Result<Self> {
        if !(value >= 1.0 && value.is_finite()) {
            return Err(Error::data(format!(
                "constant dielectric value must be >= 1, got {value}"
            )));
        }
        Ok(Self {
            label: label.into(),
            source: DielectricSource::Constant(value),
        })
    }

    pub fn vacuum() -> Self {
        Self {
            label: "vacuum".into(),
            source: DielectricSource::Oscillators(OscillatorModel::default()),
        }
    }

    pub fn oscillators(label: impl Into<String>, model: OscillatorModel) -> Self {
        Self {
            label: label.into(),
            source: DielectricSource::Oscillators(model),
        }
    }

    pub fn tabulated(label: impl Into<String>, data: TabulatedLossData) -> Self {
        Self {
            label: label.into(),
            source: DielectricSource::Tabulated(TabulatedModel::new(data)),
        }
    }

    pub fn from_tabulated_model(label: impl Into<String>, model: TabulatedModel) -> Self {
        Self {
            label: label.into(),
            source: DielectricSource::Tabulated(model),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &DielectricSource {
        &self.source
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    /// ε(iξ) without argument checks; `xi` must be non-negative.
    #[inline]
    pub fn epsilon(&self, xi: f64) -> f64 {
        match &self.source {
            DielectricSource::Constant(v) => *v,
            DielectricSource::Oscillators(m) => m.epsilon(xi),
            DielectricSource::Tabulated(m) => m.epsilon(xi),
        }
    }

    /// Largest characteristic absorption frequency, if the model has one.
    ///
    /// For oscillators this is the highest resonance; for tables, the
    /// highest frequency whose loss reaches 1% of the peak loss.
    pub fn highest_resonance(&self) -> Option<f64> {
        match &self.source {
            DielectricSource::Constant(_) => None,
            DielectricSource::Oscillators(m) => m
                .terms()
                .iter()
                .filter(|o| o.strength > 0.0)
                .map(|o| o.resonance)
                .reduce(f64::max),
            DielectricSource::Tabulated(m) => m.data().dominant_upper_frequency(),
        }
    }
}

/// ε(iξ) for ξ ≥ 0.
pub fn eval_epsilon(model: &DielectricModel, xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::domain(format!(
            "imaginary frequency must be non-negative, got {xi}"
        )));
    }
    Ok(model.epsilon(xi))
}

/// Scan density used to bracket crossings.
pub const CROSSING_SCAN_POINTS_PER_DECADE: usize = 64;

/// When the scan starts at ξ = 0 the logarithmic part begins this many
/// decades below the upper end.
pub const CROSSING_SCAN_DECADES_FROM_ZERO: f64 = 12.0;

const CROSSING_RTOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    /// Frequency ξ* in rad/s where ε_A(iξ*) = ε_B(iξ*).
    pub xi: f64,
    /// Sign of ε_A − ε_B just below ξ*.
    pub sign_below: i8,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
    pub diagnostics: Vec<String>,
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Every sign change of ε_A(iξ) − ε_B(iξ) on `[xi_min, xi_max]`.
///
/// The interval is scanned on a logarithmic grid and each bracket is
/// refined by bisection to a relative width of 1e-10. Touching without a
/// sign change is not a crossing; it is listed in the diagnostics.
pub fn find_crossings(
    a: &DielectricModel,
    b: &DielectricModel,
    xi_min: f64,
    xi_max: f64,
) -> Result<CrossingReport> {
    if !(xi_min >= 0.0 && xi_max > xi_min && xi_max.is_finite()) {
        return Err(Error::domain(format!(
            "crossing search needs 0 <= xi_min < xi_max, got [{xi_min}, {xi_max}]"
        )));
    }
    let diff = |xi: f64| a.epsilon(xi) - b.epsilon(xi);

    let mut grid = Vec::new();
    let log_start = if xi_min > 0.0 {
        xi_min
    } else {
        grid.push(0.0);
        xi_max * 10f64.powf(-CROSSING_SCAN_DECADES_FROM_ZERO)
    };
    let decades = (xi_max / log_start).log10();
    let steps = ((decades * CROSSING_SCAN_POINTS_PER_DECADE as f64).ceil() as usize).max(1);
    for i in 0..=steps {
        let xi = if i == steps {
            xi_max
        } else {
            log_start * 10f64.powf(decades * i as f64 / steps as f64)
        };
        grid.push(xi);
    }

    let mut report = CrossingReport::default();
    let mut last: Option<(f64, i8)> = None;
    let mut touched: Option<f64> = None;
    let mut all_zero = true;
    for &xi in &grid {
        let s = sign_of(diff(xi));
        if s == 0 {
            if touched.is_none() {
                touched = Some(xi);
            }
            continue;
        }
        all_zero = false;
        if let Some((lo, s_lo)) = last {
            if s != s_lo {
                let root = bisect(&diff, lo, xi, s_lo);
                report.crossings.push(Crossing {
                    xi: root,
                    sign_below: s_lo,
                });
            } else if let Some(t) = touched {
                report
                    .diagnostics
                    .push(format!("tangential contact near xi = {t:e} rad/s (no sign change)"));
            }
        }
        touched = None;
        last = Some((xi, s));
    }
    if all_zero {
        report
            .diagnostics
            .push("difference vanishes on the whole scan grid; models coincide".into());
    }
    Ok(report)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, sign_lo: i8) -> f64 {
    for _ in 0..200 {
        if hi - lo <= CROSSING_RTOL * hi {
            break;
        }
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        let s = sign_of(f(mid));
        if s == 0 {
            return mid;
        }
        if s == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(c: f64, w: f64) -> DielectricModel {
        DielectricModel::oscillators(
            "osc",
            OscillatorModel::new(vec![Oscillator::undamped(c, w).unwrap()]),
        )
    }

    #[test]
    fn vacuum_is_one() {
        let v = DielectricModel::vacuum();
        for xi in [0.0, 1.0, 1e15, 1e30] {
            assert_eq!(eval_epsilon(&v, xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_oscillator_at_resonance() {
        let m = single(1.0, 1e16);
        assert_eq!(eval_epsilon(&m, 1e16).unwrap(), 1.5);
        assert_eq!(eval_epsilon(&m, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(eval_epsilon(&DielectricModel::vacuum(), -1.0).is_err());
    }

    #[test]
    fn invalid_oscillators_rejected() {
        assert!(Oscillator::new(-0.1, 1e15, 0.0).is_err());
        assert!(Oscillator::new(1.0, 0.0, 0.0).is_err());
        assert!(Oscillator::new(1.0, 1e15, -1.0).is_err());
        assert!(DielectricModel::constant("x", 0.5).is_err());
    }

    #[test]
    fn undamped_models_decrease() {
        let m = DielectricModel::oscillators(
            "two",
            OscillatorModel::new(vec![
                Oscillator::undamped(0.7, 2e14).unwrap(),
                Oscillator::undamped(1.2, 1.5e16).unwrap(),
            ]),
        );
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let xi = 10f64.powf(10.0 + 8.0 * i as f64 / 999.0);
            let v = m.epsilon(xi);
            assert!(v < prev && v >= 1.0);
            prev = v;
        }
    }

    #[test]
    fn identical_models_have_no_crossings() {
        let m = single(2.0, 1e15);
        let r = find_crossings(&m, &m, 1e10, 1e18).unwrap();
        assert!(r.crossings.is_empty());
        assert_eq!(r.diagnostics.len(), 1);
    }

    #[test]
    fn two_oscillators_cross_at_quadratic_root() {
        let (wa, wb) = (1e15, 1e16);
        let a = single(2.0, wa);
        let b = single(1.0, wb);
        // 2/(1+x/wa²) = 1/(1+x/wb²) with x = ξ²
        let expect = (1.0 / (1.0 / (wa * wa) - 2.0 / (wb * wb))).sqrt();
        let r = find_crossings(&a, &b, 1e10, 1e18).unwrap();
        assert_eq!(r.crossings.len(), 1);
        let c = r.crossings[0];
        assert!(((c.xi - expect) / expect).abs() < 1e-9, "{} vs {expect}", c.xi);
        assert_eq!(c.sign_below, 1);
    }

    #[test]
    fn scan_from_zero() {
        let a = single(2.0, 1e15);
        let b = single(1.0, 1e16);
        let r = find_crossings(&a, &b, 0.0, 1e18).unwrap();
        assert_eq!(r.crossings.len(), 1);
    }

    #[test]
    fn crossing_signs_alternate() {
        // plateaus interleave three times
        let a = DielectricModel::oscillators(
            "a",
            OscillatorModel::new(vec![
                Oscillator::undamped(3.0, 1e12).unwrap(),
                Oscillator::undamped(1.0, 1e16).unwrap(),
            ]),
        );
        let b = DielectricModel::oscillators(
            "b",
            OscillatorModel::new(vec![
                Oscillator::undamped(1.5, 1e14).unwrap(),
                Oscillator::undamped(0.5, 1e17).unwrap(),
            ]),
        );
        let r = find_crossings(&a, &b, 1e9, 1e18).unwrap();
        assert_eq!(r.crossings.len(), 3);
        for w in r.crossings.windows(2) {
            assert_eq!(w[0].sign_below, -w[1].sign_below);
            assert!(w[0].xi < w[1].xi);
        }
        for c in &r.crossings {
            let below = a.epsilon(c.xi * (1.0 - 1e-6)) - b.epsilon(c.xi * (1.0 - 1e-6));
            assert_eq!(sign_of(below), c.sign_below);
        }
    }

    #[test]
    fn bad_interval_rejected() {
        let m = DielectricModel::vacuum();
        assert!(find_crossings(&m, &m, 1e15, 1e14).is_err());
        assert!(find_crossings(&m, &m, -1.0, 1e14).is_err());
    }
}
