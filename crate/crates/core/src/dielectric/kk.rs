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

//! Imaginary-axis dielectric function from tabulated absorption data.
//!
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ξ²) dω
//!
//! Between table nodes ε″ is linear and every segment is integrated in
//! closed form. Below the first node ε″ falls linearly to zero and above
//! the last node it decays as ω⁻³; both tails are integrated analytically.

use std::f64::consts::FRAC_2_PI;

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;

/// Real-axis loss ε″(ω) sampled on a strictly increasing frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedLossData {
    frequencies: Vec<f64>,
    loss: Vec<f64>,
}

impl TabulatedLossData {
    pub fn new(frequencies: Vec<f64>, loss: Vec<f64>) -> Result<Self> {
        if frequencies.len() != loss.len() {
            return Err(Error::data(format!(
                "loss table has {} frequencies but {} loss values",
                frequencies.len(),
                loss.len()
            )));
        }
        if frequencies.len() < 2 {
            return Err(Error::data("loss table needs at least two rows"));
        }
        for (i, (&w, &l)) in frequencies.iter().zip(&loss).enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::data(format!(
                    "row {}: frequency must be positive and finite, got {w}",
                    i + 1
                )));
            }
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::data(format!(
                    "row {}: loss must be non-negative and finite, got {l}",
                    i + 1
                )));
            }
        }
        if let Some(i) = frequencies.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::data(format!(
                "frequencies must be strictly increasing (rows {} and {})",
                i + 1,
                i + 2
            )));
        }
        Ok(Self { frequencies, loss })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn loss(&self) -> &[f64] {
        &self.loss
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    fn is_transparent(&self) -> bool {
        self.loss.iter().all(|&l| l == 0.0)
    }

    /// Highest tabulated frequency whose loss is at least 1% of the peak.
    pub fn dominant_upper_frequency(&self) -> Option<f64> {
        let peak = self.loss.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return None;
        }
        self.frequencies
            .iter()
            .zip(&self.loss)
            .rev()
            .find(|(_, &l)| l >= 0.01 * peak)
            .map(|(&w, _)| w)
    }
}

/// Direct quadrature of the transform at one imaginary frequency.
pub fn kk_transform(data: &TabulatedLossData, xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::domain(format!(
            "imaginary frequency must be non-negative, got {xi}"
        )));
    }
    Ok(1.0 + FRAC_2_PI * kk_integral(&data.frequencies, &data.loss, xi))
}

/// z - atan(z) without cancellation for small z.
fn z_minus_atan(z: f64) -> f64 {
    if z.abs() < 0.1 {
        let z2 = z * z;
        let mut term = z * z2;
        let mut sum = 0.0f64;
        let mut k = 3.0;
        let mut sign = 1.0;
        while term.abs() > 1e-18 * sum.abs() || sum == 0.0 {
            sum += sign * term / k;
            term *= z2;
            k += 2.0;
            sign = -sign;
            if k > 41.0 {
                break;
            }
        }
        sum
    } else {
        z - z.atan()
    }
}

/// ∫ ω/(ω²+ξ²) dω and ∫ ω²/(ω²+ξ²) dω over [w1, w2].
fn segment_moments(w1: f64, w2: f64, xi: f64) -> (f64, f64) {
    let dw = w2 - w1;
    if xi == 0.0 {
        return ((w2 / w1).ln(), dw);
    }
    let xi2 = xi * xi;
    let j0 = 0.5 * (dw * (w2 + w1) / (w1 * w1 + xi2)).ln_1p();
    let prod = w1 * w2;
    let z = xi * dw / (xi2 + prod);
    let j1 = dw * prod / (xi2 + prod) + xi * z_minus_atan(z);
    (j0, j1)
}

pub(crate) fn kk_integral(freqs: &[f64], loss: &[f64], xi: f64) -> f64 {
    let n = freqs.len();
    let (w_lo, w_hi) = (freqs[0], freqs[n - 1]);

    // ε″ = loss[0]·ω/w_lo on [0, w_lo]
    let low = if xi == 0.0 {
        loss[0]
    } else {
        loss[0] * (xi / w_lo) * z_minus_atan(w_lo / xi)
    };

    // ε″ = loss[n-1]·(w_hi/ω)³ on [w_hi, ∞)
    let high = if xi == 0.0 {
        loss[n - 1] / 3.0
    } else {
        let y = xi / w_hi;
        loss[n - 1] * z_minus_atan(y) / (y * y * y)
    };

    let mut body = 0.0;
    for i in 0..n - 1 {
        let (w1, w2) = (freqs[i], freqs[i + 1]);
        let (l1, l2) = (loss[i], loss[i + 1]);
        if l1 == 0.0 && l2 == 0.0 {
            continue;
        }
        let (j0, j1) = segment_moments(w1, w2, xi);
        // hat-function weights keep both contributions non-negative
        let right = (j1 - w1 * j0).max(0.0);
        let left = (w2 * j0 - j1).max(0.0);
        body += (l1 * left + l2 * right) / (w2 - w1);
    }
    low + body + high
}

pub const DEFAULT_CACHE_POINTS_PER_DECADE: usize = 400;

/// Decades beyond the table edges covered by the cache.
const CACHE_MARGIN_DECADES: f64 = 3.0;

/// A tabulated loss spectrum together with a precomputed ε(iξ) curve.
///
/// The cache stores ln(ε−1) against ln ξ on a logarithmic grid and is read
/// through monotone cubic interpolation. Outside the cached range, or for a
/// transparent table, evaluation falls back to direct quadrature.
#[derive(Clone, Debug)]
pub struct TabulatedModel {
    data: TabulatedLossData,
    cache: Option<MonotoneCubic>,
}

impl TabulatedModel {
    pub fn new(data: TabulatedLossData) -> Self {
        Self::with_cache_density(data, DEFAULT_CACHE_POINTS_PER_DECADE)
    }

    /// `points_per_decade == 0` disables the cache.
    pub fn with_cache_density(data: TabulatedLossData, points_per_decade: usize) -> Self {
        let cache = if points_per_decade == 0 || data.is_transparent() {
            None
        } else {
            let lo = data.frequencies[0].log10() - CACHE_MARGIN_DECADES;
            let hi = data.frequencies[data.len() - 1].log10() + CACHE_MARGIN_DECADES;
            let count = ((hi - lo) * points_per_decade as f64).ceil() as usize + 1;
            let mut xs = Vec::with_capacity(count);
            let mut ys = Vec::with_capacity(count);
            for i in 0..count {
                let log_xi = lo + (hi - lo) * i as f64 / (count - 1) as f64;
                let xi = 10f64.powf(log_xi);
                let excess = FRAC_2_PI * kk_integral(&data.frequencies, &data.loss, xi);
                xs.push(xi.ln());
                ys.push(excess.ln());
            }
            Some(MonotoneCubic::new(xs, ys))
        };
        Self { data, cache }
    }

    pub fn data(&self) -> &TabulatedLossData {
        &self.data
    }

    pub fn is_cached(&self) -> bool {
        self.cache.is_some()
    }

    /// ε(iξ) through the cache when possible.
    pub fn epsilon(&self, xi: f64) -> f64 {
        if let Some(cache) = &self.cache {
            if xi > 0.0 {
                let t = xi.ln();
                if t >= cache.x_min() && t <= cache.x_max() {
                    return 1.0 + cache.eval(t).exp();
                }
            }
        }
        self.epsilon_direct(xi)
    }

    /// ε(iξ) by direct quadrature over the table.
    pub fn epsilon_direct(&self, xi: f64) -> f64 {
        1.0 + FRAC_2_PI * kk_integral(&self.data.frequencies, &self.data.loss, xi)
    }
}
