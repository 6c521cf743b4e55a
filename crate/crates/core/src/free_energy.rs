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

//! Free energy per unit length between the rods.
//!
//! g(ω_n) = (1/β)∫₀^∞ dk/2π G(ω_n, k) is integrated in u = kR, which
//! turns it into k_BT·a²b²/(2πR⁵)·∫Ĝ(u)du. The Matsubara sum
//! F = Σ′ g(ω_n) halves the static term. Positive F is repulsion.
//!
//! Terms are evaluated concurrently in fixed-size chunks and accumulated
//! strictly in ascending n, so results do not depend on the worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matsubara::{matsubara_weight, ThermalEnvironment};
use crate::quadrature;
use crate::rod_kernel::{KernelMode, RodSystem, ScaledKernel};

/// Accuracy and truncation controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationSettings {
    /// Relative tolerance for each k-integral and for the Matsubara tail.
    pub rel_tol: f64,
    /// Absolute floor on the truncation error, J/m.
    pub abs_floor: f64,
    pub max_matsubara_n: u64,
    /// The k-integral runs to u = kR where γ₃R has grown by this much
    /// over its k = 0 value.
    pub k_upper_multiplier: f64,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_floor: 1e-35,
            max_matsubara_n: 20_000,
            k_upper_multiplier: 60.0,
        }
    }
}

impl IntegrationSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::domain(format!(
                "rel_tol must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_floor >= 0.0 && self.abs_floor.is_finite()) {
            return Err(Error::domain(format!(
                "abs_floor must be non-negative, got {}",
                self.abs_floor
            )));
        }
        if self.max_matsubara_n < 1 {
            return Err(Error::domain("max_matsubara_n must be at least 1"));
        }
        if !(self.k_upper_multiplier > 0.0 && self.k_upper_multiplier.is_finite()) {
            return Err(Error::domain(format!(
                "k_upper_multiplier must be positive, got {}",
                self.k_upper_multiplier
            )));
        }
        Ok(())
    }
}

/// Subdivision cap for a single k-integral.
const MAX_PANELS: usize = 4000;
/// Consecutive negligible terms required before the sum may stop.
const STOP_WINDOW: u64 = 20;
/// The sum never stops below this multiple of the highest resonance.
const RESONANCE_FACTOR: f64 = 10.0;
/// Absolute floor for scaled k-integrals. Physically relevant values are
/// O(1e-3..1); this only stops refinement of terms that are underflowing.
const SCALED_ABS_TOL: f64 = 1e-280;
/// Terms evaluated per parallel batch.
const CHUNK: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnergyMode {
    Retarded,
    Nonretarded,
    /// Static (n = 0) term only, F = g(0)/2.
    ZeroFrequency,
}

impl EnergyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EnergyMode::Retarded => "retarded",
            EnergyMode::Nonretarded => "nonretarded",
            EnergyMode::ZeroFrequency => "n0",
        }
    }
}

/// One evaluated Matsubara term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GTerm {
    /// g(ω_n) in J/m (unweighted).
    pub value: f64,
    /// Quadrature error estimate in J/m.
    pub error: f64,
    pub k_evals: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyResult {
    pub separation: f64,
    /// Free energy per unit length, J/m.
    pub free_energy: f64,
    pub mode: EnergyMode,
    pub n_terms_used: u64,
    pub k_evals: usize,
    /// Extrapolated contribution of the terms beyond the last one summed
    /// (already included in `free_energy`).
    pub tail_correction: f64,
    /// Estimated remaining truncation error, J/m.
    pub tail_estimate: f64,
    pub converged: bool,
    pub warnings: Vec<String>,
}

fn check_separation(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("separation must be positive, got {r} m")));
    }
    Ok(())
}

/// Initial panels in u: graded towards 0 where the Bessel factors vary
/// logarithmically, then doubling out to `u_max`.
fn panel_breaks(u_max: f64) -> Vec<f64> {
    let mut breaks: Vec<f64> = [0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.3]
        .into_iter()
        .filter(|&b| b < u_max)
        .collect();
    let mut x = 1.0;
    while x < u_max {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(u_max);
    breaks
}

/// k_BT·a²b²/(2πR⁵)
fn prefactor(system: &RodSystem, env: &ThermalEnvironment, r: f64) -> f64 {
    let (a, b) = (system.radius_a(), system.radius_b());
    let r2 = r * r;
    env.thermal_energy() / (2.0 * std::f64::consts::PI) * (a * a) * (b * b) / (r2 * r2 * r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct ScaledIntegral {
    value: f64,
    error: f64,
    evals: usize,
    converged: bool,
}

fn integrate_scaled(kernel: &ScaledKernel, settings: &IntegrationSettings) -> ScaledIntegral {
    if kernel.is_null() {
        return ScaledIntegral {
            value: 0.0,
            error: 0.0,
            evals: 0,
            converged: true,
        };
    }
    let m = settings.k_upper_multiplier;
    let q0 = kernel.q3_at_zero();
    // (q0 + m)² − q0², so that γ₃R rises by m across the range
    let u_max = (m * m + 2.0 * m * q0).sqrt();
    let out = quadrature::integrate(
        |u| kernel.eval(u),
        &panel_breaks(u_max),
        settings.rel_tol,
        SCALED_ABS_TOL,
        MAX_PANELS,
    );
    ScaledIntegral {
        value: out.value,
        error: out.error,
        evals: out.evaluations,
        converged: out.converged,
    }
}

fn scaled_kernel(
    system: &RodSystem,
    env: &ThermalEnvironment,
    omega: f64,
    r: f64,
    mode: KernelMode,
) -> ScaledKernel {
    ScaledKernel::new(
        system.permittivities(omega),
        omega * r / env.speed_of_light(),
        mode,
    )
}

/// g(ω_n) = (1/β)∫₀^∞ dk/2π G(ω_n, k) for Matsubara index `n`.
pub fn g_term(
    system: &RodSystem,
    env: &ThermalEnvironment,
    n: u64,
    r: f64,
    mode: KernelMode,
    settings: &IntegrationSettings,
) -> Result<GTerm> {
    check_separation(r)?;
    settings.validate()?;
    let kernel = scaled_kernel(system, env, env.matsubara_frequency(n), r, mode);
    let s = integrate_scaled(&kernel, settings);
    let pf = prefactor(system, env, r);
    Ok(GTerm {
        value: pf * s.value,
        error: pf * s.error,
        k_evals: s.evals,
        converged: s.converged,
    })
}

/// Tail of Σ_{n>N} g_n for terms decaying like A·n^{-p}, from the
/// Euler-Maclaurin formula. `None` when the terms do not decay fast enough.
fn power_law_tail(n_prev: u64, g_prev: f64, n: u64, g: f64) -> Option<f64> {
    if g == 0.0 {
        return Some(0.0);
    }
    if g_prev == 0.0 || g.signum() != g_prev.signum() || g.abs() >= g_prev.abs() || n_prev == 0 {
        return None;
    }
    let p = (g_prev / g).ln() / (n as f64 / n_prev as f64).ln();
    if !(p > 1.5) {
        return None;
    }
    let nf = n as f64;
    Some(g * (nf / (p - 1.0) - 0.5 + p / (12.0 * nf)))
}

struct Truncation {
    correction: f64,
    estimate: f64,
}

/// Extrapolated tail after the last term and an estimate of its error,
/// from power-law fits over the last step and over the last window.
fn estimate_tail(terms: &[f64]) -> Truncation {
    let n = terms.len() as u64 - 1;
    let last = terms[n as usize];
    if last == 0.0 {
        return Truncation {
            correction: 0.0,
            estimate: 0.0,
        };
    }
    let unbounded = Truncation {
        correction: 0.0,
        estimate: f64::INFINITY,
    };
    if n < STOP_WINDOW + 1 {
        return unbounded;
    }
    let near = power_law_tail(n - 1, terms[n as usize - 1], n, last);
    let far = power_law_tail(n - STOP_WINDOW, terms[(n - STOP_WINDOW) as usize], n, last);
    match (near, far) {
        (Some(a), Some(b)) => Truncation {
            correction: a,
            estimate: (a - b).abs(),
        },
        _ => unbounded,
    }
}

/// Free energy per unit length at separation `r`.
pub fn free_energy(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r: f64,
    mode: EnergyMode,
    settings: &IntegrationSettings,
) -> Result<EnergyResult> {
    match mode {
        EnergyMode::ZeroFrequency => {
            zero_frequency_energy(system, env, r, KernelMode::Retarded, settings)
        }
        EnergyMode::Retarded => matsubara_sum(system, env, r, KernelMode::Retarded, mode, settings),
        EnergyMode::Nonretarded => {
            matsubara_sum(system, env, r, KernelMode::Nonretarded, mode, settings)
        }
    }
}

/// The n = 0 contribution g(0)/2 evaluated with either kernel mode; both
/// give the same bits because ω₀ = 0 makes every γ equal k.
pub fn zero_frequency_energy(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r: f64,
    kernel_mode: KernelMode,
    settings: &IntegrationSettings,
) -> Result<EnergyResult> {
    check_separation(r)?;
    settings.validate()?;
    let g = g_term(system, env, 0, r, kernel_mode, settings)?;
    let mut warnings: Vec<String> = system.thin_rod_warning(r).into_iter().collect();
    if !g.converged {
        warnings.push("k-integral for n = 0 did not converge".into());
    }
    Ok(EnergyResult {
        separation: r,
        free_energy: matsubara_weight(0) * g.value,
        mode: EnergyMode::ZeroFrequency,
        n_terms_used: 1,
        k_evals: g.k_evals,
        tail_correction: 0.0,
        tail_estimate: 0.0,
        converged: g.converged,
        warnings,
    })
}

fn matsubara_sum(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r: f64,
    kernel_mode: KernelMode,
    mode: EnergyMode,
    settings: &IntegrationSettings,
) -> Result<EnergyResult> {
    check_separation(r)?;
    settings.validate()?;
    let pf = prefactor(system, env, r);
    let n_min = system
        .highest_resonance()
        .map(|w| env.index_at_frequency(RESONANCE_FACTOR * w))
        .unwrap_or(0);
    let n_cap = settings.max_matsubara_n;

    // unweighted g_n
    let mut terms: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut k_evals = 0usize;
    let mut quad_failures = 0usize;
    let mut small_run = 0u64;
    let mut previous: Option<(ScaledKernel, ScaledIntegral)> = None;
    let mut stopped_by_rule = false;

    let mut start = 0u64;
    'outer: while start <= n_cap {
        let end = (start + CHUNK).min(n_cap + 1);
        let kernels: Vec<ScaledKernel> = (start..end)
            .map(|n| scaled_kernel(system, env, env.matsubara_frequency(n), r, kernel_mode))
            .collect();
        // identical consecutive kernels (frequency-independent media in the
        // nonretarded limit) share one integral
        let fresh: Vec<usize> = (0..kernels.len())
            .filter(|&i| {
                let prior = if i == 0 {
                    previous.as_ref().map(|p| &p.0)
                } else {
                    Some(&kernels[i - 1])
                };
                prior != Some(&kernels[i])
            })
            .collect();
        let computed: Vec<ScaledIntegral> = fresh
            .par_iter()
            .map(|&i| integrate_scaled(&kernels[i], settings))
            .collect();
        let mut fresh_iter = fresh.iter().zip(computed).peekable();
        for (i, n) in (start..end).enumerate() {
            let integral = match fresh_iter.peek() {
                Some((&j, _)) if j == i => {
                    let (_, s) = fresh_iter.next().expect("peeked");
                    k_evals += s.evals;
                    if !s.converged {
                        quad_failures += 1;
                    }
                    s
                }
                _ => previous.as_ref().expect("repeated kernel has a predecessor").1,
            };
            previous = Some((kernels[i], integral));
            let g = pf * integral.value;
            terms.push(g);
            sum += matsubara_weight(n) * g;

            if g.abs() <= settings.rel_tol * sum.abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if n >= n_min && small_run >= STOP_WINDOW {
                let tail = estimate_tail(&terms);
                let total = sum + tail.correction;
                if tail.estimate <= settings.rel_tol * total.abs() + settings.abs_floor {
                    stopped_by_rule = true;
                    break 'outer;
                }
            }
        }
        start = end;
    }

    let tail = estimate_tail(&terms);
    let free_energy = sum + tail.correction;
    let tolerance = settings.rel_tol * free_energy.abs() + settings.abs_floor;
    let mut warnings: Vec<String> = system.thin_rod_warning(r).into_iter().collect();
    if !stopped_by_rule {
        warnings.push(format!(
            "Matsubara sum reached max_matsubara_n = {n_cap} before the stopping rule"
        ));
    }
    if tail.estimate > tolerance {
        warnings.push(format!(
            "truncation error estimate {:e} J/m exceeds tolerance {:e} J/m",
            tail.estimate, tolerance
        ));
    }
    if quad_failures > 0 {
        warnings.push(format!("{quad_failures} k-integrals hit the subdivision limit"));
    }
    Ok(EnergyResult {
        separation: r,
        free_energy,
        mode,
        n_terms_used: terms.len() as u64,
        k_evals,
        tail_correction: tail.correction,
        tail_estimate: tail.estimate,
        converged: tail.estimate <= tolerance && quad_failures == 0,
        warnings,
    })
}

/// Force per unit length −dF/dR (J/m², positive = repulsive) by a
/// central three-point difference with step R/1000.
pub fn force_per_length(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r: f64,
    mode: EnergyMode,
    settings: &IntegrationSettings,
) -> Result<f64> {
    check_separation(r)?;
    let h = r / 1000.0;
    let up = free_energy(system, env, r + h, mode, settings)?.free_energy;
    let down = free_energy(system, env, r - h, mode, settings)?.free_energy;
    Ok(-(up - down) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breaks_cover_range() {
        let b = panel_breaks(60.0);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 60.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        let short = panel_breaks(0.05);
        assert_eq!(short, vec![0.0, 1e-6, 1e-4, 1e-2, 0.05]);
    }

    #[test]
    fn tail_of_pure_power_law_is_exact_enough() {
        // g_n = n^-4: Σ_{n>N} n^-4 vs Euler-Maclaurin estimate
        let n = 200u64;
        let terms: Vec<f64> = (0..=n).map(|k| if k == 0 { 1.0 } else { (k as f64).powi(-4) }).collect();
        let t = estimate_tail(&terms);
        let exact: f64 = (n + 1..2_000_000).map(|k| (k as f64).powi(-4)).sum();
        assert!(((t.correction - exact) / exact).abs() < 1e-6, "{} vs {exact}", t.correction);
        assert!(t.estimate < 1e-3 * exact);
    }

    #[test]
    fn non_decaying_terms_have_no_tail() {
        let terms = vec![1.0; 50];
        let t = estimate_tail(&terms);
        assert_eq!(t.correction, 0.0);
        assert!(t.estimate.is_infinite());
    }

    #[test]
    fn settings_validation() {
        assert!(IntegrationSettings::default().validate().is_ok());
        let bad = IntegrationSettings {
            rel_tol: 0.1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegrationSettings {
            max_matsubara_n: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
