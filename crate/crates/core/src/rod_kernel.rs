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

//! Interaction kernel for two thin parallel rods across a fluid.
//!
//! Rod 1 (radius a, permittivity ε₁) and rod 2 (radius b, ε₂) are
//! separated by R in a medium ε₃. For Matsubara frequency ω_n and axial
//! wave number k the kernel is
//!
//! ```text
//! G = −(a²b²/4)·(ε₃−ε₁)(ε₃−ε₂)/ε₃² · γ₃⁴K₀²
//!     −(a²b²/2)·{A₂(ε₃−ε₁)/(ε₃(ε₃+ε₂)) + A₁(ε₃−ε₂)/(ε₃(ε₃+ε₁))} · γ₃⁶K₁²
//!     −(a²b²/2)·{A₁A₂γ₃⁴ + ε₃²γ₁²γ₂²(B₁B₂ + A₁B₂ + A₂B₁)}/P · γ₃⁴(K₂² + K₀²)
//! ```
//!
//! with γ_α = √(k² + ε_α ω_n²/c²), K_i evaluated at γ₃R,
//! A_i = ε₃/γ₃² − ε_i/γ_i², B_i = 1/γ₃² − 1/γ_i² and P = (ε₃+ε₁)(ε₃+ε₂).
//!
//! A_i and B_i are formed as (ε₃−ε_i)k²/(γ_i²γ₃²) and
//! (ε_i−ε₃)(ω_n/c)²/(γ_i²γ₃²), which are algebraically identical and free
//! of cancellation when ε_i is close to ε₃. Internally everything is
//! expressed in u = kR and w = ω_n R/c, so G = (a²b²/R⁴)·Ĝ(u, w).

use std::sync::Arc;

use crate::dielectric::DielectricModel;
use crate::error::{Error, Result};
use crate::matsubara::SPEED_OF_LIGHT;
use crate::special_functions::bessel_k012;

/// Whether the finite speed of light enters the γ's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelMode {
    Retarded,
    /// c → ∞: every γ_α equals k.
    Nonretarded,
}

/// Separation below which the thin-rod form is flagged, in units of the
/// larger rod diameter.
pub const THIN_ROD_RATIO: f64 = 5.0;

/// Two parallel rods and the medium between them.
#[derive(Clone, Debug)]
pub struct RodSystem {
    radius_a: f64,
    radius_b: f64,
    material_1: Arc<DielectricModel>,
    material_2: Arc<DielectricModel>,
    material_3: Arc<DielectricModel>,
}

impl RodSystem {
    pub fn new(
        radius_a: f64,
        radius_b: f64,
        material_1: Arc<DielectricModel>,
        material_2: Arc<DielectricModel>,
        material_3: Arc<DielectricModel>,
    ) -> Result<Self> {
        for (name, r) in [("radius_a", radius_a), ("radius_b", radius_b)] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {r} m")));
            }
        }
        Ok(Self {
            radius_a,
            radius_b,
            material_1,
            material_2,
            material_3,
        })
    }

    pub fn radius_a(&self) -> f64 {
        self.radius_a
    }

    pub fn radius_b(&self) -> f64 {
        self.radius_b
    }

    pub fn material_1(&self) -> &DielectricModel {
        &self.material_1
    }

    pub fn material_2(&self) -> &DielectricModel {
        &self.material_2
    }

    pub fn material_3(&self) -> &DielectricModel {
        &self.material_3
    }

    /// The same system with the two rods relabelled.
    pub fn swapped(&self) -> Self {
        Self {
            radius_a: self.radius_b,
            radius_b: self.radius_a,
            material_1: Arc::clone(&self.material_2),
            material_2: Arc::clone(&self.material_1),
            material_3: Arc::clone(&self.material_3),
        }
    }

    /// ε₁, ε₂, ε₃ at imaginary frequency ξ.
    #[inline]
    pub fn permittivities(&self, xi: f64) -> [f64; 3] {
        [
            self.material_1.epsilon(xi),
            self.material_2.epsilon(xi),
            self.material_3.epsilon(xi),
        ]
    }

    /// Highest absorption frequency over the three materials.
    pub fn highest_resonance(&self) -> Option<f64> {
        [&self.material_1, &self.material_2, &self.material_3]
            .iter()
            .filter_map(|m| m.highest_resonance())
            .reduce(f64::max)
    }

    /// A message when `r` is too small for the thin-rod form to hold.
    pub fn thin_rod_warning(&self, r: f64) -> Option<String> {
        let diameter = 2.0 * self.radius_a.max(self.radius_b);
        (r < THIN_ROD_RATIO * diameter).then(|| {
            format!(
                "separation {r:e} m is below {THIN_ROD_RATIO} rod diameters ({:e} m); \
                 thin-rod approximation is marginal",
                THIN_ROD_RATIO * diameter
            )
        })
    }
}

/// γ = √(k² + ε(ω_n/c)²) when retarded, k otherwise.
pub fn gamma(epsilon: f64, k: f64, omega_n: f64, c: f64, mode: KernelMode) -> f64 {
    match mode {
        KernelMode::Nonretarded => k,
        KernelMode::Retarded if omega_n == 0.0 => k,
        KernelMode::Retarded => {
            let s = omega_n / c;
            (k * k + epsilon * s * s).sqrt()
        }
    }
}

/// Ĝ(u) for fixed permittivities and w = ω_n R/c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct ScaledKernel {
    e1: f64,
    e2: f64,
    e3: f64,
    w2: f64,
}

impl ScaledKernel {
    pub(crate) fn new(eps: [f64; 3], w: f64, mode: KernelMode) -> Self {
        let w2 = match mode {
            KernelMode::Retarded => w * w,
            KernelMode::Nonretarded => 0.0,
        };
        Self {
            e1: eps[0],
            e2: eps[1],
            e3: eps[2],
            w2,
        }
    }

    /// True when the rod-1 or rod-2 contrast vanishes and so does Ĝ.
    pub(crate) fn is_null(&self) -> bool {
        self.e1 == self.e3 || self.e2 == self.e3
    }

    /// √(ε₃) w, the value of γ₃R at u = 0.
    pub(crate) fn q3_at_zero(&self) -> f64 {
        (self.e3 * self.w2).sqrt()
    }

    /// Value at u → 0 when w = 0, where only the K₂² piece survives.
    fn static_limit(&self) -> f64 {
        let (e1, e2, e3) = (self.e1, self.e2, self.e3);
        -2.0 * (e3 - e1) * (e3 - e2) / ((e3 + e2) * (e3 + e1))
    }

    #[inline]
    pub(crate) fn eval(&self, u: f64) -> f64 {
        let [t1, t2, t3] = self.terms(u);
        t1 + t2 + t3
    }

    /// The K₀², K₁² and (K₂² + K₀²) groups of Ĝ(u).
    #[inline]
    pub(crate) fn terms(&self, u: f64) -> [f64; 3] {
        let (e1, e2, e3, w2) = (self.e1, self.e2, self.e3, self.w2);
        let u2 = u * u;
        let q1sq = u2 + e1 * w2;
        let q2sq = u2 + e2 * w2;
        let q3sq = u2 + e3 * w2;
        if q3sq < 1e-60 {
            return [0.0, 0.0, self.static_limit()];
        }
        let [k0, k1, k2] = bessel_k012(q3sq.sqrt());
        if k0 == 0.0 {
            return [0.0; 3];
        }

        let d1 = e3 - e1;
        let d2 = e3 - e2;
        let a1 = d1 * u2 / (q1sq * q3sq);
        let a2 = d2 * u2 / (q2sq * q3sq);
        let b1 = -d1 * w2 / (q1sq * q3sq);
        let b2 = -d2 * w2 / (q2sq * q3sq);
        let p = (e3 + e2) * (e3 + e1);
        let q3_4 = q3sq * q3sq;

        let t1 = -0.25 * (d1 * d2) / (e3 * e3) * q3_4 * (k0 * k0);
        let t2 = -0.5
            * (a2 * d1 / (e3 * (e3 + e2)) + a1 * d2 / (e3 * (e3 + e1)))
            * (q3_4 * q3sq)
            * (k1 * k1);
        let mixed = e3 * e3 * (q1sq * q2sq);
        let bracket =
            (a1 * a2) * q3_4 / p + mixed / p * (b1 * b2) + (a1 * b2 + a2 * b1) * mixed / p;
        let t3 = -0.5 * bracket * q3_4 * (k2 * k2 + k0 * k0);
        [t1, t2, t3]
    }
}

/// G(ω_n, k) at separation `r` with the vacuum speed of light.
pub fn kernel_g(system: &RodSystem, omega_n: f64, k: f64, r: f64, mode: KernelMode) -> Result<f64> {
    kernel_g_with_c(system, omega_n, k, r, mode, SPEED_OF_LIGHT)
}

/// [`kernel_g`] with an explicit speed of light.
pub fn kernel_g_with_c(
    system: &RodSystem,
    omega_n: f64,
    k: f64,
    r: f64,
    mode: KernelMode,
    c: f64,
) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("separation must be positive, got {r} m")));
    }
    if !(k >= 0.0 && omega_n >= 0.0) {
        return Err(Error::domain(format!(
            "k and omega_n must be non-negative, got k = {k}, omega_n = {omega_n}"
        )));
    }
    let eps = system.permittivities(omega_n);
    Ok(kernel_from_permittivities(
        eps,
        system.radius_a,
        system.radius_b,
        omega_n,
        k,
        r,
        mode,
        c,
    ))
}

/// The three groups of G (K₀², K₁² and K₂² + K₀² terms) whose sum is
/// [`kernel_g`]. Each depends on R only through its Bessel factor.
pub fn kernel_terms(
    system: &RodSystem,
    omega_n: f64,
    k: f64,
    r: f64,
    mode: KernelMode,
) -> Result<[f64; 3]> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("separation must be positive, got {r} m")));
    }
    let eps = system.permittivities(omega_n);
    let scaled = ScaledKernel::new(eps, omega_n * r / SPEED_OF_LIGHT, mode);
    let r2 = r * r;
    let scale = (system.radius_a * system.radius_a) * (system.radius_b * system.radius_b) / (r2 * r2);
    Ok(scaled.terms(k * r).map(|t| scale * t))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn kernel_from_permittivities(
    eps: [f64; 3],
    radius_a: f64,
    radius_b: f64,
    omega_n: f64,
    k: f64,
    r: f64,
    mode: KernelMode,
    c: f64,
) -> f64 {
    let scaled = ScaledKernel::new(eps, omega_n * r / c, mode);
    let r2 = r * r;
    (radius_a * radius_a) * (radius_b * radius_b) / (r2 * r2) * scaled.eval(k * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64) -> Arc<DielectricModel> {
        Arc::new(DielectricModel::constant(format!("{v}"), v).unwrap())
    }

    fn system(e1: f64, e2: f64, e3: f64, a: f64, b: f64) -> RodSystem {
        RodSystem::new(a, b, constant(e1), constant(e2), constant(e3)).unwrap()
    }

    #[test]
    fn gamma_cases() {
        let c = SPEED_OF_LIGHT;
        assert_eq!(gamma(2.0, 0.0, 0.0, c, KernelMode::Retarded), 0.0);
        let (k, w) = (3e7, 1e16);
        let vac = gamma(1.0, k, w, c, KernelMode::Retarded);
        assert!((vac - (k * k + (w / c).powi(2)).sqrt()).abs() < 1e-8 * vac);
        assert_eq!(gamma(4.0, k, w, c, KernelMode::Nonretarded), k);
        assert!(gamma(4.0, k, w, c, KernelMode::Retarded) >= k);
    }

    #[test]
    fn index_matched_rod_gives_zero() {
        let s = system(3.0, 5.0, 3.0, 1e-9, 2e-9);
        for (w, k, r) in [(0.0, 1e8, 1e-8), (1e15, 1e6, 1e-7), (3e16, 1e9, 5e-9)] {
            for mode in [KernelMode::Retarded, KernelMode::Nonretarded] {
                assert_eq!(kernel_g(&s, w, k, r, mode).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let s = system(2.0, 4.5, 3.0, 1e-9, 2.5e-9);
        let t = s.swapped();
        for (w, k, r) in [(0.0, 1e8, 1e-8), (1e15, 1e6, 1e-7), (3e16, 1e9, 5e-9)] {
            for mode in [KernelMode::Retarded, KernelMode::Nonretarded] {
                assert_eq!(
                    kernel_g(&s, w, k, r, mode).unwrap(),
                    kernel_g(&t, w, k, r, mode).unwrap()
                );
            }
        }
    }

    #[test]
    fn static_endpoint_is_finite_limit() {
        let s = system(2.0, 4.0, 3.0, 1e-9, 1e-9);
        let r = 1e-8;
        let at_zero = kernel_g(&s, 0.0, 0.0, r, KernelMode::Retarded).unwrap();
        let near = kernel_g(&s, 0.0, 1e-6 / r, r, KernelMode::Retarded).unwrap();
        assert!(at_zero.is_finite());
        assert!(((near - at_zero) / at_zero).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_separation() {
        let s = system(2.0, 4.0, 3.0, 1e-9, 1e-9);
        assert!(kernel_g(&s, 0.0, 1.0, 0.0, KernelMode::Retarded).is_err());
        assert!(kernel_g(&s, 0.0, 1.0, -1e-9, KernelMode::Retarded).is_err());
        assert!(RodSystem::new(0.0, 1e-9, constant(2.0), constant(2.0), constant(2.0)).is_err());
    }

    #[test]
    fn thin_rod_threshold() {
        let s = system(2.0, 4.0, 3.0, 1e-9, 1e-9);
        assert!(s.thin_rod_warning(9.9e-9).is_some());
        assert!(s.thin_rod_warning(1e-8).is_none());
    }
}
