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

//! Temperature, physical constants and Matsubara frequencies.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (exact since 2019).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const DEFAULT_TEMPERATURE: f64 = 300.0;

/// Thermal state of the system together with the constants used to build
/// Matsubara frequencies and the 1/β prefactor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalEnvironment {
    temperature: f64,
    hbar: f64,
    boltzmann: f64,
    speed_of_light: f64,
    thermal_energy: f64,
    beta: f64,
}

impl ThermalEnvironment {
    pub fn new(temperature: f64) -> Result<Self> {
        Self::with_constants(temperature, HBAR, BOLTZMANN, SPEED_OF_LIGHT)
    }

    pub fn with_constants(
        temperature: f64,
        hbar: f64,
        boltzmann: f64,
        speed_of_light: f64,
    ) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::domain(format!(
                "temperature must be positive, got {temperature} K"
            )));
        }
        for (name, v) in [
            ("hbar", hbar),
            ("boltzmann", boltzmann),
            ("speed_of_light", speed_of_light),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        let thermal_energy = boltzmann * temperature;
        Ok(Self {
            temperature,
            hbar,
            boltzmann,
            speed_of_light,
            thermal_energy,
            beta: 1.0 / thermal_energy,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    pub fn speed_of_light(&self) -> f64 {
        self.speed_of_light
    }

    /// 1/(k_B T), in 1/J.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// k_B T, in J.
    pub fn thermal_energy(&self) -> f64 {
        self.thermal_energy
    }

    /// Spacing 2π k_B T / ħ between consecutive Matsubara frequencies.
    pub fn frequency_spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.thermal_energy / self.hbar
    }

    /// ω_n = 2πn k_B T / ħ in rad/s.
    pub fn matsubara_frequency(&self, n: u64) -> f64 {
        n as f64 * self.frequency_spacing()
    }

    /// Lowest index whose frequency reaches `omega`.
    pub fn index_at_frequency(&self, omega: f64) -> u64 {
        if omega <= 0.0 {
            0
        } else {
            (omega / self.frequency_spacing()).ceil() as u64
        }
    }
}

impl Default for ThermalEnvironment {
    fn default() -> Self {
        Self::new(DEFAULT_TEMPERATURE).expect("default temperature is valid")
    }
}

/// Weight of term n in the primed Matsubara sum: the static term counts half.
pub fn matsubara_weight(n: u64) -> f64 {
    if n == 0 {
        0.5
    } else {
        1.0
    }
}
