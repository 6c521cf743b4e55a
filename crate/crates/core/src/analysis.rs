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

//! Separation sweeps: sign boundaries, extrema, local power laws and the
//! retarded/nonretarded ratio.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free_energy::{free_energy, EnergyMode, EnergyResult, IntegrationSettings};
use crate::matsubara::ThermalEnvironment;
use crate::rod_kernel::RodSystem;

/// Relative width in R to which sign boundaries are bisected.
pub const BOUNDARY_REL_TOL: f64 = 1e-4;
/// Relative width in R to which extrema are narrowed.
pub const EXTREMUM_REL_TOL: f64 = 1e-4;

/// One of the three free-energy columns of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Column {
    Ret,
    Nonret,
    N0,
}

impl Column {
    pub fn mode(self) -> EnergyMode {
        match self {
            Column::Ret => EnergyMode::Retarded,
            Column::Nonret => EnergyMode::Nonretarded,
            Column::N0 => EnergyMode::ZeroFrequency,
        }
    }

    pub fn from_mode(mode: EnergyMode) -> Self {
        match mode {
            EnergyMode::Retarded => Column::Ret,
            EnergyMode::Nonretarded => Column::Nonret,
            EnergyMode::ZeroFrequency => Column::N0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub f_ret: f64,
    pub f_nonret: f64,
    pub f_n0: f64,
    pub converged_ret: bool,
    pub converged_nonret: bool,
    pub converged_n0: bool,
}

impl SweepRow {
    pub fn value(&self, column: Column) -> f64 {
        match column {
            Column::Ret => self.f_ret,
            Column::Nonret => self.f_nonret,
            Column::N0 => self.f_n0,
        }
    }

    pub fn column_converged(&self, column: Column) -> bool {
        match column {
            Column::Ret => self.converged_ret,
            Column::Nonret => self.converged_nonret,
            Column::N0 => self.converged_n0,
        }
    }

    pub fn converged(&self) -> bool {
        self.converged_ret && self.converged_nonret && self.converged_n0
    }

    /// |F_ret/F_nonret|, or `None` where F_nonret vanishes.
    pub fn ratio_abs(&self) -> Option<f64> {
        (self.f_nonret != 0.0).then(|| (self.f_ret / self.f_nonret).abs())
    }
}

/// Separation at which the analysed column changes sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boundary {
    pub r: f64,
    /// Sign of F just below `r`: −1 attractive, +1 repulsive.
    pub sign_below: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub r: f64,
    pub f: f64,
    pub kind: ExtremumKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    /// Column used for boundaries and extrema.
    pub column: Column,
    pub grid: Vec<SweepRow>,
    pub boundaries: Vec<Boundary>,
    pub extrema: Vec<Extremum>,
    pub warnings: Vec<String>,
}

impl SweepReport {
    /// (R, |F_ret/F_nonret|) at every grid point where it is defined.
    pub fn ratio(&self) -> Vec<(f64, f64)> {
        self.grid
            .iter()
            .filter_map(|row| row.ratio_abs().map(|q| (row.r, q)))
            .collect()
    }

    pub fn all_converged(&self) -> bool {
        self.grid.iter().all(SweepRow::converged)
    }

    pub fn region_count(&self) -> usize {
        self.boundaries.len() + 1
    }
}

/// Log-spaced separations from `r_min` to `r_max` inclusive with at least
/// `points_per_decade` points per decade.
pub fn log_grid(r_min: f64, r_max: f64, points_per_decade: u32) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite() && r_min < r_max) {
        return Err(Error::domain(format!(
            "separation range must satisfy 0 < r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    if points_per_decade < 4 {
        return Err(Error::domain(format!(
            "points_per_decade must be at least 4, got {points_per_decade}"
        )));
    }
    let decades = (r_max / r_min).log10();
    let steps = ((decades * points_per_decade as f64) - 1e-9).ceil().max(1.0) as usize;
    let ratio = r_max / r_min;
    let mut grid: Vec<f64> = (0..=steps)
        .map(|i| r_min * ratio.powf(i as f64 / steps as f64))
        .collect();
    grid[0] = r_min;
    grid[steps] = r_max;
    Ok(grid)
}

fn evaluate(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r: f64,
    column: Column,
    settings: &IntegrationSettings,
) -> Result<EnergyResult> {
    free_energy(system, env, r, column.mode(), settings)
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Sweep with sign boundaries and extrema of the retarded column.
pub fn sweep(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r_min: f64,
    r_max: f64,
    points_per_decade: u32,
    settings: &IntegrationSettings,
) -> Result<SweepReport> {
    sweep_column(system, env, r_min, r_max, points_per_decade, settings, Column::Ret)
}

/// Sweep analysing `column` for boundaries and extrema. All three columns
/// are computed at every grid point regardless.
pub fn sweep_column(
    system: &RodSystem,
    env: &ThermalEnvironment,
    r_min: f64,
    r_max: f64,
    points_per_decade: u32,
    settings: &IntegrationSettings,
    column: Column,
) -> Result<SweepReport> {
    settings.validate()?;
    let grid_r = log_grid(r_min, r_max, points_per_decade)?;
    let columns = [Column::Ret, Column::Nonret, Column::N0];
    let jobs: Vec<(usize, Column)> = (0..grid_r.len())
        .flat_map(|i| columns.iter().map(move |&c| (i, c)))
        .collect();
    let results: Vec<EnergyResult> = jobs
        .par_iter()
        .map(|&(i, c)| evaluate(system, env, grid_r[i], c, settings))
        .collect::<Result<_>>()?;

    let mut warnings = Vec::new();
    let mut grid = Vec::with_capacity(grid_r.len());
    for (i, &r) in grid_r.iter().enumerate() {
        let [ret, non, n0] = [&results[3 * i], &results[3 * i + 1], &results[3 * i + 2]];
        for res in [ret, non, n0] {
            if !res.converged {
                warnings.push(format!(
                    "R = {r:e} m: {} column did not converge; excluded from region detection",
                    res.mode.as_str()
                ));
            }
        }
        grid.push(SweepRow {
            r,
            f_ret: ret.free_energy,
            f_nonret: non.free_energy,
            f_n0: n0.free_energy,
            converged_ret: ret.converged,
            converged_nonret: non.converged,
            converged_n0: n0.converged,
        });
    }
    if let Some(w) = system.thin_rod_warning(r_min) {
        warnings.push(w);
    }

    let boundaries = find_boundaries(system, env, &grid, column, settings, &mut warnings)?;
    let extrema = find_extrema(system, env, &grid, column, settings, &mut warnings)?;
    Ok(SweepReport {
        column,
        grid,
        boundaries,
        extrema,
        warnings,
    })
}

fn find_boundaries(
    system: &RodSystem,
    env: &ThermalEnvironment,
    grid: &[SweepRow],
    column: Column,
    settings: &IntegrationSettings,
    warnings: &mut Vec<String>,
) -> Result<Vec<Boundary>> {
    let brackets: Vec<(f64, f64, i8)> = grid
        .windows(2)
        .filter(|w| w[0].column_converged(column) && w[1].column_converged(column))
        .filter_map(|w| {
            let (s0, s1) = (sign(w[0].value(column)), sign(w[1].value(column)));
            (s0 != 0 && s1 != 0 && s0 != s1).then_some((w[0].r, w[1].r, s0))
        })
        .collect();
    let refined: Vec<Result<(Boundary, bool)>> = brackets
        .par_iter()
        .map(|&(lo, hi, s_lo)| {
            let (mut lo, mut hi) = (lo, hi);
            let mut clean = true;
            while hi / lo - 1.0 > BOUNDARY_REL_TOL {
                let mid = (lo * hi).sqrt();
                let res = evaluate(system, env, mid, column, settings)?;
                clean &= res.converged;
                if sign(res.free_energy) == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok((
                Boundary {
                    r: (lo * hi).sqrt(),
                    sign_below: s_lo,
                },
                clean,
            ))
        })
        .collect();
    let mut out = Vec::with_capacity(refined.len());
    for item in refined {
        let (b, clean) = item?;
        if !clean {
            warnings.push(format!(
                "boundary near R = {:e} m was refined through unconverged evaluations",
                b.r
            ));
        }
        out.push(b);
    }
    Ok(out)
}

fn find_extrema(
    system: &RodSystem,
    env: &ThermalEnvironment,
    grid: &[SweepRow],
    column: Column,
    settings: &IntegrationSettings,
    warnings: &mut Vec<String>,
) -> Result<Vec<Extremum>> {
    let candidates: Vec<(f64, f64, ExtremumKind)> = grid
        .windows(3)
        .filter(|w| w.iter().all(|row| row.column_converged(column)))
        .filter_map(|w| {
            let (a, b, c) = (w[0].value(column), w[1].value(column), w[2].value(column));
            // neighbours may lie across a sign boundary; the refinement
            // bracket is still unimodal
            if b == 0.0 {
                return None;
            }
            if b > a && b > c {
                Some((w[0].r, w[2].r, ExtremumKind::Maximum))
            } else if b < a && b < c {
                Some((w[0].r, w[2].r, ExtremumKind::Minimum))
            } else {
                None
            }
        })
        .collect();
    let refined: Vec<Result<(Extremum, bool)>> = candidates
        .par_iter()
        .map(|&(lo, hi, kind)| golden_section(system, env, lo, hi, kind, column, settings))
        .collect();
    let mut out = Vec::with_capacity(refined.len());
    for item in refined {
        let (e, clean) = item?;
        if !clean {
            warnings.push(format!(
                "extremum near R = {:e} m was refined through unconverged evaluations",
                e.r
            ));
        }
        out.push(e);
    }
    Ok(out)
}

/// Golden-section search in ln R for the extremum of `kind` inside [lo, hi].
fn golden_section(
    system: &RodSystem,
    env: &ThermalEnvironment,
    lo: f64,
    hi: f64,
    kind: ExtremumKind,
    column: Column,
    settings: &IntegrationSettings,
) -> Result<(Extremum, bool)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut clean = true;
    // maximise s·F
    let s = match kind {
        ExtremumKind::Maximum => 1.0,
        ExtremumKind::Minimum => -1.0,
    };
    let mut f = |x: f64| -> Result<f64> {
        let res = evaluate(system, env, x.exp(), column, settings)?;
        clean &= res.converged;
        Ok(res.free_energy)
    };
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > EXTREMUM_REL_TOL {
        if s * fc > s * fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (x, fx) = if s * fc > s * fd { (c, fc) } else { (d, fd) };
    Ok((
        Extremum {
            r: x.exp(),
            f: fx,
            kind,
        },
        clean,
    ))
}

/// d ln|F| / d ln R of `column` at `r`, by a centred difference on the
/// sweep grid. At a grid point the neighbours form the stencil; between
/// grid points the bracketing pair does.
pub fn local_exponent(report: &SweepReport, column: Column, r: f64) -> Result<f64> {
    let grid = &report.grid;
    let n = grid.len();
    if n < 2 || !(r > grid[0].r && r < grid[n - 1].r) {
        return Err(Error::domain(format!(
            "R = {r:e} m is not strictly inside the sweep grid"
        )));
    }
    let (i, j) = match grid.iter().position(|row| (row.r / r - 1.0).abs() < 1e-9) {
        Some(k) => (k - 1, k + 1),
        None => {
            let hi = grid.iter().position(|row| row.r > r).expect("r inside grid");
            (hi - 1, hi)
        }
    };
    let (fi, fj) = (grid[i].value(column), grid[j].value(column));
    if fi == 0.0 || fj == 0.0 || sign(fi) != sign(fj) {
        return Err(Error::domain(format!(
            "column changes sign or vanishes between R = {:e} m and {:e} m; exponent undefined",
            grid[i].r, grid[j].r
        )));
    }
    Ok((fj / fi).ln() / (grid[j].r / grid[i].r).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_density() {
        let g = log_grid(4e-9, 1e-5, 16).unwrap();
        assert_eq!(g[0], 4e-9);
        assert_eq!(*g.last().unwrap(), 1e-5);
        assert_eq!(g.len(), 56);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let g = log_grid(1e-8, 1e-6, 16).unwrap();
        assert_eq!(g.len(), 33);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(log_grid(0.0, 1.0, 16).is_err());
        assert!(log_grid(2.0, 1.0, 16).is_err());
        assert!(log_grid(1.0, 2.0, 3).is_err());
    }
}
