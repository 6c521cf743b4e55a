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

//! Command-line front end.
//!
//! Settings come from built-in defaults, then an optional TOML run
//! configuration, then flags, each layer overriding the previous one.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{log_grid, sweep_column, Column, ExtremumKind, SweepReport};
use crate::dielectric::{find_crossings, load_material_card, DielectricModel, MaterialCard};
use crate::error::{Error, Result};
use crate::free_energy::{EnergyMode, IntegrationSettings};
use crate::matsubara::{ThermalEnvironment, DEFAULT_TEMPERATURE};
use crate::rod_kernel::RodSystem;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

const DEFAULT_RADIUS: f64 = 1e-9;
const DEFAULT_R_MIN: f64 = 4e-9;
const DEFAULT_R_MAX: f64 = 1e-5;
const DEFAULT_POINTS_PER_DECADE: u32 = 16;
const DEFAULT_XI_MIN: f64 = 1e10;
const DEFAULT_XI_MAX: f64 = 1e18;
const DEFAULT_XI_POINTS_PER_DECADE: u32 = 20;

const COMMAND_LINE: &str = "<command line>";

#[derive(Debug, Parser)]
#[command(
    name = "nanorod-lifshitz",
    version,
    about = "Casimir-Lifshitz free energy between two parallel thin dielectric rods in a fluid"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free energy per unit length over a log grid of separations (CSV)
    Sweep(RunArgs),
    /// Frequencies where pairs of ε(iξ) curves cross
    Crossings(RunArgs),
    /// ε(iξ) of each material on a log grid (CSV)
    Epsilon(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Retarded,
    Nonretarded,
    N0,
}

impl From<ModeArg> for EnergyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Retarded => EnergyMode::Retarded,
            ModeArg::Nonretarded => EnergyMode::Nonretarded,
            ModeArg::N0 => EnergyMode::ZeroFrequency,
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML run configuration; flags override its values
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Material card of rod 1
    #[arg(long, value_name = "PATH")]
    pub mat1: Option<PathBuf>,
    /// Material card of rod 2
    #[arg(long, value_name = "PATH")]
    pub mat2: Option<PathBuf>,
    /// Material card of the surrounding medium
    #[arg(long, value_name = "PATH")]
    pub mat3: Option<PathBuf>,
    /// Radius of rod 1 in metres [default: 1e-9]
    #[arg(long, value_name = "METERS")]
    pub radius1: Option<f64>,
    /// Radius of rod 2 in metres [default: 1e-9]
    #[arg(long, value_name = "METERS")]
    pub radius2: Option<f64>,
    /// Temperature [default: 300]
    #[arg(long, value_name = "K")]
    pub temperature: Option<f64>,
    /// Smallest separation [default: 4e-9]
    #[arg(long, value_name = "METERS")]
    pub rmin: Option<f64>,
    /// Largest separation [default: 1e-5]
    #[arg(long, value_name = "METERS")]
    pub rmax: Option<f64>,
    /// Grid density in separation [default: 16]
    #[arg(long, value_name = "N")]
    pub points_per_decade: Option<u32>,
    /// Relative tolerance of k-integrals and Matsubara truncation [default: 1e-8]
    #[arg(long, value_name = "X")]
    pub rel_tol: Option<f64>,
    /// Column searched for sign boundaries and extrema [default: retarded]
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Output file [default: standard output]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    /// Lower end of the frequency range [default: 1e10 for epsilon, 0 for crossings]
    #[arg(long, value_name = "RAD_PER_S")]
    pub xi_min: Option<f64>,
    /// Upper end of the frequency range [default: 1e18]
    #[arg(long, value_name = "RAD_PER_S")]
    pub xi_max: Option<f64>,
    /// Grid density of the epsilon table [default: 20]
    #[arg(long, value_name = "N")]
    pub xi_points_per_decade: Option<u32>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Rod 1, rod 2, medium.
    pub materials: [Option<PathBuf>; 3],
    pub radius1: f64,
    pub radius2: f64,
    pub temperature: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub points_per_decade: u32,
    pub settings: IntegrationSettings,
    pub mode: EnergyMode,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub xi_min: Option<f64>,
    pub xi_max: f64,
    pub xi_points_per_decade: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            materials: [None, None, None],
            radius1: DEFAULT_RADIUS,
            radius2: DEFAULT_RADIUS,
            temperature: DEFAULT_TEMPERATURE,
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            points_per_decade: DEFAULT_POINTS_PER_DECADE,
            settings: IntegrationSettings::default(),
            mode: EnergyMode::Retarded,
            out: None,
            threads: None,
            xi_min: None,
            xi_max: DEFAULT_XI_MAX,
            xi_points_per_decade: DEFAULT_XI_POINTS_PER_DECADE,
        }
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("materials", &["rod1", "rod2", "medium"]),
    ("geometry", &["radius1", "radius2"]),
    ("environment", &["temperature"]),
    ("sweep", &["rmin", "rmax", "points_per_decade", "mode"]),
    (
        "integration",
        &["rel_tol", "abs_floor", "max_matsubara_n", "k_upper_multiplier"],
    ),
    ("spectrum", &["xi_min", "xi_max", "points_per_decade"]),
    ("output", &["path", "threads"]),
];

struct ConfigFile<'a> {
    path: &'a Path,
    table: toml::Table,
}

impl ConfigFile<'_> {
    fn err(&self, field: &str, msg: impl Into<String>) -> Error {
        Error::config(self.path, field, msg)
    }

    fn get(&self, section: &str, key: &str) -> Option<&toml::Value> {
        self.table.get(section)?.get(key)
    }

    fn float(&self, section: &str, key: &str) -> Result<Option<f64>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(toml::Value::Float(f)) => Ok(Some(*f)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(self.err(&format!("{section}.{key}"), "must be a number")),
        }
    }

    fn integer(&self, section: &str, key: &str) -> Result<Option<u64>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(self.err(
                &format!("{section}.{key}"),
                "must be a non-negative integer",
            )),
        }
    }

    fn string(&self, section: &str, key: &str) -> Result<Option<&str>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(self.err(&format!("{section}.{key}"), "must be a string")),
        }
    }

    /// Paths in the file are relative to the file's directory.
    fn path_value(&self, section: &str, key: &str) -> Result<Option<PathBuf>> {
        Ok(self.string(section, key)?.map(|s| {
            let p = PathBuf::from(s);
            if p.is_absolute() {
                p
            } else {
                self.path.parent().unwrap_or(Path::new("")).join(p)
            }
        }))
    }
}

fn parse_mode(text: &str) -> Option<EnergyMode> {
    match text {
        "retarded" => Some(EnergyMode::Retarded),
        "nonretarded" => Some(EnergyMode::Nonretarded),
        "n0" => Some(EnergyMode::ZeroFrequency),
        _ => None,
    }
}

fn to_u32(file: &ConfigFile, field: &str, v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| file.err(field, "value too large"))
}

fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config(path, "syntax", e.message().to_string()))?;
    let file = ConfigFile { path, table };
    for (name, value) in &file.table {
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            return Err(file.err(name, "unknown section"));
        };
        let Some(section) = value.as_table() else {
            return Err(file.err(name, "must be a table"));
        };
        for key in section.keys() {
            if !keys.contains(&key.as_str()) {
                return Err(file.err(&format!("{name}.{key}"), "unknown field"));
            }
        }
    }

    for (i, key) in ["rod1", "rod2", "medium"].iter().enumerate() {
        if let Some(p) = file.path_value("materials", key)? {
            cfg.materials[i] = Some(p);
        }
    }
    if let Some(v) = file.float("geometry", "radius1")? {
        cfg.radius1 = v;
    }
    if let Some(v) = file.float("geometry", "radius2")? {
        cfg.radius2 = v;
    }
    if let Some(v) = file.float("environment", "temperature")? {
        cfg.temperature = v;
    }
    if let Some(v) = file.float("sweep", "rmin")? {
        cfg.r_min = v;
    }
    if let Some(v) = file.float("sweep", "rmax")? {
        cfg.r_max = v;
    }
    if let Some(v) = file.integer("sweep", "points_per_decade")? {
        cfg.points_per_decade = to_u32(&file, "sweep.points_per_decade", v)?;
    }
    if let Some(s) = file.string("sweep", "mode")? {
        cfg.mode = parse_mode(s).ok_or_else(|| {
            file.err(
                "sweep.mode",
                format!("'{s}' is not one of 'retarded', 'nonretarded', 'n0'"),
            )
        })?;
    }
    if let Some(v) = file.float("integration", "rel_tol")? {
        cfg.settings.rel_tol = v;
    }
    if let Some(v) = file.float("integration", "abs_floor")? {
        cfg.settings.abs_floor = v;
    }
    if let Some(v) = file.integer("integration", "max_matsubara_n")? {
        cfg.settings.max_matsubara_n = v;
    }
    if let Some(v) = file.float("integration", "k_upper_multiplier")? {
        cfg.settings.k_upper_multiplier = v;
    }
    if let Some(v) = file.float("spectrum", "xi_min")? {
        cfg.xi_min = Some(v);
    }
    if let Some(v) = file.float("spectrum", "xi_max")? {
        cfg.xi_max = v;
    }
    if let Some(v) = file.integer("spectrum", "points_per_decade")? {
        cfg.xi_points_per_decade = to_u32(&file, "spectrum.points_per_decade", v)?;
    }
    if let Some(p) = file.path_value("output", "path")? {
        cfg.out = Some(p);
    }
    if let Some(v) = file.integer("output", "threads")? {
        cfg.threads = Some(v as usize);
    }
    Ok(())
}

impl RunConfig {
    /// Defaults, then the config file named by `--config`, then flags.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            apply_config_file(&mut cfg, path)?;
        }
        for (slot, flag) in cfg.materials.iter_mut().zip([&args.mat1, &args.mat2, &args.mat3]) {
            if let Some(p) = flag {
                *slot = Some(p.clone());
            }
        }
        macro_rules! take {
            ($field:expr, $flag:expr) => {
                if let Some(v) = $flag {
                    $field = v;
                }
            };
        }
        take!(cfg.radius1, args.radius1);
        take!(cfg.radius2, args.radius2);
        take!(cfg.temperature, args.temperature);
        take!(cfg.r_min, args.rmin);
        take!(cfg.r_max, args.rmax);
        take!(cfg.points_per_decade, args.points_per_decade);
        take!(cfg.settings.rel_tol, args.rel_tol);
        take!(cfg.xi_max, args.xi_max);
        take!(cfg.xi_points_per_decade, args.xi_points_per_decade);
        if let Some(m) = args.mode {
            cfg.mode = m.into();
        }
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        if args.threads.is_some() {
            cfg.threads = args.threads;
        }
        if args.xi_min.is_some() {
            cfg.xi_min = args.xi_min;
        }
        cfg.validate(args.config.as_deref())?;
        Ok(cfg)
    }

    fn validate(&self, source: Option<&Path>) -> Result<()> {
        let origin = source.unwrap_or(Path::new(COMMAND_LINE));
        let bad = |field: &str, msg: String| Err(Error::config(origin, field, msg));
        for (field, v) in [
            ("radius1", self.radius1),
            ("radius2", self.radius2),
            ("temperature", self.temperature),
            ("rmin", self.r_min),
            ("rmax", self.r_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(field, format!("must be positive, got {v}"));
            }
        }
        if self.r_min >= self.r_max {
            return bad(
                "rmin",
                format!("must be below rmax ({} >= {})", self.r_min, self.r_max),
            );
        }
        if self.points_per_decade < 4 {
            return bad(
                "points_per_decade",
                format!("must be at least 4, got {}", self.points_per_decade),
            );
        }
        if let Err(e) = self.settings.validate() {
            return bad("integration", e.to_string());
        }
        if self.threads == Some(0) {
            return bad("threads", "must be at least 1".into());
        }
        if let Some(x) = self.xi_min {
            if !(x >= 0.0 && x < self.xi_max) {
                return bad("xi_min", format!("must lie in [0, xi_max), got {x}"));
            }
        }
        if !(self.xi_max > 0.0 && self.xi_max.is_finite()) {
            return bad("xi_max", format!("must be positive, got {}", self.xi_max));
        }
        if self.xi_points_per_decade < 1 {
            return bad("xi_points_per_decade", "must be at least 1".into());
        }
        Ok(())
    }

    fn load_cards(&self) -> Result<Vec<(usize, MaterialCard)>> {
        self.materials
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_ref().map(|p| load_material_card(p).map(|c| (i, c))))
            .collect()
    }
}

const SLOT_FLAGS: [&str; 3] = ["mat1", "mat2", "mat3"];

fn require(cfg: &RunConfig, slots: &[usize]) -> Result<()> {
    for &i in slots {
        if cfg.materials[i].is_none() {
            return Err(Error::config(
                COMMAND_LINE,
                SLOT_FLAGS[i],
                "material card is required for this command",
            ));
        }
    }
    Ok(())
}

/// Runs a sweep and renders it as CSV. The flag reports full convergence.
pub fn sweep_csv(cfg: &RunConfig) -> Result<(String, SweepReport)> {
    require(cfg, &[0, 1, 2])?;
    let mut cards = cfg.load_cards()?.into_iter().map(|(_, c)| Arc::new(c.model));
    let (m1, m2, m3) = (
        cards.next().expect("three cards"),
        cards.next().expect("three cards"),
        cards.next().expect("three cards"),
    );
    let system = RodSystem::new(cfg.radius1, cfg.radius2, m1, m2, m3)?;
    let env = ThermalEnvironment::new(cfg.temperature)?;
    let report = sweep_column(
        &system,
        &env,
        cfg.r_min,
        cfg.r_max,
        cfg.points_per_decade,
        &cfg.settings,
        Column::from_mode(cfg.mode),
    )?;
    Ok((render_sweep(&report), report))
}

fn format_ratio(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v:e}"),
        None => "nan".into(),
    }
}

fn sign_word(s: i8) -> &'static str {
    if s < 0 {
        "attractive"
    } else {
        "repulsive"
    }
}

pub fn render_sweep(report: &SweepReport) -> String {
    let mut out = String::from("R_m,F_ret_J_per_m,F_nonret_J_per_m,F_n0_J_per_m,ratio_abs,converged\n");
    for row in &report.grid {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{},{}",
            row.r,
            row.f_ret,
            row.f_nonret,
            row.f_n0,
            format_ratio(row.ratio_abs()),
            row.converged()
        );
    }
    let _ = writeln!(out, "# column,{}", report.column.mode().as_str());
    let _ = writeln!(out, "# boundaries,{}", report.boundaries.len());
    for b in &report.boundaries {
        let _ = writeln!(
            out,
            "# boundary,{:e},{}->{}",
            b.r,
            sign_word(b.sign_below),
            sign_word(-b.sign_below)
        );
    }
    let _ = writeln!(out, "# extrema,{}", report.extrema.len());
    for e in &report.extrema {
        let kind = match e.kind {
            ExtremumKind::Maximum => "maximum",
            ExtremumKind::Minimum => "minimum",
        };
        let _ = writeln!(out, "# extremum,{:e},{:e},{kind}", e.r, e.f);
    }
    out
}

fn pair_label(a: &MaterialCard, b: &MaterialCard) -> String {
    format!("{}|{}", a.name, b.name)
}

/// Crossing table for every pair of loaded materials, medium pairs first.
pub fn crossings_text(cfg: &RunConfig) -> Result<String> {
    let cards = cfg.load_cards()?;
    if cards.len() < 2 {
        return Err(Error::config(
            COMMAND_LINE,
            "mat1/mat2/mat3",
            "at least two material cards are required",
        ));
    }
    let get = |slot: usize| cards.iter().find(|(i, _)| *i == slot).map(|(_, c)| c);
    let (lo, hi) = (cfg.xi_min.unwrap_or(0.0), cfg.xi_max);
    let mut out = String::new();
    let _ = writeln!(out, "# crossings of eps(i xi) on [{lo:e}, {hi:e}] rad/s");
    let _ = writeln!(out, "pair,xi_rad_s,below,above");
    for (i, j) in [(0, 2), (1, 2), (0, 1)] {
        let (Some(a), Some(b)) = (get(i), get(j)) else {
            continue;
        };
        let report = find_crossings(&a.model, &b.model, lo, hi)?;
        let label = pair_label(a, b);
        if report.crossings.is_empty() {
            let _ = writeln!(out, "{label},no crossings,,");
        }
        for c in &report.crossings {
            let (below, above) = if c.sign_below < 0 { ("<", ">") } else { (">", "<") };
            let _ = writeln!(
                out,
                "{label},{:e},{} {below} {},{} {above} {}",
                c.xi, a.name, b.name, a.name, b.name
            );
        }
        for d in &report.diagnostics {
            let _ = writeln!(out, "# {label}: {d}");
        }
    }
    Ok(out)
}

/// ε(iξ) table for every loaded material.
pub fn epsilon_csv(cfg: &RunConfig) -> Result<String> {
    let cards = cfg.load_cards()?;
    if cards.is_empty() {
        return Err(Error::config(
            COMMAND_LINE,
            "mat1/mat2/mat3",
            "at least one material card is required",
        ));
    }
    let lo = cfg.xi_min.unwrap_or(DEFAULT_XI_MIN);
    if lo <= 0.0 {
        return Err(Error::config(
            COMMAND_LINE,
            "xi_min",
            "must be positive for a logarithmic table",
        ));
    }
    let grid = log_grid(lo, cfg.xi_max, cfg.xi_points_per_decade.max(4))?;
    let models: Vec<&DielectricModel> = cards.iter().map(|(_, c)| &c.model).collect();
    let mut out = String::from("xi_rad_s");
    for (_, c) in &cards {
        let _ = write!(out, ",{}", c.name);
    }
    out.push('\n');
    for xi in grid {
        let _ = write!(out, "{xi:e}");
        for m in &models {
            let _ = write!(out, ",{:e}", m.epsilon(xi));
        }
        out.push('\n');
    }
    Ok(out)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: &Command) -> Result<i32> {
    let args = match command {
        Command::Sweep(a) | Command::Crossings(a) | Command::Epsilon(a) => a,
    };
    let cfg = RunConfig::resolve(args)?;
    let body = || -> Result<i32> {
        match command {
            Command::Sweep(_) => {
                let (csv, report) = sweep_csv(&cfg)?;
                emit(&cfg, &csv)?;
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
                Ok(if report.all_converged() {
                    EXIT_OK
                } else {
                    EXIT_NOT_CONVERGED
                })
            }
            Command::Crossings(_) => {
                emit(&cfg, &crossings_text(&cfg)?)?;
                Ok(EXIT_OK)
            }
            Command::Epsilon(_) => {
                emit(&cfg, &epsilon_csv(&cfg)?)?;
                Ok(EXIT_OK)
            }
        }
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config(COMMAND_LINE, "threads", e.to_string()))?
            .install(body),
        None => body(),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
