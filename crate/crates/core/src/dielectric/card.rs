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

//! Material cards and loss-table files.
//!
//! A card is a small TOML document:
//!
//! ```toml
//! name = "SiO2"
//! representative = true
//! source_type = "oscillators"
//! # [C, omega_rad_s, g_rad_s]
//! oscillators = [[0.8, 1.9e14, 0.0], [1.1, 2.0e16, 0.0]]
//! ```
//!
//! or, for tabulated absorption,
//!
//! ```toml
//! name = "ZnO"
//! source_type = "tabulated"
//! loss_table = "zno_loss.dat"   # relative to the card
//! ```
//!
//! Loss tables hold one whitespace-separated `omega_rad_s eps2` pair per
//! line; lines starting with `#` are comments.

use std::path::{Path, PathBuf};

use super::{DielectricModel, Oscillator, OscillatorModel, TabulatedLossData};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceType {
    Oscillators,
    Tabulated,
}

#[derive(Clone, Debug)]
pub struct MaterialCard {
    pub path: PathBuf,
    pub name: String,
    pub representative: bool,
    pub source_type: SourceType,
    pub model: DielectricModel,
}

pub fn load_material_card(path: impl AsRef<Path>) -> Result<MaterialCard> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_material_card(&text, path)
}

/// Parses card text; `path` is used for messages and to resolve the loss table.
pub fn parse_material_card(text: &str, path: &Path) -> Result<MaterialCard> {
    let err = |field: &str, msg: String| Error::config(path, field, msg);
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| err("syntax", e.message().to_string()))?;

    for key in table.keys() {
        if !matches!(
            key.as_str(),
            "name" | "representative" | "source_type" | "oscillators" | "loss_table" | "notes"
        ) {
            return Err(err(key, "unknown field".into()));
        }
    }

    let name = match table.get("name") {
        Some(toml::Value::String(s)) if !s.trim().is_empty() => s.clone(),
        Some(_) => return Err(err("name", "must be a non-empty string".into())),
        None => return Err(err("name", "missing".into())),
    };
    let representative = match table.get("representative") {
        None => false,
        Some(toml::Value::Boolean(b)) => *b,
        Some(_) => return Err(err("representative", "must be true or false".into())),
    };
    let source_type = match table.get("source_type").and_then(|v| v.as_str()) {
        Some("oscillators") => SourceType::Oscillators,
        Some("tabulated") => SourceType::Tabulated,
        Some(other) if other.contains("eps") || other.contains("imag") => {
            return Err(err(
                "source_type",
                format!(
                    "'{other}' is not supported: imaginary-axis epsilon tables cannot be \
                     ingested, supply a real-axis loss table (omega, eps2) instead"
                ),
            ))
        }
        Some(other) => {
            return Err(err(
                "source_type",
                format!("'{other}' is not one of 'oscillators', 'tabulated'"),
            ))
        }
        None => return Err(err("source_type", "missing".into())),
    };

    let model = match source_type {
        SourceType::Oscillators => {
            let list = table
                .get("oscillators")
                .ok_or_else(|| err("oscillators", "missing".into()))?
                .as_array()
                .ok_or_else(|| err("oscillators", "must be an array of [C, omega, g]".into()))?;
            let mut terms = Vec::with_capacity(list.len());
            for (i, entry) in list.iter().enumerate() {
                let field = format!("oscillators[{i}]");
                let triple = entry
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .ok_or_else(|| err(&field, "expected [C, omega_rad_s, g_rad_s]".into()))?;
                let mut nums = [0.0; 3];
                for (slot, v) in nums.iter_mut().zip(triple) {
                    *slot = match v {
                        toml::Value::Float(f) => *f,
                        toml::Value::Integer(n) => *n as f64,
                        _ => return Err(err(&field, "entries must be numbers".into())),
                    };
                }
                let [c, w, g] = nums;
                if !(c >= 0.0) {
                    return Err(err(
                        &format!("{field}.C"),
                        format!("oscillator strength must be non-negative, got {c}"),
                    ));
                }
                if !(w > 0.0) {
                    return Err(err(
                        &format!("{field}.omega_rad_s"),
                        format!("resonance must be positive, got {w}"),
                    ));
                }
                if !(g >= 0.0) {
                    return Err(err(
                        &format!("{field}.g_rad_s"),
                        format!("damping must be non-negative, got {g}"),
                    ));
                }
                terms.push(Oscillator::new(c, w, g).map_err(|e| err(&field, e.to_string()))?);
            }
            DielectricModel::oscillators(name.clone(), OscillatorModel::new(terms))
        }
        SourceType::Tabulated => {
            let rel = table
                .get("loss_table")
                .and_then(|v| v.as_str())
                .ok_or_else(|| err("loss_table", "missing path to a loss table".into()))?;
            let table_path = path.parent().unwrap_or(Path::new(".")).join(rel);
            let text = std::fs::read_to_string(&table_path)
                .map_err(|e| err("loss_table", format!("{}: {e}", table_path.display())))?;
            let data = parse_loss_table(&text, &table_path)?;
            DielectricModel::tabulated(name.clone(), data)
        }
    };

    Ok(MaterialCard {
        path: path.to_path_buf(),
        name,
        representative,
        source_type,
        model,
    })
}

/// Parses a two-column `omega_rad_s eps2` table.
pub fn parse_loss_table(text: &str, path: &Path) -> Result<TabulatedLossData> {
    let mut freqs = Vec::new();
    let mut loss = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = format!("line {}", lineno + 1);
        if line.contains(',') || line.starts_with("xi_rad_s") {
            return Err(Error::config(
                path,
                field,
                "looks like an epsilon(i xi) CSV written by the `epsilon` command; \
                 imaginary-axis tables cannot be ingested, supply a real-axis loss \
                 table (omega_rad_s eps2) instead",
            ));
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(Error::config(
                path,
                field,
                format!("expected 2 columns (omega_rad_s eps2), found {}", cols.len()),
            ));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::config(path, format!("line {}", lineno + 1), format!("'{s}' is not a number")))
        };
        freqs.push(parse(cols[0])?);
        loss.push(parse(cols[1])?);
    }
    TabulatedLossData::new(freqs, loss).map_err(|e| match e {
        Error::Data(msg) => Error::config(path, "loss table", msg),
        other => other,
    })
}
