//! JSON sidecar that carries a cluster model next to its symbol string.
//!
//! ```json
//! {"k": 2, "centers": [[2.0, 1.0], [2.0, -1.0]], "sigma_len": 0.0,
//!  "sigma_inc": 0.98, "scl": 0.0, "tol_s": 0.5, "start_value": 0.0,
//!  "original_length": 10, "symbols": "aaabb"}
//! ```
//!
//! `scl` is written as the string `"inf"` when infinite. The optional `mean`
//! and `std` fields record the z-normalization applied before compression.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{symbol_index, Center, ClusterModel, SymbolicSeries};
use crate::error::{AbbaError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSidecar {
    pub k: usize,
    pub centers: Vec<[f64; 2]>,
    pub sigma_len: f64,
    pub sigma_inc: f64,
    #[serde(serialize_with = "write_scl", deserialize_with = "read_scl")]
    pub scl: f64,
    pub tol_s: f64,
    pub start_value: f64,
    pub original_length: usize,
    pub symbols: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_len_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_inc_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std: Option<f64>,
}

fn write_scl<S: Serializer>(scl: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    if scl.is_infinite() {
        ser.serialize_str("inf")
    } else {
        ser.serialize_f64(*scl)
    }
}

fn read_scl<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Scl {
        Number(f64),
        Text(String),
    }
    match Scl::deserialize(de)? {
        Scl::Number(v) => Ok(v),
        Scl::Text(t) => parse_scl(&t).map_err(serde::de::Error::custom),
    }
}

/// Parses an `scl` value, accepting `inf`/`infinity` for the lengths-only mode.
pub fn parse_scl(text: &str) -> std::result::Result<f64, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        other => other.parse::<f64>().map_err(|_| format!("invalid scl value {text:?}")),
    }
}

impl SymbolicSeries {
    pub fn to_sidecar(&self) -> ModelSidecar {
        ModelSidecar {
            k: self.model.k,
            centers: self.model.centers.iter().map(|c| [c.len, c.inc]).collect(),
            sigma_len: self.model.sigma_len,
            sigma_inc: self.model.sigma_inc,
            scl: self.model.scl,
            tol_s: self.model.tol_s,
            start_value: self.start_value,
            original_length: self.original_length,
            symbols: self.symbols.clone(),
            var_len_max: Some(self.model.var_len_max),
            var_inc_max: Some(self.model.var_inc_max),
            mean: None,
            std: None,
        }
    }

    /// Rebuilds a symbolic series from its sidecar, checking that the symbol
    /// string only uses the model's alphabet.
    pub fn from_sidecar(sidecar: &ModelSidecar) -> Result<SymbolicSeries> {
        if sidecar.centers.len() != sidecar.k {
            return Err(AbbaError::invalid(format!(
                "sidecar declares k={} but has {} centers",
                sidecar.k,
                sidecar.centers.len()
            )));
        }
        let assignments = sidecar
            .symbols
            .chars()
            .enumerate()
            .map(|(position, symbol)| match symbol_index(symbol) {
                Some(i) if i < sidecar.k => Ok(i),
                _ => Err(AbbaError::UnknownSymbol { symbol, position }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolicSeries {
            symbols: sidecar.symbols.clone(),
            model: ClusterModel {
                k: sidecar.k,
                centers: sidecar.centers.iter().map(|&[len, inc]| Center { len, inc }).collect(),
                assignments,
                sigma_len: sidecar.sigma_len,
                sigma_inc: sidecar.sigma_inc,
                var_len_max: sidecar.var_len_max.unwrap_or(f64::NAN),
                var_inc_max: sidecar.var_inc_max.unwrap_or(f64::NAN),
                tol_s: sidecar.tol_s,
                scl: sidecar.scl,
            },
            start_value: sidecar.start_value,
            original_length: sidecar.original_length,
        })
    }
}

impl ModelSidecar {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
