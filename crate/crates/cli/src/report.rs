//! Run configuration and the report envelope shared by every subcommand.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Failure;

pub const TOL_ENV: &str = "RIBBONLAB_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tolerance: f64,
    pub cluster_radius: f64,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    /// Flag, then `RIBBONLAB_TOL`, then 1e-9.
    pub fn resolve(tol: Option<f64>, radius: f64, format: Format, seed: u64) -> Result<Self, Failure> {
        let tolerance = match tol {
            Some(t) => t,
            None => match std::env::var(TOL_ENV) {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("{TOL_ENV}={s:?} is not a number")))?,
                Err(_) => 1e-9,
            },
        };
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Failure::Input(format!("tolerance must be positive, got {tolerance}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Failure::Input(format!("cluster radius must be positive, got {radius}")));
        }
        Ok(Self {
            tolerance,
            cluster_radius: radius,
            format,
            seed,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub model_sha256: &'a str,
    pub pass: bool,
    pub result: T,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn render<T: Serialize>(envelope: &Envelope<'_, T>) -> String {
    let value = serde_json::to_value(envelope).expect("report serializes");
    match envelope.config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&value),
    }
}

/// One `key,value` row per scalar leaf; keys are dotted paths.
pub fn to_csv(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten(value, String::new(), &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{},{}", csv_field(&k), csv_field(&v));
    }
    out
}

fn flatten(value: &Value, prefix: String, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(v, join(k), rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, join(&i.to_string()), rows);
            }
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        Value::Null => rows.push((prefix, String::new())),
        other => rows.push((prefix, other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_flattens_nested_values() {
        let v: Value = serde_json::json!({"a": {"b": [1, "x,y"]}, "c": null});
        assert_eq!(to_csv(&v), "key,value\na.b.0,1\na.b.1,\"x,y\"\nc,\n");
    }

    #[test]
    fn digest_is_hex() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
