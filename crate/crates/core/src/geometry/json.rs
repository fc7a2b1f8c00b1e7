//! PointSet JSON documents:
//! `{"schema": 1, "mode": "exact"|"float", "dim": d, "points": [[...]], "labels": [...]}`.
//! Exact coordinates are written as `"num/den"` strings (plain integers as
//! `"n"`); bare JSON integers are accepted on input.

use serde_json::{json, Value};

use super::{Coords, PointSet};
use crate::error::{Error, Result};
use crate::exact;

pub const SCHEMA_VERSION: u64 = 1;

impl PointSet {
    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = match self.coords() {
            Coords::Exact(p) => p
                .iter()
                .map(|row| Value::from(row.iter().map(|x| Value::String(exact::format(x))).collect::<Vec<_>>()))
                .collect(),
            Coords::Float(p) => p.iter().map(|row| json!(row)).collect(),
        };
        let mut doc = json!({
            "schema": SCHEMA_VERSION,
            "mode": if self.is_exact() { "exact" } else { "float" },
            "dim": self.dim(),
            "points": points,
        });
        if !self.is_exact() {
            doc["tolerance"] = json!(self.tolerance());
        }
        if let Some(labels) = self.labels() {
            doc["labels"] = json!(labels);
        }
        doc
    }

    pub fn from_json(doc: &Value) -> Result<PointSet> {
        let bad = |m: &str| Error::Parse(format!("point set document: {m}"));
        if let Some(s) = doc.get("schema") {
            if s.as_u64() != Some(SCHEMA_VERSION) {
                return Err(bad(&format!("unsupported schema {s}")));
            }
        }
        let mode = doc.get("mode").and_then(Value::as_str).ok_or_else(|| bad("missing \"mode\""))?;
        let rows = doc
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"points\" array"))?;
        let rows: Vec<&Vec<Value>> = rows
            .iter()
            .map(|r| r.as_array().ok_or_else(|| bad("each point must be an array")))
            .collect::<Result<_>>()?;
        let mut set = match mode {
            "exact" => PointSet::exact(
                rows.iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| match x {
                                Value::String(s) => exact::parse(s),
                                Value::Number(n) if n.is_i64() => Ok(exact::int(n.as_i64().unwrap())),
                                _ => Err(bad("exact coordinates must be \"num/den\" strings or integers")),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?,
            "float" => {
                let points = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| x.as_f64().ok_or_else(|| bad("float coordinates must be numbers")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let tol = doc.get("tolerance").and_then(Value::as_f64).unwrap_or(super::DEFAULT_TOLERANCE);
                PointSet::float_with_tolerance(points, tol)?
            }
            other => return Err(bad(&format!("unknown mode {other:?}"))),
        };
        if let Some(d) = doc.get("dim") {
            if d.as_u64() != Some(set.dim() as u64) {
                return Err(bad("\"dim\" disagrees with the coordinates"));
            }
        }
        if let Some(labels) = doc.get("labels") {
            if !labels.is_null() {
                let labels: Vec<String> = serde_json::from_value(labels.clone())
                    .map_err(|e| bad(&format!("labels: {e}")))?;
                set = set.with_labels(labels)?;
            }
        }
        Ok(set)
    }

    pub fn from_json_str(s: &str) -> Result<PointSet> {
        let doc: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }
}
