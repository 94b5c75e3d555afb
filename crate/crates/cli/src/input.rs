//! Loading matrices, points and embeddings from inline JSON or files.

use std::path::Path;

use lambda_buildings::apartments::ApartmentPoint;
use lambda_buildings::json::{FieldMatrixJson, RationalMatrixJson};
use lambda_buildings::norm_building::NormJson;
use lambda_buildings::valued_fields::parse_field_element;
use lambda_buildings::weyl_extension::{preset, EmbeddingSpec, PRESETS};
use lambda_buildings::{FMatrix, FieldElement, FieldKind, QMatrix};
use serde_json::Value;

/// A usage or parse error; the message names the offending input.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for UsageError {
    fn from(s: String) -> Self {
        UsageError(s)
    }
}

pub type Result<T> = std::result::Result<T, UsageError>;

/// Inline JSON when the argument starts with `[` or `{`, a file path otherwise.
pub fn json_arg(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| UsageError(format!("cannot read `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| UsageError(format!("bad JSON in `{arg}`: {e}")))
}

/// `{"entries": [[…]]}` or a bare array of rows.
pub fn field_matrix(arg: &str, kind: FieldKind) -> Result<FMatrix> {
    let v = json_arg(arg)?;
    let j: FieldMatrixJson = match v {
        Value::Array(_) => FieldMatrixJson { entries: serde_json::from_value(v).map_err(|e| UsageError(format!("`{arg}`: {e}")))? },
        _ => serde_json::from_value(v).map_err(|e| UsageError(format!("`{arg}`: {e}")))?,
    };
    j.to_matrix(kind).map_err(|e| UsageError(format!("`{arg}`: {e}")))
}

/// `{"rows", "cols", "entries"}` or a bare array of rows.
pub fn rational_matrix(arg: &str) -> Result<QMatrix> {
    let v = json_arg(arg)?;
    let j: RationalMatrixJson = match v {
        Value::Array(_) => {
            let entries: Vec<Vec<String>> = serde_json::from_value(v).map_err(|e| UsageError(format!("`{arg}`: {e}")))?;
            RationalMatrixJson { rows: entries.len(), cols: entries.first().map_or(0, Vec::len), entries }
        }
        _ => serde_json::from_value(v).map_err(|e| UsageError(format!("`{arg}`: {e}")))?,
    };
    j.to_matrix().map_err(|e| UsageError(format!("`{arg}`: {e}")))
}

/// `Δ`-coordinates as a JSON array of value-group elements, e.g. `[["1"],["-1/2"]]`.
pub fn point(arg: &str) -> Result<ApartmentPoint> {
    serde_json::from_value(json_arg(arg)?).map_err(|e| UsageError(format!("bad point `{arg}`: {e}")))
}

pub fn vector(arg: &str, kind: FieldKind) -> Result<Vec<FieldElement>> {
    let raw: Vec<String> =
        serde_json::from_value(json_arg(arg)?).map_err(|e| UsageError(format!("bad vector `{arg}`: {e}")))?;
    raw.iter()
        .map(|s| parse_field_element(s, kind).map_err(|e| UsageError(format!("bad field element `{s}`: {e}"))))
        .collect()
}

pub fn norm(arg: &str) -> Result<NormJson> {
    serde_json::from_value(json_arg(arg)?).map_err(|e| UsageError(format!("bad norm `{arg}`: {e}")))
}

/// A preset name, or a JSON file (the `.json` suffix may be dropped for the
/// files shipped under `data/`).
pub fn embedding(arg: &str) -> Result<EmbeddingSpec> {
    let stem = arg.strip_suffix(".json").unwrap_or(arg);
    let stem = Path::new(stem).file_name().and_then(|s| s.to_str()).unwrap_or(stem);
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| UsageError(format!("cannot read `{arg}`: {e}")))?;
        return EmbeddingSpec::parse(&text).map_err(|e| UsageError(format!("`{arg}`: {e}")));
    }
    preset(stem).ok_or_else(|| UsageError(format!("unknown embedding `{arg}`; presets: {}", PRESETS.join(", "))))
}

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read `{path}`: {e}")))
}
