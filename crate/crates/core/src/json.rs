//! JSON shapes for matrices.

use serde::{Deserialize, Serialize};

use crate::scalar::{fmt_rational, parse_rational};
use crate::valued_fields::{parse_field_element, FieldKind};
use crate::{FMatrix, QMatrix};

/// `{"rows": m, "cols": k, "entries": [["p/q", …], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&QMatrix> for RationalMatrixJson {
    fn from(m: &QMatrix) -> Self {
        RationalMatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows()).map(|r| m.row(r).iter().map(fmt_rational).collect()).collect(),
        }
    }
}

impl RationalMatrixJson {
    pub fn to_matrix(&self) -> Result<QMatrix, String> {
        if self.entries.len() != self.rows {
            return Err(format!("expected {} rows, found {}", self.rows, self.entries.len()));
        }
        let mut rows = Vec::with_capacity(self.rows);
        for row in &self.entries {
            if row.len() != self.cols {
                return Err(format!("expected {} columns, found {}", self.cols, row.len()));
            }
            let parsed: Result<Vec<_>, String> = row
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| format!("bad rational `{s}`")))
                .collect();
            rows.push(parsed?);
        }
        Ok(QMatrix::from_rows(rows, self.cols))
    }
}

/// A square matrix over a rational function field, entries as field-element strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldMatrixJson {
    pub entries: Vec<Vec<String>>,
}

impl From<&FMatrix> for FieldMatrixJson {
    fn from(m: &FMatrix) -> Self {
        FieldMatrixJson {
            entries: (0..m.rows()).map(|r| m.row(r).iter().map(|e| e.to_string()).collect()).collect(),
        }
    }
}

impl FieldMatrixJson {
    /// Entries printed with the variable names of `kind`.
    pub fn with_kind(m: &FMatrix, kind: FieldKind) -> Self {
        FieldMatrixJson { entries: (0..m.rows()).map(|r| m.row(r).iter().map(|e| e.format(kind)).collect()).collect() }
    }

    pub fn to_matrix(&self, kind: FieldKind) -> Result<FMatrix, String> {
        let cols = self.entries.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(self.entries.len());
        for row in &self.entries {
            if row.len() != cols {
                return Err("ragged matrix rows".into());
            }
            let parsed: Result<Vec<_>, String> =
                row.iter().map(|s| parse_field_element(s, kind).map_err(|e| e.to_string())).collect();
            rows.push(parsed?);
        }
        Ok(FMatrix::from_rows(rows, cols))
    }
}
