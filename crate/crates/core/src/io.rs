//! Matrix-set files: `{"n": int, "matrices": [[[number]]]}`.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::error::{JsrError, Result};
use crate::linalg::{Matrix, MatrixAlphabet};

/// Parsed matrix-set file. Entries that are whole numbers are written back
/// as integers so integer-valued files round-trip unchanged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixSetFile {
    pub n: usize,
    #[serde(serialize_with = "write_matrices")]
    pub matrices: Vec<Vec<Vec<f64>>>,
}

struct Entry(f64);

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.fract() == 0.0 && v.abs() < 9.0e15 {
            s.serialize_i64(v as i64)
        } else {
            s.serialize_f64(v)
        }
    }
}

fn write_matrices<S: Serializer>(
    ms: &[Vec<Vec<f64>>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<Vec<Entry>>> = ms
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(|&v| Entry(v)).collect())
                .collect()
        })
        .collect();
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for m in &rows {
        seq.serialize_element(m)?;
    }
    seq.end()
}

fn field_err(path: &str, what: &str) -> JsrError {
    JsrError::Parse(format!("{path}: {what}"))
}

impl MatrixSetFile {
    /// Parses and validates; errors name the offending field.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| JsrError::Parse(format!("invalid JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| field_err("<root>", "expected an object"))?;
        let n = obj
            .get("n")
            .ok_or_else(|| field_err("n", "missing"))?
            .as_u64()
            .filter(|&n| n > 0)
            .ok_or_else(|| field_err("n", "expected a positive integer"))? as usize;
        let list = obj
            .get("matrices")
            .ok_or_else(|| field_err("matrices", "missing"))?
            .as_array()
            .ok_or_else(|| field_err("matrices", "expected an array"))?;
        if list.is_empty() {
            return Err(field_err("matrices", "at least one matrix is required"));
        }
        let mut matrices = Vec::with_capacity(list.len());
        for (k, m) in list.iter().enumerate() {
            let rows = m
                .as_array()
                .ok_or_else(|| field_err(&format!("matrices[{k}]"), "expected an array of rows"))?;
            if rows.len() != n {
                return Err(field_err(
                    &format!("matrices[{k}]"),
                    &format!("expected {n} rows, found {}", rows.len()),
                ));
            }
            let mut out = Vec::with_capacity(n);
            for (i, r) in rows.iter().enumerate() {
                let path = format!("matrices[{k}][{i}]");
                let r = r
                    .as_array()
                    .ok_or_else(|| field_err(&path, "expected an array of numbers"))?;
                if r.len() != n {
                    return Err(field_err(
                        &path,
                        &format!("expected {n} entries, found {}", r.len()),
                    ));
                }
                let row = r
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        x.as_f64()
                            .ok_or_else(|| field_err(&format!("{path}[{j}]"), "expected a number"))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                out.push(row);
            }
            matrices.push(out);
        }
        Ok(Self { n, matrices })
    }

    pub fn from_alphabet(a: &MatrixAlphabet) -> Self {
        Self {
            n: a.n(),
            matrices: a.matrices().iter().map(Matrix::to_rows).collect(),
        }
    }

    pub fn to_alphabet(&self) -> Result<MatrixAlphabet> {
        let ms = self
            .matrices
            .iter()
            .map(|m| Matrix::from_rows(m))
            .collect::<Result<Vec<_>>>()?;
        MatrixAlphabet::new(ms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix sets always serialize")
    }
}

pub fn read_matrix_set(path: &std::path::Path) -> Result<MatrixAlphabet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| JsrError::Parse(format!("{}: {e}", path.display())))?;
    MatrixSetFile::parse(&text)?.to_alphabet()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_integer_file() {
        let text = r#"{"n":2,"matrices":[[[1,0],[1,0]],[[0,1],[0,-1]]]}"#;
        let f = MatrixSetFile::parse(text).unwrap();
        let back = serde_json::to_string(&f).unwrap();
        assert_eq!(back, text);
        let a = f.to_alphabet().unwrap();
        assert_eq!(MatrixSetFile::from_alphabet(&a), f);
    }

    #[test]
    fn fractional_entries_survive() {
        let f = MatrixSetFile {
            n: 1,
            matrices: vec![vec![vec![0.25]], vec![vec![-3.0]]],
        };
        assert_eq!(MatrixSetFile::parse(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"matrices":[[[1]]]}"#, "n: missing"),
            (r#"{"n":2,"matrices":[[[1,0],[1]]]}"#, "matrices[0][1]: expected 2 entries"),
            (r#"{"n":1,"matrices":[[[1]],[["x"]]]}"#, "matrices[1][0][0]: expected a number"),
            (r#"{"n":1,"matrices":[]}"#, "matrices: at least one"),
            (r#"{"n":2,"matrices":[[[1,0]]]}"#, "matrices[0]: expected 2 rows"),
        ];
        for (text, want) in cases {
            let e = MatrixSetFile::parse(text).unwrap_err().to_string();
            assert!(e.contains(want), "{e} should mention {want}");
        }
    }
}
