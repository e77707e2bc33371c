use super::HarnessError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Expected header and row count of a benchmark CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSchema {
    pub name: &'static str,
    pub columns: &'static [&'static str],
    pub rows: usize,
}

/// Compressive strength `y`, density `x` and resin-adjusted density `z`.
pub const RADIATA_PINE: DatasetSchema = DatasetSchema {
    name: "radiata_pine",
    columns: &["y", "x", "z"],
    rows: 42,
};

/// Seven predictors and a binary diabetes indicator.
pub const PIMA: DatasetSchema = DatasetSchema {
    name: "pima",
    columns: &["NP", "PGC", "BP", "TST", "BMI", "DP", "AGE", "diabetes"],
    rows: 532,
};

/// Typed, column-major contents of an ingested CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub schema: DatasetSchema,
    pub columns: Vec<Vec<f64>>,
    pub record: DatasetRecord,
}

/// What the report keeps about each dataset it read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub name: String,
    pub path: PathBuf,
    pub rows: usize,
    pub sha256: String,
}

impl DataTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.schema
            .columns
            .iter()
            .position(|c| *c == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.record.rows
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String, HarnessError> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Reads a CSV whose header must equal `schema.columns`. Structural checks
/// (header, cell parsing, row count) run before the checksum comparison so a
/// truncated file reports the row count rather than a hash difference.
pub fn ingest_dataset(
    path: &Path,
    schema: DatasetSchema,
    expected_sha256: Option<&str>,
) -> Result<DataTable, HarnessError> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| HarnessError::parse(path, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != schema.columns {
        return Err(HarnessError::HeaderMismatch {
            path: path.to_path_buf(),
            expected: schema.columns.iter().map(|s| s.to_string()).collect(),
            found: header,
        });
    }
    let mut columns = vec![Vec::with_capacity(schema.rows); schema.columns.len()];
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| HarnessError::parse(path, line, e.to_string()))?;
        if record.len() != columns.len() {
            return Err(HarnessError::parse(
                path,
                line,
                format!("expected {} fields, found {}", columns.len(), record.len()),
            ));
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            let v: f64 = field
                .parse()
                .map_err(|_| HarnessError::parse(path, line, format!("not a number: {field:?}")))?;
            if !v.is_finite() {
                return Err(HarnessError::parse(
                    path,
                    line,
                    format!("non-finite value {field:?}"),
                ));
            }
            col.push(v);
        }
    }
    let rows = columns[0].len();
    if rows != schema.rows {
        return Err(HarnessError::RowCountMismatch {
            path: path.to_path_buf(),
            expected: schema.rows,
            found: rows,
        });
    }
    let sha256 = sha256_hex(&bytes);
    if let Some(expected) = expected_sha256 {
        if !expected.eq_ignore_ascii_case(&sha256) {
            return Err(HarnessError::ChecksumMismatch {
                path: path.to_path_buf(),
                expected: expected.to_string(),
                found: sha256,
            });
        }
    }
    Ok(DataTable {
        schema,
        columns,
        record: DatasetRecord {
            name: schema.name.to_string(),
            path: path.to_path_buf(),
            rows,
            sha256,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const TINY: DatasetSchema = DatasetSchema {
        name: "tiny",
        columns: &["a", "b"],
        rows: 2,
    };

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_columns_and_hash() {
        let f = file("a,b\n1,2\n3,4.5\n");
        let t = ingest_dataset(f.path(), TINY, None).unwrap();
        assert_eq!(t.column("b").unwrap(), &[2.0, 4.5]);
        assert_eq!(t.record.sha256, sha256_hex(b"a,b\n1,2\n3,4.5\n"));
        let pinned = t.record.sha256.clone();
        assert!(ingest_dataset(f.path(), TINY, Some(&pinned)).is_ok());
    }

    #[test]
    fn distinct_failures() {
        let short = file("a,b\n1,2\n");
        let e = ingest_dataset(short.path(), TINY, Some("00")).unwrap_err();
        assert!(e.to_string().contains("row-count mismatch"), "{e}");

        let bad = file("a,b\n1,x\n3,4\n");
        let e = ingest_dataset(bad.path(), TINY, None).unwrap_err();
        assert!(matches!(e, HarnessError::Parse { line: 2, .. }), "{e}");

        let ok = file("a,b\n1,2\n3,4\n");
        let e = ingest_dataset(ok.path(), TINY, Some("deadbeef")).unwrap_err();
        assert!(matches!(e, HarnessError::ChecksumMismatch { .. }));

        let hdr = file("a,c\n1,2\n3,4\n");
        let e = ingest_dataset(hdr.path(), TINY, None).unwrap_err();
        assert!(matches!(e, HarnessError::HeaderMismatch { .. }));

        let codes: std::collections::HashSet<i32> = [
            ingest_dataset(short.path(), TINY, None).unwrap_err(),
            ingest_dataset(bad.path(), TINY, None).unwrap_err(),
            ingest_dataset(ok.path(), TINY, Some("deadbeef")).unwrap_err(),
            ingest_dataset(hdr.path(), TINY, None).unwrap_err(),
        ]
        .iter()
        .map(HarnessError::exit_code)
        .collect();
        assert_eq!(codes.len(), 4);
    }
}
