//! Delimiter-separated data files: first line is the header, one tuple per
//! following line.

use aoi_core::Relation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("missing header")]
    MissingHeader,
    #[error("empty relation")]
    EmptyRelation,
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: empty value for `{attribute}`")]
    EmptyValue { line: u64, attribute: String },
    #[error("header {found:?} does not match schema {expected:?}")]
    SchemaMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Parses `text` into a relation. With `schema`, the header must match it
/// exactly; otherwise the header defines the schema.
pub fn load_table(text: &str, delimiter: u8, schema: Option<&[String]>) -> Result<Relation, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| TableError::Invalid(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(TableError::MissingHeader);
    }
    if let Some(expected) = schema {
        if expected != header.as_slice() {
            return Err(TableError::SchemaMismatch {
                expected: expected.to_vec(),
                found: header,
            });
        }
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| TableError::Invalid(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(TableError::Ragged {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        if let Some(i) = record.iter().position(str::is_empty) {
            return Err(TableError::EmptyValue {
                line,
                attribute: header[i].clone(),
            });
        }
        rows.push(record.iter().map(str::to_owned).collect());
    }
    if rows.is_empty() {
        return Err(TableError::EmptyRelation);
    }
    Relation::new(header, rows).map_err(|e| TableError::Invalid(e.to_string()))
}

pub fn write_table(rel: &Relation, delimiter: u8) -> Result<String, TableError> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    let err = |e: csv::Error| TableError::Invalid(e.to_string());
    writer.write_record(rel.schema()).map_err(err)?;
    for row in rel.rows() {
        writer.write_record(row).map_err(err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| TableError::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| TableError::Invalid(e.to_string()))
}
