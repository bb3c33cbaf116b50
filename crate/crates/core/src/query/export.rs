//! Tabular export: CSV (RFC 4180) and JSON (array of objects).

use super::eval::BindingTable;
use crate::rdf::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<ExportFormat, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// IRIs render absolute, literals as bare lexical forms.
pub fn term_plain(term: &Term) -> String {
    match term {
        Term::BlankNode(label) => format!("_:{label}"),
        other => other.plain().to_owned(),
    }
}

pub fn export(table: &BindingTable, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(&table.columns)
                .expect("in-memory CSV write");
            for row in &table.rows {
                writer
                    .write_record(row.iter().map(term_plain))
                    .expect("in-memory CSV write");
            }
            writer.into_inner().expect("in-memory CSV flush")
        }
        ExportFormat::Json => {
            let objects: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut object = serde_json::Map::new();
                    for (column, term) in table.columns.iter().zip(row) {
                        object.insert(column.clone(), serde_json::Value::String(term_plain(term)));
                    }
                    serde_json::Value::Object(object)
                })
                .collect();
            let mut bytes = serde_json::to_vec_pretty(&objects).expect("JSON export");
            bytes.push(b'\n');
            bytes
        }
    }
}
