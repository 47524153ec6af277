use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::{label01, AppRecord, AppType, Store};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("row {row}: {reason}")]
    Parse { row: usize, reason: String },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("row {row}: unknown store {value:?} (expected android, ios or other)")]
    UnknownStore { row: usize, value: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

impl Format {
    /// Guess from a file extension; anything not `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Seconds since the Unix epoch.
    pub ingested_at: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_records: usize,
    pub by_store: BTreeMap<String, usize>,
    pub by_app_type: BTreeMap<String, usize>,
    pub n_labeled: usize,
    pub n_positive: usize,
    /// Positive share among labeled records.
    pub prevalence: Option<f64>,
}

impl Summary {
    pub fn of(records: &[AppRecord]) -> Self {
        let mut by_store = BTreeMap::new();
        let mut by_app_type = BTreeMap::new();
        for r in records {
            *by_store.entry(r.store.as_str().to_string()).or_insert(0) += 1;
            if let Some(t) = r.app_type {
                *by_app_type.entry(t.as_str().to_string()).or_insert(0) += 1;
            }
        }
        let n_labeled = records.iter().filter(|r| r.gamification_label.is_some()).count();
        let n_positive = records
            .iter()
            .filter(|r| r.gamification_label == Some(true))
            .count();
        Self {
            n_records: records.len(),
            by_store,
            by_app_type,
            n_labeled,
            n_positive,
            prevalence: (n_labeled > 0).then(|| n_positive as f64 / n_labeled as f64),
        }
    }
}

/// Validated collection of listings with unique ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub records: Vec<AppRecord>,
    pub provenance: Provenance,
    pub summary: Summary,
}

impl Dataset {
    pub fn new(records: Vec<AppRecord>, provenance: Provenance) -> Result<Self, IngestError> {
        let mut seen = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            if r.id.trim().is_empty() {
                return Err(IngestError::Parse {
                    row: i + 1,
                    reason: "empty id".into(),
                });
            }
            if !seen.insert(r.id.as_str()) {
                return Err(IngestError::DuplicateId(r.id.clone()));
            }
        }
        let summary = Summary::of(&records);
        Ok(Self {
            records,
            provenance,
            summary,
        })
    }

    pub fn labeled(&self) -> impl Iterator<Item = (&AppRecord, bool)> {
        self.records
            .iter()
            .filter_map(|r| r.gamification_label.map(|y| (r, y)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }
}

/// Reads a CSV or JSON listing file into a validated dataset.
///
/// JSON input is either an array of records or a previously written dataset
/// document. The first invalid row aborts ingestion.
pub fn ingest(path: impl AsRef<Path>, format: Format) -> Result<Dataset, IngestError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let records = match format {
        Format::Csv => parse_csv(bytes.as_slice())?,
        Format::Json => parse_json(&bytes)?,
    }
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let ingested_at = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs());
    Dataset::new(
        records,
        Provenance {
            source: path.display().to_string(),
            ingested_at,
        },
    )
}

/// Unvalidated field values of one input row.
#[derive(Debug, Default, Deserialize)]
struct RawRecord {
    id: Option<String>,
    store: Option<String>,
    title: Option<String>,
    description: Option<String>,
    #[serde(default, deserialize_with = "loose_string")]
    gamification_label: Option<String>,
    app_type: Option<String>,
    language: Option<String>,
}

fn loose_string<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Ok(match Option::<serde_json::Value>::deserialize(d)? {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(s),
        Some(other) => Some(other.to_string()),
    })
}

impl RawRecord {
    fn validate(self, row: usize) -> Result<AppRecord, IngestError> {
        let parse = |reason: String| IngestError::Parse { row, reason };
        let id = self
            .id
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .ok_or_else(|| parse("missing id".into()))?;
        let store_text = self.store.ok_or_else(|| parse("missing store".into()))?;
        let store = Store::from_str(&store_text).map_err(|value| IngestError::UnknownStore {
            row,
            value,
        })?;
        let title = self.title.ok_or_else(|| parse("missing title".into()))?;
        let description = self.description.unwrap_or_default();
        let gamification_label = match self.gamification_label {
            Some(text) => label01::parse(&text).map_err(parse)?,
            None => None,
        };
        let app_type = match self.app_type.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(text) => Some(
                AppType::from_str(text)
                    .map_err(|v| parse(format!("unknown app_type {v:?}")))?,
            ),
        };
        let language = self
            .language
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty());
        Ok(AppRecord {
            id,
            store,
            title,
            description,
            gamification_label,
            app_type,
            language,
        })
    }
}

const REQUIRED_COLUMNS: [&str; 4] = ["id", "store", "title", "description"];

/// Parses CSV rows independently so one bad row does not hide the others.
/// Row numbers count data rows from 1. Header problems fail the whole input.
pub fn parse_csv<R: Read>(reader: R) -> Result<Vec<Result<AppRecord, IngestError>>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr
        .byte_headers()
        .map_err(|e| IngestError::Parse {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let headers: Vec<String> = headers
        .iter()
        .map(|h| String::from_utf8_lossy(h).trim().trim_start_matches('\u{feff}').to_ascii_lowercase())
        .collect();
    for required in REQUIRED_COLUMNS {
        if !headers.iter().any(|h| h == required) {
            return Err(IngestError::Parse {
                row: 0,
                reason: format!("missing required column {required:?}"),
            });
        }
    }

    let mut out = Vec::new();
    for (i, rec) in rdr.byte_records().enumerate() {
        let row = i + 1;
        out.push(rec.map_err(|e| IngestError::Parse { row, reason: e.to_string() }).and_then(|rec| {
            let mut raw = RawRecord::default();
            for (name, bytes) in headers.iter().zip(rec.iter()) {
                let value = std::str::from_utf8(bytes)
                    .map_err(|_| IngestError::Parse {
                        row,
                        reason: format!("invalid UTF-8 in column {name:?}"),
                    })?
                    .to_string();
                let slot = match name.as_str() {
                    "id" => &mut raw.id,
                    "store" => &mut raw.store,
                    "title" => &mut raw.title,
                    "description" => &mut raw.description,
                    "gamification_label" => &mut raw.gamification_label,
                    "app_type" => &mut raw.app_type,
                    "language" => &mut raw.language,
                    _ => continue,
                };
                *slot = Some(value);
            }
            if rec.len() < headers.len() {
                return Err(IngestError::Parse {
                    row,
                    reason: format!("expected {} fields, found {}", headers.len(), rec.len()),
                });
            }
            raw.validate(row)
        }));
    }
    Ok(out)
}

/// Parses a JSON array of records, a dataset document, or JSON Lines.
pub fn parse_json(bytes: &[u8]) -> Result<Vec<Result<AppRecord, IngestError>>, IngestError> {
    let text = std::str::from_utf8(bytes).map_err(|e| IngestError::Parse {
        row: 0,
        reason: format!("invalid UTF-8: {e}"),
    })?;
    let trimmed = text.trim_start();
    let whole = |reason: String| IngestError::Parse { row: 0, reason };
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        match serde_json::from_str::<serde_json::Value>(text) {
            Ok(serde_json::Value::Array(items)) => return Ok(validate_values(items)),
            Ok(serde_json::Value::Object(mut map)) if map.contains_key("records") => {
                return match map.remove("records") {
                    Some(serde_json::Value::Array(items)) => Ok(validate_values(items)),
                    _ => Err(whole("\"records\" must be an array".into())),
                };
            }
            Ok(serde_json::Value::Object(map)) => {
                return Ok(validate_values(vec![serde_json::Value::Object(map)]))
            }
            Ok(_) => return Err(whole("expected an array or object".into())),
            // Possibly JSON Lines; fall through.
            Err(_) if trimmed.starts_with('{') => {}
            Err(e) => return Err(whole(e.to_string())),
        }
    }
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let row = i + 1;
            serde_json::from_str::<RawRecord>(line)
                .map_err(|e| IngestError::Parse { row, reason: e.to_string() })
                .and_then(|raw| raw.validate(row))
        })
        .collect())
}

fn validate_values(items: Vec<serde_json::Value>) -> Vec<Result<AppRecord, IngestError>> {
    items
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let row = i + 1;
            serde_json::from_value::<RawRecord>(v)
                .map_err(|e| IngestError::Parse { row, reason: e.to_string() })
                .and_then(|raw| raw.validate(row))
        })
        .collect()
}

/// Writes records with the ingest column layout.
pub fn write_csv<W: Write>(records: &[AppRecord], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "id",
        "store",
        "title",
        "description",
        "gamification_label",
        "app_type",
        "language",
    ])?;
    for r in records {
        let label = r.gamification_label.map(|b| if b { "1" } else { "0" }).unwrap_or("");
        w.write_record([
            r.id.as_str(),
            r.store.as_str(),
            r.title.as_str(),
            r.description.as_str(),
            label,
            r.app_type.map(AppType::as_str).unwrap_or(""),
            r.language.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush()?;
    Ok(())
}
