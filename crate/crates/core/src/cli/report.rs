//! Flat report records and their JSON and CSV encodings.
//!
//! Both encodings carry the columns `kind,n,k,p,required,achieved,holds,
//! exceptional,class`. In JSON every integer is a decimal string and absent
//! values are `null`; in CSV absent values are empty cells.

use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::config::Format;
use crate::congruence::{Achieved, CongruenceReport, CongruenceSpec, ExceptionalClass, Required};
use crate::{Error, Result};

pub const CSV_COLUMNS: [&str; 9] = [
    "kind",
    "n",
    "k",
    "p",
    "required",
    "achieved",
    "holds",
    "exceptional",
    "class",
];

/// One serialized report row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRecord {
    pub kind: String,
    pub n: Option<u64>,
    pub k: Option<BigInt>,
    pub p: u64,
    pub required: Required,
    pub achieved: Achieved,
    pub holds: bool,
    pub exceptional: bool,
    pub class: Option<ExceptionalClass>,
}

impl ReportRecord {
    /// Failed, or the predicted class disagrees with the measurement.
    pub fn is_unexpected(&self) -> bool {
        !self.holds
            || self
                .class
                .is_some_and(|c| c.is_exceptional() != self.exceptional)
    }
}

impl From<&CongruenceReport> for ReportRecord {
    fn from(r: &CongruenceReport) -> Self {
        let (n, k) = match &r.spec {
            CongruenceSpec::Optimized { n, k } => (Some(*n as u64), Some(BigInt::from(*k))),
            CongruenceSpec::General(data) => (Some(data.order as u64), Some(data.k.clone())),
            CongruenceSpec::Named(tag) => (tag.order(), tag.binomial_k().map(BigInt::from)),
        };
        ReportRecord {
            kind: r.spec.kind(),
            n,
            k,
            p: r.p,
            required: r.required,
            achieved: r.achieved,
            holds: r.holds,
            exceptional: r.exceptional,
            class: r.class,
        }
    }
}

/// The text form shared by both encodings.
#[derive(Serialize, Deserialize)]
struct Row {
    kind: String,
    n: Option<String>,
    k: Option<String>,
    p: String,
    required: String,
    achieved: String,
    holds: bool,
    exceptional: bool,
    class: Option<String>,
}

impl From<&ReportRecord> for Row {
    fn from(r: &ReportRecord) -> Self {
        Row {
            kind: r.kind.clone(),
            n: r.n.map(|x| x.to_string()),
            k: r.k.as_ref().map(BigInt::to_string),
            p: r.p.to_string(),
            required: r.required.to_string(),
            achieved: r.achieved.to_string(),
            holds: r.holds,
            exceptional: r.exceptional,
            class: r.class.map(|c| c.to_string()),
        }
    }
}

impl Row {
    fn into_record(self, line: u64) -> Result<ReportRecord> {
        let err = |field: &str, message: String| Error::Parse {
            line,
            field: field.to_string(),
            message,
        };
        let int = |field: &str, s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| err(field, format!("`{s}` is not a non-negative integer")))
        };
        Ok(ReportRecord {
            n: self.n.as_deref().map(|s| int("n", s)).transpose()?,
            k: self
                .k
                .as_deref()
                .map(|s| {
                    s.parse()
                        .map_err(|_| err("k", format!("`{s}` is not an integer")))
                })
                .transpose()?,
            p: int("p", &self.p)?,
            required: self.required.parse().map_err(|m| err("required", m))?,
            achieved: self.achieved.parse().map_err(|m| err("achieved", m))?,
            holds: self.holds,
            exceptional: self.exceptional,
            class: self
                .class
                .as_deref()
                .map(|s| s.parse().map_err(|m| err("class", m)))
                .transpose()?,
            kind: self.kind,
        })
    }
}

/// Streams records in one encoding. JSON output puts one object per line.
pub struct ReportWriter<W: Write> {
    out: W,
    format: Format,
    count: u64,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(mut out: W, format: Format) -> Result<Self> {
        match format {
            Format::Json => out.write_all(b"[")?,
            Format::Csv => writeln!(out, "{}", CSV_COLUMNS.join(","))?,
        }
        Ok(ReportWriter {
            out,
            format,
            count: 0,
        })
    }

    pub fn write(&mut self, record: &ReportRecord) -> Result<()> {
        let row = Row::from(record);
        match self.format {
            Format::Json => {
                let sep = if self.count == 0 { "\n" } else { ",\n" };
                self.out.write_all(sep.as_bytes())?;
                serde_json::to_writer(&mut self.out, &row)?;
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(Vec::new());
                w.serialize(&row).map_err(csv_error)?;
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                self.out.write_all(&bytes)?;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.format == Format::Json {
            let tail: &[u8] = if self.count == 0 { b"]\n" } else { b"\n]\n" };
            self.out.write_all(tail)?;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line: 0,
            field: String::new(),
            message: format!("{other:?}"),
        },
    }
}

/// Encode records.
pub fn serialize(records: &[ReportRecord], format: Format) -> Result<Vec<u8>> {
    let mut w = ReportWriter::new(Vec::new(), format)?;
    for r in records {
        w.write(r)?;
    }
    w.finish()
}

/// Decode records. Parse errors name the offending line (CSV) or record
/// position (JSON) and column.
pub fn parse(bytes: &[u8], format: Format) -> Result<Vec<ReportRecord>> {
    match format {
        Format::Json => parse_json(bytes),
        Format::Csv => parse_csv(bytes),
    }
}

fn parse_json(bytes: &[u8]) -> Result<Vec<ReportRecord>> {
    let values: Vec<serde_json::Value> =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            line: e.line() as u64,
            field: String::new(),
            message: e.to_string(),
        })?;
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let line = i as u64 + 1;
            let obj = v.as_object().ok_or_else(|| Error::Parse {
                line,
                field: String::new(),
                message: "record is not an object".into(),
            })?;
            if let Some(missing) = CSV_COLUMNS.iter().find(|c| !obj.contains_key(**c)) {
                return Err(Error::Parse {
                    line,
                    field: missing.to_string(),
                    message: "missing field".into(),
                });
            }
            let row: Row = serde_json::from_value(v).map_err(|e| Error::Parse {
                line,
                field: guess_field(&e.to_string()),
                message: e.to_string(),
            })?;
            row.into_record(line)
        })
        .collect()
}

fn guess_field(message: &str) -> String {
    CSV_COLUMNS
        .iter()
        .find(|c| message.contains(&format!("`{c}`")))
        .map_or_else(String::new, |c| c.to_string())
}

fn parse_csv(bytes: &[u8]) -> Result<Vec<ReportRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_COLUMNS {
        return Err(Error::Parse {
            line: 1,
            field: String::new(),
            message: format!("expected header `{}`", CSV_COLUMNS.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            field: String::new(),
            message: e.to_string(),
        })?;
        if rec.len() != CSV_COLUMNS.len() {
            return Err(Error::Parse {
                line,
                field: CSV_COLUMNS.get(rec.len()).unwrap_or(&"").to_string(),
                message: format!(
                    "expected {} columns, found {}",
                    CSV_COLUMNS.len(),
                    rec.len()
                ),
            });
        }
        let cell = |i: usize| -> Option<String> {
            let s = &rec[i];
            (!s.is_empty()).then(|| s.to_string())
        };
        let boolean = |i: usize| -> Result<bool> {
            rec[i].parse().map_err(|_| Error::Parse {
                line,
                field: CSV_COLUMNS[i].to_string(),
                message: format!("`{}` is not true or false", &rec[i]),
            })
        };
        let row = Row {
            kind: rec[0].to_string(),
            n: cell(1),
            k: cell(2),
            p: rec[3].to_string(),
            required: rec[4].to_string(),
            achieved: rec[5].to_string(),
            holds: boolean(6)?,
            exceptional: boolean(7)?,
            class: cell(8),
        };
        out.push(row.into_record(line)?);
    }
    Ok(out)
}
