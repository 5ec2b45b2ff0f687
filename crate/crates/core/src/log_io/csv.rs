//! CSV event logs: one row per event, grouped into traces by a case column.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use super::{Activity, EventLog, Trace};
use crate::error::{Error, Result};

/// Column names used to read a CSV log.
///
/// When `order` is `None`, a column literally named `timestamp` is used if
/// present; otherwise events keep their row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvMapping {
    pub case: String,
    pub activity: String,
    pub order: Option<String>,
}

impl Default for CsvMapping {
    fn default() -> Self {
        CsvMapping {
            case: "case".into(),
            activity: "activity".into(),
            order: None,
        }
    }
}

pub fn parse_csv(path: impl AsRef<Path>, mapping: &CsvMapping) -> Result<EventLog> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv_reader(&path.display().to_string(), file, mapping)
}

/// Reads a CSV log. Events of a case are stably sorted by the order key, so
/// rows sharing a key keep their file order.
pub fn parse_csv_reader<R: Read>(
    source_id: &str,
    reader: R,
    mapping: &CsvMapping,
) -> Result<EventLog> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::CsvConfig(format!("missing column {name:?}")))
    };
    let case_col = column(&mapping.case)?;
    let activity_col = column(&mapping.activity)?;
    let order_col = match &mapping.order {
        Some(name) => Some(column(name)?),
        None => headers.iter().position(|h| h == "timestamp"),
    };

    // Cases in order of first appearance; events as (key, activity).
    let mut case_index: HashMap<String, usize> = HashMap::new();
    let mut cases: Vec<Vec<(f64, Activity)>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        // Header is row 1.
        let row = i + 2;
        let field = |col: usize| record.get(col).unwrap_or("");
        let case = field(case_col);
        let activity = field(activity_col);
        if activity.is_empty() {
            return Err(Error::CsvConfig(format!("row {row}: empty activity")));
        }
        let key = match order_col {
            Some(col) => parse_order_key(field(col)).ok_or_else(|| Error::CsvOrderKey {
                row,
                value: field(col).to_string(),
            })?,
            None => i as f64,
        };
        let next = cases.len();
        let idx = *case_index.entry(case.to_string()).or_insert(next);
        if idx == next {
            cases.push(Vec::new());
        }
        cases[idx].push((key, Activity::new(activity)));
    }

    let traces = cases.into_iter().map(|mut events| {
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        Trace::new(events.into_iter().map(|(_, a)| a).collect())
    });
    Ok(EventLog::from_traces(source_id, traces))
}

/// Numbers sort numerically; date-times sort chronologically (seconds since
/// the Unix epoch, microsecond resolution).
fn parse_order_key(raw: &str) -> Option<f64> {
    let s = raw.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let from_naive = |dt: NaiveDateTime| dt.and_utc().timestamp_micros() as f64 / 1e6;
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.timestamp_micros() as f64 / 1e6);
    }
    for fmt in [
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y/%m/%d %H:%M:%S%.f",
        "%d-%m-%Y %H:%M:%S%.f",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(from_naive(dt));
        }
    }
    for fmt in ["%Y-%m-%d %H:%M:%S%.f%z", "%Y-%m-%d %H:%M:%S%.f%:z"] {
        if let Ok(dt) = DateTime::parse_from_str(s, fmt) {
            return Some(dt.timestamp_micros() as f64 / 1e6);
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(from_naive)
}

/// Writes one row per event with columns `case,activity`, traces expanded
/// by multiplicity. Reading the file back with the default mapping yields
/// the same multiset of traces.
pub fn write_csv(log: &EventLog, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["case", "activity"])?;
    let mut case = 0u64;
    for variant in log.variants() {
        for _ in 0..variant.multiplicity() {
            let id = case.to_string();
            for &e in variant.events() {
                w.write_record([id.as_str(), log.activity(e).as_str()])?;
            }
            case += 1;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
