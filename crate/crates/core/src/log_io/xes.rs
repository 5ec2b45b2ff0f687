//! Minimal XES reader: `<trace>`, `<event>` and the event-level
//! `concept:name` attribute. Every other attribute is ignored.

use std::collections::HashMap;
use std::io::{BufWriter, Write};
use std::path::Path;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{Activity, EventLog, Trace};
use crate::error::{Error, Result};

pub fn parse_xes(path: impl AsRef<Path>) -> Result<EventLog> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Xes {
        line: line_of(e.as_bytes(), e.utf8_error().valid_up_to()),
        message: "file is not valid UTF-8".into(),
    })?;
    parse_xes_str(&path.display().to_string(), &text)
}

/// Parses XES from an in-memory document.
pub fn parse_xes_str(source_id: &str, text: &str) -> Result<EventLog> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().check_end_names = true;

    let xml_err = |pos: u64, message: String| Error::Xes {
        line: line_of(text.as_bytes(), pos as usize),
        message,
    };

    let mut traces = Vec::new();
    // Element nesting below <trace>, and below <event> (0 = directly inside).
    let mut in_trace: Option<usize> = None;
    let mut in_event: Option<usize> = None;
    let mut current: Vec<Activity> = Vec::new();
    let mut event_name: Option<Activity> = None;
    let mut names: HashMap<String, Activity> = HashMap::new();
    let mut trace_index = 0usize;
    let mut event_index = 0usize;

    loop {
        let event = reader
            .read_event()
            .map_err(|e| xml_err(reader.error_position(), e.to_string()))?;
        match event {
            Event::Start(e) => {
                let name = e.local_name();
                match (in_trace, in_event) {
                    (None, _) if name.as_ref() == b"trace" => {
                        in_trace = Some(0);
                        current.clear();
                        event_index = 0;
                    }
                    (Some(0), None) if name.as_ref() == b"event" => {
                        in_event = Some(0);
                        event_name = None;
                    }
                    (Some(depth), None) => in_trace = Some(depth + 1),
                    (Some(_), Some(depth)) => {
                        if depth == 0 {
                            take_concept_name(&e, &mut event_name, &mut names)
                                .map_err(|m| xml_err(reader.buffer_position(), m))?;
                        }
                        in_event = Some(depth + 1);
                    }
                    (None, _) => {}
                }
            }
            Event::Empty(e) => match (in_trace, in_event) {
                (Some(_), Some(0)) => take_concept_name(&e, &mut event_name, &mut names)
                    .map_err(|m| xml_err(reader.buffer_position(), m))?,
                (Some(0), None) if e.local_name().as_ref() == b"event" => {
                    return Err(Error::MissingConceptName {
                        trace_index,
                        event_index,
                    });
                }
                (None, _) if e.local_name().as_ref() == b"trace" => {
                    return Err(Error::EmptyTrace { trace_index });
                }
                _ => {}
            },
            Event::End(_) => match (in_trace, in_event) {
                (Some(_), Some(0)) => {
                    let name = event_name.take().ok_or(Error::MissingConceptName {
                        trace_index,
                        event_index,
                    })?;
                    current.push(name);
                    event_index += 1;
                    in_event = None;
                }
                (Some(_), Some(depth)) => in_event = Some(depth - 1),
                (Some(0), None) => {
                    if current.is_empty() {
                        return Err(Error::EmptyTrace { trace_index });
                    }
                    traces.push(Trace::new(std::mem::take(&mut current)));
                    trace_index += 1;
                    in_trace = None;
                }
                (Some(depth), None) => in_trace = Some(depth - 1),
                (None, _) => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if in_trace.is_some() {
        return Err(xml_err(
            text.len() as u64,
            "unexpected end of document inside <trace>".into(),
        ));
    }
    Ok(EventLog::from_traces(source_id, traces))
}

fn take_concept_name(
    e: &BytesStart<'_>,
    slot: &mut Option<Activity>,
    names: &mut HashMap<String, Activity>,
) -> std::result::Result<(), String> {
    let mut key = None;
    let mut value = None;
    for attr in e.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        match attr.key.as_ref() {
            b"key" => key = Some(attr.unescape_value().map_err(|e| e.to_string())?),
            b"value" => value = Some(attr.unescape_value().map_err(|e| e.to_string())?),
            _ => {}
        }
    }
    if key.as_deref() == Some("concept:name") {
        if let Some(v) = value.filter(|v| !v.is_empty()) {
            let activity = match names.get(v.as_ref()) {
                Some(a) => a.clone(),
                None => {
                    let a = Activity::new(&v);
                    names.insert(v.into_owned(), a.clone());
                    a
                }
            };
            *slot = Some(activity);
        }
    }
    Ok(())
}

/// Writes `log` as a minimal XES document, one `<trace>` per trace
/// occurrence.
pub fn write_xes(log: &EventLog, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let names: Vec<String> = log
        .alphabet()
        .iter()
        .map(|a| escape(a.as_str()).into_owned())
        .collect();
    let mut body = || -> std::io::Result<()> {
        writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
        writeln!(w, r#"<log xes.version="1.0">"#)?;
        let mut case = 0u64;
        for v in log.variants() {
            for _ in 0..v.multiplicity() {
                case += 1;
                writeln!(w, "  <trace>")?;
                writeln!(w, r#"    <string key="concept:name" value="{case}"/>"#)?;
                for &e in v.events() {
                    writeln!(
                        w,
                        r#"    <event><string key="concept:name" value="{}"/></event>"#,
                        names[e as usize]
                    )?;
                }
                writeln!(w, "  </trace>")?;
            }
        }
        writeln!(w, "</log>")?;
        w.flush()
    };
    body().map_err(|e| Error::io(path, e))
}

fn line_of(bytes: &[u8], pos: usize) -> usize {
    let end = pos.min(bytes.len());
    1 + bytes[..end].iter().filter(|&&b| b == b'\n').count()
}
