//! JSON-lines trace events.
//!
//! Every sink starts with a header line carrying the schema version; each
//! later line is one object with an `"event"` field.

use std::io::Write;

use serde_json::{json, Value};

pub const TRACE_SCHEMA_VERSION: u32 = 1;

pub trait TraceSink {
    /// Sinks that return false are skipped before an event is built.
    fn enabled(&self) -> bool {
        true
    }

    fn emit(&mut self, event: Value);
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullTrace;

impl TraceSink for NullTrace {
    fn enabled(&self) -> bool {
        false
    }

    fn emit(&mut self, _: Value) {}
}

/// Keeps events in memory.
#[derive(Debug, Default, Clone)]
pub struct VecTrace {
    pub events: Vec<Value>,
}

impl VecTrace {
    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Value> + 'a {
        self.events.iter().filter(move |e| e["event"] == kind)
    }
}

impl TraceSink for VecTrace {
    fn emit(&mut self, event: Value) {
        self.events.push(event);
    }
}

/// Writes one JSON object per line. The first write error is kept and
/// later events are dropped.
pub struct JsonLinesTrace<Wr: Write> {
    out: Wr,
    error: Option<std::io::Error>,
}

impl<Wr: Write> JsonLinesTrace<Wr> {
    pub fn new(out: Wr) -> Self {
        let mut t = JsonLinesTrace { out, error: None };
        t.emit(json!({ "schema": "cyclecancel-trace", "version": TRACE_SCHEMA_VERSION }));
        t
    }

    pub fn finish(mut self) -> std::io::Result<Wr> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<Wr: Write> TraceSink for JsonLinesTrace<Wr> {
    fn emit(&mut self, event: Value) {
        if self.error.is_some() {
            return;
        }
        if let Err(e) = writeln!(self.out, "{event}") {
            self.error = Some(e);
        }
    }
}

pub(crate) fn event(kind: &str, mut fields: Value) -> Value {
    if let Value::Object(map) = &mut fields {
        map.insert("event".into(), Value::String(kind.into()));
    }
    fields
}
